//! Sector bases from the generator, cross-checked against the brute-force
//! oracle.

use graphcx::graphcore::ComplexId;
use graphcx::sectors::{generate_basis, oracle_basis, SectorKey};

fn main() {
    let keys = [
        SectorKey::new(ComplexId::Gc0, 3, 1, 3).without_tadpoles(),
        SectorKey::new(ComplexId::Gc2, 2, 1, 5),
        SectorKey::new(ComplexId::Gc0, 2, 2, 4),
        SectorKey::new(ComplexId::Ogc0, 3, 1, 4),
        SectorKey::hat(2, 0, 2, 1),
        SectorKey::new(ComplexId::HatBlack, 1, 1, 3),
    ];
    for key in keys {
        let basis = generate_basis(&key).expect("within caps");
        let oracle = oracle_basis(&key).expect("oracle");
        println!(
            "{key:<28} degree {:>3}  {:>3} generators  oracle agrees: {}",
            key.degree(),
            basis.len(),
            basis.graphs() == oracle.graphs()
        );
    }
    println!();
    print!("{}", generate_basis(&keys[0]).unwrap().to_text());
}
