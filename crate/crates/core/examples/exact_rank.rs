//! Differential matrices and their exact ranks.

use graphcx::exactla::{rank, rank_checked, Caps, Field, Workspace, DEFAULT_PRIMES};
use graphcx::graphcore::ComplexId;
use graphcx::sectors::SectorKey;

fn main() {
    let ws = Workspace::new(Caps::default());
    let key = SectorKey::new(ComplexId::Gc2, 2, 3, 5);
    let m = ws.matrix(&key).unwrap();
    println!("{key}: {} x {} matrix, {} nonzeros", m.nrows(), m.ncols(), m.nnz());
    for &p in &DEFAULT_PRIMES {
        println!("  rank mod {p}: {}", rank(&m, Field::Prime(p)).unwrap());
    }
    println!("  rank over Q: {}", rank(&m, Field::Rational).unwrap());
    println!("  checked rank: {}", rank_checked(&m, &DEFAULT_PRIMES).unwrap());
    let next = Workspace::next_key(&key);
    let product = ws.matrix(&next).unwrap().mul(&m).unwrap();
    println!("  composite with the next differential is zero: {}", product.is_zero());
    println!("\nfirst lines of the matrix file:");
    for line in m.to_text().lines().take(6) {
        println!("  {line}");
    }
}
