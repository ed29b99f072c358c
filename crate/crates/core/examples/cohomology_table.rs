//! Loop-order-one cohomology of the bivalent complex: one class per cycle
//! length j with j = 2d + 1 mod 4.

use graphcx::exactla::{cohomology, Caps, Workspace};
use graphcx::graphcore::ComplexId;

fn main() {
    let ws = Workspace::new(Caps { max_vertices: 10, ..Caps::default() });
    for d in [2, 3] {
        let t = cohomology(&ws, ComplexId::Gc2, d, true, 1..=1, -1..=8).unwrap();
        print!("{t}");
        let classes: Vec<String> = t.support().iter().map(|(_, k, dim)| format!("H^{k} = {dim}")).collect();
        println!("nonzero: {}\n", classes.join(", "));
    }
}
