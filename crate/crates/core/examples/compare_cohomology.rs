//! Side-by-side cohomology of GC0_d and OGC0_{d+1}.

use graphcx::exactla::{Caps, Workspace};
use graphcx::maps::compare_cohomology;

fn main() {
    let d = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let ws = Workspace::new(Caps { max_vertices: 7, ..Caps::default() });
    let c = compare_cohomology(&ws, d, 2).unwrap();
    print!("{c}");
    println!("decided rows: {}, mismatches: {}", c.decided(), c.mismatches().len());
}
