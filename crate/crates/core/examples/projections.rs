//! The projections from the two-coloured complex and their checks.

use graphcx::exactla::{Caps, Workspace};
use graphcx::graphcore::{Color, Family, Flavor, Graph, GraphVector};
use graphcx::maps::{hat_sectors, pi1, pi1_preimages, verify_chain_map, verify_chain_map_on, MapId};

fn main() {
    let d = 2;
    // A black vertex with two outgoing edges becomes a dotted edge.
    let cherry = Graph::new(Flavor::Hat, d, vec![Color::Black, Color::White, Color::White], vec![(0, 1), (0, 2)]).unwrap();
    let x = GraphVector::from_graph(Family::Hat, d, &cherry).unwrap();
    print!("pi1(white <- black -> white) =\n{}", pi1(&x).unwrap());

    let ws = Workspace::new(Caps::default());
    let keys = hat_sectors(d, 2, 5);
    for map in [MapId::Pi1, MapId::Pi2] {
        println!("{}", verify_chain_map(&ws, map, &keys, 5).unwrap());
    }
    let pre = pi1_preimages(&ws, d, 2, 3).unwrap();
    println!("on GC0 preimages: {}", verify_chain_map_on(MapId::Pi1, d, &pre, 2).unwrap());
}
