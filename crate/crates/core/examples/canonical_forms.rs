//! Canonical forms with sign, and zero detection by odd automorphisms.

use graphcx::graphcore::{canonicalize, decode, encode, Canon, Flavor, Graph};

fn show(label: &str, g: &Graph) {
    match canonicalize(g).expect("valid graph") {
        Canon::Zero => println!("{label:<28} {}  ->  0", encode(g)),
        Canon::Form { graph, sign } => {
            println!("{label:<28} {}  ->  {} {}", encode(g), if sign.is_negative() { '-' } else { '+' }, encode(&graph))
        }
    }
}

fn main() {
    // The triangle survives in GC_3 and dies in GC_2, where a reflection
    // swaps two odd edges.
    let tri3 = Graph::black(Flavor::Gc, 3, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let tri2 = Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    show("triangle, d=3", &tri3);
    show("triangle, d=2", &tri2);

    // Relabelling costs the parity of the letter permutation.
    let k4 = Graph::black(Flavor::Gc, 2, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let k4_swapped = Graph::black(Flavor::Gc, 2, 4, &[(0, 2), (0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    show("K4, d=2", &k4);
    show("K4 with two edges swapped", &k4_swapped);

    // Reversing an undirected edge costs (-1)^d.
    let edge = Graph::black(Flavor::Gc, 3, 2, &[(0, 1)]).unwrap();
    show("edge, d=3", &edge);
    show("reversed edge, d=3", &edge.flip_edge(0));

    // Oriented graphs keep their directions; directed cycles are rejected.
    let cherry = Graph::black(Flavor::Ogc, 2, 3, &[(0, 1), (0, 2)]).unwrap();
    show("out-cherry, OGC_2", &cherry);
    println!("directed 2-cycle valid: {}", Graph::black(Flavor::Ogc, 2, 2, &[(0, 1), (1, 0)]).is_ok());

    // Text encoding round trip.
    let line = encode(&k4);
    assert_eq!(decode(&line).unwrap(), k4);
    println!("round trip ok: {line}");
}
