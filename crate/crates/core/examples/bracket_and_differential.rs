//! Pre-Lie insertion, the graded bracket and the differential.

use graphcx::graphcore::{int, Family, Flavor, Graph, GraphVector};
use graphcx::liealg::{bracket, circ, differential, insert};

fn gc(d: i32, n: usize, edges: &[(usize, usize)]) -> GraphVector {
    GraphVector::from_graph(Family::Gc, d, &Graph::black(Flavor::Gc, d, n, edges).unwrap()).unwrap()
}

fn main() {
    // Inserting the single vertex into each vertex of a graph returns the
    // graph once per vertex.
    let tri = gc(3, 3, &[(0, 1), (1, 2), (2, 0)]);
    let dot = gc(3, 1, &[]);
    assert_eq!(circ(&tri, &dot).unwrap(), tri.scale(&int(3)));
    println!("triangle o vertex = 3 triangle");

    // Raw reattachments of an edge substituted into a doubled edge.
    let host = Graph::black(Flavor::Gc, 1, 2, &[(0, 1), (0, 1)]).unwrap();
    let guest = Graph::black(Flavor::Gc, 1, 2, &[(0, 1)]).unwrap();
    println!("\nreattachments of edge into vertex 1 of the doubled edge, d = 1:");
    for g in insert(&host, 1, &guest).unwrap() {
        println!("  {}", graphcx::graphcore::encode(&g));
    }

    // The differential is the bracket with the edge and squares to zero.
    let x = gc(2, 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
    let dx = differential(&x).unwrap();
    println!("\ndelta(square with chord), d = 2:\n{dx}");
    println!("delta^2 = 0: {}", differential(&dx).unwrap().is_zero());

    let edge = gc(2, 2, &[(0, 1)]);
    println!("[edge, K4] is zero (K4 is a cocycle): {}", {
        let k4 = gc(2, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        bracket(&edge, &k4).unwrap().is_zero()
    });
}
