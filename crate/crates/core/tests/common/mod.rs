//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use graphcx::graphcore::{canonicalize, encode, Canon, Color, ComplexId, Flavor, Graph, Sign};
use graphcx::sectors::{generate_basis, oracle_basis, SectorKey};

/// Letter parities written out from the degree table, independent of the
/// library's orientation rule: (black, white, edge, flip cost).
pub fn parities(flavor: Flavor, d: i32) -> (bool, bool, bool, Option<bool>) {
    let odd = |x: i32| x.rem_euclid(2) == 1;
    match flavor {
        Flavor::Gc => (odd(d), odd(d), odd(1 - d), Some(odd(d))),
        Flavor::Ogc => (odd(d), odd(d), odd(1 - d), None),
        Flavor::Hat => (odd(d + 1), odd(d), odd(d), None),
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Relabels `g`: old vertex `v` becomes `sigma[v]`, new edge slot `j` holds
/// old edge `tau[j]`, and edges with a set bit in `flips` are reversed.
/// Returns the new graph (same stored sign) and whether, as an element,
/// it equals minus `g`.
pub fn relabel(g: &Graph, sigma: &[usize], tau: &[usize], flips: u32) -> (Graph, bool) {
    let (bo, wo, eo, flip) = parities(g.flavor(), g.d());
    let n = g.num_vertices();
    let mut inv = vec![0; n];
    for (v, &s) in sigma.iter().enumerate() {
        inv[s] = v;
    }
    let colors: Vec<Color> = (0..n).map(|i| g.colors()[inv[i]]).collect();
    let mut edges = Vec::new();
    let mut odd = false;
    for (j, &k) in tau.iter().enumerate() {
        let (s, t) = g.edges()[k];
        let (s, t) = (sigma[s as usize] as u8, sigma[t as usize] as u8);
        if flips >> j & 1 == 1 {
            edges.push((t, s));
            odd ^= flip.expect("only undirected edges flip");
        } else {
            edges.push((s, t));
        }
    }
    // old indices of the odd letters, in new word order
    let mut seq: Vec<usize> = Vec::new();
    for i in 0..n {
        let c = g.colors()[inv[i]];
        if (c == Color::Black && bo) || (c == Color::White && wo) {
            seq.push(inv[i]);
        }
    }
    if eo {
        seq.extend(tau.iter().map(|&k| n + k));
    }
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            odd ^= seq[a] > seq[b];
        }
    }
    (Graph::new_unchecked(g.flavor(), g.d(), colors, edges, g.sign()), odd)
}

/// Checks `canon(relabel(g)) = eps * canon(g)` over every vertex and edge
/// permutation (flip masks cycle through all patterns for undirected
/// flavors). Returns the number of relabellings checked.
pub fn sign_law(g: &Graph) -> Result<usize, String> {
    let n = g.num_vertices();
    let m = g.num_edges();
    let undirected = parities(g.flavor(), g.d()).3.is_some();
    let base = canonicalize(g).map_err(|e| e.to_string())?;
    let mut count = 0;
    let vperms = permutations(n);
    let eperms = permutations(m);
    for (a, sigma) in vperms.iter().enumerate() {
        for (b, tau) in eperms.iter().enumerate() {
            let flips = if undirected { ((a * eperms.len() + b) % (1 << m)) as u32 } else { 0 };
            let (h, odd) = relabel(g, sigma, tau, flips);
            let got = canonicalize(&h).map_err(|e| e.to_string())?;
            let ok = match (&base, &got) {
                (Canon::Zero, Canon::Zero) => true,
                (Canon::Form { graph: c1, sign: s1 }, Canon::Form { graph: c2, sign: s2 }) => {
                    c1 == c2 && *s2 == *s1 * Sign::pow(odd)
                }
                _ => false,
            };
            if !ok {
                return Err(format!("{} relabelled by {sigma:?} {tau:?} flips {flips:b}", encode(g)));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Graphs for the sign law: every generator with at most 5 vertices and
/// 5 edges in a spread of flavors, plus graphs known to vanish.
pub fn sign_law_graphs() -> Vec<Graph> {
    let mut keys = Vec::new();
    for g in 0..=1 {
        for v in 1..=5 {
            if v + g > 6 {
                continue;
            }
            for d in [2, 3] {
                keys.push(SectorKey::new(ComplexId::Gc0, d, g, v));
                keys.push(SectorKey::new(ComplexId::Ogc0, d, g, v));
            }
            for d in [1, 2] {
                for b in 0..=v {
                    keys.push(SectorKey::hat(d, g, v - b, b));
                }
            }
        }
    }
    let mut out: Vec<Graph> = keys
        .iter()
        .filter_map(|k| generate_basis(k).ok())
        .flat_map(|b| b.graphs().to_vec())
        .collect();
    out.push(Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap());
    out.push(Graph::black(Flavor::Gc, 3, 2, &[(0, 1), (0, 1)]).unwrap());
    out.push(Graph::black(Flavor::Ogc, 3, 3, &[(0, 1), (0, 2)]).unwrap());
    out
}

/// Vertex bound per loop order for the oracle sweep. The oracle visits
/// every labelled edge multiset, so its cost grows steeply with the edge
/// count; g <= 1 covers every flavor at six vertices.
pub const ORACLE_BOUNDS: [(usize, usize); 4] = [(0, 6), (1, 6), (2, 5), (3, 5)];

pub const ORACLE_SCOPE: &str = "g<=1 at v=6, g<=3 below";

/// Sectors compared against the brute-force oracle: every complex, at `d`
/// in 2 and 3, with the given vertex bound per loop order.
pub fn oracle_sectors(bounds: &[(usize, usize)]) -> Vec<SectorKey> {
    let mut keys = Vec::new();
    for c in ComplexId::ALL {
        for d in [2, 3] {
            for &(g, v_max) in bounds {
                for v in 1..=v_max {
                    if c == ComplexId::Hat {
                        for b in 0..=v {
                            keys.push(SectorKey::hat(d, g, v - b, b));
                        }
                    } else {
                        keys.push(SectorKey::new(c, d, g, v));
                    }
                }
            }
        }
    }
    keys
}

/// First sector where generator and oracle disagree.
pub fn oracle_mismatch(keys: &[SectorKey]) -> Option<String> {
    keys.iter().find_map(|k| {
        let a = generate_basis(k);
        let b = oracle_basis(k);
        match (a, b) {
            (Ok(a), Ok(b)) if a.graphs() == b.graphs() => None,
            (a, b) => Some(format!("{k}: {:?} vs {:?}", a.map(|x| x.len()), b.map(|x| x.len()))),
        }
    })
}
