//! Pre-Lie insertion, the Lie bracket, Maurer-Cartan elements and the
//! differentials of GC_d, OGC_{d+1} and the two-coloured complex.
//!
//! Sign convention for `host o_v guest`: move the letter of `v` to the front
//! of the host word, replace it by the whole guest word, then sort the
//! result back into `vertices, edges` form with Koszul signs. The letter
//! parity of a graph word is its degree plus the parity of the vertex it
//! can be inserted into, which makes this a graded pre-Lie product.

use num_traits::One;

use crate::graphcore::{
    degree_of, int, Coeff, Color, Family, Flavor, Graph, GraphError, GraphVector, Sign,
    MAX_VERTICES,
};

/// Colour of the vertex a graph may be substituted into.
fn output_color(g: &Graph) -> Color {
    match g.flavor() {
        Flavor::Hat => Color::White,
        Flavor::Gc | Flavor::Ogc => Color::Black,
    }
}

fn check_insertable(host: &Graph, v: usize, guest: &Graph) -> Result<(), GraphError> {
    if v >= host.num_vertices() {
        return Err(GraphError::VertexOutOfRange(v, v));
    }
    let ok = match (host.flavor(), guest.flavor()) {
        (Flavor::Gc, Flavor::Gc) | (Flavor::Ogc, Flavor::Ogc) => guest.d() == host.d(),
        (Flavor::Hat, Flavor::Hat) => guest.d() == host.d(),
        (Flavor::Hat, Flavor::Ogc) => guest.d() == host.d() + 1,
        _ => false,
    };
    if !ok {
        return Err(GraphError::Mismatch(format!(
            "cannot insert {}(d={}) into {}(d={})",
            guest.flavor(),
            guest.d(),
            host.flavor(),
            host.d()
        )));
    }
    if host.colors()[v] != output_color(guest) {
        return Err(GraphError::Mismatch(format!(
            "vertex {v} is {:?} but the guest has {:?} output",
            host.colors()[v],
            output_color(guest)
        )));
    }
    Ok(())
}

// Oversize products must fail loudly; `insert_unchecked` would otherwise
// drop them as invalid terms.
fn fits(host: &Graph, guest: &Graph) -> Result<(), GraphError> {
    let n = host.num_vertices() + guest.num_vertices() - 1;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    Ok(())
}

/// `host o_v guest`: substitute `guest` for vertex `v` and sum over all
/// reattachments of the half-edges formerly at `v`. Terms that break the
/// flavor invariants are dropped. The returned graphs are not canonical.
pub fn insert(host: &Graph, v: usize, guest: &Graph) -> Result<Vec<Graph>, GraphError> {
    check_insertable(host, v, guest)?;
    fits(host, guest)?;
    Ok(insert_unchecked(host, v, guest))
}

pub(crate) fn insert_unchecked(host: &Graph, v: usize, guest: &Graph) -> Vec<Graph> {
    let rule = host.rule();
    let grule = guest.rule();
    let n1 = host.num_vertices();
    let n2 = guest.num_vertices();

    let odd_before_v = host.colors()[..v]
        .iter()
        .filter(|&&c| rule.vertex_odd(c))
        .count();
    let v_odd = rule.vertex_odd(host.colors()[v]);
    let odd_host_others = host
        .colors()
        .iter()
        .enumerate()
        .filter(|&(u, &c)| u != v && rule.vertex_odd(c))
        .count();
    let odd_guest_edges = if grule.edge_odd { guest.num_edges() } else { 0 };
    let sign = host.sign()
        * guest.sign()
        * Sign::pow(v_odd && odd_before_v % 2 == 1)
        * Sign::pow(odd_host_others % 2 == 1 && odd_guest_edges % 2 == 1);

    let relabel = |u: u8| -> u8 {
        let u = u as usize;
        (n2 + if u > v { u - 1 } else { u }) as u8
    };

    let mut colors = guest.colors().to_vec();
    colors.extend(
        host.colors()
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != v)
            .map(|(_, &c)| c),
    );
    let mut base_edges: Vec<(u8, u8)> = guest.edges().to_vec();
    let mut half_edges: Vec<(usize, usize)> = Vec::new();
    for (k, &(s, t)) in host.edges().iter().enumerate() {
        let idx = base_edges.len();
        let s2 = if s as usize == v {
            half_edges.push((idx, 0));
            0
        } else {
            relabel(s)
        };
        let t2 = if t as usize == v {
            half_edges.push((idx, 1));
            0
        } else {
            relabel(t)
        };
        let _ = k;
        base_edges.push((s2, t2));
    }

    let total = (n2 as u64).pow(half_edges.len() as u32);
    let mut out = Vec::with_capacity(total as usize);
    let mut choice = vec![0usize; half_edges.len()];
    debug_assert!(n1 >= 1);
    loop {
        let mut edges = base_edges.clone();
        for (&(idx, end), &c) in half_edges.iter().zip(&choice) {
            if end == 0 {
                edges[idx].0 = c as u8;
            } else {
                edges[idx].1 = c as u8;
            }
        }
        let g = Graph::new_unchecked(host.flavor(), host.d(), colors.clone(), edges, sign);
        if host.flavor() == Flavor::Gc || g.check().is_ok() {
            out.push(g);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < n2 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn min_bound(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn check_same_space(a: &GraphVector, b: &GraphVector) -> Result<(), GraphError> {
    if a.family() != b.family() || a.d() != b.d() {
        return Err(GraphError::Mismatch(format!(
            "{:?}(d={}) vs {:?}(d={})",
            a.family(),
            a.d(),
            b.family(),
            b.d()
        )));
    }
    Ok(())
}

/// Pre-Lie product `a o b = sum over terms and vertices of host o_v guest`.
///
/// In the two-coloured family a white vertex receives the first component
/// of `b` and a black vertex of a first-component graph receives the second
/// component; second-component hosts only receive second-component guests.
pub fn circ(a: &GraphVector, b: &GraphVector) -> Result<GraphVector, GraphError> {
    check_same_space(a, b)?;
    let bound = min_bound(a.truncation(), b.truncation());
    let mut out = GraphVector::zero(a.family(), a.d()).with_truncation(bound);
    for (host, ca) in a.iter() {
        for v in 0..host.num_vertices() {
            let color = host.colors()[v];
            for (guest, cb) in b.iter() {
                if output_color(guest) != color {
                    continue;
                }
                if host.flavor() == Flavor::Ogc && guest.flavor() != Flavor::Ogc {
                    continue;
                }
                if let Some(bd) = bound {
                    if host.num_vertices() + guest.num_vertices() - 1 > bd {
                        continue;
                    }
                }
                fits(host, guest)?;
                let c = ca * cb;
                for t in insert_unchecked(host, v, guest) {
                    out.add_graph_unchecked(&t, &c);
                }
            }
        }
    }
    Ok(out)
}

/// Splits a vector into its homogeneous-degree parts.
fn by_degree(x: &GraphVector) -> Vec<(i64, GraphVector)> {
    let mut parts: std::collections::BTreeMap<i64, GraphVector> = Default::default();
    for (g, c) in x.iter() {
        parts
            .entry(g.degree())
            .or_insert_with(|| GraphVector::zero(x.family(), x.d()).with_truncation(x.truncation()))
            .add_canonical(g.clone(), c.clone());
    }
    parts.into_iter().collect()
}

/// `[a, b] = a o b - (-1)^{|a||b|} b o a`, extended bilinearly.
pub fn bracket(a: &GraphVector, b: &GraphVector) -> Result<GraphVector, GraphError> {
    check_same_space(a, b)?;
    let bound = min_bound(a.truncation(), b.truncation());
    let mut out = GraphVector::zero(a.family(), a.d()).with_truncation(bound);
    let pa = by_degree(a);
    let pb = by_degree(b);
    for (da, xa) in &pa {
        for (db, xb) in &pb {
            let ab = circ(xa, xb)?;
            let ba = circ(xb, xa)?;
            out.add_scaled(&ab, &Coeff::one());
            let s = if (da * db).rem_euclid(2) == 1 { 1 } else { -1 };
            out.add_scaled(&ba, &int(s));
        }
    }
    Ok(out)
}

/// Which Maurer-Cartan element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McKind {
    /// The single edge, in GC_d or OGC_d.
    Gamma0,
    /// The pair (corolla sum, directed edge) of the two-coloured complex.
    GammaHat,
}

#[derive(Debug, Clone)]
pub struct McElement {
    pub kind: McKind,
    pub d: i32,
    pub truncation: Option<usize>,
    pub value: GraphVector,
}

/// Black vertex with `k` outgoing edges to `k` white sinks, black first.
pub fn corolla(d: i32, k: usize) -> Graph {
    let mut colors = vec![Color::Black];
    colors.extend(std::iter::repeat(Color::White).take(k));
    let edges = (1..=k).map(|w| (0, w)).collect();
    Graph::new(Flavor::Hat, d, colors, edges).expect("corolla is a valid two-coloured graph")
}

/// Coefficient of the `k`-corolla in the two-coloured Maurer-Cartan element:
/// `1/k!`, times `(-1)^{k(k+1)/2}` when `d` is odd (the corolla's edges are
/// then odd letters).
pub fn corolla_coeff(d: i32, k: usize) -> Coeff {
    let mut f = int(1);
    for i in 2..=k {
        f *= int(i as i64);
    }
    let c = Coeff::one() / f;
    if d.rem_euclid(2) == 1 && (k * (k + 1) / 2) % 2 == 1 {
        -c
    } else {
        c
    }
}

impl McElement {
    /// The single edge `0 -> 1` in GC_d (family `Gc`) or OGC_d (family `Ogc`).
    pub fn gamma0(family: Family, d: i32) -> Self {
        let flavor = match family {
            Family::Gc => Flavor::Gc,
            Family::Ogc => Flavor::Ogc,
            Family::Hat => panic!("gamma0 lives in GC or OGC"),
        };
        let edge = Graph::black(flavor, d, 2, &[(0, 1)]).expect("edge");
        McElement {
            kind: McKind::Gamma0,
            d,
            truncation: None,
            value: GraphVector::from_graph(family, d, &edge).expect("edge"),
        }
    }

    /// `gamma = (black vertex + sum_k c_k corolla_k, directed edge)` with all
    /// terms up to `bound` vertices and `c_k` from [`corolla_coeff`].
    pub fn gamma_hat(d: i32, bound: usize) -> Self {
        Self::gamma_hat_with(d, bound, |k| corolla_coeff(d, k))
    }

    /// `gamma_hat` with the corolla coefficients supplied by `coeff`.
    pub fn gamma_hat_with(d: i32, bound: usize, coeff: impl Fn(usize) -> Coeff) -> Self {
        let mut value = GraphVector::zero(Family::Hat, d).with_truncation(Some(bound));
        let dot = Graph::new(Flavor::Hat, d, vec![Color::Black], vec![]).expect("vertex");
        value.add_graph(&dot, &Coeff::one()).expect("vertex");
        for k in 1..bound {
            value.add_graph(&corolla(d, k), &coeff(k)).expect("corolla");
        }
        let edge = Graph::black(Flavor::Ogc, d + 1, 2, &[(0, 1)]).expect("edge");
        value.add_graph(&edge, &Coeff::one()).expect("edge");
        McElement {
            kind: McKind::GammaHat,
            d,
            truncation: Some(bound),
            value,
        }
    }

    /// The element defining the differential of a vector's space.
    pub fn for_vector(x: &GraphVector) -> Result<Self, GraphError> {
        match x.family() {
            Family::Gc | Family::Ogc => Ok(Self::gamma0(x.family(), x.d())),
            Family::Hat => {
                let b = x.truncation().ok_or_else(|| {
                    GraphError::Mismatch("two-coloured vectors need a truncation bound".into())
                })?;
                Ok(Self::gamma_hat(x.d(), b))
            }
        }
    }
}

/// `delta x = [gamma, x]`, truncated for the two-coloured family.
pub fn differential(x: &GraphVector) -> Result<GraphVector, GraphError> {
    let mc = McElement::for_vector(x)?;
    bracket(&mc.value, x)
}

/// Whether `[m, m]` vanishes (up to the truncation bound).
pub fn verify_mc(m: &McElement) -> bool {
    match bracket(&m.value, &m.value) {
        Ok(v) => v.is_zero(),
        Err(_) => false,
    }
}

/// Degree of a homogeneous vector, or `None` if it mixes degrees.
pub fn homogeneous_degree(x: &GraphVector) -> Option<i64> {
    let mut it = x.iter().map(|(g, _)| g.degree());
    let first = it.next()?;
    it.all(|k| k == first).then_some(first)
}

/// Degree of the single black vertex of the two-coloured complex; used by
/// the grading checks.
pub fn dot_degree(d: i32) -> i64 {
    degree_of(Flavor::Hat, d, 0, 1, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{canonicalize, Canon};
    use proptest::prelude::*;

    fn gc(d: i32, n: usize, edges: &[(usize, usize)]) -> GraphVector {
        let g = Graph::black(Flavor::Gc, d, n, edges).unwrap();
        GraphVector::from_graph(Family::Gc, d, &g).unwrap()
    }

    fn is_multi(g: &Graph) -> bool {
        let mut e: Vec<(u8, u8)> = g.edges().iter().map(|&(s, t)| (s.min(t), s.max(t))).collect();
        e.sort();
        e.windows(2).any(|w| w[0] == w[1])
    }

    fn triangle(d: i32) -> GraphVector {
        gc(d, 3, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn vertex_into_vertex() {
        let dot = gc(2, 1, &[]);
        assert_eq!(circ(&dot, &dot).unwrap(), dot);
    }

    #[test]
    fn vertex_is_a_right_unit_up_to_count() {
        let t = triangle(3);
        assert!(!t.is_zero());
        assert_eq!(circ(&t, &gc(3, 1, &[])).unwrap(), t.scale(&int(3)));
        // the triangle vanishes in GC_2; K4 does not
        assert!(triangle(2).is_zero());
        let k4 = k4(2);
        assert_eq!(circ(&k4, &gc(2, 1, &[])).unwrap(), k4.scale(&int(4)));
    }

    #[test]
    fn doubled_edge_composition_has_twice_the_triangle() {
        for d in [1, 3] {
            let host = Graph::black(Flavor::Gc, d, 2, &[(0, 1), (0, 1)]).unwrap();
            let guest = Graph::black(Flavor::Gc, d, 2, &[(0, 1)]).unwrap();
            let raw = insert(&host, 1, &guest).unwrap();
            assert_eq!(raw.len(), 4);
            let tri = Graph::black(Flavor::Gc, d, 3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
            let mut sum = GraphVector::zero(Family::Gc, d);
            let mut paths = 0;
            for g in &raw {
                if g.num_white() == 0 && is_multi(g) {
                    paths += 1;
                } else {
                    sum.add_graph(g, &Coeff::one()).unwrap();
                }
            }
            assert_eq!(paths, 2);
            let Canon::Form { graph, .. } = canonicalize(&tri).unwrap() else { panic!() };
            // both triangle terms carry the same sign
            assert_eq!(num_traits::Signed::abs(&sum.coeff(&graph)), int(2));
        }
    }

    #[test]
    fn oriented_edge_into_edge() {
        let e = Graph::black(Flavor::Ogc, 3, 2, &[(0, 1)]).unwrap();
        let raw = insert(&e, 0, &e).unwrap();
        assert_eq!(raw.len(), 2);
        assert_ne!(crate::graphcore::certificate(&raw[0]), crate::graphcore::certificate(&raw[1]));
        // the edge has odd degree, so e o e = [e, e] / 2 = 0
        for d in [2, 3] {
            let e = Graph::black(Flavor::Ogc, d, 2, &[(0, 1)]).unwrap();
            let v = GraphVector::from_graph(Family::Ogc, d, &e).unwrap();
            assert!(circ(&v, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn bad_insertions_are_rejected() {
        let e = Graph::black(Flavor::Ogc, 3, 2, &[(0, 1)]).unwrap();
        let f = Graph::black(Flavor::Gc, 3, 2, &[(0, 1)]).unwrap();
        assert!(insert(&e, 0, &f).is_err());
        let big = Graph::black(Flavor::Gc, 2, 9, &[]).unwrap();
        assert!(matches!(insert(&big, 0, &big), Err(GraphError::TooManyVertices(17))));
    }

    #[test]
    fn gamma0_is_maurer_cartan() {
        for d in 1..=4 {
            assert!(verify_mc(&McElement::gamma0(Family::Gc, d)));
            assert!(verify_mc(&McElement::gamma0(Family::Ogc, d)));
        }
    }

    #[test]
    fn gamma_hat_is_maurer_cartan_and_sensitive() {
        for d in [0, 1, 2, 3] {
            assert!(verify_mc(&McElement::gamma_hat(d, 6)), "d = {d}");
            let bad = McElement::gamma_hat_with(d, 6, |k| {
                if k == 2 {
                    Coeff::one()
                } else {
                    corolla_coeff(d, k)
                }
            });
            assert!(!verify_mc(&bad), "d = {d}");
        }
    }

    #[test]
    fn vertex_differential_is_the_edge() {
        for d in [2, 3] {
            assert_eq!(differential(&gc(d, 1, &[])).unwrap(), gc(d, 2, &[(0, 1)]));
        }
    }

    #[test]
    fn differential_squares_to_zero_on_small_graphs() {
        for d in [2, 3] {
            for x in [
                triangle(d),
                gc(d, 2, &[(0, 1), (0, 1), (0, 1)]),
                gc(d, 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
                gc(d, 2, &[(0, 1), (1, 1)]),
            ] {
                let dx = differential(&x).unwrap();
                assert!(differential(&dx).unwrap().is_zero());
            }
        }
        // surviving cycles are cocycles
        assert!(differential(&triangle(3)).unwrap().is_zero());
        let t = differential(&gc(2, 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])).unwrap();
        assert!(!t.is_zero());
        assert!(t.iter().all(|(g, _)| g.num_vertices() == 5 && g.loop_order().unwrap() == 2));
    }

    #[test]
    fn two_coloured_differential_squares_to_zero() {
        for d in [1, 2] {
            let bound = 6;
            let lone_path = Graph::new(
                Flavor::Hat,
                d,
                vec![Color::White, Color::White, Color::Black],
                vec![(2, 0), (2, 1)],
            )
            .unwrap();
            let x = GraphVector::from_graph(Family::Hat, d, &lone_path)
                .unwrap()
                .with_truncation(Some(bound));
            let dx = differential(&x).unwrap();
            assert!(!dx.is_zero());
            assert!(differential(&dx).unwrap().is_zero());
        }
    }

    #[test]
    fn lowest_order_term_recolours_a_white() {
        let d = 2;
        let g = Graph::new(
            Flavor::Hat,
            d,
            vec![Color::White, Color::White, Color::Black],
            vec![(2, 0), (2, 1)],
        )
        .unwrap();
        let x = GraphVector::from_graph(Family::Hat, d, &g).unwrap().with_truncation(Some(3));
        let dx = differential(&x).unwrap();
        assert!(!dx.is_zero());
        for (h, _) in dx.iter() {
            assert_eq!(h.num_vertices(), 3);
            assert_eq!(h.num_white(), 1);
        }
    }

    #[test]
    fn truncation_is_consistent() {
        let d = 1;
        let g = Graph::new(
            Flavor::Hat,
            d,
            vec![Color::White, Color::White, Color::Black, Color::Black],
            vec![(2, 0), (2, 1), (3, 0), (3, 1)],
        )
        .unwrap();
        let at = |b: usize| {
            let x = GraphVector::from_graph(Family::Hat, d, &g).unwrap().with_truncation(Some(b));
            differential(&x).unwrap()
        };
        let low = at(6);
        let high = at(7).filter(|h| h.num_vertices() <= 6);
        assert_eq!(low.sub(&high).len(), 0);
    }

    #[test]
    fn coloured_mixed_insertion_stays_first_component() {
        let d = 2;
        let host = corolla(d, 2);
        let edge = Graph::black(Flavor::Ogc, d + 1, 2, &[(0, 1)]).unwrap();
        let mut a = GraphVector::zero(Family::Hat, d);
        a.add_graph(&host, &Coeff::one()).unwrap();
        let mut b = GraphVector::zero(Family::Hat, d);
        b.add_graph(&edge, &Coeff::one()).unwrap();
        let p = circ(&a, &b).unwrap();
        assert!(!p.is_zero());
        assert!(p.iter().all(|(g, _)| g.flavor() == Flavor::Hat));
        // a second-component host never takes a first-component guest
        assert!(circ(&b, &a).unwrap().is_zero());
    }

    fn k4(d: i32) -> GraphVector {
        gc(d, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn small_gc2() -> Vec<GraphVector> {
        let mut v = vec![
            gc(2, 1, &[]),
            gc(2, 2, &[(0, 1)]),
            gc(2, 1, &[(0, 0)]),
            triangle(2),
            gc(2, 3, &[(0, 1), (1, 2)]),
            gc(2, 2, &[(0, 1), (0, 1), (0, 1)]),
            gc(2, 3, &[(0, 1), (1, 2), (1, 1)]),
            k4(2),
            gc(2, 2, &[(0, 1), (1, 1)]),
            gc(2, 4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),
        ];
        v.retain(|x| !x.is_zero());
        v
    }

    fn deg(x: &GraphVector) -> i64 {
        homogeneous_degree(x).unwrap()
    }

    fn sgn(p: i64) -> Coeff {
        int(if p.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn graded_jacobi(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
            let pool = small_gc2();
            let n = pool.len();
            let (a, b, c) = (&pool[i % n], &pool[j % n], &pool[k % n]);
            let (da, db, dc) = (deg(a), deg(b), deg(c));
            let mut sum = GraphVector::zero(Family::Gc, 2);
            sum.add_scaled(&bracket(a, &bracket(b, c).unwrap()).unwrap(), &sgn(da * dc));
            sum.add_scaled(&bracket(b, &bracket(c, a).unwrap()).unwrap(), &sgn(db * da));
            sum.add_scaled(&bracket(c, &bracket(a, b).unwrap()).unwrap(), &sgn(dc * db));
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn graded_antisymmetry_and_degree(i in 0usize..64, j in 0usize..64) {
            let pool = small_gc2();
            let n = pool.len();
            let (a, b) = (&pool[i % n], &pool[j % n]);
            let ab = bracket(a, b).unwrap();
            let ba = bracket(b, a).unwrap();
            prop_assert!(ab.add(&ba.scale(&sgn(deg(a) * deg(b)))).is_zero());
            if !ab.is_zero() {
                prop_assert_eq!(homogeneous_degree(&ab), Some(deg(a) + deg(b)));
            }
        }

        #[test]
        fn differential_is_a_derivation(i in 0usize..64, j in 0usize..64) {
            let pool = small_gc2();
            let n = pool.len();
            let (a, b) = (&pool[i % n], &pool[j % n]);
            let lhs = differential(&bracket(a, b).unwrap()).unwrap();
            let mut rhs = bracket(&differential(a).unwrap(), b).unwrap();
            rhs.add_scaled(&bracket(a, &differential(b).unwrap()).unwrap(), &sgn(deg(a)));
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }
}
