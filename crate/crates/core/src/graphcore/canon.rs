//! Canonical forms with sign.
//!
//! Colour/degree partition refinement followed by individualisation over
//! the first smallest non-singleton cell. Every leaf of the search tree is a
//! relabelling; its certificate is the relabelled graph in normal form and
//! the lexicographically least certificate wins. Two leaves with the same
//! certificate differ by an automorphism, and if their orientation signs
//! disagree the graph is zero. Siblings that are twins of an explored
//! vertex are skipped: the swap is an automorphism, so their subtrees
//! repeat already-seen certificates.

use super::{inversion_parity, Color, Flavor, Graph, GraphError, OrientationRule, Sign};

/// Result of canonicalisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Canon {
    /// The graph has an orientation-reversing automorphism.
    Zero,
    /// `input = sign * graph`, where `graph` is the canonical representative
    /// (its own sign is `+`).
    Form { graph: Graph, sign: Sign },
}

impl Canon {
    pub fn is_zero(&self) -> bool {
        matches!(self, Canon::Zero)
    }
}

/// Canonical representative of `g` with the sign relating the two
/// orientations, or [`Canon::Zero`].
pub fn canonicalize(g: &Graph) -> Result<Canon, GraphError> {
    g.check()?;
    Ok(canonicalize_unchecked(g))
}

pub(crate) fn canonicalize_unchecked(g: &Graph) -> Canon {
    let rule = g.rule();
    if killed_by_edge_symmetry(g, &rule) {
        return Canon::Zero;
    }
    let mut s = Search::new(g, rule, true);
    s.run();
    if s.zero {
        return Canon::Zero;
    }
    let (cert, sign) = s.best.expect("search visits at least one leaf");
    Canon::Form {
        graph: from_cert(g.flavor(), g.d(), &cert),
        sign,
    }
}

/// Orientation-free canonical certificate of the underlying coloured
/// multigraph. Equal certificates iff isomorphic.
pub fn certificate(g: &Graph) -> Vec<u8> {
    let mut s = Search::new(g, g.rule(), false);
    s.run();
    s.best.expect("search visits at least one leaf").0
}

/// Zero through edge-only automorphisms: two parallel odd edges, or an odd
/// tadpole flip.
pub(crate) fn killed_by_edge_symmetry(g: &Graph, rule: &OrientationRule) -> bool {
    if rule.flip == Some(Sign::MINUS) && g.has_tadpole() {
        return true;
    }
    if rule.edge_odd {
        let mut norm: Vec<(u8, u8)> = g
            .edges()
            .iter()
            .map(|&(s, t)| if rule.flip.is_some() && s > t { (t, s) } else { (s, t) })
            .collect();
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return true;
        }
    }
    false
}

fn from_cert(flavor: Flavor, d: i32, cert: &[u8]) -> Graph {
    let n = cert[0] as usize;
    let colors = cert[1..=n]
        .iter()
        .map(|&c| if c == 0 { Color::Black } else { Color::White })
        .collect();
    let edges = cert[n + 1..]
        .chunks_exact(2)
        .map(|p| (p[0], p[1]))
        .collect();
    Graph::new_unchecked(flavor, d, colors, edges, Sign::PLUS)
}

/// The relabelled graph `lambda(g)` in normal form, and the sign `s` with
/// `g = s * normal_form`.
///
/// Normal form: vertices in label order, undirected edges stored with
/// `src <= dst`, edges sorted lexicographically.
pub(crate) fn normal_form(g: &Graph, rule: &OrientationRule, lambda: &[u8]) -> (Vec<u8>, Sign) {
    let n = g.num_vertices();
    let mut cert = Vec::with_capacity(1 + n + 2 * g.num_edges());
    cert.push(n as u8);
    cert.resize(1 + n, 0);
    for (v, &c) in g.colors().iter().enumerate() {
        cert[1 + lambda[v] as usize] = (c == Color::White) as u8;
    }
    let mut sign = g.sign();

    let odd_vertices: Vec<u8> = (0..n)
        .filter(|&v| rule.vertex_odd(g.colors()[v]))
        .map(|v| lambda[v])
        .collect();
    sign *= Sign::pow(inversion_parity(&odd_vertices));

    let mut flips = false;
    let mut edges: Vec<(u8, u8)> = Vec::with_capacity(g.num_edges());
    for &(s, t) in g.edges() {
        let (a, b) = (lambda[s as usize], lambda[t as usize]);
        if rule.flip.is_some() && a > b {
            flips = !flips;
            edges.push((b, a));
        } else {
            edges.push((a, b));
        }
    }
    if let (Some(f), true) = (rule.flip, flips) {
        sign *= f;
    }
    if rule.edge_odd {
        sign *= Sign::pow(inversion_parity(&edges));
    }
    edges.sort_unstable();
    for (a, b) in edges {
        cert.push(a);
        cert.push(b);
    }
    (cert, sign)
}

struct Search<'a> {
    g: &'a Graph,
    rule: OrientationRule,
    n: usize,
    /// `adj[u * n + w]`: edges u -> w (both directions summed when undirected).
    adj: Vec<u8>,
    loops: Vec<u8>,
    signed: bool,
    identity_sign: Sign,
    best: Option<(Vec<u8>, Sign)>,
    zero: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, rule: OrientationRule, signed: bool) -> Self {
        let n = g.num_vertices();
        let mut adj = vec![0u8; n * n];
        let mut loops = vec![0u8; n];
        let undirected = rule.flip.is_some();
        for &(s, t) in g.edges() {
            let (s, t) = (s as usize, t as usize);
            if s == t {
                loops[s] += 1;
            } else {
                adj[s * n + t] += 1;
                if undirected {
                    adj[t * n + s] += 1;
                }
            }
        }
        let identity: Vec<u8> = (0..n as u8).collect();
        let identity_sign = if signed {
            normal_form(g, &rule, &identity).1
        } else {
            Sign::PLUS
        };
        Search {
            g,
            rule,
            n,
            adj,
            loops,
            signed,
            identity_sign,
            best: None,
            zero: false,
        }
    }

    fn a(&self, u: usize, w: usize) -> u8 {
        self.adj[u * self.n + w]
    }

    fn run(&mut self) {
        let n = self.n;
        let mut keyed: Vec<(u8, u8, u8, u8, u8)> = (0..n)
            .map(|v| {
                let out: u32 = (0..n).map(|w| self.a(v, w) as u32).sum();
                let inn: u32 = (0..n).map(|w| self.a(w, v) as u32).sum();
                (
                    (self.g.colors()[v] == Color::White) as u8,
                    self.loops[v],
                    out.min(255) as u8,
                    inn.min(255) as u8,
                    v as u8,
                )
            })
            .collect();
        keyed.sort_unstable();
        let mut partition: Vec<Vec<u8>> = Vec::new();
        for (i, k) in keyed.iter().enumerate() {
            if i > 0 && same_key(&keyed[i - 1], k) {
                partition.last_mut().unwrap().push(k.4);
            } else {
                partition.push(vec![k.4]);
            }
        }
        self.visit(partition);
    }

    fn refine(&self, mut partition: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
        let n = self.n;
        let mut cell_of = vec![0u8; n];
        loop {
            for (i, cell) in partition.iter().enumerate() {
                for &v in cell {
                    cell_of[v as usize] = i as u8;
                }
            }
            let mut next: Vec<Vec<u8>> = Vec::with_capacity(n);
            let mut split = false;
            for cell in &partition {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sigs: Vec<(Vec<(u8, u8, u8)>, u8)> = cell
                    .iter()
                    .map(|&v| {
                        let v = v as usize;
                        let mut sig: Vec<(u8, u8, u8)> = (0..n)
                            .filter(|&w| w != v && (self.a(v, w) > 0 || self.a(w, v) > 0))
                            .map(|w| (cell_of[w], self.a(v, w), self.a(w, v)))
                            .collect();
                        sig.sort_unstable();
                        (sig, v as u8)
                    })
                    .collect();
                sigs.sort_unstable();
                let start = next.len();
                for (i, (sig, v)) in sigs.iter().enumerate() {
                    if i > 0 && sigs[i - 1].0 == *sig {
                        next.last_mut().unwrap().push(*v);
                    } else {
                        next.push(vec![*v]);
                    }
                }
                if next.len() - start > 1 {
                    split = true;
                }
            }
            partition = next;
            if !split {
                return partition;
            }
        }
    }

    fn is_twin(&self, x: usize, y: usize) -> bool {
        if self.loops[x] != self.loops[y] || self.a(x, y) != self.a(y, x) {
            return false;
        }
        (0..self.n)
            .filter(|&z| z != x && z != y)
            .all(|z| self.a(x, z) == self.a(y, z) && self.a(z, x) == self.a(z, y))
    }

    fn swap_sign(&self, x: usize, y: usize) -> Sign {
        let mut tau: Vec<u8> = (0..self.n as u8).collect();
        tau.swap(x, y);
        normal_form(self.g, &self.rule, &tau).1 * self.identity_sign
    }

    fn visit(&mut self, partition: Vec<Vec<u8>>) {
        if self.zero {
            return;
        }
        let partition = self.refine(partition);
        if partition.len() == self.n {
            self.leaf(&partition);
            return;
        }
        let (idx, _) = partition
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .expect("non-discrete partition has a non-singleton cell");
        let cell = partition[idx].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &x in &cell {
            let x = x as usize;
            let mut skip = false;
            for &y in &explored {
                if self.is_twin(x, y) {
                    if self.signed && self.swap_sign(x, y).is_negative() {
                        self.zero = true;
                        return;
                    }
                    skip = true;
                    break;
                }
            }
            if skip {
                continue;
            }
            explored.push(x);
            let mut child = Vec::with_capacity(partition.len() + 1);
            child.extend_from_slice(&partition[..idx]);
            child.push(vec![x as u8]);
            child.push(cell.iter().copied().filter(|&v| v as usize != x).collect());
            child.extend_from_slice(&partition[idx + 1..]);
            self.visit(child);
            if self.zero {
                return;
            }
        }
    }

    fn leaf(&mut self, partition: &[Vec<u8>]) {
        let mut lambda = vec![0u8; self.n];
        for (i, cell) in partition.iter().enumerate() {
            lambda[cell[0] as usize] = i as u8;
        }
        let (cert, sign) = normal_form(self.g, &self.rule, &lambda);
        match &self.best {
            None => self.best = Some((cert, sign)),
            Some((b, s)) => match cert.cmp(b) {
                std::cmp::Ordering::Less => self.best = Some((cert, sign)),
                std::cmp::Ordering::Equal => {
                    if self.signed && *s != sign {
                        self.zero = true;
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

fn same_key(a: &(u8, u8, u8, u8, u8), b: &(u8, u8, u8, u8, u8)) -> bool {
    (a.0, a.1, a.2, a.3) == (b.0, b.1, b.2, b.3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: Canon) -> (Graph, Sign) {
        match c {
            Canon::Form { graph, sign } => (graph, sign),
            Canon::Zero => panic!("unexpected zero"),
        }
    }

    #[test]
    fn double_edge_vanishes_for_even_d() {
        for d in [-2, 0, 2, 4] {
            let g = Graph::black(Flavor::Gc, d, 2, &[(0, 1), (1, 0)]).unwrap();
            assert!(canonicalize(&g).unwrap().is_zero());
        }
        // odd d: the vertex swap is odd and the two reversals cancel
        let g = Graph::black(Flavor::Gc, 3, 2, &[(0, 1), (1, 0)]).unwrap();
        assert!(canonicalize(&g).unwrap().is_zero());
        let g = Graph::black(Flavor::Gc, 3, 2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert!(!canonicalize(&g).unwrap().is_zero());
    }

    #[test]
    fn single_vertex_is_its_own_form() {
        for d in -1..4 {
            let g = Graph::black(Flavor::Gc, d, 1, &[]).unwrap();
            let (c, s) = form(canonicalize(&g).unwrap());
            assert_eq!(c, g);
            assert_eq!(s, Sign::PLUS);
        }
    }

    #[test]
    fn path_edge_order_swap_is_odd_for_even_d() {
        // The bare path is killed by its end-swapping automorphism (two odd
        // edges trade places), so a tadpole on one end breaks the symmetry.
        let bare = Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2)]).unwrap();
        assert!(canonicalize(&bare).unwrap().is_zero());
        let a = Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2), (0, 0)]).unwrap();
        let b = Graph::black(Flavor::Gc, 2, 3, &[(1, 2), (0, 1), (0, 0)]).unwrap();
        let (ka, sa) = form(canonicalize(&a).unwrap());
        let (kb, sb) = form(canonicalize(&b).unwrap());
        assert_eq!(ka, kb);
        assert_eq!(sa * sb, Sign::MINUS);
    }

    #[test]
    fn idempotent_on_forms() {
        let square = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)];
        let g = Graph::black(Flavor::Gc, 2, 4, &square).unwrap();
        let (c, _) = form(canonicalize(&g).unwrap());
        let (c2, s2) = form(canonicalize(&c).unwrap());
        assert_eq!(c, c2);
        assert_eq!(s2, Sign::PLUS);
        // for odd d the reflection fixing the chord reverses an odd number of signs
        let g = Graph::black(Flavor::Gc, 3, 4, &square).unwrap();
        assert!(canonicalize(&g).unwrap().is_zero());
    }

    #[test]
    fn tadpole_vanishes_for_odd_d_only() {
        let g = Graph::black(Flavor::Gc, 3, 1, &[(0, 0)]).unwrap();
        assert!(canonicalize(&g).unwrap().is_zero());
        let g = Graph::black(Flavor::Gc, 2, 1, &[(0, 0)]).unwrap();
        assert!(!canonicalize(&g).unwrap().is_zero());
    }

    #[test]
    fn certificate_ignores_orientation() {
        let a = Graph::black(Flavor::Ogc, 3, 3, &[(0, 1), (0, 2)]).unwrap();
        let b = Graph::black(Flavor::Ogc, 3, 3, &[(2, 1), (2, 0)]).unwrap();
        assert_eq!(certificate(&a), certificate(&b));
        let c = Graph::black(Flavor::Ogc, 3, 3, &[(1, 0), (2, 0)]).unwrap();
        assert_ne!(certificate(&a), certificate(&c));
    }
}
