//! Coloured directed multigraphs with orientation data.
//!
//! A graph is stored as a word of letters: the vertices `0..n` in order,
//! followed by the edges in list order, times a global sign. Each letter
//! carries a parity fixed by the flavor and the dimension parameter `d`
//! (see [`OrientationRule`]); permuting odd letters costs a sign, and for
//! undirected flavors reversing an edge costs `(-1)^d`. Everything else in
//! the crate (insertions, maps, canonical forms) is expressed as
//! rearrangements of such words.

mod canon;
mod complex;
mod encode;
mod vector;

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

pub use canon::{canonicalize, certificate, Canon};
pub(crate) use canon::killed_by_edge_symmetry;
pub use complex::{validate, ComplexId};
pub use encode::{decode, encode};
pub use vector::{int, Coeff, Family, GraphVector};

/// Largest vertex count the graph engine accepts.
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("tadpole at vertex {0} is not allowed in flavor {1}")]
    Tadpole(usize, Flavor),
    #[error("directed cycle through vertex {0}")]
    DirectedCycle(usize),
    #[error("white vertex {0} has an outgoing edge")]
    WhiteSource(usize),
    #[error("white vertex {0} in flavor {1}")]
    WhiteVertex(usize, Flavor),
    #[error("edge ({0},{1}) references a vertex out of range")]
    VertexOutOfRange(usize, usize),
    #[error("{0} vertices exceed the engine limit")]
    TooManyVertices(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown complex id {0:?}")]
    UnknownComplex(String),
    #[error("incompatible operands: {0}")]
    Mismatch(String),
}

/// Which family of complexes a graph belongs to.
///
/// `Gc` graphs live in `fGC_d` (dotted edges, symmetric under flips up to
/// `(-1)^d`). `Ogc` graphs live in `fOGC_d` where `d` is the parameter of the
/// oriented complex itself, so the partner of `GC_d` is `Ogc` with `d + 1`.
/// `Hat` graphs are the white/black component of the two-coloured complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Gc,
    Ogc,
    Hat,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Gc => "GC",
            Flavor::Ogc => "OGC",
            Flavor::Hat => "HAT",
        }
    }

    pub fn is_directed(self) -> bool {
        !matches!(self, Flavor::Gc)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn as_char(self) -> char {
        match self {
            Color::Black => 'b',
            Color::White => 'w',
        }
    }
}

/// A sign in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sign(bool);

impl Sign {
    pub const PLUS: Sign = Sign(false);
    pub const MINUS: Sign = Sign(true);

    /// `(-1)^k`.
    pub fn pow(odd: bool) -> Sign {
        Sign(odd)
    }

    pub fn is_negative(self) -> bool {
        self.0
    }

    pub fn to_i64(self) -> i64 {
        if self.0 {
            -1
        } else {
            1
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign(self.0 ^ rhs.0)
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        self.0 ^= rhs.0;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign(!self.0)
    }
}

/// Parities of the letters of a graph word, determined by `(flavor, d)`.
///
/// | flavor | black vertex | white vertex | edge  | edge flip |
/// |--------|--------------|--------------|-------|-----------|
/// | GC_d   | d            | -            | 1 - d | (-1)^d    |
/// | OGC_d  | d            | -            | 1 - d | n/a       |
/// | HAT_d  | d + 1        | d            | d     | n/a       |
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationRule {
    pub black_odd: bool,
    pub white_odd: bool,
    pub edge_odd: bool,
    /// `Some(sign)` for undirected flavors: the cost of reversing one edge.
    pub flip: Option<Sign>,
}

fn odd(x: i32) -> bool {
    x.rem_euclid(2) == 1
}

impl OrientationRule {
    pub fn new(flavor: Flavor, d: i32) -> Self {
        match flavor {
            Flavor::Gc => OrientationRule {
                black_odd: odd(d),
                white_odd: odd(d),
                edge_odd: odd(1 - d),
                flip: Some(Sign::pow(odd(d))),
            },
            Flavor::Ogc => OrientationRule {
                black_odd: odd(d),
                white_odd: odd(d),
                edge_odd: odd(1 - d),
                flip: None,
            },
            Flavor::Hat => OrientationRule {
                black_odd: odd(d + 1),
                white_odd: odd(d),
                edge_odd: odd(d),
                flip: None,
            },
        }
    }

    pub fn vertex_odd(&self, c: Color) -> bool {
        match c {
            Color::Black => self.black_odd,
            Color::White => self.white_odd,
        }
    }
}

/// A coloured directed multigraph together with an orientation.
///
/// The orientation is the word `V_0 .. V_{n-1} E_0 .. E_{m-1}` times `sign`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    flavor: Flavor,
    d: i32,
    colors: Vec<Color>,
    edges: Vec<(u8, u8)>,
    sign: Sign,
}

impl Graph {
    /// Builds a graph without checking flavor invariants.
    pub fn new_unchecked(
        flavor: Flavor,
        d: i32,
        colors: Vec<Color>,
        edges: Vec<(u8, u8)>,
        sign: Sign,
    ) -> Self {
        Graph {
            flavor,
            d,
            colors,
            edges,
            sign,
        }
    }

    /// Builds a graph and checks the flavor invariants.
    pub fn new(
        flavor: Flavor,
        d: i32,
        colors: Vec<Color>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let n = colors.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut packed = Vec::with_capacity(edges.len());
        for &(s, t) in &edges {
            if s >= n || t >= n {
                return Err(GraphError::VertexOutOfRange(s, t));
            }
            packed.push((s as u8, t as u8));
        }
        let g = Graph {
            flavor,
            d,
            colors,
            edges: packed,
            sign: Sign::PLUS,
        };
        g.check()?;
        Ok(g)
    }

    /// All-black graph of the given flavor.
    pub fn black(flavor: Flavor, d: i32, n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Graph::new(flavor, d, vec![Color::Black; n], edges.to_vec())
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_white(&self) -> usize {
        self.colors.iter().filter(|&&c| c == Color::White).count()
    }

    pub fn num_black(&self) -> usize {
        self.num_vertices() - self.num_white()
    }

    pub fn rule(&self) -> OrientationRule {
        OrientationRule::new(self.flavor, self.d)
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    /// Same graph, orientation multiplied by `-1`.
    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    /// Reverses the direction of edge `k`. For undirected flavors the
    /// orientation picks up the flip sign so the element is unchanged.
    pub fn flip_edge(&self, k: usize) -> Graph {
        let mut g = self.clone();
        let (s, t) = g.edges[k];
        g.edges[k] = (t, s);
        if let Some(f) = self.rule().flip {
            g.sign *= f;
        }
        g
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 as usize == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 as usize == v).count()
    }

    /// Valence, counting both ends of a tadpole.
    pub fn valence(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|e| e.0 == e.1)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        for &(s, t) in &self.edges {
            let (a, b) = (find(&mut parent, s as usize), find(&mut parent, t as usize));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Whether the directed edge relation has a cycle (tadpoles count).
    pub fn has_directed_cycle(&self) -> Option<usize> {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.edges {
            indeg[t as usize] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.edges {
                if s as usize == v {
                    indeg[t as usize] -= 1;
                    if indeg[t as usize] == 0 {
                        stack.push(t as usize);
                    }
                }
            }
        }
        if seen == n {
            None
        } else {
            (0..n).find(|&v| indeg[v] > 0)
        }
    }

    /// Checks the flavor invariants.
    pub fn check(&self) -> Result<(), GraphError> {
        let n = self.num_vertices();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        for &(s, t) in &self.edges {
            if s as usize >= n || t as usize >= n {
                return Err(GraphError::VertexOutOfRange(s as usize, t as usize));
            }
        }
        if self.flavor != Flavor::Hat {
            if let Some(v) = self.colors.iter().position(|&c| c == Color::White) {
                return Err(GraphError::WhiteVertex(v, self.flavor));
            }
        }
        if self.flavor.is_directed() {
            if let Some(&(s, _)) = self.edges.iter().find(|e| e.0 == e.1) {
                return Err(GraphError::Tadpole(s as usize, self.flavor));
            }
            if let Some(v) = self.has_directed_cycle() {
                return Err(GraphError::DirectedCycle(v));
            }
        }
        if self.flavor == Flavor::Hat {
            for &(s, _) in &self.edges {
                if self.colors[s as usize] == Color::White {
                    return Err(GraphError::WhiteSource(s as usize));
                }
            }
        }
        Ok(())
    }

    /// First Betti number `#E - #V + 1` of a connected graph.
    pub fn loop_order(&self) -> Result<i64, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.num_edges() as i64 - self.num_vertices() as i64 + 1)
    }

    /// Cohomological degree.
    ///
    /// `d(#V - 1) + (1 - d)#E` for GC and OGC (with the OGC parameter), and
    /// `d#V_white + (d + 1)#V_black - d#E - d` for the two-coloured flavor.
    pub fn degree(&self) -> i64 {
        degree_of(
            self.flavor,
            self.d,
            self.num_white(),
            self.num_black(),
            self.num_edges(),
        )
    }
}

/// Degree from vertex/edge counts alone.
pub fn degree_of(flavor: Flavor, d: i32, white: usize, black: usize, edges: usize) -> i64 {
    let d = d as i64;
    let (w, b, e) = (white as i64, black as i64, edges as i64);
    match flavor {
        Flavor::Gc | Flavor::Ogc => d * (w + b - 1) + (1 - d) * e,
        Flavor::Hat => d * w + (d + 1) * b - d * e - d,
    }
}

/// Parity of the number of inversions in `seq`; ties are not inversions.
pub(crate) fn inversion_parity<T: Ord>(seq: &[T]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    odd
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> Graph {
        Graph::black(
            Flavor::Gc,
            2,
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn loop_orders() {
        let edge = Graph::black(Flavor::Gc, 2, 2, &[(0, 1)]).unwrap();
        assert_eq!(edge.loop_order().unwrap(), 0);
        let tri = Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.loop_order().unwrap(), 1);
        assert_eq!(tetrahedron().loop_order().unwrap(), 3);
        let two = Graph::black(Flavor::Gc, 2, 2, &[]).unwrap();
        assert_eq!(two.loop_order(), Err(GraphError::Disconnected));
    }

    #[test]
    fn tetrahedron_loop_order_matches_cycle_space_rank() {
        // rank of the incidence matrix over F_2 is #V - #components
        let g = tetrahedron();
        let mut rows: Vec<u32> = g
            .edges()
            .iter()
            .map(|&(s, t)| (1u32 << s) ^ (1u32 << t))
            .collect();
        let mut rank = 0;
        for bit in 0..4 {
            if let Some(p) = rows.iter().position(|r| r >> bit & 1 == 1) {
                let piv = rows.swap_remove(p);
                for r in rows.iter_mut() {
                    if *r >> bit & 1 == 1 {
                        *r ^= piv;
                    }
                }
                rank += 1;
            }
        }
        let cycle_rank = g.num_edges() - rank;
        assert_eq!(cycle_rank as i64, g.loop_order().unwrap());
    }

    #[test]
    fn degrees() {
        assert_eq!(tetrahedron().degree(), 0);
        for d in -3..5 {
            let edge = Graph::black(Flavor::Gc, d, 2, &[(0, 1)]).unwrap();
            assert_eq!(edge.degree(), 1);
            let dir = Graph::black(Flavor::Ogc, d, 2, &[(0, 1)]).unwrap();
            assert_eq!(dir.degree(), 1);
            for k in 0..5 {
                let mut colors = vec![Color::Black];
                colors.extend(std::iter::repeat(Color::White).take(k));
                let edges = (1..=k).map(|w| (0, w)).collect();
                let corolla = Graph::new(Flavor::Hat, d, colors, edges).unwrap();
                assert_eq!(corolla.degree(), 1, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn invariants_rejected() {
        assert!(matches!(
            Graph::black(Flavor::Ogc, 3, 3, &[(0, 1), (1, 2), (2, 0)]),
            Err(GraphError::DirectedCycle(_))
        ));
        assert!(matches!(
            Graph::black(Flavor::Ogc, 3, 1, &[(0, 0)]),
            Err(GraphError::Tadpole(0, Flavor::Ogc))
        ));
        assert!(Graph::black(Flavor::Gc, 2, 1, &[(0, 0)]).is_ok());
        assert!(matches!(
            Graph::new(Flavor::Hat, 2, vec![Color::White, Color::Black], vec![(0, 1)]),
            Err(GraphError::WhiteSource(0))
        ));
        assert!(matches!(
            Graph::new(Flavor::Gc, 2, vec![Color::White], vec![]),
            Err(GraphError::WhiteVertex(0, Flavor::Gc))
        ));
    }

    #[test]
    fn parity_table() {
        let r = OrientationRule::new(Flavor::Gc, 2);
        assert!(!r.black_odd && r.edge_odd && r.flip == Some(Sign::PLUS));
        let r = OrientationRule::new(Flavor::Gc, 3);
        assert!(r.black_odd && !r.edge_odd && r.flip == Some(Sign::MINUS));
        let r = OrientationRule::new(Flavor::Hat, 2);
        assert!(r.black_odd && !r.white_odd && !r.edge_odd);
        let r = OrientationRule::new(Flavor::Hat, -1);
        assert!(!r.black_odd && r.white_odd && r.edge_odd);
    }
}
