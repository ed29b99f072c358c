//! Sector bases: one canonical representative per isomorphism class of
//! non-vanishing generators with fixed parameter, loop order and vertex
//! count.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::graphcore::{
    canonicalize, certificate, decode, encode, Canon, Color, ComplexId, Flavor, Graph, GraphError,
    OrientationRule, Sign,
};

/// Default cap on the number of candidate graphs examined per sector.
pub const DEFAULT_CANDIDATE_CAP: usize = 20_000_000;

/// Largest vertex count the oracle accepts.
pub const ORACLE_MAX_VERTICES: usize = 7;

#[derive(Debug, thiserror::Error)]
pub enum SectorError {
    #[error("sector {key}: more than {cap} candidate graphs")]
    Overflow { key: String, cap: usize },
    #[error("oracle only handles up to {ORACLE_MAX_VERTICES} vertices, got {0}")]
    OracleCap(usize),
    #[error("malformed sector key {0:?}")]
    BadKey(String),
    #[error("basis file: {0}")]
    BadFile(String),
    #[error("oracle and canonical forms disagree on {0}")]
    OracleMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Vertex count of a sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexCount {
    Total(usize),
    /// Two-coloured sectors are keyed by white and black counts separately.
    Colored { white: usize, black: usize },
}

/// `(complex, d, loop order, vertex count)`. Edge count is `v + g - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorKey {
    pub complex: ComplexId,
    pub d: i32,
    pub g: usize,
    pub v: VertexCount,
    /// Whether tadpoles are generators (GC complexes only).
    pub tadpoles: bool,
}

impl SectorKey {
    pub fn new(complex: ComplexId, d: i32, g: usize, v: usize) -> Self {
        assert!(complex != ComplexId::Hat, "use SectorKey::hat");
        SectorKey {
            complex,
            d,
            g,
            v: VertexCount::Total(v),
            tadpoles: true,
        }
    }

    pub fn hat(d: i32, g: usize, white: usize, black: usize) -> Self {
        SectorKey {
            complex: ComplexId::Hat,
            d,
            g,
            v: VertexCount::Colored { white, black },
            tadpoles: true,
        }
    }

    pub fn without_tadpoles(mut self) -> Self {
        self.tadpoles = false;
        self
    }

    pub fn num_vertices(&self) -> usize {
        match self.v {
            VertexCount::Total(n) => n,
            VertexCount::Colored { white, black } => white + black,
        }
    }

    pub fn num_edges(&self) -> Option<usize> {
        (self.num_vertices() + self.g).checked_sub(1)
    }

    pub fn flavor(&self) -> Flavor {
        self.complex.flavor()
    }

    pub fn graph_d(&self) -> i32 {
        self.complex.graph_d(self.d)
    }

    /// Vertex colours in generation order: blacks, then whites.
    pub fn colors(&self) -> Vec<Color> {
        match self.v {
            VertexCount::Total(n) => vec![Color::Black; n],
            VertexCount::Colored { white, black } => {
                let mut c = vec![Color::Black; black];
                c.extend(std::iter::repeat(Color::White).take(white));
                c
            }
        }
    }

    /// Cohomological degree shared by every generator of the sector.
    pub fn degree(&self) -> i64 {
        let colors = self.colors();
        let w = colors.iter().filter(|&&c| c == Color::White).count();
        crate::graphcore::degree_of(
            self.flavor(),
            self.graph_d(),
            w,
            colors.len() - w,
            self.num_edges().unwrap_or(0),
        )
    }

    /// Directory-safe name, also used in file headers.
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};d={};g={};", self.complex, self.d, self.g)?;
        match self.v {
            VertexCount::Total(n) => write!(f, "v={n}")?,
            VertexCount::Colored { white, black } => write!(f, "v={white}w{black}b")?,
        }
        if !self.tadpoles {
            write!(f, ";notad")?;
        }
        Ok(())
    }
}

impl FromStr for SectorKey {
    type Err = SectorError;
    fn from_str(s: &str) -> Result<Self, SectorError> {
        let bad = || SectorError::BadKey(s.to_string());
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() < 4 || parts.len() > 5 {
            return Err(bad());
        }
        let complex: ComplexId = parts[0].parse()?;
        let d: i32 = parts[1].strip_prefix("d=").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let g: usize = parts[2].strip_prefix("g=").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let v = parts[3].strip_prefix("v=").ok_or_else(bad)?;
        let mut key = if let Some(rest) = v.strip_suffix('b') {
            let (w, b) = rest.split_once('w').ok_or_else(bad)?;
            let (w, b) = (w.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if complex != ComplexId::Hat {
                return Err(bad());
            }
            SectorKey::hat(d, g, w, b)
        } else {
            if complex == ComplexId::Hat {
                return Err(bad());
            }
            SectorKey::new(complex, d, g, v.parse().map_err(|_| bad())?)
        };
        match parts.get(4) {
            None => {}
            Some(&"notad") => key.tadpoles = false,
            Some(_) => return Err(bad()),
        }
        Ok(key)
    }
}

/// Canonical generators of a sector, sorted by encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub key: SectorKey,
    graphs: Vec<Graph>,
    index: HashMap<Graph, usize>,
}

impl Basis {
    /// Builds a basis from canonical graphs; sorts and deduplicates.
    pub fn from_graphs(key: SectorKey, mut graphs: Vec<Graph>) -> Self {
        let mut keyed: Vec<(String, Graph)> = graphs.drain(..).map(|g| (encode(&g), g)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let graphs: Vec<Graph> = keyed.into_iter().map(|(_, g)| g).collect();
        let index = graphs.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        Basis { key, graphs, index }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    /// Position of a canonical graph.
    pub fn position(&self, g: &Graph) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// `#sector;KEY` followed by one encoded graph per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("#sector;{}\n", self.key);
        for g in &self.graphs {
            s.push_str(&encode(g));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, SectorError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix("#sector;"))
            .ok_or_else(|| SectorError::BadFile("missing #sector header".into()))?;
        let key: SectorKey = header.parse()?;
        let graphs = lines.map(decode).collect::<Result<Vec<_>, _>>()?;
        let n = graphs.len();
        let b = Basis::from_graphs(key, graphs);
        if b.len() != n {
            return Err(SectorError::BadFile("duplicate graphs".into()));
        }
        Ok(b)
    }
}

/// Admissible directed edge slots `(src, dst)` between the given colours.
fn edge_slots(key: &SectorKey, colors: &[Color], rule: &OrientationRule) -> Vec<(u8, u8)> {
    let n = colors.len() as u8;
    let mut slots = Vec::new();
    for s in 0..n {
        for t in 0..n {
            let ok = match key.flavor() {
                Flavor::Gc => s < t || (s == t && key.tadpoles && rule.flip != Some(Sign::MINUS)),
                Flavor::Ogc => s != t,
                Flavor::Hat => s != t && colors[s as usize] == Color::Black,
            };
            if ok {
                slots.push((s, t));
            }
        }
    }
    slots
}

fn components(n: usize, edges: &[(u8, u8)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut c = n;
    for &(s, t) in edges {
        let (a, b) = (find(&mut parent, s as usize), find(&mut parent, t as usize));
        if a != b {
            parent[a] = b;
            c -= 1;
        }
    }
    c
}

/// Whether a partial graph can still be completed with `remaining` edges.
fn feasible(key: &SectorKey, g: &Graph, remaining: usize) -> bool {
    let n = g.num_vertices();
    if key.complex.requires_connected() && components(n, g.edges()) > remaining + 1 {
        return false;
    }
    let need = key.complex.min_valence();
    if need > 0 {
        let deficit: usize = (0..n).map(|v| need.saturating_sub(g.valence(v))).sum();
        if deficit > 2 * remaining {
            return false;
        }
    }
    true
}

/// Duplicate odd edges and odd tadpoles stay zero under edge addition.
fn permanently_zero(g: &Graph, rule: &OrientationRule) -> bool {
    crate::graphcore::killed_by_edge_symmetry(g, rule)
}

/// Canonical basis of a sector with the default candidate cap.
pub fn generate_basis(key: &SectorKey) -> Result<Basis, SectorError> {
    generate_basis_with_cap(key, DEFAULT_CANDIDATE_CAP)
}

/// Level-wise edge augmentation: level `i` holds one graph per isomorphism
/// class of admissible partial graphs with `i` edges, deduplicated by
/// orientation-free certificate.
pub fn generate_basis_with_cap(key: &SectorKey, cap: usize) -> Result<Basis, SectorError> {
    let n = key.num_vertices();
    let Some(e) = key.num_edges() else {
        return Ok(Basis::from_graphs(*key, vec![]));
    };
    if n == 0 {
        return Ok(Basis::from_graphs(*key, vec![]));
    }
    if n > crate::graphcore::MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n).into());
    }
    let colors = key.colors();
    let flavor = key.flavor();
    let d = key.graph_d();
    let empty = Graph::new_unchecked(flavor, d, colors.clone(), vec![], Sign::PLUS);
    let rule = empty.rule();
    let slots = edge_slots(key, &colors, &rule);
    let directed = flavor.is_directed();

    let mut level = vec![empty];
    let mut examined = 0usize;
    for i in 0..e {
        let remaining = e - i - 1;
        let mut cands: Vec<(Vec<u8>, Graph)> = level
            .par_iter()
            .flat_map_iter(|g| {
                slots
                    .iter()
                    .filter_map(|&(s, t)| {
                        let mut edges = g.edges().to_vec();
                        edges.push((s, t));
                        edges.sort_unstable();
                        let h = Graph::new_unchecked(flavor, d, colors.clone(), edges, Sign::PLUS);
                        if directed && h.has_directed_cycle().is_some() {
                            return None;
                        }
                        if permanently_zero(&h, &rule) || !feasible(key, &h, remaining) {
                            return None;
                        }
                        Some((certificate(&h), h))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        examined += cands.len();
        if examined > cap {
            return Err(SectorError::Overflow {
                key: key.to_string(),
                cap,
            });
        }
        cands.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        cands.dedup_by(|a, b| a.0 == b.0);
        level = cands.into_iter().map(|(_, g)| g).collect();
    }

    let graphs: Vec<Graph> = level
        .into_par_iter()
        .filter(|g| key.complex.admits(key.d, g, key.tadpoles))
        .filter_map(|g| match canonicalize(&g) {
            Ok(Canon::Form { graph, .. }) => Some(graph),
            _ => None,
        })
        .collect();
    Ok(Basis::from_graphs(*key, graphs))
}

// ---------------------------------------------------------------------------
// Oracle: exhaustive labelled enumeration with brute-force orbit reduction.
// It shares no code with the canonical labelling search.

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    fn rec(k: usize, p: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

fn parity_of<T: Ord>(seq: &[T]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            odd ^= seq[i] > seq[j];
        }
    }
    odd
}

struct Oracle<'a> {
    key: &'a SectorKey,
    colors: Vec<Color>,
    rule: OrientationRule,
    undirected: bool,
    perms: Vec<Vec<u8>>,
}

impl Oracle<'_> {
    fn image(&self, edges: &[(u8, u8)], p: &[u8]) -> Vec<(u8, u8)> {
        let mut img: Vec<(u8, u8)> = edges
            .iter()
            .map(|&(s, t)| {
                let (a, b) = (p[s as usize], p[t as usize]);
                if self.undirected && a > b {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        img.sort_unstable();
        img
    }

    fn colors_fixed(&self, p: &[u8]) -> bool {
        (0..p.len()).all(|v| self.colors[v] == self.colors[p[v] as usize])
    }

    /// Sign by which the relabelling `p` (an automorphism) acts.
    fn automorphism_sign(&self, edges: &[(u8, u8)], p: &[u8]) -> Sign {
        let odd_images: Vec<u8> = (0..p.len())
            .filter(|&v| self.rule.vertex_odd(self.colors[v]))
            .map(|v| p[v])
            .collect();
        let mut sign = Sign::pow(parity_of(&odd_images));
        let mut used = vec![false; edges.len()];
        let mut target = Vec::with_capacity(edges.len());
        let mut flips = 0usize;
        for &(s, t) in edges {
            let (a, b) = (p[s as usize], p[t as usize]);
            let j = (0..edges.len())
                .find(|&j| !used[j] && edges[j] == (a, b))
                .map(|j| (j, false))
                .or_else(|| {
                    if self.undirected {
                        (0..edges.len()).find(|&j| !used[j] && edges[j] == (b, a)).map(|j| (j, true))
                    } else {
                        None
                    }
                })
                .expect("automorphism maps edges to edges");
            used[j.0] = true;
            if j.1 && a != b {
                flips += 1;
            }
            target.push(j.0);
        }
        if self.rule.edge_odd {
            sign *= Sign::pow(parity_of(&target));
        }
        if let Some(f) = self.rule.flip {
            if flips % 2 == 1 {
                sign *= f;
            }
        }
        sign
    }

    /// Orientation reversed by an automorphism that fixes every vertex.
    fn edge_only_zero(&self, edges: &[(u8, u8)]) -> bool {
        if self.rule.flip == Some(Sign::MINUS) && edges.iter().any(|e| e.0 == e.1) {
            return true;
        }
        self.rule.edge_odd && edges.windows(2).any(|w| w[0] == w[1])
    }

    fn admissible(&self, edges: &[(u8, u8)]) -> bool {
        let g = Graph::new_unchecked(
            self.key.flavor(),
            self.key.graph_d(),
            self.colors.clone(),
            edges.to_vec(),
            Sign::PLUS,
        );
        self.key.complex.admits(self.key.d, &g, self.key.tadpoles)
    }
}

/// Exhaustive reference enumeration, used to cross-check
/// [`generate_basis`]. Every labelled edge multiset is visited; orbits and
/// vanishing are decided by trying all vertex permutations.
pub fn oracle_basis(key: &SectorKey) -> Result<Basis, SectorError> {
    let n = key.num_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(SectorError::OracleCap(n));
    }
    let Some(e) = key.num_edges() else {
        return Ok(Basis::from_graphs(*key, vec![]));
    };
    let colors = key.colors();
    let rule = OrientationRule::new(key.flavor(), key.graph_d());
    let undirected = rule.flip.is_some();
    let mut slots = Vec::new();
    for s in 0..n as u8 {
        for t in 0..n as u8 {
            let ok = match key.flavor() {
                Flavor::Gc => s <= t,
                Flavor::Ogc => s != t,
                Flavor::Hat => s != t && colors[s as usize] == Color::Black,
            };
            if ok {
                slots.push((s, t));
            }
        }
    }
    let oracle = Oracle {
        key,
        colors: colors.clone(),
        rule,
        undirected,
        perms: permutations(n),
    };

    let mut seen: HashSet<Vec<(u8, u8)>> = HashSet::new();
    let mut reps: Vec<Vec<(u8, u8)>> = Vec::new();
    let mut choice: Vec<usize> = Vec::with_capacity(e);
    fn rec(
        o: &Oracle,
        slots: &[(u8, u8)],
        e: usize,
        start: usize,
        choice: &mut Vec<usize>,
        seen: &mut HashSet<Vec<(u8, u8)>>,
        reps: &mut Vec<Vec<(u8, u8)>>,
    ) {
        if choice.len() == e {
            let edges: Vec<(u8, u8)> = choice.iter().map(|&i| slots[i]).collect();
            if !o.admissible(&edges) {
                return;
            }
            let min_image = o
                .perms
                .iter()
                .filter(|p| o.colors_fixed(p))
                .map(|p| o.image(&edges, p))
                .min()
                .expect("identity is a permutation");
            if seen.insert(min_image) {
                reps.push(edges);
            }
            return;
        }
        for i in start..slots.len() {
            choice.push(i);
            rec(o, slots, e, i, choice, seen, reps);
            choice.pop();
        }
    }
    rec(&oracle, &slots, e, 0, &mut choice, &mut seen, &mut reps);

    let mut graphs = Vec::new();
    for edges in reps {
        let zero = oracle.edge_only_zero(&edges)
            || oracle.perms.iter().any(|p| {
                oracle.colors_fixed(p)
                    && oracle.image(&edges, p) == edges
                    && oracle.automorphism_sign(&edges, p).is_negative()
            });
        let g = Graph::new_unchecked(key.flavor(), key.graph_d(), colors.clone(), edges, Sign::PLUS);
        match (zero, canonicalize(&g)?) {
            (true, Canon::Zero) => {}
            (false, Canon::Form { graph, .. }) => graphs.push(graph),
            _ => return Err(SectorError::OracleMismatch(encode(&g))),
        }
    }
    Ok(Basis::from_graphs(*key, graphs))
}
