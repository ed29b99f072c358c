//! The projections from the two-coloured complex to GC_d and OGC_{d+1},
//! their verification, and the cohomology comparison pipeline.
//!
//! `pi1` keeps first-component graphs whose black vertices are all
//! inessential (valence two, both edges outgoing) and contracts each such
//! vertex `b -> u, b -> v` to a dotted edge `u - v`. On orientation words
//! the letters are first rearranged, with the Koszul sign, into
//! `whites, (b_1 e e'), (b_2 e e'), ...`; each triple has the parity of a
//! GC_d edge and is replaced by it. Each contracted vertex also carries the
//! factor `(-1)^d 2`: a dotted edge is the sum of its two labelled halves,
//! and without the factor `pi1 delta = (-1)^d delta pi1 / 2`.

use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactla::{cohomology, LaError, Workspace};
use crate::graphcore::{
    canonicalize, int, Canon, MAX_VERTICES, Coeff, Color, ComplexId, Family, Flavor, Graph, GraphError, GraphVector, Sign,
};
use crate::liealg::{bracket, differential};
use crate::sectors::SectorKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapId {
    Pi1,
    Pi2,
}

impl MapId {
    pub fn as_str(self) -> &'static str {
        match self {
            MapId::Pi1 => "pi1",
            MapId::Pi2 => "pi2",
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MapId {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, GraphError> {
        match s {
            "pi1" => Ok(MapId::Pi1),
            "pi2" => Ok(MapId::Pi2),
            _ => Err(GraphError::Mismatch(format!("unknown map {s:?}"))),
        }
    }
}

fn inessential(g: &Graph, v: usize) -> bool {
    g.colors()[v] == Color::Black && g.out_degree(v) == 2 && g.in_degree(v) == 0
}

/// Image of one two-coloured generator under `pi1`, before
/// canonicalisation; `None` when it vanishes.
pub fn pi1_graph(g: &Graph) -> Option<Graph> {
    if g.flavor() != Flavor::Hat {
        return None;
    }
    let n = g.num_vertices();
    let blacks: Vec<usize> = (0..n).filter(|&v| g.colors()[v] == Color::Black).collect();
    if blacks.is_empty() || !blacks.iter().all(|&b| inessential(g, b)) {
        return None;
    }
    let rule = g.rule();
    let whites: Vec<usize> = (0..n).filter(|&v| g.colors()[v] == Color::White).collect();
    let mut white_index = vec![usize::MAX; n];
    for (i, &w) in whites.iter().enumerate() {
        white_index[w] = i;
    }
    // new letter order as (original position, parity)
    let mut order: Vec<(usize, bool)> = whites.iter().map(|&w| (w, rule.white_odd)).collect();
    let mut edges = Vec::with_capacity(blacks.len());
    for &b in &blacks {
        let out: Vec<usize> = (0..g.num_edges()).filter(|&k| g.edges()[k].0 as usize == b).collect();
        order.push((b, rule.black_odd));
        order.push((n + out[0], rule.edge_odd));
        order.push((n + out[1], rule.edge_odd));
        let t0 = white_index[g.edges()[out[0]].1 as usize];
        let t1 = white_index[g.edges()[out[1]].1 as usize];
        edges.push((t0 as u8, t1 as u8));
    }
    let odd: Vec<usize> = order.iter().filter(|o| o.1).map(|o| o.0).collect();
    let mut inv = false;
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            inv ^= odd[i] > odd[j];
        }
    }
    let sign = g.sign() * Sign::pow(inv);
    Some(Graph::new_unchecked(
        Flavor::Gc,
        g.d(),
        vec![Color::Black; whites.len()],
        edges,
        sign,
    ))
}

/// Scalar `((-1)^d 2)^blacks` applied to a contracted generator.
pub fn pi1_factor(d: i32, blacks: usize) -> Coeff {
    let base = if d.rem_euclid(2) == 1 { -2 } else { 2 };
    int(base).pow(blacks as i32)
}

/// `pi1`: two-coloured complex with parameter `d` to GC_d.
pub fn pi1(x: &GraphVector) -> Result<GraphVector, GraphError> {
    expect_hat(x)?;
    let mut out = GraphVector::zero(Family::Gc, x.d());
    for (g, c) in x.iter() {
        if let Some(h) = pi1_graph(g) {
            out.add_graph(&h, &(c * pi1_factor(x.d(), g.num_black())))?;
        }
    }
    Ok(out)
}

/// `pi2`: projection onto the second component, OGC_{d+1}.
pub fn pi2(x: &GraphVector) -> Result<GraphVector, GraphError> {
    expect_hat(x)?;
    let mut out = GraphVector::zero(Family::Ogc, x.d() + 1);
    for (g, c) in x.iter() {
        if g.flavor() == Flavor::Ogc {
            out.add_graph(g, c)?;
        }
    }
    Ok(out)
}

fn expect_hat(x: &GraphVector) -> Result<(), GraphError> {
    if x.family() != Family::Hat {
        return Err(GraphError::Mismatch(format!("expected a two-coloured vector, got {:?}", x.family())));
    }
    Ok(())
}

pub fn apply(map: MapId, x: &GraphVector) -> Result<GraphVector, GraphError> {
    match map {
        MapId::Pi1 => pi1(x),
        MapId::Pi2 => pi2(x),
    }
}

/// A two-coloured generator mapping to `g` under `pi1`: every dotted edge
/// `u - v` becomes a black vertex with edges to `u` and `v`.
pub fn pi1_preimage(g: &Graph) -> Result<Graph, GraphError> {
    if g.flavor() != Flavor::Gc {
        return Err(GraphError::Mismatch("pi1 preimages are built from GC graphs".into()));
    }
    let w = g.num_vertices();
    let mut colors = vec![Color::White; w];
    colors.extend(std::iter::repeat(Color::Black).take(g.num_edges()));
    let mut edges = Vec::with_capacity(2 * g.num_edges());
    for (k, &(s, t)) in g.edges().iter().enumerate() {
        edges.push((w + k, s as usize));
        edges.push((w + k, t as usize));
    }
    Graph::new(Flavor::Hat, g.d(), colors, edges)
}

/// Outcome of a chain-map or Lie-morphism verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub map: MapId,
    pub sectors: Vec<SectorKey>,
    pub elements: usize,
    /// Elements where the compared vectors were nonzero.
    pub nontrivial: usize,
    /// Number of terms of the largest defect vector; zero on success.
    pub max_defect: usize,
    pub offending: Option<String>,
    pub truncation: usize,
}

impl MorphismReport {
    pub fn ok(&self) -> bool {
        self.max_defect == 0 && self.offending.is_none()
    }

    fn empty(map: MapId, sectors: Vec<SectorKey>) -> Self {
        MorphismReport {
            map,
            sectors,
            elements: 0,
            nontrivial: 0,
            max_defect: 0,
            offending: None,
            truncation: 0,
        }
    }

    fn record(&mut self, what: String, defect: &GraphVector, nontrivial: bool) {
        self.elements += 1;
        self.nontrivial += nontrivial as usize;
        if defect.len() > self.max_defect {
            self.max_defect = defect.len();
            self.offending = Some(what);
        }
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} elements ({} nontrivial) in {} sectors, truncation {}, max defect {}",
            self.map,
            self.elements,
            self.nontrivial,
            self.sectors.len(),
            self.truncation,
            self.max_defect
        )?;
        if let Some(o) = &self.offending {
            write!(f, " (at {o})")?;
        }
        Ok(())
    }
}

/// Vertex count of the image of a sector's generators: whites for `pi1`,
/// all vertices for `pi2`. Images with more vertices than returned here
/// are beyond what a truncation `t` determines.
fn exact_image_bound(map: MapId, g: usize, t: usize) -> usize {
    match map {
        // a pi1-nonzero generator with c whites has 2c + g - 1 vertices
        MapId::Pi1 => (t + 1).saturating_sub(g) / 2,
        MapId::Pi2 => t,
    }
}

/// Checks `pi(delta x) = delta(pi x)` for every generator `x` of the given
/// two-coloured sectors, with the differential truncated at `truncation`
/// total vertices. Only image terms determined by the truncation are
/// compared.
pub fn verify_chain_map(
    ws: &Workspace,
    map: MapId,
    keys: &[SectorKey],
    truncation: usize,
) -> Result<MorphismReport, LaError> {
    let mut report = MorphismReport::empty(map, keys.to_vec());
    report.truncation = truncation;
    for key in keys {
        if key.complex.family() != Family::Hat {
            return Err(LaError::Shape(format!("{key} is not a two-coloured sector")));
        }
        for g in ws.basis(key)?.graphs() {
            check_chain_element(map, key.d, g, truncation, &mut report)?;
        }
    }
    Ok(report)
}

/// Chain-map check on explicit two-coloured generators, each at truncation
/// `|x| + margin`.
pub fn verify_chain_map_on(
    map: MapId,
    d: i32,
    graphs: &[Graph],
    margin: usize,
) -> Result<MorphismReport, LaError> {
    let mut report = MorphismReport::empty(map, Vec::new());
    for g in graphs {
        let t = g.num_vertices() + margin;
        report.truncation = report.truncation.max(t);
        check_chain_element(map, d, g, t, &mut report)?;
    }
    Ok(report)
}

fn check_chain_element(
    map: MapId,
    d: i32,
    g: &Graph,
    truncation: usize,
    report: &mut MorphismReport,
) -> Result<(), LaError> {
    let loops = g.loop_order().unwrap_or(0).max(0) as usize;
    let bound = exact_image_bound(map, loops, truncation);
    let x = GraphVector::from_graph(Family::Hat, d, g)?.with_truncation(Some(truncation));
    let keep = |h: &Graph| h.num_vertices() <= bound;
    let lhs = apply(map, &differential(&x)?)?.filter(keep);
    let rhs = differential(&apply(map, &x)?)?.filter(keep);
    let nontrivial = !lhs.is_zero() || !rhs.is_zero();
    report.record(crate::graphcore::encode(g), &lhs.sub(&rhs), nontrivial);
    Ok(())
}

/// Canonical `pi1` preimages of the GC0_d generators with at most
/// `max_vertices` vertices and loop order at most `max_loop`. These are
/// the two-coloured generators on which `pi1` is nonzero, and are rare
/// among small sectors.
pub fn pi1_preimages(
    ws: &Workspace,
    d: i32,
    max_loop: usize,
    max_vertices: usize,
) -> Result<Vec<Graph>, LaError> {
    let mut out = Vec::new();
    for g in 0..=max_loop {
        for v in 1..=max_vertices {
            let key = SectorKey::new(ComplexId::Gc0, d, g, v);
            for x in ws.basis(&key)?.graphs() {
                let pre = pi1_preimage(x)?;
                if !ComplexId::Hat.admits(d, &pre, true) {
                    continue;
                }
                if let Canon::Form { graph, .. } = canonicalize(&pre)? {
                    out.push(graph);
                }
            }
        }
    }
    Ok(out)
}

/// Checks `pi[a, b] = [pi a, pi b]` on `pairs` random pairs drawn from the
/// generators of `keys` (half of the draws favour generators with nonzero
/// image). The bracket is computed without loss at truncation
/// `|a| + |b| - 1`.
pub fn verify_lie_morphism<R: Rng>(
    ws: &Workspace,
    map: MapId,
    keys: &[SectorKey],
    pairs: usize,
    rng: &mut R,
) -> Result<MorphismReport, LaError> {
    let mut pool = Vec::new();
    for key in keys {
        pool.extend(ws.basis(key)?.graphs().iter().cloned());
    }
    let Some(d) = keys.first().map(|k| k.d) else {
        return Ok(MorphismReport::empty(map, Vec::new()));
    };
    let mut report = verify_lie_morphism_on(map, d, &pool, pairs, rng)?;
    report.sectors = keys.to_vec();
    Ok(report)
}

/// Lie-morphism check on random pairs from an explicit pool of
/// two-coloured generators of parameter `d`.
pub fn verify_lie_morphism_on<R: Rng>(
    map: MapId,
    d: i32,
    pool: &[Graph],
    pairs: usize,
    rng: &mut R,
) -> Result<MorphismReport, LaError> {
    let mut report = MorphismReport::empty(map, Vec::new());
    let nonzero: Vec<Graph> = pool
        .iter()
        .filter(|g| {
            GraphVector::from_graph(Family::Hat, d, g)
                .and_then(|x| apply(map, &x))
                .map_or(false, |y| !y.is_zero())
        })
        .cloned()
        .collect();
    for i in 0..pairs {
        let src = if i % 2 == 0 && !nonzero.is_empty() { &nonzero } else { pool };
        let Some(a) = src.choose(rng) else { break };
        let room = MAX_VERTICES + 1 - a.num_vertices();
        let fitting: Vec<&Graph> = src.iter().filter(|b| b.num_vertices() <= room).collect();
        let Some(&b) = fitting.choose(rng) else { continue };
        let t = a.num_vertices() + b.num_vertices() - 1;
        report.truncation = report.truncation.max(t);
        let ca = int(rng.gen_range(1..=3));
        let cb = int(-rng.gen_range(1..=3));
        let mut x = GraphVector::zero(Family::Hat, d).with_truncation(Some(t));
        x.add_graph(a, &ca)?;
        let mut y = GraphVector::zero(Family::Hat, d).with_truncation(Some(t));
        y.add_graph(b, &cb)?;
        let lhs = apply(map, &bracket(&x, &y)?)?;
        let rhs = bracket(&apply(map, &x)?, &apply(map, &y)?)?;
        let nontrivial = !lhs.is_zero() || !rhs.is_zero();
        report.record(
            format!("{} , {}", crate::graphcore::encode(a), crate::graphcore::encode(b)),
            &lhs.sub(&rhs),
            nontrivial,
        );
    }
    Ok(report)
}

/// Generators of the given sectors whose image under `map` changes degree
/// or loop order.
pub fn grading_violations(
    ws: &Workspace,
    map: MapId,
    keys: &[SectorKey],
) -> Result<(usize, Vec<String>), LaError> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for key in keys {
        for g in ws.basis(key)?.graphs() {
            let x = GraphVector::from_graph(Family::Hat, key.d, g)?;
            let y = apply(map, &x)?;
            let (deg, lo) = (g.degree(), g.loop_order()?);
            for (h, c) in y.iter() {
                checked += 1;
                if c.is_zero() || h.degree() != deg || h.loop_order()? != lo {
                    bad.push(crate::graphcore::encode(g));
                }
            }
        }
    }
    Ok((checked, bad))
}

/// The degree/loop identity behind `pi1`: a generator with `w` whites and
/// `b = e/2` blacks has the degree of the GC_d graph with `w` vertices and
/// `b` edges.
pub fn pi1_degree_identity(d: i32, w: usize, b: usize) -> bool {
    let (d, w, b) = (d as i64, w as i64, b as i64);
    d * w + (d + 1) * b - d * 2 * b - d == d * (w - 1) + (1 - d) * b
}

/// Two-coloured sectors with at most `max_vertices` total vertices and
/// loop order at most `max_loop`, both components.
pub fn hat_sectors(d: i32, max_loop: usize, max_vertices: usize) -> Vec<SectorKey> {
    let mut keys = Vec::new();
    for g in 0..=max_loop {
        for n in 1..=max_vertices {
            for b in 0..=n {
                keys.push(SectorKey::hat(d, g, n - b, b));
            }
            if n >= 2 {
                keys.push(SectorKey::new(ComplexId::HatBlack, d, g, n));
            }
        }
    }
    keys
}

/// One row of a cohomology comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareRow {
    pub g: usize,
    pub k: i64,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl CompareRow {
    /// `Some(true/false)` when both sides are known.
    pub fn matches(&self) -> Option<bool> {
        Some(self.left? == self.right?)
    }
}

/// Side-by-side cohomology of GC0_d and OGC0_{d+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub d: i32,
    pub rows: Vec<CompareRow>,
}

impl Comparison {
    pub fn mismatches(&self) -> Vec<CompareRow> {
        self.rows.iter().copied().filter(|r| r.matches() == Some(false)).collect()
    }

    /// Rows where both sides are known.
    pub fn decided(&self) -> usize {
        self.rows.iter().filter(|r| r.matches().is_some()).count()
    }

    /// `g;k;dim_left;dim_right;match` lines.
    pub fn to_lines(&self) -> Vec<String> {
        let s = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "?".into());
        self.rows
            .iter()
            .map(|r| {
                let m = match r.matches() {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "unknown",
                };
                format!("{};{};{};{};{}", r.g, r.k, s(r.left), s(r.right), m)
            })
            .collect()
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "?".into());
        writeln!(f, "# H(GC0, d={}) vs H(OGC0, d={})", self.d, self.d + 1)?;
        writeln!(f, "{:>3} {:>4} {:>8} {:>8}  {}", "g", "k", "GC0", "OGC0", "match")?;
        for r in &self.rows {
            let m = match r.matches() {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            writeln!(f, "{:>3} {:>4} {:>8} {:>8}  {}", r.g, r.k, s(r.left), s(r.right), m)?;
        }
        Ok(())
    }
}

/// Compares `dim H^k(GC0_d)` with `dim H^k(OGC0_{d+1})` per loop order
/// `g <= g_max`, over every degree where the left side is within caps.
pub fn compare_cohomology(ws: &Workspace, d: i32, g_max: usize) -> Result<Comparison, LaError> {
    let vmax = ws.caps.max_vertices as i64;
    let mut rows = Vec::new();
    for g in 0..=g_max {
        let gi = g as i64;
        let k_lo = -(d as i64) * gi;
        let k_hi = vmax - 2 - (d as i64 - 1) * gi;
        if k_hi < k_lo {
            continue;
        }
        let left = cohomology(ws, ComplexId::Gc0, d, true, g..=g, k_lo..=k_hi)?;
        let right = cohomology(ws, ComplexId::Ogc0, d + 1, true, g..=g, k_lo..=k_hi)?;
        for k in k_lo..=k_hi {
            rows.push(CompareRow {
                g,
                k,
                left: left.get(g, k).flatten(),
                right: right.get(g, k).flatten(),
            });
        }
    }
    Ok(Comparison { d, rows })
}
