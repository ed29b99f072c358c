//! Exact sparse linear algebra over sector bases: differential matrices,
//! ranks over Q and F_p, and cohomology tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::graphcore::{encode, ComplexId, Family, Graph, GraphError, GraphVector};
use crate::liealg::differential;
use crate::sectors::{generate_basis_with_cap, Basis, SectorError, SectorKey, VertexCount};

/// Two 30-bit primes, plus a third consulted when they disagree.
pub const DEFAULT_PRIMES: [u64; 2] = [1_073_741_789, 1_073_741_783];
pub const TIEBREAK_PRIME: u64 = 1_073_741_741;

/// Largest column count for which the rational rank is also computed.
pub const RATIONAL_CHECK_COLS: usize = 200;

#[derive(Debug, thiserror::Error)]
pub enum LaError {
    #[error(transparent)]
    Sector(#[from] SectorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("sector {0} exceeds the configured caps")]
    Cap(String),
    #[error("{graph} is not a generator of the target sectors of {source_key}")]
    NotInTarget { graph: String, source_key: String },
    #[error("coefficient {0} does not fit in 64 bits")]
    CoeffOverflow(String),
    #[error("prime {0} divides a denominator; retry with another prime")]
    BadPrime(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix file: {0}")]
    BadFile(String),
    #[error("rank over F_p ({modular}) and over Q ({rational}) disagree")]
    RankDisagreement { modular: usize, rational: usize },
    #[error("store: {0}")]
    Store(String),
    #[error("corrupt cache artifact: {0}")]
    Corrupt(String),
}

pub type Entry = Rational64;

/// Column-major sparse matrix with exact rational entries.
///
/// Rows index the concatenation of the target bases, columns the source
/// basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub source: Option<SectorKey>,
    pub targets: Vec<SectorKey>,
    nrows: usize,
    cols: Vec<Vec<(u32, Entry)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            source: None,
            targets: vec![],
            nrows,
            cols: vec![vec![]; ncols],
        }
    }

    /// From triplets; duplicates are summed and zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, Entry)]) -> Self {
        let mut m = SparseMatrix::zeros(nrows, ncols);
        let mut acc: Vec<BTreeMap<u32, Entry>> = vec![BTreeMap::new(); ncols];
        for &(r, c, x) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of range");
            *acc[c].entry(r as u32).or_insert_with(Entry::zero) += x;
        }
        for (c, col) in acc.into_iter().enumerate() {
            m.cols[c] = col.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, Entry::one())).collect();
        SparseMatrix::from_triplets(n, n, &t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn col(&self, j: usize) -> &[(u32, Entry)] {
        &self.cols[j]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, LaError> {
        if self.ncols() != rhs.nrows {
            return Err(LaError::Shape(format!(
                "{}x{} times {}x{}",
                self.nrows,
                self.ncols(),
                rhs.nrows,
                rhs.ncols()
            )));
        }
        let cols = rhs
            .cols
            .par_iter()
            .map(|rc| {
                let mut acc: BTreeMap<u32, Entry> = BTreeMap::new();
                for &(k, x) in rc {
                    for &(i, y) in &self.cols[k as usize] {
                        *acc.entry(i).or_insert_with(Entry::zero) += x * y;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseMatrix {
            source: rhs.source,
            targets: self.targets.clone(),
            nrows: self.nrows,
            cols,
        })
    }

    /// Header lines, then `row col num/den` triplets in column order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "#source;{}\n",
            self.source.map(|k| k.to_string()).unwrap_or_else(|| "-".into())
        ));
        for t in &self.targets {
            s.push_str(&format!("#target;{t}\n"));
        }
        s.push_str(&format!("#shape;{};{}\n", self.nrows, self.ncols()));
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                s.push_str(&format!("{} {} {}/{}\n", r, c, x.numer(), x.denom()));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, LaError> {
        let bad = |m: &str| LaError::BadFile(m.to_string());
        let mut source = None;
        let mut targets = Vec::new();
        let mut shape = None;
        let mut triplets = Vec::new();
        for line in text.lines() {
            if let Some(k) = line.strip_prefix("#source;") {
                source = if k == "-" { None } else { Some(k.parse()?) };
            } else if let Some(k) = line.strip_prefix("#target;") {
                targets.push(k.parse()?);
            } else if let Some(k) = line.strip_prefix("#shape;") {
                let (r, c) = k.split_once(';').ok_or_else(|| bad("shape"))?;
                shape = Some((
                    r.parse::<usize>().map_err(|_| bad("rows"))?,
                    c.parse::<usize>().map_err(|_| bad("cols"))?,
                ));
            } else {
                let mut it = line.split(' ');
                let (Some(r), Some(c), Some(x), None) = (it.next(), it.next(), it.next(), it.next())
                else {
                    return Err(bad(line));
                };
                let (n, d) = x.split_once('/').ok_or_else(|| bad(line))?;
                let (n, d): (i64, i64) = (
                    n.parse().map_err(|_| bad(line))?,
                    d.parse().map_err(|_| bad(line))?,
                );
                if d == 0 {
                    return Err(bad(line));
                }
                triplets.push((
                    r.parse::<usize>().map_err(|_| bad(line))?,
                    c.parse::<usize>().map_err(|_| bad(line))?,
                    Entry::new(n, d),
                ));
            }
        }
        let (nr, nc) = shape.ok_or_else(|| bad("missing #shape"))?;
        if triplets.iter().any(|&(r, c, _)| r >= nr || c >= nc) {
            return Err(bad("entry out of range"));
        }
        let mut m = SparseMatrix::from_triplets(nr, nc, &triplets);
        m.source = source;
        m.targets = targets;
        Ok(m)
    }
}

fn to_entry(c: &crate::graphcore::Coeff) -> Result<Entry, LaError> {
    match (c.numer().to_i64(), c.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Entry::new(n, d)),
        _ => Err(LaError::CoeffOverflow(c.to_string())),
    }
}

/// Matrix of the differential from `source` into the concatenation of
/// `targets`. For the two-coloured family `truncation` bounds the total
/// vertex count; terms above it are discarded.
pub fn assemble(
    source: &Basis,
    targets: &[&Basis],
    truncation: Option<usize>,
) -> Result<SparseMatrix, LaError> {
    let key = source.key;
    let family = key.complex.family();
    let mut offsets = Vec::with_capacity(targets.len());
    let mut nrows = 0usize;
    for t in targets {
        offsets.push(nrows);
        nrows += t.len();
    }
    let cols: Result<Vec<Vec<(u32, Entry)>>, LaError> = source
        .graphs()
        .par_iter()
        .map(|g| {
            let x = GraphVector::from_graph(family, key.d, g)?.with_truncation(truncation);
            let dx = differential(&x)?;
            let mut col = Vec::with_capacity(dx.len());
            for (h, c) in dx.iter() {
                let row = targets
                    .iter()
                    .zip(&offsets)
                    .find_map(|(t, &off)| t.position(h).map(|p| off + p))
                    .ok_or_else(|| LaError::NotInTarget {
                        graph: encode(h),
                        source_key: key.to_string(),
                    })?;
                col.push((row as u32, to_entry(c)?));
            }
            col.sort_unstable_by_key(|e| e.0);
            Ok(col)
        })
        .collect();
    Ok(SparseMatrix {
        source: Some(key),
        targets: targets.iter().map(|t| t.key).collect(),
        nrows,
        cols: cols?,
    })
}

/// Field for [`rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn entry_mod(x: &Entry, p: u64) -> Result<u64, LaError> {
    let pi = p as i64;
    let n = x.numer().rem_euclid(pi) as u64;
    let d = x.denom().rem_euclid(pi) as u64;
    if d == 0 {
        return Err(LaError::BadPrime(p));
    }
    Ok(n * inv_mod(d, p) % p)
}

/// Rank over F_p. Columns are reduced in order of increasing weight
/// against pivots keyed by their lowest row.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize, LaError> {
    assert!(p < (1 << 31), "prime must fit in 31 bits");
    let mut cols: Vec<Vec<(u32, u64)>> = m
        .cols
        .iter()
        .map(|c| {
            c.iter()
                .map(|(r, x)| entry_mod(x, p).map(|v| (*r, v)))
                .filter(|e| !matches!(e, Ok((_, 0))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    cols.sort_by_key(Vec::len);
    let mut pivots: HashMap<u32, Vec<(u32, u64)>> = HashMap::new();
    let mut scratch: Vec<(u32, u64)> = Vec::new();
    for mut v in cols {
        while let Some(&(r, c)) = v.first() {
            match pivots.get(&r) {
                Some(pv) => {
                    // v -= c * pv, both sorted by row, pv[0] = (r, 1)
                    let f = p - c;
                    scratch.clear();
                    let (mut i, mut j) = (0, 0);
                    while i < v.len() || j < pv.len() {
                        if j == pv.len() || (i < v.len() && v[i].0 < pv[j].0) {
                            scratch.push(v[i]);
                            i += 1;
                        } else if i == v.len() || pv[j].0 < v[i].0 {
                            scratch.push((pv[j].0, f * pv[j].1 % p));
                            j += 1;
                        } else {
                            let s = (v[i].1 + f * pv[j].1) % p;
                            if s != 0 {
                                scratch.push((v[i].0, s));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    std::mem::swap(&mut v, &mut scratch);
                }
                None => {
                    let inv = inv_mod(c, p);
                    for e in v.iter_mut() {
                        e.1 = e.1 * inv % p;
                    }
                    pivots.insert(r, v);
                    break;
                }
            }
        }
    }
    Ok(pivots.len())
}

/// Rank over Q by fraction-free (Bareiss) elimination on a dense integer
/// copy. Intended for small matrices.
pub fn rank_rational(m: &SparseMatrix) -> usize {
    // rows of `a` are the columns of m, scaled to integers
    let nr = m.nrows;
    let mut a: Vec<Vec<BigInt>> = m
        .cols
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| {
            let l = c.iter().fold(1i64, |l, (_, x)| l.lcm(x.denom()));
            let mut row = vec![BigInt::zero(); nr];
            for (r, x) in c {
                row[*r as usize] = BigInt::from(x.numer() * (l / x.denom()));
            }
            row
        })
        .collect();
    let rows = a.len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..nr {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pr = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col..nr {
                let v = &pr[col] * &row[j] - &f * &pr[j];
                row[j] = v / &prev;
            }
        }
        prev = pr[col].clone();
        rank += 1;
    }
    rank
}

pub fn rank(m: &SparseMatrix, field: Field) -> Result<usize, LaError> {
    match field {
        Field::Rational => Ok(rank_rational(m)),
        Field::Prime(p) => rank_mod_p(m, p),
    }
}

/// Rank with the modular cross-checks: both primes, a third on
/// disagreement, and the rational rank for small matrices.
pub fn rank_checked(m: &SparseMatrix, primes: &[u64]) -> Result<usize, LaError> {
    let mut ranks = Vec::new();
    for &p in primes {
        ranks.push(rank_mod_p(m, p)?);
    }
    if ranks.windows(2).any(|w| w[0] != w[1]) {
        ranks.push(rank_mod_p(m, TIEBREAK_PRIME)?);
    }
    // a modular rank never exceeds the rational one
    let r = ranks.into_iter().max().unwrap_or(0);
    if m.ncols() <= RATIONAL_CHECK_COLS && m.nnz() > 0 {
        let q = rank_rational(m);
        if q != r {
            return Err(LaError::RankDisagreement {
                modular: r,
                rational: q,
            });
        }
    }
    Ok(r)
}

/// Resource bounds shared by all computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Caps {
    pub max_vertices: usize,
    pub truncation: usize,
    pub max_loop: usize,
    pub candidate_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_vertices: 8,
            truncation: 8,
            max_loop: 4,
            candidate_cap: crate::sectors::DEFAULT_CANDIDATE_CAP,
        }
    }
}

/// Persistent storage for bases, matrices and ranks.
pub trait Store: Send + Sync {
    fn load_basis(&self, key: &SectorKey) -> Result<Option<Basis>, LaError>;
    fn save_basis(&self, basis: &Basis) -> Result<(), LaError>;
    fn load_matrix(&self, key: &SectorKey) -> Result<Option<SparseMatrix>, LaError>;
    fn save_matrix(&self, key: &SectorKey, m: &SparseMatrix) -> Result<(), LaError>;
    fn load_rank(&self, key: &SectorKey) -> Result<Option<usize>, LaError>;
    fn save_rank(&self, key: &SectorKey, rank: usize, primes: &[u64]) -> Result<(), LaError>;
}

/// Memoizing provider of sector bases, differential matrices and ranks for
/// the single-coloured complexes.
pub struct Workspace {
    pub caps: Caps,
    pub primes: Vec<u64>,
    store: Option<Box<dyn Store>>,
    bases: Mutex<HashMap<SectorKey, Arc<Basis>>>,
    matrices: Mutex<HashMap<SectorKey, Arc<SparseMatrix>>>,
    ranks: Mutex<HashMap<SectorKey, usize>>,
}

impl Workspace {
    pub fn new(caps: Caps) -> Self {
        Workspace {
            caps,
            primes: DEFAULT_PRIMES.to_vec(),
            store: None,
            bases: Mutex::default(),
            matrices: Mutex::default(),
            ranks: Mutex::default(),
        }
    }

    pub fn with_store(mut self, store: Box<dyn Store>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn with_primes(mut self, primes: Vec<u64>) -> Self {
        self.primes = primes;
        self
    }

    pub fn within_caps(&self, key: &SectorKey) -> bool {
        key.num_vertices() <= self.caps.max_vertices && key.g <= self.caps.max_loop
    }

    pub fn basis(&self, key: &SectorKey) -> Result<Arc<Basis>, LaError> {
        if let Some(b) = self.bases.lock().unwrap().get(key) {
            return Ok(b.clone());
        }
        if !self.within_caps(key) {
            return Err(LaError::Cap(key.to_string()));
        }
        let b = match self.store.as_ref().map(|s| s.load_basis(key)).transpose()?.flatten() {
            Some(b) => b,
            None => {
                let b = generate_basis_with_cap(key, self.caps.candidate_cap)?;
                if let Some(s) = &self.store {
                    s.save_basis(&b)?;
                }
                b
            }
        };
        let b = Arc::new(b);
        self.bases.lock().unwrap().insert(*key, b.clone());
        Ok(b)
    }

    /// Sector receiving the differential of `key` (single-coloured only).
    pub fn next_key(key: &SectorKey) -> SectorKey {
        match key.v {
            VertexCount::Total(n) => SectorKey {
                v: VertexCount::Total(n + 1),
                ..*key
            },
            VertexCount::Colored { .. } => panic!("two-coloured sectors have several targets"),
        }
    }

    /// Matrix of the differential out of a single-coloured sector.
    pub fn matrix(&self, key: &SectorKey) -> Result<Arc<SparseMatrix>, LaError> {
        if key.complex.family() == Family::Hat {
            return Err(LaError::Shape("use assemble with explicit targets".into()));
        }
        if let Some(m) = self.matrices.lock().unwrap().get(key) {
            return Ok(m.clone());
        }
        let next = Self::next_key(key);
        let src = self.basis(key)?;
        let dst = self.basis(&next)?;
        let m = match self.store.as_ref().map(|s| s.load_matrix(key)).transpose()?.flatten() {
            Some(m) if m.ncols() == src.len() && m.nrows() == dst.len() => m,
            Some(_) => return Err(LaError::BadFile(format!("cached matrix of {key} has the wrong shape"))),
            None => {
                let m = assemble(&src, &[&dst], None)?;
                if let Some(s) = &self.store {
                    s.save_matrix(key, &m)?;
                }
                m
            }
        };
        let m = Arc::new(m);
        self.matrices.lock().unwrap().insert(*key, m.clone());
        Ok(m)
    }

    /// Rank of the differential out of a sector; empty sectors give 0
    /// without generating the target.
    pub fn rank(&self, key: &SectorKey) -> Result<usize, LaError> {
        if let Some(&r) = self.ranks.lock().unwrap().get(key) {
            return Ok(r);
        }
        if key.num_vertices() == 0 {
            return Ok(0);
        }
        let r = if let Some(r) = self.store.as_ref().map(|s| s.load_rank(key)).transpose()?.flatten() {
            r
        } else {
            let src = self.basis(key)?;
            let r = if src.is_empty() {
                0
            } else {
                rank_checked(&*self.matrix(key)?, &self.primes)?
            };
            if let Some(s) = &self.store {
                s.save_rank(key, r, &self.primes)?;
            }
            r
        };
        self.ranks.lock().unwrap().insert(*key, r);
        Ok(r)
    }

    /// Drops in-memory matrices (ranks and bases are kept).
    pub fn release_matrices(&self) {
        self.matrices.lock().unwrap().clear();
    }
}

/// Vertex count of the sector of degree `k` and loop order `g` in GC_d or
/// OGC_d: `v = k + 1 + (d - 1) g`.
pub fn vertices_for_degree(d: i32, g: usize, k: i64) -> i64 {
    k + 1 + (d as i64 - 1) * g as i64
}

/// Degree of the sector `(g, v)` in GC_d or OGC_d.
pub fn degree_for_vertices(d: i32, g: usize, v: usize) -> i64 {
    v as i64 - 1 - (d as i64 - 1) * g as i64
}

/// Cohomology dimensions per `(loop order, degree)`; `None` marks entries
/// beyond the caps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub complex: ComplexId,
    pub d: i32,
    pub tadpoles: bool,
    pub rows: BTreeMap<(usize, i64), Option<usize>>,
    pub max_vertices: usize,
    pub primes: Vec<u64>,
}

impl CohomologyTable {
    pub fn get(&self, g: usize, k: i64) -> Option<Option<usize>> {
        self.rows.get(&(g, k)).copied()
    }

    /// `g;k;dim` lines, `?` for unknown.
    pub fn to_lines(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|(&(g, k), v)| match v {
                Some(x) => format!("{g};{k};{x}"),
                None => format!("{g};{k};?"),
            })
            .collect()
    }

    /// Nonzero entries only.
    pub fn support(&self) -> Vec<(usize, i64, usize)> {
        self.rows
            .iter()
            .filter_map(|(&(g, k), v)| match v {
                Some(x) if *x > 0 => Some((g, k, *x)),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# H({}, d={}){}  v<={}  primes {:?}",
            self.complex,
            self.d,
            if self.tadpoles { "" } else { " without tadpoles" },
            self.max_vertices,
            self.primes
        )?;
        writeln!(f, "{:>4} {:>5} {:>6}", "g", "k", "dim")?;
        for ((g, k), v) in &self.rows {
            let s = v.map(|x| x.to_string()).unwrap_or_else(|| "?".into());
            writeln!(f, "{g:>4} {k:>5} {s:>6}")?;
        }
        Ok(())
    }
}

fn sector(complex: ComplexId, d: i32, g: usize, v: usize, tadpoles: bool) -> SectorKey {
    let k = SectorKey::new(complex, d, g, v);
    if tadpoles {
        k
    } else {
        k.without_tadpoles()
    }
}

/// `dim H^k = dim C^k - rank(d_k) - rank(d_{k-1})` for every
/// `g in loops` and `k in degrees` of a single-coloured complex.
pub fn cohomology(
    ws: &Workspace,
    complex: ComplexId,
    d: i32,
    tadpoles: bool,
    loops: std::ops::RangeInclusive<usize>,
    degrees: std::ops::RangeInclusive<i64>,
) -> Result<CohomologyTable, LaError> {
    if complex.family() == Family::Hat {
        return Err(LaError::Shape("cohomology is computed for GC and OGC complexes".into()));
    }
    let mut rows = BTreeMap::new();
    for g in loops {
        for k in degrees.clone() {
            let v = vertices_for_degree(d, g, k);
            if v < 1 {
                rows.insert((g, k), Some(0));
                continue;
            }
            let v = v as usize;
            let key = sector(complex, d, g, v, tadpoles);
            if v + 1 > ws.caps.max_vertices || g > ws.caps.max_loop {
                rows.insert((g, k), None);
                continue;
            }
            let dim = (|| -> Result<usize, LaError> {
                let c = ws.basis(&key)?.len();
                let out = ws.rank(&key)?;
                let inn = if v >= 2 {
                    ws.rank(&sector(complex, d, g, v - 1, tadpoles))?
                } else {
                    0
                };
                Ok(c - out - inn)
            })();
            match dim {
                Ok(x) => rows.insert((g, k), Some(x)),
                Err(LaError::Cap(_)) | Err(LaError::Sector(SectorError::Overflow { .. })) => {
                    rows.insert((g, k), None)
                }
                Err(e) => return Err(e),
            };
        }
    }
    Ok(CohomologyTable {
        complex,
        d,
        tadpoles,
        rows,
        max_vertices: ws.caps.max_vertices,
        primes: ws.primes.clone(),
    })
}

/// Euler characteristic check for one loop order over a window of known
/// degrees `k0..=k1`: `sum (-1)^k dim H^k` must equal
/// `sum (-1)^k dim C^k` corrected by the ranks crossing the window edges.
pub fn euler_check(
    ws: &Workspace,
    table: &CohomologyTable,
    g: usize,
) -> Result<bool, LaError> {
    let known: Vec<i64> = table
        .rows
        .iter()
        .filter(|(&(gg, _), v)| gg == g && v.is_some())
        .map(|(&(_, k), _)| k)
        .collect();
    let (Some(&k0), Some(&k1)) = (known.first(), known.last()) else {
        return Ok(true);
    };
    let sgn = |k: i64| if k.rem_euclid(2) == 0 { 1i64 } else { -1 };
    let mut lhs = 0i64;
    let mut rhs = 0i64;
    for k in k0..=k1 {
        let Some(Some(h)) = table.get(g, k) else {
            return Ok(true);
        };
        lhs += sgn(k) * h as i64;
        let v = vertices_for_degree(table.d, g, k);
        if v >= 1 {
            let key = sector(table.complex, table.d, g, v as usize, table.tadpoles);
            rhs += sgn(k) * ws.basis(&key)?.len() as i64;
        }
    }
    let v1 = vertices_for_degree(table.d, g, k1);
    if v1 >= 1 {
        rhs -= sgn(k1) * ws.rank(&sector(table.complex, table.d, g, v1 as usize, table.tadpoles))? as i64;
    }
    let v0 = vertices_for_degree(table.d, g, k0);
    if v0 >= 2 {
        rhs -= sgn(k0) * ws.rank(&sector(table.complex, table.d, g, v0 as usize - 1, table.tadpoles))? as i64;
    }
    Ok(lhs == rhs)
}

/// Generators `x` of a sector whose image `delta(x)` has a term outside
/// the basis `allowed`; used to test subcomplex membership.
pub fn escaping_terms(source: &Basis, allowed: &Basis) -> Result<Vec<Graph>, LaError> {
    let family = source.key.complex.family();
    let mut out = Vec::new();
    for g in source.graphs() {
        let dx = differential(&GraphVector::from_graph(family, source.key.d, g)?)?;
        if dx.iter().any(|(h, _)| allowed.position(h).is_none()) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64) -> Entry {
        Entry::from_integer(n)
    }

    #[test]
    fn trivial_ranks() {
        let z = SparseMatrix::zeros(4, 3);
        assert_eq!(rank_checked(&z, &DEFAULT_PRIMES).unwrap(), 0);
        for n in [1, 5, 17] {
            let i = SparseMatrix::identity(n);
            assert_eq!(rank_checked(&i, &DEFAULT_PRIMES).unwrap(), n);
        }
    }

    #[test]
    fn rank_of_dependent_columns() {
        // columns: a, b, a + 2b, 3a
        let m = SparseMatrix::from_triplets(
            3,
            4,
            &[
                (0, 0, e(1)),
                (1, 0, e(2)),
                (1, 1, e(1)),
                (2, 1, Entry::new(1, 2)),
                (0, 2, e(1)),
                (1, 2, e(4)),
                (2, 2, e(1)),
                (0, 3, e(3)),
                (1, 3, e(6)),
            ],
        );
        assert_eq!(rank_mod_p(&m, 7).unwrap(), 2);
        assert_eq!(rank_rational(&m), 2);
        // over F_2 the rescaled denominator is not invertible
        assert!(matches!(rank_mod_p(&m, 2), Err(LaError::BadPrime(2))));
    }

    #[test]
    fn matrix_text_round_trip() {
        let mut m = SparseMatrix::from_triplets(3, 2, &[(0, 0, Entry::new(-3, 2)), (2, 1, e(5))]);
        m.source = Some(SectorKey::new(ComplexId::Gc0, 2, 1, 3));
        m.targets = vec![SectorKey::new(ComplexId::Gc0, 2, 1, 4)];
        let t = m.to_text();
        assert!(t.contains("0 0 -3/2\n"));
        assert_eq!(SparseMatrix::from_text(&t).unwrap(), m);
    }

    #[test]
    fn single_edge_column_cancels() {
        let ws = Workspace::new(Caps::default());
        let k = SectorKey::new(ComplexId::Gc0, 2, 0, 2);
        let m = ws.matrix(&k).unwrap();
        assert_eq!(m.ncols(), 1);
        assert!(m.is_zero());
    }
}
