//! Jobs, verification drivers and the artifact cache behind `gcx`.
//!
//! A [`JobSpec`] names one command and its parameters. [`run`] executes it
//! against a [`Workspace`] backed by the disk cache and stores the report
//! under the SHA-256 of the job's canonical serialization, so re-running
//! a job with a warm cache returns the same bytes.

pub mod cache;

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::exactla::{assemble, cohomology, Caps, LaError, Workspace, DEFAULT_PRIMES};
use crate::graphcore::{encode, ComplexId, Family, Graph, GraphVector};
use crate::liealg::{bracket, corolla_coeff, differential, homogeneous_degree, verify_mc, McElement};
use crate::maps::{
    compare_cohomology, grading_violations, hat_sectors, pi1_preimages, verify_chain_map,
    verify_chain_map_on, verify_lie_morphism_on, MapId, MorphismReport,
};
use crate::sectors::{SectorError, SectorKey, VertexCount};

pub use cache::DiskCache;

/// Environment variable naming the default cache root.
pub const CACHE_ENV: &str = "GCX_CACHE";
const DEFAULT_CACHE_DIR: &str = ".gcx-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Basis,
    Diff,
    Cohomology,
    VerifyD2,
    VerifyJacobi,
    VerifyMc,
    VerifyChainmap,
    Compare,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Basis,
        Command::Diff,
        Command::Cohomology,
        Command::VerifyD2,
        Command::VerifyJacobi,
        Command::VerifyMc,
        Command::VerifyChainmap,
        Command::Compare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Basis => "basis",
            Command::Diff => "diff",
            Command::Cohomology => "cohomology",
            Command::VerifyD2 => "verify-d2",
            Command::VerifyJacobi => "verify-jacobi",
            Command::VerifyMc => "verify-mc",
            Command::VerifyChainmap => "verify-chainmap",
            Command::Compare => "compare",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Lines,
}

impl FromStr for OutputFormat {
    type Err = WbenchError;
    fn from_str(s: &str) -> Result<Self, WbenchError> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "lines" => Ok(OutputFormat::Lines),
            _ => Err(WbenchError::Flags(format!("unknown format {s}"))),
        }
    }
}

/// Which Maurer-Cartan element `verify-mc` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum McWhich {
    Gamma0,
    GammaHat,
}

impl FromStr for McWhich {
    type Err = WbenchError;
    fn from_str(s: &str) -> Result<Self, WbenchError> {
        match s {
            "gamma0" => Ok(McWhich::Gamma0),
            "gammaHat" => Ok(McWhich::GammaHat),
            _ => Err(WbenchError::Flags(format!("unknown MC element {s}"))),
        }
    }
}

/// Everything a job depends on. `cache_dir` is where artifacts go and is
/// not part of the job's identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub d: i32,
    pub complexes: Vec<ComplexId>,
    pub g_min: usize,
    pub g_max: usize,
    /// Sector size for `basis` and `diff`; upper bound for `verify-d2`.
    pub vertices: Option<VertexCount>,
    pub truncation: usize,
    pub primes: Vec<u64>,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub which: Option<McWhich>,
    /// `None` checks both projections.
    pub map: Option<MapId>,
    pub samples: usize,
    pub seed: u64,
    pub tadpoles: bool,
    pub max_vertices: usize,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        let caps = Caps::default();
        JobSpec {
            command,
            d: 2,
            complexes: Vec::new(),
            g_min: 0,
            g_max: 1,
            vertices: None,
            truncation: 6,
            primes: DEFAULT_PRIMES.to_vec(),
            cache_dir: None,
            format: OutputFormat::Text,
            which: None,
            map: None,
            samples: 100,
            seed: 0,
            tadpoles: true,
            max_vertices: caps.max_vertices,
        }
    }

    /// Stable `key=value` lines; the job id is their SHA-256.
    pub fn canonical(&self) -> String {
        let complexes: Vec<&str> = self.complexes.iter().map(|c| c.as_str()).collect();
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        let vertices = match self.vertices {
            None => "-".to_string(),
            Some(VertexCount::Total(n)) => n.to_string(),
            Some(VertexCount::Colored { white, black }) => format!("{white}w{black}b"),
        };
        let which = match self.which {
            None => "-",
            Some(McWhich::Gamma0) => "gamma0",
            Some(McWhich::GammaHat) => "gammaHat",
        };
        let map = self.map.map_or("both", |m| m.as_str());
        let format = match self.format {
            OutputFormat::Text => "text",
            OutputFormat::Lines => "lines",
        };
        format!(
            "command={}\nd={}\ncomplexes={}\ng={}..{}\nvertices={}\ntruncation={}\nprimes={}\n\
             format={}\nwhich={}\nmap={}\nsamples={}\nseed={}\ntadpoles={}\nmax_vertices={}\n",
            self.command,
            self.d,
            complexes.join(","),
            self.g_min,
            self.g_max,
            vertices,
            self.truncation,
            primes.join(","),
            format,
            which,
            map,
            self.samples,
            self.seed,
            self.tadpoles,
            self.max_vertices,
        )
    }

    pub fn job_id(&self) -> String {
        cache::sha256_hex(self.canonical().as_bytes())
    }

    pub fn validate(&self) -> Result<(), WbenchError> {
        let bad = |m: &str| Err(WbenchError::Flags(m.to_string()));
        if self.truncation == 0 || self.max_vertices == 0 {
            return bad("bounds must be positive");
        }
        if self.g_min > self.g_max {
            return bad("g range is empty");
        }
        if self.primes.is_empty() || self.primes.iter().any(|&p| p < 3 || p >= 1 << 31) {
            return bad("primes must lie in [3, 2^31)");
        }
        let needs_complex = matches!(
            self.command,
            Command::Basis | Command::Diff | Command::Cohomology | Command::VerifyD2 | Command::VerifyJacobi
        );
        if needs_complex && self.complexes.is_empty() {
            return bad("--complex is required");
        }
        if matches!(self.command, Command::Basis | Command::Diff) {
            if self.complexes.len() != 1 || self.vertices.is_none() {
                return bad("--complex and --v name exactly one sector");
            }
            self.sector_key()?;
        }
        if self.command == Command::VerifyMc && self.which.is_none() {
            return bad("--which is required");
        }
        Ok(())
    }

    fn sector_key(&self) -> Result<SectorKey, WbenchError> {
        let complex = self.complexes[0];
        let mut key = match (complex, self.vertices) {
            (ComplexId::Hat, Some(VertexCount::Colored { white, black })) => {
                SectorKey::hat(self.d, self.g_min, white, black)
            }
            (ComplexId::Hat, _) => return Err(WbenchError::Flags("HAT sectors take --v <w>w<b>b".into())),
            (c, Some(VertexCount::Total(n))) => SectorKey::new(c, self.d, self.g_min, n),
            _ => return Err(WbenchError::Flags(format!("{complex} sectors take --v <n>"))),
        };
        key.tadpoles = self.tadpoles;
        Ok(key)
    }

    fn caps(&self) -> Caps {
        Caps {
            max_vertices: self.max_vertices.max(self.truncation),
            truncation: self.truncation,
            ..Caps::default()
        }
    }
}

/// Parses `3` as a total count and `2w1b` as white and black counts.
pub fn parse_vertices(s: &str) -> Result<VertexCount, WbenchError> {
    let bad = || WbenchError::Flags(format!("bad vertex count {s}"));
    if let Some(rest) = s.strip_suffix('b') {
        let (w, b) = rest.split_once('w').ok_or_else(bad)?;
        return Ok(VertexCount::Colored {
            white: w.parse().map_err(|_| bad())?,
            black: b.parse().map_err(|_| bad())?,
        });
    }
    s.parse().map(VertexCount::Total).map_err(|_| bad())
}

#[derive(Debug, thiserror::Error)]
pub enum WbenchError {
    #[error("invalid flags: {0}")]
    Flags(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("cache corruption: {0}")]
    Corruption(String),
    #[error("{0}")]
    Other(String),
}

impl WbenchError {
    /// 2 flags, 3 caps, 4 corruption, 1 anything else. A failed
    /// verification is not an error; see [`Outcome::exit_code`].
    pub fn exit_code(&self) -> i32 {
        match self {
            WbenchError::Flags(_) => 2,
            WbenchError::Cap(_) => 3,
            WbenchError::Corruption(_) => 4,
            WbenchError::Other(_) => 1,
        }
    }
}

impl From<LaError> for WbenchError {
    fn from(e: LaError) -> Self {
        match e {
            LaError::Cap(_)
            | LaError::Sector(SectorError::Overflow { .. })
            | LaError::Sector(SectorError::OracleCap(_)) => WbenchError::Cap(e.to_string()),
            LaError::Corrupt(_) | LaError::BadFile(_) | LaError::Sector(SectorError::BadFile(_)) => {
                WbenchError::Corruption(e.to_string())
            }
            _ => WbenchError::Other(e.to_string()),
        }
    }
}

impl From<crate::graphcore::GraphError> for WbenchError {
    fn from(e: crate::graphcore::GraphError) -> Self {
        WbenchError::Other(e.to_string())
    }
}

/// Result of a job that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub job_id: String,
    pub passed: bool,
    pub report: String,
    pub report_path: PathBuf,
    /// Whether the report came from the cache.
    pub cached: bool,
}

impl Outcome {
    /// 0 on success, 5 when a verification found a defect.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            5
        }
    }
}

/// Cache root: the job's directory, else `$GCX_CACHE`, else `.gcx-cache`.
pub fn cache_root(job: &JobSpec) -> PathBuf {
    job.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

/// Executes a job, reusing its cached report when present.
pub fn run(job: &JobSpec) -> Result<Outcome, WbenchError> {
    job.validate()?;
    let root = cache_root(job);
    let cache = DiskCache::open(&root, &job.primes)
        .map_err(|e| WbenchError::Flags(format!("cache directory {}: {e}", root.display())))?;
    let job_id = job.job_id();
    let report_path = cache.job_report(&job_id);
    if let Some(a) = cache.read(&report_path)? {
        let passed = a.extra.iter().any(|l| l == "status pass");
        return Ok(Outcome {
            job_id,
            passed,
            report: a.body,
            report_path,
            cached: true,
        });
    }
    let ws = Workspace::new(job.caps())
        .with_primes(job.primes.clone())
        .with_store(Box::new(cache.clone()));
    let (passed, report) = execute(&ws, job)?;
    let job_line = job.canonical().trim_end().replace('\n', " ");
    let status = if passed { "status pass" } else { "status fail" };
    cache.write(&report_path, &format!("job {job_id}"), &[format!("jobspec {job_line}"), status.to_string()], &report)?;
    Ok(Outcome {
        job_id,
        passed,
        report,
        report_path,
        cached: false,
    })
}

fn execute(ws: &Workspace, job: &JobSpec) -> Result<(bool, String), WbenchError> {
    match job.command {
        Command::Basis => {
            let key = job.sector_key()?;
            Ok((true, ws.basis(&key)?.to_text()))
        }
        Command::Diff => {
            let key = job.sector_key()?;
            let m = if key.complex.family() == Family::Hat {
                hat_matrix(ws, &key, job.truncation)?
            } else {
                (*ws.matrix(&key)?).clone()
            };
            Ok((true, m.to_text()))
        }
        Command::Cohomology => {
            let mut out = String::new();
            for &c in &job.complexes {
                for g in job.g_min..=job.g_max {
                    let (lo, hi) = degree_window(job.d, g, ws.caps.max_vertices);
                    let t = cohomology(ws, c, job.d, job.tadpoles, g..=g, lo..=hi)?;
                    match job.format {
                        OutputFormat::Text => out.push_str(&t.to_string()),
                        OutputFormat::Lines => {
                            for l in t.to_lines() {
                                out.push_str(&format!("{c};{l}\n"));
                            }
                        }
                    }
                }
            }
            Ok((true, out))
        }
        Command::VerifyD2 => {
            let vmax = match job.vertices {
                Some(VertexCount::Total(n)) => n,
                _ => job.truncation,
            };
            let mut out = String::new();
            let mut ok = true;
            for &c in &job.complexes {
                let r = verify_d2(ws, c, job.d, job.g_max, vmax, job.truncation)?;
                ok &= r.ok();
                out.push_str(&format!("{r}\n"));
            }
            Ok((ok, out))
        }
        Command::VerifyJacobi => {
            let mut out = String::new();
            let mut ok = true;
            let mut rng = StdRng::seed_from_u64(job.seed);
            for &c in &job.complexes {
                let r = verify_jacobi(ws, c, job.d, job.g_max, 4, job.samples, &mut rng)?;
                ok &= r.ok();
                out.push_str(&format!("{r}\n"));
            }
            Ok((ok, out))
        }
        Command::VerifyMc => {
            let r = verify_mc_job(job.which.expect("validated"), job.d, job.truncation);
            Ok((r.ok(), format!("{r}\n")))
        }
        Command::VerifyChainmap => {
            let maps = match job.map {
                Some(m) => vec![m],
                None => vec![MapId::Pi1, MapId::Pi2],
            };
            let mut rng = StdRng::seed_from_u64(job.seed);
            let r = verify_projections(ws, job.d, &maps, job.g_max, job.truncation, job.samples, &mut rng)?;
            Ok((r.ok(), r.to_string()))
        }
        Command::Compare => {
            let c = compare_cohomology(ws, job.d, job.g_max)?;
            let text = match job.format {
                OutputFormat::Text => c.to_string(),
                OutputFormat::Lines => c.to_lines().join("\n") + "\n",
            };
            Ok((c.mismatches().is_empty(), text))
        }
    }
}

/// Degrees of loop order `g` whose cohomology the vertex cap decides:
/// from the one-vertex sector up to sectors with `max_vertices - 1`
/// vertices.
pub fn degree_window(d: i32, g: usize, max_vertices: usize) -> (i64, i64) {
    let lo = crate::exactla::degree_for_vertices(d, g, 1);
    let hi = crate::exactla::degree_for_vertices(d, g, max_vertices.saturating_sub(1).max(1));
    (lo, hi)
}

/// Two-coloured sectors receiving the differential of `key` below the
/// truncation: same loop order, one degree up, at least as many vertices
/// (the lowest-order term recolours a white vertex).
pub fn hat_targets(key: &SectorKey, truncation: usize) -> Vec<SectorKey> {
    hat_sectors(key.d, key.g, truncation)
        .into_iter()
        .filter(|t| t.g == key.g && t.degree() == key.degree() + 1 && t.num_vertices() >= key.num_vertices())
        .collect()
}

/// Truncated differential matrix out of a two-coloured sector.
pub fn hat_matrix(ws: &Workspace, key: &SectorKey, truncation: usize) -> Result<crate::exactla::SparseMatrix, LaError> {
    let src = ws.basis(key)?;
    let targets: Vec<_> = hat_targets(key, truncation)
        .iter()
        .map(|t| ws.basis(t))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&crate::sectors::Basis> = targets.iter().map(|b| &**b).collect();
    assemble(&src, &refs, Some(truncation))
}

/// Outcome of a `delta^2 = 0` sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct D2Report {
    pub complex: Option<ComplexId>,
    pub d: i32,
    /// Sectors whose composite matrix was multiplied out.
    pub by_matrix: usize,
    /// Sectors checked generator by generator on graph vectors.
    pub by_vector: usize,
    pub generators: usize,
    pub failures: Vec<String>,
    pub skipped: Vec<String>,
}

impl D2Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for D2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.complex.map_or("-", |c| c.as_str());
        write!(
            f,
            "{c} d={}: delta^2 = 0 on {} sectors by matrix, {} by vector, {} generators; {} failures, {} skipped",
            self.d,
            self.by_matrix,
            self.by_vector,
            self.generators,
            self.failures.len(),
            self.skipped.len()
        )?;
        for s in &self.failures {
            write!(f, "\n  failure {s}")?;
        }
        for s in &self.skipped {
            write!(f, "\n  skipped {s}")?;
        }
        Ok(())
    }
}

fn is_cap(e: &LaError) -> bool {
    matches!(e, LaError::Cap(_) | LaError::Sector(SectorError::Overflow { .. }))
}

/// `delta^2 = 0` on every sector with at most `v_max` vertices and loop
/// order at most `g_max`. Single-coloured sectors use the product of the
/// two differential matrices when both targets have at most `v_max`
/// vertices, and apply the differential twice to each generator otherwise,
/// so no basis above `v_max` is ever generated. Two-coloured sectors
/// are checked on generators, exactly below `truncation`.
pub fn verify_d2(
    ws: &Workspace,
    complex: ComplexId,
    d: i32,
    g_max: usize,
    v_max: usize,
    truncation: usize,
) -> Result<D2Report, LaError> {
    let keys: Vec<SectorKey> = if complex.family() == Family::Hat {
        hat_sectors(d, g_max, v_max.min(truncation))
            .into_iter()
            .filter(|k| k.complex == complex)
            .collect()
    } else {
        (0..=g_max)
            .flat_map(|g| (1..=v_max).map(move |v| SectorKey::new(complex, d, g, v)))
            .collect()
    };
    verify_d2_on(ws, complex, d, &keys, v_max, truncation)
}

/// [`verify_d2`] on an explicit list of sectors of one complex.
pub fn verify_d2_on(
    ws: &Workspace,
    complex: ComplexId,
    d: i32,
    keys: &[SectorKey],
    v_max: usize,
    truncation: usize,
) -> Result<D2Report, LaError> {
    let mut r = D2Report {
        complex: Some(complex),
        d,
        ..D2Report::default()
    };
    for &key in keys {
        let basis = match ws.basis(&key) {
            Ok(b) => b,
            Err(e) if is_cap(&e) => {
                r.skipped.push(format!("{key}: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        r.generators += basis.len();
        if basis.is_empty() {
            r.by_matrix += 1;
            continue;
        }
        if complex.family() != Family::Hat && key.num_vertices() + 2 <= ws.caps.max_vertices.min(v_max) {
            let next = Workspace::next_key(&key);
            let m1 = ws.matrix(&key)?;
            let m2 = ws.matrix(&next)?;
            if !m2.mul(&m1)?.is_zero() {
                r.failures.push(key.to_string());
            }
            r.by_matrix += 1;
            continue;
        }
        let t = (complex.family() == Family::Hat).then_some(truncation);
        let bad = d2_by_vectors(complex.family(), d, basis.graphs(), t)?;
        if let Some(first) = bad.first() {
            r.failures.push(format!("{key} at {first}"));
        }
        r.by_vector += 1;
    }
    Ok(r)
}

/// Applies the differential twice to each generator. The second pass runs
/// once per distinct intermediate graph, since images of neighbouring
/// generators share most of their terms. Generators are taken in chunks
/// to bound memory. Returns the encodings of the generators whose image
/// does not vanish.
fn d2_by_vectors(
    family: Family,
    d: i32,
    gens: &[Graph],
    t: Option<usize>,
) -> Result<Vec<String>, LaError> {
    let mut bad = Vec::new();
    for chunk in gens.chunks(D2_CHUNK) {
        bad.extend(d2_chunk(family, d, chunk, t)?);
    }
    Ok(bad)
}

const D2_CHUNK: usize = 1024;

fn d2_chunk(
    family: Family,
    d: i32,
    gens: &[Graph],
    t: Option<usize>,
) -> Result<Vec<String>, LaError> {
    let vector = |g: &Graph| GraphVector::from_graph(family, d, g).map(|x| x.with_truncation(t));
    let first: Vec<GraphVector> = gens
        .par_iter()
        .map(|g| differential(&vector(g)?))
        .collect::<Result<_, _>>()?;
    let mut index: HashMap<&Graph, usize> = HashMap::new();
    let mut middle: Vec<&Graph> = Vec::new();
    for x in &first {
        for (h, _) in x.iter() {
            index.entry(h).or_insert_with(|| {
                middle.push(h);
                middle.len() - 1
            });
        }
    }
    let second: Vec<GraphVector> = middle
        .par_iter()
        .map(|h| differential(&vector(h)?))
        .collect::<Result<_, _>>()?;
    let mut bad = Vec::new();
    for (g, x) in gens.iter().zip(&first) {
        let mut acc = GraphVector::zero(family, d).with_truncation(t);
        for (h, c) in x.iter() {
            acc.add_scaled(&second[index[h]], c);
        }
        if !acc.is_zero() {
            bad.push(encode(g));
        }
    }
    Ok(bad)
}

/// Outcome of a graded Jacobi sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JacobiReport {
    pub complex: Option<ComplexId>,
    pub triples: usize,
    pub nontrivial: usize,
    pub failures: Vec<String>,
}

impl JacobiReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for JacobiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.complex.map_or("-", |c| c.as_str());
        write!(
            f,
            "{c}: graded Jacobi on {} triples ({} with nonzero terms), {} failures",
            self.triples,
            self.nontrivial,
            self.failures.len()
        )?;
        for s in &self.failures {
            write!(f, "\n  failure {s}")?;
        }
        Ok(())
    }
}

fn parity_sign(p: i64) -> crate::graphcore::Coeff {
    crate::graphcore::int(if p.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Graded Jacobi on `samples` random triples of generators with at most
/// `max_vertices` vertices and loop order at most `g_max`.
pub fn verify_jacobi<R: Rng>(
    ws: &Workspace,
    complex: ComplexId,
    d: i32,
    g_max: usize,
    max_vertices: usize,
    samples: usize,
    rng: &mut R,
) -> Result<JacobiReport, LaError> {
    let family = complex.family();
    let keys: Vec<SectorKey> = if family == Family::Hat {
        hat_sectors(d, g_max, max_vertices)
    } else {
        (0..=g_max)
            .flat_map(|g| (1..=max_vertices).map(move |v| SectorKey::new(complex, d, g, v)))
            .collect()
    };
    let mut pool: Vec<Graph> = Vec::new();
    for k in &keys {
        pool.extend(ws.basis(k)?.graphs().iter().cloned());
    }
    let mut r = JacobiReport {
        complex: Some(complex),
        ..JacobiReport::default()
    };
    if pool.is_empty() {
        return Ok(r);
    }
    for _ in 0..samples {
        let abc: Vec<&Graph> = (0..3).map(|_| pool.choose(rng).expect("nonempty")).collect();
        let t = (family == Family::Hat).then(|| abc.iter().map(|g| g.num_vertices()).sum::<usize>() - 2);
        let v: Vec<GraphVector> = abc
            .iter()
            .map(|g| GraphVector::from_graph(family, d, g).map(|x| x.with_truncation(t)))
            .collect::<Result<_, _>>()?;
        let deg: Vec<i64> = v.iter().map(|x| homogeneous_degree(x).unwrap_or(0)).collect();
        let mut sum = GraphVector::zero(family, d).with_truncation(t);
        let mut nontrivial = false;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let term = bracket(&v[i], &bracket(&v[j], &v[k])?)?;
            nontrivial |= !term.is_zero();
            sum.add_scaled(&term, &parity_sign(deg[i] * deg[k]));
        }
        r.triples += 1;
        r.nontrivial += nontrivial as usize;
        if !sum.is_zero() {
            r.failures.push(abc.iter().map(|g| encode(g)).collect::<Vec<_>>().join(" , "));
        }
    }
    Ok(r)
}

/// Outcome of `verify-mc`: the element itself and, for the two-coloured
/// element, a copy with the `k = 2` coefficient set to 1, which must fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McReport {
    pub which: McWhich,
    pub d: i32,
    pub truncation: usize,
    pub holds: bool,
    pub perturbed_fails: Option<bool>,
}

impl McReport {
    pub fn ok(&self) -> bool {
        self.holds && self.perturbed_fails != Some(false)
    }
}

impl fmt::Display for McReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.which {
            McWhich::Gamma0 => write!(f, "gamma0 d={}: [gamma, gamma] = 0: {}", self.d, self.holds),
            McWhich::GammaHat => write!(
                f,
                "gammaHat d={} truncation {}: [gamma, gamma] = 0: {}; perturbed element fails: {}",
                self.d,
                self.truncation,
                self.holds,
                self.perturbed_fails.unwrap_or(false)
            ),
        }
    }
}

pub fn verify_mc_job(which: McWhich, d: i32, truncation: usize) -> McReport {
    match which {
        McWhich::Gamma0 => McReport {
            which,
            d,
            truncation,
            holds: verify_mc(&McElement::gamma0(Family::Gc, d)) && verify_mc(&McElement::gamma0(Family::Ogc, d)),
            perturbed_fails: None,
        },
        McWhich::GammaHat => {
            let bad = McElement::gamma_hat_with(d, truncation, |k| {
                if k == 2 {
                    crate::graphcore::int(1)
                } else {
                    corolla_coeff(d, k)
                }
            });
            McReport {
                which,
                d,
                truncation,
                holds: verify_mc(&McElement::gamma_hat(d, truncation)),
                perturbed_fails: Some(!verify_mc(&bad)),
            }
        }
    }
}

/// Chain-map, Lie-morphism and grading checks for the projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub d: i32,
    pub chain: Vec<MorphismReport>,
    /// `pi1` on preimages of GC0_d generators, where it is nonzero.
    pub preimages: Option<MorphismReport>,
    pub lie: Vec<MorphismReport>,
    /// Image terms whose degree and loop order were compared.
    pub grading_checked: usize,
    pub grading_violations: Vec<String>,
}

impl ProjectionReport {
    pub fn ok(&self) -> bool {
        self.chain.iter().chain(&self.lie).chain(&self.preimages).all(MorphismReport::ok)
            && self.grading_violations.is_empty()
    }
}

impl fmt::Display for ProjectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "projections d={}", self.d)?;
        for r in &self.chain {
            writeln!(f, "  chain map on sectors: {r}")?;
        }
        if let Some(r) = &self.preimages {
            writeln!(f, "  chain map on GC0 preimages: {r}")?;
        }
        for r in &self.lie {
            writeln!(f, "  Lie morphism: {r}")?;
        }
        writeln!(
            f,
            "  grading: {} image terms, {} violations",
            self.grading_checked,
            self.grading_violations.len()
        )?;
        for v in &self.grading_violations {
            writeln!(f, "    {v}")?;
        }
        Ok(())
    }
}

/// Every check on `pi1`/`pi2` over the two-coloured sectors with at most
/// `truncation` vertices and loop order at most `g_max`. Because small
/// sectors hold few generators with nonzero `pi1` image, `pi1` is also
/// checked on preimages of the GC0_d generators with up to four vertices,
/// and Lie pairs are drawn from both pools.
pub fn verify_projections<R: Rng>(
    ws: &Workspace,
    d: i32,
    maps: &[MapId],
    g_max: usize,
    truncation: usize,
    pairs: usize,
    rng: &mut R,
) -> Result<ProjectionReport, LaError> {
    let keys = hat_sectors(d, g_max, truncation);
    let mut pool = Vec::new();
    for k in &keys {
        pool.extend(ws.basis(k)?.graphs().iter().cloned());
    }
    let pre = if maps.contains(&MapId::Pi1) {
        pi1_preimages(ws, d, g_max.min(2), 4)?
    } else {
        Vec::new()
    };
    let mut out = ProjectionReport {
        d,
        chain: Vec::new(),
        preimages: None,
        lie: Vec::new(),
        grading_checked: 0,
        grading_violations: Vec::new(),
    };
    for &m in maps {
        out.chain.push(verify_chain_map(ws, m, &keys, truncation)?);
        let mut lie_pool = pool.clone();
        if m == MapId::Pi1 {
            out.preimages = Some(verify_chain_map_on(m, d, &pre, 2)?);
            lie_pool.extend(pre.iter().cloned());
        }
        let mut lie = verify_lie_morphism_on(m, d, &lie_pool, pairs, rng)?;
        lie.sectors = keys.clone();
        out.lie.push(lie);
        let (checked, bad) = grading_violations(ws, m, &keys)?;
        out.grading_checked += checked;
        out.grading_violations.extend(bad.into_iter().map(|s| format!("{m}: {s}")));
    }
    Ok(out)
}
