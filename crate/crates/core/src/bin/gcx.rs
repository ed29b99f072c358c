//! Thin command-line front end over `graphcx::wbench`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphcx::graphcore::ComplexId;
use graphcx::maps::MapId;
use graphcx::wbench::{parse_vertices, run, Command, JobSpec, WbenchError};

#[derive(Parser)]
#[command(name = "gcx", about = "Graph complexes: bases, differentials, cohomology and checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Cache root; defaults to $GCX_CACHE, then ./.gcx-cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Comma-separated primes for modular ranks.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// text or lines.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Largest vertex count of any generated sector.
    #[arg(long, global = true, default_value_t = 8)]
    vmax: usize,
}

#[derive(Subcommand)]
enum Sub {
    /// Generators of one sector.
    Basis(Sector),
    /// Differential matrix out of one sector.
    Diff(Sector),
    /// Cohomology dimensions per loop order and degree.
    Cohomology {
        #[arg(long, value_delimiter = ',', required = true)]
        complex: Vec<String>,
        #[arg(long)]
        d: i32,
        #[arg(long, default_value_t = 0)]
        gmin: usize,
        #[arg(long)]
        gmax: usize,
        #[arg(long)]
        no_tadpoles: bool,
    },
    /// delta^2 = 0 on every sector up to the bounds.
    VerifyD2 {
        #[arg(long, value_delimiter = ',', required = true)]
        complex: Vec<String>,
        #[arg(long)]
        d: i32,
        #[arg(long)]
        gmax: usize,
        /// Largest source sector; defaults to the truncation.
        #[arg(long)]
        v: Option<usize>,
        #[arg(long, default_value_t = 6)]
        trunc: usize,
    },
    /// Graded Jacobi identity on random triples of small generators.
    VerifyJacobi {
        #[arg(long, value_delimiter = ',', required = true)]
        complex: Vec<String>,
        #[arg(long)]
        d: i32,
        #[arg(long, default_value_t = 1)]
        gmax: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maurer-Cartan equation for gamma0 or gammaHat.
    VerifyMc {
        #[arg(long)]
        which: String,
        #[arg(long)]
        d: i32,
        #[arg(long, default_value_t = 6)]
        trunc: usize,
    },
    /// Chain-map, Lie-morphism and grading checks for pi1 and pi2.
    VerifyChainmap {
        #[arg(long)]
        d: i32,
        /// pi1 or pi2; both when omitted.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 6)]
        trunc: usize,
        #[arg(long, default_value_t = 2)]
        gmax: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Side-by-side cohomology of GC0_d and OGC0_{d+1}.
    Compare {
        #[arg(long)]
        d: i32,
        #[arg(long)]
        gmax: usize,
    },
}

#[derive(Args)]
struct Sector {
    #[arg(long)]
    complex: String,
    #[arg(long)]
    d: i32,
    #[arg(long)]
    g: usize,
    /// Vertex count, or `<w>w<b>b` for two-coloured sectors.
    #[arg(long)]
    v: String,
    #[arg(long, default_value_t = 6)]
    trunc: usize,
    #[arg(long)]
    no_tadpoles: bool,
}

fn complexes(names: &[String]) -> Result<Vec<ComplexId>, WbenchError> {
    names
        .iter()
        .map(|n| n.parse().map_err(|e| WbenchError::Flags(format!("{e}"))))
        .collect()
}

fn job(cli: Cli) -> Result<JobSpec, WbenchError> {
    let c = cli.common;
    let mut j = match cli.command {
        Sub::Basis(s) => sector_job(Command::Basis, s)?,
        Sub::Diff(s) => sector_job(Command::Diff, s)?,
        Sub::Cohomology { complex, d, gmin, gmax, no_tadpoles } => {
            let mut j = JobSpec::new(Command::Cohomology);
            j.complexes = complexes(&complex)?;
            (j.d, j.g_min, j.g_max, j.tadpoles) = (d, gmin, gmax, !no_tadpoles);
            j
        }
        Sub::VerifyD2 { complex, d, gmax, v, trunc } => {
            let mut j = JobSpec::new(Command::VerifyD2);
            j.complexes = complexes(&complex)?;
            (j.d, j.g_max, j.truncation) = (d, gmax, trunc);
            j.vertices = v.map(graphcx::sectors::VertexCount::Total);
            j
        }
        Sub::VerifyJacobi { complex, d, gmax, samples, seed } => {
            let mut j = JobSpec::new(Command::VerifyJacobi);
            j.complexes = complexes(&complex)?;
            (j.d, j.g_max, j.samples, j.seed) = (d, gmax, samples, seed);
            j
        }
        Sub::VerifyMc { which, d, trunc } => {
            let mut j = JobSpec::new(Command::VerifyMc);
            j.which = Some(which.parse()?);
            (j.d, j.truncation) = (d, trunc);
            j
        }
        Sub::VerifyChainmap { d, map, trunc, gmax, pairs, seed } => {
            let mut j = JobSpec::new(Command::VerifyChainmap);
            j.map = map
                .map(|m| m.parse::<MapId>().map_err(|e| WbenchError::Flags(format!("{e}"))))
                .transpose()?;
            (j.d, j.truncation, j.g_max, j.samples, j.seed) = (d, trunc, gmax, pairs, seed);
            j
        }
        Sub::Compare { d, gmax } => {
            let mut j = JobSpec::new(Command::Compare);
            (j.d, j.g_max) = (d, gmax);
            j
        }
    };
    j.cache_dir = c.cache;
    if let Some(p) = c.primes {
        j.primes = p;
    }
    j.format = c.format.parse()?;
    j.max_vertices = c.vmax;
    Ok(j)
}

fn sector_job(command: Command, s: Sector) -> Result<JobSpec, WbenchError> {
    let mut j = JobSpec::new(command);
    j.complexes = complexes(std::slice::from_ref(&s.complex))?;
    (j.d, j.g_min, j.g_max, j.truncation, j.tadpoles) = (s.d, s.g, s.g, s.trunc, !s.no_tadpoles);
    j.vertices = Some(parse_vertices(&s.v)?);
    Ok(j)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = job(cli).and_then(|j| run(&j));
    match outcome {
        Ok(o) => {
            print!("{}", o.report);
            eprintln!("report: {}", o.report_path.display());
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("gcx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
