//! Jobs write content-addressed artifacts; a warm rerun reads them back.

use graphcx::graphcore::ComplexId;
use graphcx::sectors::VertexCount;
use graphcx::wbench::{run, Command, JobSpec};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut job = JobSpec::new(Command::Basis);
    job.complexes = vec![ComplexId::Gc0];
    job.d = 3;
    job.g_min = 1;
    job.g_max = 1;
    job.vertices = Some(VertexCount::Total(3));
    job.tadpoles = false;
    job.cache_dir = Some(dir.path().to_path_buf());

    let cold = run(&job).unwrap();
    let warm = run(&job).unwrap();
    println!("job {}", cold.job_id);
    print!("{}", cold.report);
    println!("warm rerun served from cache: {}, identical: {}", warm.cached, warm.report == cold.report);

    let mut files: Vec<_> = walk(dir.path());
    files.sort();
    for f in files {
        println!("  {}", f.strip_prefix(dir.path()).unwrap().display());
    }
}

fn walk(p: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}
