//! On-disk artifact cache.
//!
//! Layout under the root:
//!
//! ```text
//! sectors/<key>/basis    basis text
//! sectors/<key>/matrix   differential out of the sector
//! sectors/<key>/meta     rank and the primes it was computed with
//! jobs/<sha256>/report   output of one job
//! ```
//!
//! Every file starts with a header naming its producer and the SHA-256 of
//! the body. Writes go to a temporary sibling and are renamed into place,
//! so readers never observe partial files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::exactla::{LaError, SparseMatrix, Store};
use crate::sectors::{Basis, SectorKey};

const MAGIC: &str = "#gcx-artifact 1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Header plus body. The header lists `extra` lines verbatim.
pub fn seal(producer: &str, extra: &[String], body: &str) -> String {
    let mut out = format!("{MAGIC}\n#producer {producer}\n");
    for e in extra {
        out.push('#');
        out.push_str(e);
        out.push('\n');
    }
    out.push_str(&format!("#sha256 {}\n", sha256_hex(body.as_bytes())));
    out.push_str(body);
    out
}

/// Parsed artifact: header lines (without `#`) and the verified body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub producer: String,
    pub extra: Vec<String>,
    pub body: String,
}

pub fn unseal(path: &Path, text: &str) -> Result<Artifact, LaError> {
    let corrupt = |why: &str| LaError::Corrupt(format!("{}: {why}", path.display()));
    let mut rest = text.strip_prefix(MAGIC).and_then(|r| r.strip_prefix('\n')).ok_or_else(|| corrupt("missing header"))?;
    let mut producer = None;
    let mut extra = Vec::new();
    loop {
        let (line, tail) = rest.split_once('\n').ok_or_else(|| corrupt("truncated header"))?;
        rest = tail;
        let line = line.strip_prefix('#').ok_or_else(|| corrupt("no checksum line"))?;
        if let Some(p) = line.strip_prefix("producer ") {
            producer = Some(p.to_string());
        } else if let Some(sum) = line.strip_prefix("sha256 ") {
            if sha256_hex(rest.as_bytes()) != sum {
                return Err(corrupt("checksum mismatch"));
            }
            return Ok(Artifact {
                producer: producer.ok_or_else(|| corrupt("no producer"))?,
                extra,
                body: rest.to_string(),
            });
        } else {
            extra.push(line.to_string());
        }
    }
}

/// Writes `contents` to `path` via a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().expect("artifact paths have a parent");
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("artifact");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// The cache rooted at a directory. Ranks are only reused when computed
/// with the same primes.
#[derive(Debug, Clone)]
pub struct DiskCache {
    root: PathBuf,
    primes: Vec<u64>,
}

fn io(e: std::io::Error) -> LaError {
    LaError::Store(e.to_string())
}

impl DiskCache {
    pub fn open(root: impl Into<PathBuf>, primes: &[u64]) -> Result<Self, LaError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(io)?;
        Ok(DiskCache {
            root,
            primes: primes.to_vec(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn sector_dir(&self, key: &SectorKey) -> PathBuf {
        self.root.join("sectors").join(key.name().replace(';', "_"))
    }

    pub fn job_report(&self, job_id: &str) -> PathBuf {
        self.root.join("jobs").join(job_id).join("report")
    }

    /// Reads and verifies an artifact; `None` if absent.
    pub fn read(&self, path: &Path) -> Result<Option<Artifact>, LaError> {
        match fs::read_to_string(path) {
            Ok(text) => unseal(path, &text).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io(e)),
        }
    }

    pub fn write(&self, path: &Path, producer: &str, extra: &[String], body: &str) -> Result<(), LaError> {
        write_atomic(path, &seal(producer, extra, body)).map_err(io)
    }

    fn primes_line(primes: &[u64]) -> String {
        let p: Vec<String> = primes.iter().map(u64::to_string).collect();
        format!("primes={}", p.join(","))
    }
}

impl Store for DiskCache {
    fn load_basis(&self, key: &SectorKey) -> Result<Option<Basis>, LaError> {
        let path = self.sector_dir(key).join("basis");
        let Some(a) = self.read(&path)? else { return Ok(None) };
        let b = Basis::from_text(&a.body).map_err(|e| LaError::Corrupt(format!("{}: {e}", path.display())))?;
        if b.key != *key {
            return Err(LaError::Corrupt(format!("{} holds {}", path.display(), b.key)));
        }
        Ok(Some(b))
    }

    fn save_basis(&self, basis: &Basis) -> Result<(), LaError> {
        let path = self.sector_dir(&basis.key).join("basis");
        self.write(&path, &format!("basis {}", basis.key), &[], &basis.to_text())
    }

    fn load_matrix(&self, key: &SectorKey) -> Result<Option<SparseMatrix>, LaError> {
        let path = self.sector_dir(key).join("matrix");
        let Some(a) = self.read(&path)? else { return Ok(None) };
        SparseMatrix::from_text(&a.body)
            .map(Some)
            .map_err(|e| LaError::Corrupt(format!("{}: {e}", path.display())))
    }

    fn save_matrix(&self, key: &SectorKey, m: &SparseMatrix) -> Result<(), LaError> {
        let path = self.sector_dir(key).join("matrix");
        self.write(&path, &format!("matrix {key}"), &[], &m.to_text())
    }

    fn load_rank(&self, key: &SectorKey) -> Result<Option<usize>, LaError> {
        let path = self.sector_dir(key).join("meta");
        let Some(a) = self.read(&path)? else { return Ok(None) };
        let mut rank = None;
        let mut primes_ok = false;
        for line in a.body.lines() {
            if let Some(r) = line.strip_prefix("rank=") {
                rank = Some(r.parse::<usize>().map_err(|_| LaError::Corrupt(format!("{}: bad rank", path.display())))?);
            } else if line.starts_with("primes=") {
                primes_ok = line == Self::primes_line(&self.primes);
            }
        }
        if rank.is_none() {
            return Err(LaError::Corrupt(format!("{}: no rank", path.display())));
        }
        Ok(if primes_ok { rank } else { None })
    }

    fn save_rank(&self, key: &SectorKey, rank: usize, primes: &[u64]) -> Result<(), LaError> {
        let path = self.sector_dir(key).join("meta");
        let body = format!("sector={key}\nrank={rank}\n{}\n", Self::primes_line(primes));
        self.write(&path, &format!("rank {key}"), &[], &body)
    }
}
