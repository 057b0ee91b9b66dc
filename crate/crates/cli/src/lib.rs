//! Instance files, reports and batch driver behind the `igl` binary.

pub mod corpus;
pub mod instance;
pub mod report;
pub mod run;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use instance::{parse_instance, Instance, InstanceError};
pub use report::{Report, Trace};
pub use run::{decide, verify, Check};

/// Failure to produce a result for one file.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    /// Rendered `path:line:column: message` for located errors.
    #[error("{path}{}{err}", if matches!(err, InstanceError::Precondition(_)) { ": " } else { ":" })]
    Instance { path: String, err: InstanceError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl FileError {
    pub fn exit_code(&self) -> i32 {
        match self {
            FileError::Instance { err, .. } => err.exit_code(),
            FileError::Io { .. } => 2,
        }
    }
}

pub fn load(path: &Path) -> Result<Instance, FileError> {
    let text = fs::read_to_string(path)
        .map_err(|e| FileError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_instance(&text).map_err(|err| FileError::Instance { path: path.display().to_string(), err })
}

pub fn decide_file(path: &Path) -> Result<Report, FileError> {
    let inst = load(path)?;
    decide(&inst).map_err(|err| FileError::Instance { path: path.display().to_string(), err })
}

pub fn verify_file(path: &Path) -> Result<Vec<Check>, FileError> {
    let inst = load(path)?;
    verify(&inst).map_err(|err| FileError::Instance { path: path.display().to_string(), err })
}

/// The file itself, or the `.json` files of a directory in name order.
pub fn instance_paths(path: &Path) -> Result<Vec<PathBuf>, FileError> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let io = |e: std::io::Error| FileError::Io { path: path.display().to_string(), message: e.to_string() };
    let mut out = Vec::new();
    for entry in fs::read_dir(path).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// Runs `f` on every instance under `path`, concurrently, keeping name order.
pub fn batch<T: Send>(path: &Path, f: impl Fn(&Path) -> Result<T, FileError> + Sync) -> Result<Vec<(PathBuf, Result<T, FileError>)>, FileError> {
    let paths = instance_paths(path)?;
    Ok(paths.into_par_iter().map(|p| {
        let r = f(&p);
        (p, r)
    }).collect())
}
