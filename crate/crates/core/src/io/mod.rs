//! Dataset bundles on disk and result bundles for reports and plots.

mod dataset;
mod format;
mod results;

use std::path::PathBuf;

use thiserror::Error;

use crate::domain::UnknownUnit;

pub use dataset::{load, write_dataset, GLOBALS_FILE, REGIONS_FILE, TECH_FILE};
pub use format::format_number;
pub use results::{
    read_summary, verify_bundle, write_results, write_run_all, write_sweep, BundleCheck,
    ScenarioRun, Summary, SUMMARY_SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: missing required files: {}", .dir.display(), .files.join(", "))]
    MissingFiles { dir: PathBuf, files: Vec<String> },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
    #[error(transparent)]
    Unit(#[from] UnknownUnit),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum WriteError {
    #[error("cannot write {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Serialize(String),
}

fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> WriteError + '_ {
    move |source| WriteError::Io {
        path: path.to_path_buf(),
        source,
    }
}
