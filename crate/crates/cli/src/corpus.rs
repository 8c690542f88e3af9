//! Golden-file runner: every `*.wk` file in a directory is run and its
//! reports, minus timing, compared with the `*.json` file next to it.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::Value;
use thiserror::Error;
use weilkit::Config;

use crate::parse::{parse_session_with, DslError};
use crate::run::{run_session, Report, RunError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: DslError,
    },
    #[error("{path}: {source}")]
    Run {
        path: PathBuf,
        #[source]
        source: RunError,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses and runs one file.
pub fn run_file(path: &Path, config: Config) -> Result<Vec<Report>, CorpusError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let session = parse_session_with(&text, config).map_err(|source| CorpusError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    run_session(&session).map_err(|source| CorpusError::Run {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(values: &[Value]) -> String {
    let mut s = serde_json::to_string_pretty(values).expect("values serialize");
    s.push('\n');
    s
}

pub fn golden_text(reports: &[Report]) -> String {
    render(&reports.iter().map(Report::golden).collect::<Vec<_>>())
}

/// `*.wk` files of `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "wk"))
        .collect();
    files.sort();
    Ok(files)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Golden {
    Match,
    Mismatch,
    Missing,
    Written,
}

#[derive(Debug)]
pub struct FileOutcome {
    pub path: PathBuf,
    pub reports: Vec<Report>,
    pub golden: Golden,
}

impl FileOutcome {
    /// Every report ended as declared and the golden file agrees.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::as_expected) && matches!(self.golden, Golden::Match | Golden::Written)
    }
}

/// Runs one corpus file against its golden output, or rewrites the golden
/// output when `bless` is set.
pub fn check_file(path: &Path, config: Config, bless: bool) -> Result<FileOutcome, CorpusError> {
    let reports = run_file(path, config)?;
    let text = golden_text(&reports);
    let golden_path = path.with_extension("json");
    let golden = if bless {
        fs::write(&golden_path, &text).map_err(io_err(&golden_path))?;
        Golden::Written
    } else {
        match fs::read_to_string(&golden_path) {
            Ok(g) if g == text => Golden::Match,
            Ok(_) => Golden::Mismatch,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Golden::Missing,
            Err(e) => return Err(io_err(&golden_path)(e)),
        }
    };
    Ok(FileOutcome {
        path: path.to_path_buf(),
        reports,
        golden,
    })
}

pub fn check_corpus(dir: &Path, config: Config, bless: bool) -> Result<Vec<FileOutcome>, CorpusError> {
    corpus_files(dir)?.iter().map(|p| check_file(p, config, bless)).collect()
}
