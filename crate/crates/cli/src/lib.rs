//! Structure files, reports, the built-in catalog and batch runs.

pub mod file;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use hermitian_core::catalog::{self, StructureSpec};
use hermitian_core::{audit, random, Analysis, AlmostHermitian};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use file::{parse_structure, Diagnostic, StructureFile};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {diagnostic}")]
    Parse { path: PathBuf, diagnostic: Diagnostic },
    #[error("unknown catalog structure {0:?}; try `catalog list`")]
    UnknownCatalog(String),
    #[error("{name}: {message}")]
    Analysis { name: String, message: String },
}

/// Exit status for an audit failure; input errors use [`EXIT_ERROR`].
pub const EXIT_AUDIT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

pub fn load_file(path: &Path) -> Result<StructureSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_structure(&text).map_err(|diagnostic| CliError::Parse { path: path.to_owned(), diagnostic })
}

pub fn load_catalog(name: &str) -> Result<StructureSpec, CliError> {
    catalog::by_name(name).ok_or_else(|| CliError::UnknownCatalog(name.to_string()))
}

fn build(spec: &StructureSpec) -> Result<AlmostHermitian, CliError> {
    spec.build().map_err(|e| CliError::Analysis { name: spec.name.clone(), message: e.to_string() })
}

/// Full analysis plus identity audit of one structure.
pub fn analyze_structure(name: &str, ext: u64, s: AlmostHermitian) -> Result<Report, CliError> {
    let a = Analysis::new(s).map_err(|e| CliError::Analysis { name: name.to_string(), message: e.to_string() })?;
    let audit = audit::run_suite(name, &a);
    Ok(Report::new(name, ext, &a, &audit))
}

pub fn analyze_spec(spec: &StructureSpec) -> Result<Report, CliError> {
    analyze_structure(&spec.name, spec.ext, build(spec)?)
}

/// The structures themselves followed by `samples` random compatible structures on their
/// algebras, assigned round-robin; sample m is drawn from a generator seeded with (seed, m).
pub fn audit_targets(targets: &[StructureSpec], samples: usize, seed: u64) -> Vec<Result<Report, CliError>> {
    let jobs: Vec<(usize, Option<usize>)> =
        (0..targets.len()).map(|t| (t, None)).chain((0..samples).map(|m| (m % targets.len(), Some(m)))).collect();
    jobs.into_par_iter()
        .map(|(t, sample)| {
            let spec = &targets[t];
            match sample {
                None => analyze_spec(spec),
                Some(m) => {
                    let name = format!("{}#{m}", spec.name);
                    let alg = spec.algebra().map_err(|e| CliError::Analysis { name: name.clone(), message: e.to_string() })?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(m as u64);
                    let s = random::random_structure(&alg, &mut rng)
                        .map_err(|e| CliError::Analysis { name: name.clone(), message: e.to_string() })?;
                    analyze_structure(&name, spec.ext, s)
                }
            }
        })
        .collect()
}

/// Outcome of analysing one file of a batch.
pub struct BatchEntry {
    pub path: PathBuf,
    pub result: Result<Report, CliError>,
}

/// Analyses every `*.json` file of `dir` on `jobs` threads; entries are sorted by path.
pub fn batch(dir: &Path, jobs: usize) -> Result<Vec<BatchEntry>, CliError> {
    let read = fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.to_owned(), source })?;
    let mut paths: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    Ok(pool.install(|| {
        paths
            .into_par_iter()
            .map(|path| {
                let result = load_file(&path).and_then(|spec| analyze_spec(&spec));
                BatchEntry { path, result }
            })
            .collect()
    }))
}

/// Exit status for a set of outcomes: input errors first, then audit failures.
pub fn exit_status<'a>(results: impl IntoIterator<Item = &'a Result<Report, CliError>>) -> i32 {
    let mut status = 0;
    for r in results {
        match r {
            Err(_) => return EXIT_ERROR,
            Ok(report) if report.audit.failed > 0 => status = EXIT_AUDIT,
            Ok(_) => {}
        }
    }
    status
}

/// One-line summary of a report's audit.
pub fn summary_line(report: &Report) -> String {
    let a = &report.audit;
    let verdict = if a.failed == 0 { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{verdict} {}: {} ({} passed, {} failed, {} skipped)",
        report.name, report.classification.class, a.passed, a.failed, a.skipped
    );
    if !a.failures.is_empty() {
        let ids: Vec<&str> = a.failures.iter().map(|f| f.id.as_str()).collect();
        line.push_str(&format!(" [{}]", ids.join(", ")));
    }
    line
}
