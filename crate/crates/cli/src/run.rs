//! Running a configuration end to end: plan, compute, write CSVs and a manifest.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use dispersive_lab::LabError;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, COMMON_KEYS};
use crate::csvout::emit_csv;
use crate::experiments::{find, PlanError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("precondition failed: {0}")]
    Precondition(LabError),
    #[error("numerical guard tripped: {0}")]
    Numerical(LabError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// Process exit status: 2 for bad input or I/O, 3 when a numerical guard fires.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numerical(_) => 3,
            _ => 2,
        }
    }

    fn from_lab(e: LabError) -> Self {
        if e.is_numerical_guard() {
            RunError::Numerical(e)
        } else {
            RunError::Precondition(e)
        }
    }
}

impl From<PlanError> for RunError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::Config(c) => RunError::Config(c),
            PlanError::Lab(l) => RunError::from_lab(l),
        }
    }
}

#[derive(Serialize)]
struct DefaultEntry {
    key: &'static str,
    default: String,
    doc: &'static str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    version: &'static str,
    config: &'a std::collections::BTreeMap<String, toml::Value>,
    defaults: Vec<DefaultEntry>,
    threads: usize,
    wall_seconds: f64,
    finished_unix: u64,
    outputs: Vec<String>,
}

/// Validate without running.
pub fn validate(cfg: &ExperimentConfig) -> Result<(), RunError> {
    let _plan = find(&cfg.experiment)?.plan(cfg)?;
    Ok(())
}

/// Run `cfg` and write its CSVs and `manifest.json` under the configured output directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let spec = find(&cfg.experiment)?;
    let plan = spec.plan(cfg)?;
    let dir = cfg.output();
    let started = Instant::now();
    let outputs = plan().map_err(RunError::from_lab)?;
    let wall = started.elapsed().as_secs_f64();
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(&dir).map_err(io(&dir))?;
    let mut written = Vec::new();
    for (name, table) in &outputs {
        let path = dir.join(name);
        emit_csv(table, &path).map_err(io(&path))?;
        written.push(path);
    }
    let manifest = Manifest {
        experiment: spec.name,
        version: env!("CARGO_PKG_VERSION"),
        config: &cfg.values,
        defaults: COMMON_KEYS
            .iter()
            .chain(spec.keys)
            .map(|k| DefaultEntry {
                key: k.name,
                default: k.default.to_string(),
                doc: k.doc,
            })
            .collect(),
        threads: rayon::current_num_threads(),
        wall_seconds: wall,
        finished_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        outputs: outputs.iter().map(|(n, _)| n.clone()).collect(),
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&path, text).map_err(io(&path))?;
    written.push(path);
    log::info!("{} finished in {wall:.2} s", spec.name);
    Ok(written)
}
