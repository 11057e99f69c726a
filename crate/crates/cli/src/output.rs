//! Files written by a run: the CSV table and its JSON metadata sidecar.

use std::path::{Path, PathBuf};

use lindblad_pdp::exact::realization_streams;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::pipeline::{Pipeline, Table};

/// Version of this build: crate version, short commit hash, `-dirty` when the
/// working tree had uncommitted changes.
pub const VERSION: &str = env!("SIMULATE_VERSION");

/// Random streams a run draws from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub seed: u64,
    /// Trajectory `k` uses stream `k` of `seed`; this is the exclusive end.
    pub trajectory_streams: u64,
    /// `(coupling, environment)` stream pair of each exact realization.
    pub exact_streams: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub version: String,
    pub subcommand: String,
    pub convention: String,
    pub columns: Vec<String>,
    pub seeds: Seeds,
    pub config: RunConfig,
}

impl Metadata {
    pub fn new(pipeline: Pipeline, config: &RunConfig, table: &Table) -> Self {
        let uses_mc = matches!(pipeline, Pipeline::Mc | Pipeline::Compare);
        let uses_exact = matches!(pipeline, Pipeline::Exact | Pipeline::Compare);
        Self {
            version: VERSION.to_string(),
            subcommand: pipeline.name().to_string(),
            convention: config.run.convention.as_str().to_string(),
            columns: table.columns.iter().map(|(n, _)| n.to_string()).collect(),
            seeds: Seeds {
                seed: config.run.seed,
                trajectory_streams: if uses_mc {
                    config.run.trajectories as u64
                } else {
                    0
                },
                exact_streams: if uses_exact {
                    (0..config.run.realizations as u64)
                        .map(realization_streams)
                        .collect()
                } else {
                    Vec::new()
                },
            },
            config: config.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("metadata is plain data");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// `out.csv` → `out.meta.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}
