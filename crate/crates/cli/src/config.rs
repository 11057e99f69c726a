//! JSON run configuration.
//!
//! A configuration document has three optional sections:
//!
//! ```json
//! {
//!   "model":  { "delta_e": 1.0, "delta_eps": 0.31, "n1": 200, "n2": 200, "lambda": 0.001 },
//!   "run":    { "coupling": "weak", "convention": "hazard_consistent", "trajectories": 5000,
//!               "t_max": 740.0, "n_points": 200, "seed": 1, "realizations": 1 },
//!   "output": { "path": "weak.csv" }
//! }
//! ```
//!
//! Only `model.lambda` is required. A resolved [`RunConfig`] serializes back
//! into the same schema with every key present.

use std::fmt;
use std::path::PathBuf;

use lindblad_pdp::two_band::{rates, SamplerConvention, TwoBandParams};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TRAJECTORIES: usize = 5000;
pub const DEFAULT_POINTS: usize = 200;

/// Which of the two model variants drives the Monte Carlo pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// Constant rates.
    #[default]
    Weak,
    /// Rates modulated by the bath memory kernel.
    Strong,
}

/// A configuration problem, tagged with the offending key path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Missing { path: String },
    Invalid { path: String, message: String },
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Dotted key path, or `config` for document-level problems.
    pub fn path(&self) -> &str {
        match self {
            Self::Missing { path } | Self::Invalid { path, .. } => path,
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Missing { path } => write!(f, "{path} missing"),
            Self::Invalid { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub delta_e: f64,
    pub delta_eps: f64,
    pub n1: usize,
    pub n2: usize,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    pub coupling: Coupling,
    pub convention: SamplerConvention,
    pub trajectories: usize,
    pub t_max: f64,
    pub n_points: usize,
    pub seed: u64,
    /// Coupling/environment draws averaged by the exact pipeline.
    pub realizations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub run: RunSettings,
    pub output: OutputConfig,
}

/// Command-line values that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub coupling: Option<Coupling>,
    pub convention: Option<SamplerConvention>,
    pub out: Option<PathBuf>,
    pub realizations: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    model: ModelDocument,
    #[serde(default)]
    run: RunDocument,
    #[serde(default)]
    output: OutputDocument,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    delta_e: Option<f64>,
    delta_eps: Option<f64>,
    n1: Option<usize>,
    n2: Option<usize>,
    lambda: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunDocument {
    coupling: Option<Coupling>,
    convention: Option<SamplerConvention>,
    trajectories: Option<usize>,
    t_max: Option<f64>,
    n_points: Option<usize>,
    seed: Option<u64>,
    realizations: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputDocument {
    path: Option<PathBuf>,
}

/// Parses a configuration document without command-line overrides.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    RunConfig::from_document(text, &Overrides::default())
}

impl RunConfig {
    /// Parses `text`, applies `overrides` and fills in defaults. `t_max`
    /// defaults to `6/(γ₁+γ₂)` for weak coupling and `60/δε` for strong.
    pub fn from_document(text: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        if !text.trim_start().starts_with('{') {
            return Err(ConfigError::new("config", "document must be a JSON object"));
        }
        let mut de = serde_json::Deserializer::from_str(text);
        let doc: Document = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." || path == "?" {
                "config".to_string()
            } else {
                path
            };
            ConfigError::new(path, e.into_inner().to_string())
        })?;
        de.end()
            .map_err(|e| ConfigError::new("config", e.to_string()))?;

        let m = doc.model;
        let model = ModelConfig {
            delta_e: m.delta_e.unwrap_or(1.0),
            delta_eps: m.delta_eps.unwrap_or(0.31),
            n1: m.n1.unwrap_or(200),
            n2: m.n2.unwrap_or(200),
            lambda: m.lambda.ok_or_else(|| ConfigError::Missing {
                path: "model.lambda".into(),
            })?,
        };
        validate_model(&model)?;

        let r = doc.run;
        let coupling = overrides.coupling.or(r.coupling).unwrap_or_default();
        let t_max = match r.t_max {
            Some(t) => t,
            None => default_t_max(&model, coupling)?,
        };
        let run = RunSettings {
            coupling,
            convention: overrides.convention.or(r.convention).unwrap_or_default(),
            trajectories: r.trajectories.unwrap_or(DEFAULT_TRAJECTORIES),
            t_max,
            n_points: r.n_points.unwrap_or(DEFAULT_POINTS),
            seed: overrides.seed.or(r.seed).unwrap_or(DEFAULT_SEED),
            realizations: overrides.realizations.or(r.realizations).unwrap_or(1),
        };
        validate_run(&run)?;

        let path = overrides
            .out
            .clone()
            .or(doc.output.path)
            .unwrap_or_else(|| PathBuf::from("simulate.csv"));
        if path.as_os_str().is_empty() {
            return Err(ConfigError::new("output.path", "must not be empty"));
        }
        Ok(Self {
            model,
            run,
            output: OutputConfig { path },
        })
    }

    /// Model parameters, with the run seed driving the exact solver.
    pub fn params(&self) -> TwoBandParams {
        let m = &self.model;
        TwoBandParams {
            delta_e: m.delta_e,
            delta_eps: m.delta_eps,
            n1: m.n1,
            n2: m.n2,
            lambda: m.lambda,
            seed: self.run.seed,
        }
    }

    /// `n_points` uniform times on `[0, t_max]`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.run.n_points;
        let last = n - 1;
        (0..n)
            .map(|k| {
                if k == last {
                    self.run.t_max
                } else {
                    self.run.t_max * k as f64 / last as f64
                }
            })
            .collect()
    }
}

fn default_t_max(model: &ModelConfig, coupling: Coupling) -> Result<f64, ConfigError> {
    match coupling {
        Coupling::Strong => Ok(60.0 / model.delta_eps),
        Coupling::Weak => {
            let params = TwoBandParams {
                delta_e: model.delta_e,
                delta_eps: model.delta_eps,
                n1: model.n1,
                n2: model.n2,
                lambda: model.lambda,
                seed: 0,
            };
            let t = 6.0 / rates(&params).total();
            if t.is_finite() {
                Ok(t)
            } else {
                Err(ConfigError::new(
                    "run.t_max",
                    "no default for vanishing rates; set it explicitly",
                ))
            }
        }
    }
}

fn validate_model(m: &ModelConfig) -> Result<(), ConfigError> {
    if !m.delta_e.is_finite() {
        return Err(ConfigError::new(
            "model.delta_e",
            format!("must be finite (got {})", m.delta_e),
        ));
    }
    if !(m.delta_eps > 0.0 && m.delta_eps.is_finite()) {
        return Err(ConfigError::new(
            "model.delta_eps",
            format!("must be positive (got {})", m.delta_eps),
        ));
    }
    for (key, n) in [("model.n1", m.n1), ("model.n2", m.n2)] {
        if n == 0 {
            return Err(ConfigError::new(key, "must be at least 1 (got 0)"));
        }
    }
    if !(m.lambda >= 0.0 && m.lambda.is_finite()) {
        return Err(ConfigError::new(
            "model.lambda",
            format!("must be nonnegative (got {})", m.lambda),
        ));
    }
    Ok(())
}

fn validate_run(r: &RunSettings) -> Result<(), ConfigError> {
    if r.trajectories == 0 {
        return Err(ConfigError::new(
            "run.trajectories",
            "must be at least 1 (got 0)",
        ));
    }
    if !(r.t_max > 0.0 && r.t_max.is_finite()) {
        return Err(ConfigError::new(
            "run.t_max",
            format!("must be positive (got {})", r.t_max),
        ));
    }
    if r.n_points < 2 {
        return Err(ConfigError::new(
            "run.n_points",
            format!("must be at least 2 (got {})", r.n_points),
        ));
    }
    if r.realizations == 0 {
        return Err(ConfigError::new(
            "run.realizations",
            "must be at least 1 (got 0)",
        ));
    }
    Ok(())
}
