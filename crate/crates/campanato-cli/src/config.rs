//! Job configuration: one file describes one batch.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use campanato::carleson::MeasureDensity;
use campanato::{FunctionSpec, GridConfig, SelfMapSpec};

use crate::CliError;

/// Which pipeline a job drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Norm,
    Carleson,
    Compose,
    Distance,
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Norm => "norm",
            Task::Carleson => "carleson",
            Task::Compose => "compose",
            Task::Distance => "distance",
            Task::Verify => "verify",
        }
    }
}

/// One batch: a task, the specs it runs over, shared indices, and grids.
///
/// Unknown fields are rejected so a typo fails loudly instead of silently
/// running defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub task: Task,
    /// Task-specific operation selector; each task documents its set and
    /// its default.
    #[serde(default)]
    pub op: Option<String>,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub self_maps: Vec<SelfMapSpec>,
    #[serde(default)]
    pub densities: Vec<MeasureDensity>,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Second oscillation index for the invariant composition criterion;
    /// defaults to `eta`.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Derivative weight exponent where one applies; defaults to
    /// `(p + 1 - eta)/p`.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Level-set thresholds for distance profiles.
    #[serde(default)]
    pub epsilons: Vec<f64>,
    /// Verification suite name (verify task only).
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub grid: GridConfig,
    /// Output directory for the CSV/JSON pair; the `--out` flag overrides.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Recompute on doubled grids and append convergence columns; the
    /// `--refine` flag switches this on too.
    #[serde(default)]
    pub refine: bool,
}

fn default_p() -> f64 {
    2.0
}

fn default_eta() -> f64 {
    1.0
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<JobConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: JobConfig = serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!("config {}: {e}", path.display()))
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Field-level validation beyond what deserialization enforces.
    pub fn validate(&self) -> Result<(), CliError> {
        let field = |name: &str, msg: String| Err(CliError::Config(format!("field `{name}`: {msg}")));
        if !(self.p.is_finite() && self.p >= 1.0) {
            return field("p", format!("integrability index must be >= 1, got {}", self.p));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return field("eta", format!("oscillation index must be >= 0, got {}", self.eta));
        }
        if let Some(lambda) = self.lambda {
            if !(lambda.is_finite() && lambda > 0.0) {
                return field("lambda", format!("must be positive, got {lambda}"));
            }
        }
        if let Some(alpha) = self.alpha {
            if !(alpha.is_finite() && alpha > 0.0) {
                return field("alpha", format!("must be positive, got {alpha}"));
            }
        }
        for (k, eps) in self.epsilons.iter().enumerate() {
            if !(eps.is_finite() && *eps > 0.0) {
                return field("epsilons", format!("entry {k} must be positive, got {eps}"));
            }
        }
        for (k, f) in self.functions.iter().enumerate() {
            if let Err(e) = f.validate() {
                return field("functions", format!("entry {k}: {e}"));
            }
        }
        for (k, m) in self.densities.iter().enumerate() {
            if let Err(e) = m.validate() {
                return field("densities", format!("entry {k}: {e}"));
            }
        }
        // Self-maps certify on first use (the sweep is not free), but the
        // grid must construct for any task to run at all.
        if let Err(e) = self.grid.circle() {
            return field("grid", e.to_string());
        }
        if let Err(e) = self.grid.disk() {
            return field("grid", e.to_string());
        }
        if self.task == Task::Verify {
            if let Some(name) = &self.suite {
                crate::verify::parse_suite(name)?;
            }
        }
        Ok(())
    }
}
