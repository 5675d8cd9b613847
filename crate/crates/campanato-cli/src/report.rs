//! Report assembly and emission.
//!
//! A report is an ordered list of rows plus a provenance block.  The rows are
//! deterministic for a fixed config; provenance (wall time, tool version) is
//! not, so the CSV holds rows only and the determinism guarantee is
//! byte-identity of the CSV and of the JSON `rows` array.

use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use campanato::seminorm::{SeminormReport, Witness};
use campanato::GridConfig;

use crate::config::JobConfig;
use crate::CliError;

/// Row outcome. Batch rows are `ok`/`error`; verification rows are
/// `pass`/`fail`/`info`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
    Pass,
    Fail,
    Info,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Error => "error",
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

/// One computed quantity: the inputs that named it, the value, where it was
/// attained, and qualitative flags.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub index: usize,
    /// Input instance (function, self-map, density, or check subject).
    pub label: String,
    /// Operation or check that produced the value.
    pub op: String,
    pub p: f64,
    pub eta: f64,
    pub value: Option<f64>,
    /// Value on the doubled grid (refinement runs only).
    pub refined_value: Option<f64>,
    /// Relative change under refinement (absolute change when the base
    /// value vanishes).
    pub drift: Option<f64>,
    /// Compact witness: `arc(center,length)`, `point(re,im)`, or empty.
    pub witness: String,
    pub flags: Vec<String>,
    pub status: Status,
    /// Error message, check threshold, or auxiliary numbers.
    pub detail: String,
}

impl Row {
    pub fn new(index: usize, label: impl Into<String>, op: impl Into<String>) -> Row {
        Row {
            index,
            label: label.into(),
            op: op.into(),
            p: f64::NAN,
            eta: f64::NAN,
            value: None,
            refined_value: None,
            drift: None,
            witness: String::new(),
            flags: vec![],
            status: Status::Ok,
            detail: String::new(),
        }
    }

    pub fn with_indices(mut self, p: f64, eta: f64) -> Row {
        self.p = p;
        self.eta = eta;
        self
    }

    /// Copies value, witness, and flags out of a seminorm sweep.
    pub fn absorb(mut self, report: &SeminormReport) -> Row {
        self.value = Some(report.value);
        self.witness = render_witness(&report.witness);
        self.flags = report.flags.iter().map(|f| f.to_string()).collect();
        self
    }

    /// Records the refined value and the drift against the base value.
    pub fn refine(mut self, refined: f64) -> Row {
        let base = self.value.unwrap_or(0.0);
        self.refined_value = Some(refined);
        self.drift = Some(if base.abs() > 1e-12 {
            (refined - base).abs() / base.abs()
        } else {
            (refined - base).abs()
        });
        self
    }

    pub fn error(mut self, err: &campanato::Error) -> Row {
        self.status = Status::Error;
        self.detail = err.to_string();
        self
    }
}

pub fn render_witness(witness: &Witness) -> String {
    match witness {
        Witness::Arc { center, length } => format!("arc({center:.6},{length:.6})"),
        Witness::Point { z } => format!("point({:.6},{:.6})", z.re, z.im),
        Witness::None => String::new(),
    }
}

/// Grid parameters, tool version, and timing attached to a finished report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub task: String,
    pub grid: GridConfig,
    pub refine: bool,
    pub wall_ms: u128,
}

#[derive(Debug, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(rows: Vec<Row>) -> Report {
        Report {
            provenance: None,
            rows,
        }
    }

    pub fn with_provenance(mut self, config: &JobConfig, elapsed: Duration) -> Report {
        self.provenance = Some(Provenance {
            tool: format!("campanato {}", env!("CARGO_PKG_VERSION")),
            task: config.task.name().to_string(),
            grid: config.grid,
            refine: config.refine,
            wall_ms: elapsed.as_millis(),
        });
        self
    }

    pub fn failure_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == Status::Fail)
            .count()
    }

    /// Human-readable table for stdout: one line per row.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let value = row
                .value
                .map(|v| format!("{v:.6e}"))
                .unwrap_or_else(|| "-".into());
            let mut line = format!(
                "{:>4}  {:<6} {:<24} {:<28} {}",
                row.index,
                row.status.as_str(),
                row.op,
                row.label,
                value
            );
            if let (Some(refined), Some(drift)) = (row.refined_value, row.drift) {
                line.push_str(&format!("  refined={refined:.6e} drift={drift:.3e}"));
            }
            if !row.flags.is_empty() {
                line.push_str(&format!("  [{}]", row.flags.join("|")));
            }
            if !row.detail.is_empty() {
                line.push_str(&format!("  {}", row.detail));
            }
            out.push_str(&line);
            out.push('\n');
        }
        if let Some(p) = &self.provenance {
            out.push_str(&format!(
                "# {} task={} rows={} wall={}ms\n",
                p.tool,
                p.task,
                self.rows.len(),
                p.wall_ms
            ));
        }
        out
    }

    /// Rows only — deterministic for a fixed config.
    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let mut writer = csv::Writer::from_path(path)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
        writer
            .write_record([
                "index", "label", "op", "p", "eta", "value", "refined_value", "drift", "witness",
                "flags", "status", "detail",
            ])
            .map_err(|e| CliError::Internal(e.to_string()))?;
        for row in &self.rows {
            let record = [
                row.index.to_string(),
                row.label.clone(),
                row.op.clone(),
                float_field(row.p),
                float_field(row.eta),
                row.value.map(float_field).unwrap_or_default(),
                row.refined_value.map(float_field).unwrap_or_default(),
                row.drift.map(float_field).unwrap_or_default(),
                row.witness.clone(),
                row.flags.join("|"),
                row.status.as_str().to_string(),
                row.detail.clone(),
            ];
            writer
                .write_record(&record)
                .map_err(|e| CliError::Internal(e.to_string()))?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Full report including provenance.
    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// Shortest round-trip decimal form (std float Display); NaN marks an unset
/// index and renders empty.
fn float_field(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}
