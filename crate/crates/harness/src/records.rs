//! Record tables and result emission.
//!
//! `records.csv` holds the deterministic science columns only (fixed column
//! order, `%.15e` formatting): a fixed seed and thread count reproduce it
//! byte for byte. Wall-clock timings go to `summary.json`.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::Experiment;
use crate::HarnessError;

/// Fixed-schema numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Records {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Records {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        assert!(
            row.iter().all(|v| v.is_finite()),
            "NaN/inf rows are logged separately, never recorded"
        );
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.15e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// One pass/fail line of an experiment report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Everything an experiment produces.
#[derive(Debug, Clone)]
pub struct Report {
    pub experiment: Experiment,
    pub checks: Vec<CheckLine>,
    pub records: Records,
    /// Fitted slopes, measured constants, run metadata.
    pub summary: Map<String, Value>,
    /// Excluded rows (precondition violations), with reasons.
    pub excluded: Vec<String>,
    /// `(label, milliseconds)` timings; summary-only, never in the CSV.
    pub runtimes_ms: Vec<(String, f64)>,
    /// Optional gnuplot blocks: `(label, points)`.
    pub plot_blocks: Vec<(String, Vec<(f64, f64)>)>,
    /// Extra files to place next to the records (snapshots, manifests).
    pub artifacts: Vec<(String, Vec<u8>)>,
}

impl Report {
    pub fn new(experiment: Experiment, records: Records) -> Self {
        Self {
            experiment,
            checks: Vec::new(),
            records,
            summary: Map::new(),
            excluded: Vec::new(),
            runtimes_ms: Vec::new(),
            plot_blocks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine::new(name, pass, detail));
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn summary_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "verdict": if c.pass { "PASS" } else { "FAIL" },
                    "detail": c.detail,
                })
            })
            .collect();
        let runtimes: Vec<Value> = self
            .runtimes_ms
            .iter()
            .map(|(label, ms)| json!({ "label": label, "ms": ms }))
            .collect();
        let mut root = Map::new();
        root.insert("experiment".into(), json!(self.experiment.tag()));
        root.insert(
            "verdict".into(),
            json!(if self.pass() { "PASS" } else { "FAIL" }),
        );
        root.insert("checks".into(), Value::Array(checks));
        root.insert("excluded".into(), json!(self.excluded));
        for (k, v) in &self.summary {
            root.insert(k.clone(), v.clone());
        }
        root.insert("runtimes_ms".into(), Value::Array(runtimes));
        Value::Object(root)
    }

    fn plot_dat(&self) -> String {
        let mut out = String::new();
        for (label, points) in &self.plot_blocks {
            out.push_str(&format!("# {label}\n"));
            for (x, y) in points {
                out.push_str(&format!("{x:.15e} {y:.15e}\n"));
            }
            out.push('\n');
        }
        out
    }

    /// Write `records.csv`, `summary.json` and (when requested) `plot.dat`.
    pub fn write(&self, out_dir: &Path, emit_plot: bool) -> Result<(), HarnessError> {
        fs::create_dir_all(out_dir)?;
        fs::write(out_dir.join("records.csv"), self.records.to_csv())?;
        let summary = serde_json::to_string_pretty(&self.summary_json())
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        fs::write(out_dir.join("summary.json"), summary)?;
        if emit_plot && !self.plot_blocks.is_empty() {
            fs::write(out_dir.join("plot.dat"), self.plot_dat())?;
        }
        for (name, bytes) in &self.artifacts {
            fs::write(out_dir.join(name), bytes)?;
        }
        Ok(())
    }

    /// Human-readable verdict lines, one per check.
    pub fn print_checks(&self) {
        for c in &self.checks {
            println!(
                "[{}] {} — {}: {}",
                if c.pass { "PASS" } else { "FAIL" },
                self.experiment.tag(),
                c.name,
                c.detail
            );
        }
        for e in &self.excluded {
            println!("[SKIP] {} — {}", self.experiment.tag(), e);
        }
    }
}
