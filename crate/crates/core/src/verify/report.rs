//! Structured results of the verification checks.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::basis::TruncationWindow;
use crate::error::Result;
use crate::params::DeformationParams;

/// Outcome of one check.
///
/// `pass` compares the residual to the tolerance. Whether that outcome is
/// the desired one depends on the role: an asserted check must pass, a
/// negative control must fail, and a report-only check is informational.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub id: String,
    pub window: String,
    pub q: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Norm of the amplitude that left the window in excluded columns.
    pub leakage: f64,
    /// Window indices dropped from the comparison.
    pub excluded_rows: usize,
    /// Window indices the comparison ran over.
    pub interior: usize,
    pub asserted: bool,
    pub control: bool,
    /// Largest normalized discrepancy between the sparse and dense paths,
    /// for windows small enough to build dense products.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense_agreement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResidualReport {
    pub(crate) fn new(id: impl Into<String>, w: &TruncationWindow, p: &DeformationParams, tol: f64) -> Self {
        Self {
            id: id.into(),
            window: w.to_string(),
            q: p.q(),
            residual: 0.0,
            tolerance: tol,
            pass: true,
            leakage: 0.0,
            excluded_rows: 0,
            interior: 0,
            asserted: true,
            control: false,
            dense_agreement: None,
            note: None,
        }
    }

    pub(crate) fn finish(mut self, residual: f64) -> Self {
        self.residual = residual;
        self.pass = residual <= self.tolerance;
        self
    }

    pub(crate) fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub(crate) fn as_control(mut self) -> Self {
        self.control = true;
        self
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// The check behaved as required: asserted checks pass, controls fail.
    pub fn satisfied(&self) -> bool {
        match (self.asserted, self.control) {
            (false, _) => true,
            (true, false) => self.pass,
            (true, true) => !self.pass,
        }
    }

    pub fn outcome(&self) -> &'static str {
        match (self.asserted, self.control, self.pass) {
            (false, _, true) => "info-pass",
            (false, _, false) => "info-fail",
            (true, false, true) => "pass",
            (true, false, false) => "FAIL",
            (true, true, false) => "control-failed-as-expected",
            (true, true, true) => "CONTROL-PASSED",
        }
    }
}

/// Resolved configuration copied into every suite report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub q: f64,
    pub r0: f64,
    pub theta_phase: [f64; 2],
    pub window: String,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: RunSummary,
    pub pass: bool,
    pub checks: Vec<ResidualReport>,
}

impl SuiteReport {
    pub fn new(suite: &str, w: &TruncationWindow, p: &DeformationParams, tol: f64, checks: Vec<ResidualReport>) -> Self {
        let phase = p.theta_phase();
        Self {
            suite: suite.to_string(),
            config: RunSummary {
                q: p.q(),
                r0: p.r0(),
                theta_phase: [phase.re, phase.im],
                window: w.to_string(),
                tolerance: tol,
            },
            pass: checks.iter().all(ResidualReport::satisfied),
            checks,
        }
    }

    pub fn check(&self, id: &str) -> Option<&ResidualReport> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<dir>/<suite>.json` and returns the path.
    pub fn write_to_dir(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.json", self.suite));
        let mut f = std::fs::File::create(&path)?;
        f.write_all(self.to_json()?.as_bytes())?;
        f.write_all(b"\n")?;
        Ok(path)
    }
}
