use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Outcome of one mechanical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(rename = "check-name")]
    pub check: String,
    pub samples: usize,
    #[serde(rename = "max-deviation")]
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, samples: usize, max_deviation: f64, tolerance: f64) -> Self {
        VerificationReport {
            check: check.into(),
            samples,
            max_deviation,
            tolerance,
            // NaN never passes
            pass: max_deviation <= tolerance,
        }
    }
}

/// Running maximum of per-sample deviations. NaN counts as infinite.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Deviation {
    pub samples: usize,
    pub max: f64,
}

impl Deviation {
    pub fn record(&mut self, d: f64) {
        self.samples += 1;
        let d = if d.is_nan() { f64::INFINITY } else { d };
        if d > self.max {
            self.max = d;
        }
    }

    /// Folds a multi-part check into one sample.
    pub fn record_all(&mut self, parts: impl IntoIterator<Item = f64>) {
        let worst = parts
            .into_iter()
            .map(|d| if d.is_nan() { f64::INFINITY } else { d })
            .fold(0.0, f64::max);
        self.record(worst);
    }

    pub fn into_report(self, check: impl Into<String>, tolerance: f64) -> VerificationReport {
        VerificationReport::new(check, self.samples, self.max, tolerance)
    }
}

/// Fixed-width table, one line per report.
pub fn format_report_table(reports: &[VerificationReport]) -> String {
    let width = reports.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>8}  {:>13}  {:>9}  result",
        "check", "samples", "max-deviation", "tolerance"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:>13.3e}  {:>9.1e}  {}",
            r.check,
            r.samples,
            r.max_deviation,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
    out
}
