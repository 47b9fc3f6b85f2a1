//! Outcome of a randomized property check: trial counts, violations, worst
//! residual, and the seed that reproduces the run.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    ExpectedFailConfirmed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub trials: u64,
    pub violations: u64,
    /// Largest constraint violation observed (0 when every trial had slack);
    /// `violations == 0` iff this is within the check tolerance.
    pub worst_residual: f64,
    pub seed: u64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(
            self.status,
            CheckStatus::Pass | CheckStatus::ExpectedFailConfirmed
        )
    }
}

/// Accumulates residuals trial by trial. A residual is the raw amount by
/// which a constraint was missed (<= 0 means satisfied); violations count
/// residuals above the tolerance.
#[derive(Clone, Debug)]
pub struct ReportBuilder {
    check: String,
    instance: String,
    seed: u64,
    tol: f64,
    trials: u64,
    violations: u64,
    worst: f64,
    note: Option<String>,
}

impl ReportBuilder {
    pub fn new(check: &str, instance: &str, seed: u64, tol: f64) -> Self {
        ReportBuilder {
            check: check.to_string(),
            instance: instance.to_string(),
            seed,
            tol,
            trials: 0,
            violations: 0,
            worst: 0.0,
            note: None,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Record one trial with the given violation measure.
    pub fn record(&mut self, residual: f64) {
        self.trials += 1;
        let r = residual.max(0.0);
        if r > self.worst {
            self.worst = r;
        }
        if r > self.tol {
            self.violations += 1;
        }
    }

    /// Record a trial whose own tolerance differs from the report's:
    /// the residual is rescaled so that `violations == 0 iff worst <= tol`
    /// keeps holding for the report as a whole.
    pub fn record_scaled(&mut self, residual: f64, tol: f64) {
        let r = residual.max(0.0);
        self.record(r * (self.tol / tol));
    }

    /// Record a trial that checks `lhs >= rhs - tol`.
    pub fn record_lower_bound(&mut self, lhs: f64, rhs: f64) {
        if (lhs.is_infinite() && lhs > 0.0) || (rhs.is_infinite() && rhs < 0.0) {
            self.record(0.0);
        } else if lhs.is_infinite() || rhs.is_infinite() {
            // lhs = -inf with finite rhs, or rhs = +inf with finite lhs
            self.record(f64::INFINITY);
        } else {
            self.record(rhs - lhs);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub fn trials_so_far(&self) -> u64 {
        self.trials
    }

    pub fn violations_so_far(&self) -> u64 {
        self.violations
    }

    pub fn finish(self) -> CheckReport {
        let status = if self.violations == 0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.finish_with(status)
    }

    pub fn finish_inconclusive(mut self, why: &str) -> CheckReport {
        self.note = Some(why.to_string());
        self.finish_with(CheckStatus::Inconclusive)
    }

    fn finish_with(self, status: CheckStatus) -> CheckReport {
        CheckReport {
            check: self.check,
            instance: self.instance,
            trials: self.trials,
            violations: self.violations,
            worst_residual: self.worst,
            seed: self.seed,
            status,
            note: self.note,
        }
    }
}
