//! Measurements on exact windows of an assembled dilation. Checks never
//! mutate their inputs and are deterministic given the seed.

mod certificate;
mod checks;
mod vectors;

use serde::{Deserialize, Serialize};

pub use certificate::{nonisomorphism_certificate, Certificate};
pub use checks::{
    check_criterion_identity, check_dilation_property, check_minimality, check_model_invariants, check_p_difference,
    check_powers_formula, check_q_contract, check_w_m_isometry, remark_consistency,
};

use crate::dilation::AssembledDilation;
use crate::error::Result;
use crate::tolerance::Tolerances;

pub const DEFAULT_SEED: u64 = 0xD11A710;
pub const DEFAULT_TRIALS: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Test-vector support and power budget.
    pub window: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, residual: f64, tolerance: f64, window: String) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            window,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn from_checks(checks: Vec<CheckResult>) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        Self { checks, overall }
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs every single-dilation check.
pub fn verify_dilation(w: &AssembledDilation, opts: VerifyOptions, tol: &Tolerances) -> Result<VerificationReport> {
    let m = w.m();
    let mut checks = Vec::new();
    if let Some(q) = check_q_contract(w, tol)? {
        checks.push(q);
    }
    checks.extend(check_model_invariants(w, tol)?);
    checks.push(check_dilation_property(w, w.layout().n_blocks, tol)?);
    checks.push(check_powers_formula(w, m, opts, tol)?);
    checks.push(check_w_m_isometry(w, m, opts, tol)?);
    checks.push(check_criterion_identity(w, opts, tol)?);
    checks.push(check_p_difference(w, tol));
    checks.push(check_minimality(w, tol));
    checks.push(remark_consistency(w, tol));
    Ok(VerificationReport::from_checks(checks))
}
