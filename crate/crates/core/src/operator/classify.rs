use serde::{Deserialize, Serialize};

use super::beta::{beta_on_window, ensure_order};
use super::OperatorCorner;
use crate::error::Result;
use crate::hermitian::psd_check;
use crate::tolerance::Tolerances;

/// One classification flag with the measurement that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub holds: bool,
    pub residual: f64,
}

/// Residuals are minimum eigenvalues (psd-type flags) or max-norms
/// (`m_isometric`), always taken on exact windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub m: usize,
    /// `β_1 ⪰ 0`.
    pub expansive: Predicate,
    /// `−β_m ⪰ 0`.
    pub m_concave: Predicate,
    /// `‖β_m‖_max ≤ tol`.
    pub m_isometric: Predicate,
    /// `Δ = β_{m−1} ⪰ 0`.
    pub delta_psd: Predicate,
    pub beta_m_window: usize,
}

pub fn classify(t: &OperatorCorner, m: usize, tol: &Tolerances) -> Result<Classification> {
    ensure_order(m)?;
    let beta_1 = beta_on_window(t, 1)?;
    let beta_m = beta_on_window(t, m)?;
    let delta = beta_on_window(t, m - 1)?;

    let psd = |c: crate::hermitian::PsdCheck| Predicate {
        holds: c.is_psd,
        residual: c.min_eig,
    };
    let expansive = psd(psd_check(&beta_1, tol.psd)?);
    let mut m_concave = psd(psd_check(&beta_m.neg(), tol.psd)?);
    let norm = beta_m.max_norm();
    let m_isometric = Predicate {
        holds: norm <= tol.remark,
        residual: norm,
    };
    // β_m = 0 within tolerance is concave by definition even if the
    // eigenvalue test of a larger window sees accumulated round-off.
    m_concave.holds |= m_isometric.holds;
    let delta_psd = psd(psd_check(&delta, tol.psd)?);

    Ok(Classification {
        m,
        expansive,
        m_concave,
        m_isometric,
        delta_psd,
        beta_m_window: beta_m.dim(),
    })
}
