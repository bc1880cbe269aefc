//! Nonnegative solutions of `T*QT = Q` dominating `Δ = β_{m−1}(T)`.
//!
//! Two regimes are supported: scalar weighted shifts, where the minimal
//! diagonal solution follows from the backward recurrence
//! `q_n = w_{n+1}² q_{n+1}`, and finite invertible operators, where
//! `X ↦ T^{−*} X T^{−1}` is iterated from `Δ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{eigh, inverse, psd_check, ComplexMatrix, HermitianMatrix};
use crate::operator::{ExactWindow, OperatorCorner, WeightRule};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QMethod {
    DiagonalShift,
    FixedPoint,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QSolution {
    pub q: HermitianMatrix,
    pub method: QMethod,
    /// `q_0..q_horizon` for the diagonal method.
    pub q_seq: Option<Vec<f64>>,
    /// `‖T*QT − Q‖_max` on the window.
    pub stein_residual: f64,
    /// `λ_min(Q − Δ)` on the window.
    pub dominance_residual: f64,
    pub iterations: usize,
    /// Smallest `λ_min(Q_{k+1} − Q_k)` seen by the fixed-point iteration.
    pub monotone_defect: Option<f64>,
    pub window: ExactWindow,
}

impl QSolution {
    pub fn q0(&self) -> Option<f64> {
        self.q_seq.as_ref().and_then(|s| s.first().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QResiduals {
    pub stein: f64,
    pub dominance: f64,
}

/// Measures the contract `T*QT = Q ⪰ Δ` on `window`.
pub fn verify_q(
    t: &OperatorCorner,
    q: &HermitianMatrix,
    delta: &HermitianMatrix,
    window: ExactWindow,
) -> Result<QResiduals> {
    let n = t.dim();
    let w = window.valid_dim;
    if q.dim() != n || delta.dim() < w || w > n {
        return Err(Error::DimensionMismatch(format!(
            "T is {n}×{n}, Q is {0}×{0}, Δ is {1}×{1}, window {w}",
            q.dim(),
            delta.dim()
        )));
    }
    let stein = (&q.as_matrix().congruence(t.matrix()) - q.as_matrix())
        .leading(w)
        .max_norm();
    let gap = q.leading(w).sub(&delta.leading(w));
    let dominance = eigh(&gap)?.min_value().unwrap_or(0.0);
    Ok(QResiduals { stein, dominance })
}

/// Minimal diagonal `Q` for the scalar shift with weights from `rule`.
///
/// `delta_diag` holds `δ_0..δ_horizon` (at least `horizon + 1` values); the
/// returned `Q` is the leading `dim × dim` block of `diag(q_n)`. With
/// `q0_override`, the plateau test is skipped and the override only has to
/// dominate `δ_n Π_{j≤n} w_j²` over the horizon.
pub fn solve_q_shift_diagonal(
    rule: &WeightRule,
    delta_diag: &[f64],
    horizon: usize,
    dim: usize,
    q0_override: Option<f64>,
    tol: &Tolerances,
) -> Result<QSolution> {
    rule.validate()?;
    let weights_sq: Vec<f64> = (1..=horizon).map(|j| rule.weight_sq(j)).collect();
    let t = OperatorCorner::shift(rule.clone(), dim)?;
    solve_diagonal(&t, &weights_sq, delta_diag, horizon, q0_override, tol)
}

fn solve_diagonal(
    t: &OperatorCorner,
    weights_sq: &[f64],
    delta_diag: &[f64],
    horizon: usize,
    q0_override: Option<f64>,
    tol: &Tolerances,
) -> Result<QSolution> {
    let dim = t.dim();
    if delta_diag.len() <= horizon || dim > horizon + 1 {
        return Err(Error::DimensionMismatch(format!(
            "need δ_0..δ_{horizon} and dim ≤ {}, got {} values and dim {dim}",
            horizon + 1,
            delta_diag.len()
        )));
    }
    let delta = &delta_diag[..=horizon];
    let scale = delta.iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let floor = -tol.psd * (1.0 + scale);
    if let Some((n, d)) = delta.iter().enumerate().find(|(_, &d)| d < floor) {
        return Err(Error::Precondition(format!(
            "δ_{n} = {d:.6e} is below {floor:.3e}: Δ is not nonnegative"
        )));
    }

    // cumulative[n] = Π_{j=1}^{n} w_j²
    let mut cumulative = Vec::with_capacity(horizon + 1);
    cumulative.push(1.0);
    for w2 in &weights_sq[..horizon] {
        let last = *cumulative.last().unwrap();
        cumulative.push(last * w2);
    }
    let products: Vec<f64> = delta
        .iter()
        .zip(&cumulative)
        .map(|(d, c)| d.max(0.0) * c)
        .collect();
    let sup = products.iter().copied().fold(0.0, f64::max);

    let q0 = match q0_override {
        Some(q0) => {
            if !(q0.is_finite() && q0 >= sup * (1.0 - tol.plateau)) {
                return Err(Error::Precondition(format!(
                    "q0 override {q0} does not dominate sup δ_n Π w_j² = {sup}"
                )));
            }
            q0
        }
        None => {
            plateau_test(&products, tol.plateau)?;
            sup
        }
    };

    let q_seq: Vec<f64> = cumulative.iter().map(|c| q0 / c).collect();
    let q = HermitianMatrix::from_real_diagonal(&q_seq[..dim]);
    let delta_m = HermitianMatrix::from_real_diagonal(&delta[..dim]);
    let window = t.window_after(1)?;
    let res = verify_q(t, &q, &delta_m, window)?;
    let method = if q0 == 0.0 {
        QMethod::Zero
    } else {
        QMethod::DiagonalShift
    };
    Ok(QSolution {
        q,
        method,
        q_seq: Some(q_seq),
        stein_residual: res.stein,
        dominance_residual: res.dominance,
        iterations: 0,
        monotone_defect: None,
        window,
    })
}

/// Running maximum of `products` must stop rising (by more than the
/// relative `plateau` tolerance) within the first half of the horizon; in
/// particular it stays flat over the last quarter.
fn plateau_test(products: &[f64], plateau: f64) -> Result<()> {
    let horizon = products.len() - 1;
    let mut running = 0.0f64;
    let mut last_rise = None;
    for (n, &v) in products.iter().enumerate() {
        if v > 0.0 && v > running * (1.0 + plateau) {
            last_rise = Some(n);
        }
        running = running.max(v);
    }
    match last_rise {
        Some(n) if n > horizon / 2 => Err(Error::Q0Unbounded(format!(
            "running maximum of δ_n Π w_j² still rising at n = {n} of horizon {horizon}"
        ))),
        _ => Ok(()),
    }
}

/// Monotone fixed-point iteration `Q_{k+1} = T^{−*} Q_k T^{−1}` from `Q_0 = Δ`
/// for a finite invertible `T`.
pub fn solve_q_fixed_point(
    t: &OperatorCorner,
    delta: &HermitianMatrix,
    tol: &Tolerances,
    max_iter: usize,
) -> Result<QSolution> {
    if t.is_exact() {
        return Err(Error::Precondition(
            "fixed-point solver needs a finite-dimensional operator".into(),
        ));
    }
    let n = t.dim();
    if delta.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "Δ is {0}×{0}, T is {n}×{n}",
            delta.dim()
        )));
    }
    let d = psd_check(delta, tol.psd)?;
    if !d.is_psd {
        return Err(Error::NotPsd {
            min_eig: d.min_eig,
            threshold: -tol.psd * (1.0 + delta.max_norm()),
        });
    }
    let contraction = delta.sub(&HermitianMatrix::symmetrize(delta.as_matrix().congruence(t.matrix())));
    let c = psd_check(&contraction, tol.psd)?;
    if !c.is_psd {
        return Err(Error::Precondition(format!(
            "T*ΔT ⪯ Δ fails: λ_min(Δ − T*ΔT) = {:.6e}",
            c.min_eig
        )));
    }
    let t_inv = inverse(t.matrix())?;
    let inv_norm_sq = eigh(&HermitianMatrix::symmetrize(t_inv.adjoint_mul(&t_inv)))?
        .max_value()
        .unwrap_or(0.0);
    if inv_norm_sq.sqrt() > 1.0 + tol.psd {
        return Err(Error::Precondition(format!(
            "‖T^(-1)‖ = {:.6e} exceeds 1: T is not expansive",
            inv_norm_sq.sqrt()
        )));
    }

    let mut q = delta.clone();
    let mut monotone = f64::INFINITY;
    let mut iterations = 0;
    loop {
        if iterations >= max_iter {
            let next = HermitianMatrix::symmetrize(q.as_matrix().congruence(&t_inv));
            return Err(Error::FixedPointDiverged {
                iterations,
                step: next.sub(&q).max_norm(),
            });
        }
        let next = HermitianMatrix::symmetrize(q.as_matrix().congruence(&t_inv));
        let diff = next.sub(&q);
        monotone = monotone.min(eigh(&diff)?.min_value().unwrap_or(0.0));
        let step = diff.max_norm();
        q = next;
        iterations += 1;
        if step <= tol.fixed_point * (1.0 + q.max_norm()) {
            break;
        }
    }

    let window = ExactWindow { valid_dim: n };
    let res = verify_q(t, &q, delta, window)?;
    let method = if q.max_norm() == 0.0 {
        QMethod::Zero
    } else {
        QMethod::FixedPoint
    };
    Ok(QSolution {
        q,
        method,
        q_seq: None,
        stein_residual: res.stein,
        dominance_residual: res.dominance,
        iterations,
        monotone_defect: Some(monotone),
        window,
    })
}

/// Checks the advertised tolerances of a solution.
pub fn contract_holds(sol: &QSolution, tol: &Tolerances) -> bool {
    let scale = 1.0 + sol.q.max_norm();
    sol.stein_residual <= tol.stein * scale && sol.dominance_residual >= -tol.psd * scale
}

pub(crate) fn zero_solution(dim: usize, window: ExactWindow) -> QSolution {
    QSolution {
        q: HermitianMatrix::symmetrize(ComplexMatrix::zeros(dim, dim)),
        method: QMethod::Zero,
        q_seq: None,
        stein_residual: 0.0,
        dominance_residual: 0.0,
        iterations: 0,
        monotone_defect: None,
        window,
    }
}
