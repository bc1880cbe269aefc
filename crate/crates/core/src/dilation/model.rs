use serde::{Deserialize, Serialize};

use super::polynomial::{build_p_and_weights, ShiftWeights};
use super::representing::{build_a_general, build_a_three_concave, RepresentingOperator};
use crate::error::{Error, Result};
use crate::hermitian::{pinv_sqrt, psd_check, sqrt_psd, ComplexMatrix, HermitianMatrix};
use crate::operator::{beta_form, beta_on_window, ExactWindow, OperatorCorner};
use crate::qsolver::QSolution;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DilationPath {
    /// Expansive m-concave `T` with a solution of `T*QT = Q ⪰ β_{m−1}(T)`.
    GeneralM,
    /// 3-concave `T` with `β_2(T) ⪰ 0`; no `Q` needed.
    ThreeConcave,
    /// Expansive 2-concave `T`, `U′ = (Q − β_1(T))^{1/2}` and identity weights.
    Badea2Iso,
}

impl DilationPath {
    pub const NAMES: [&'static str; 3] = ["general_m", "three_concave", "badea_2iso"];

    pub fn name(self) -> &'static str {
        match self {
            Self::GeneralM => "general_m",
            Self::ThreeConcave => "three_concave",
            Self::Badea2Iso => "badea_2iso",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "general_m" => Some(Self::GeneralM),
            "three_concave" => Some(Self::ThreeConcave),
            "badea_2iso" => Some(Self::Badea2Iso),
            _ => None,
        }
    }
}

/// Everything the dilation needs besides the weights. Forms on `H` live on
/// `window`; operators on `H′` are in `hprime_basis` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationModel {
    pub m: usize,
    pub path: DilationPath,
    pub t: OperatorCorner,
    /// `Δ = β_{m−1}(T)` on the window.
    pub delta: HermitianMatrix,
    /// `β_m(T)` on the window.
    pub beta_m: HermitianMatrix,
    pub q: Option<QSolution>,
    /// `U: H → H′`, `dim H′ × N`, zero outside the window.
    pub u: ComplexMatrix,
    pub hprime_basis: ComplexMatrix,
    pub a: HermitianMatrix,
    /// `(I − A)^{1/2}`.
    pub b: HermitianMatrix,
    pub p_coeffs: Vec<HermitianMatrix>,
    pub ratio_bound_c: f64,
    pub rayleigh_bound: f64,
    pub welldef_residual: f64,
    pub window: ExactWindow,
}

impl DilationModel {
    pub fn hprime_dim(&self) -> usize {
        self.hprime_basis.cols()
    }

    pub fn h_dim(&self) -> usize {
        self.t.dim()
    }

    /// Coordinates `0..h_support()` of `H` on which every identity involving
    /// up to `m` applications of `T` is exact.
    pub fn h_support(&self) -> Result<usize> {
        let lost = self.m * if self.t.is_exact() { self.t.bandwidth() } else { 0 };
        let w = self.window.valid_dim;
        if lost >= w {
            return Err(Error::WindowExhausted { size: w, lost });
        }
        Ok(w - lost)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    m: usize,
    path: DilationPath,
    t: &OperatorCorner,
    delta: HermitianMatrix,
    beta_m: HermitianMatrix,
    q: Option<QSolution>,
    rep: RepresentingOperator,
    window: ExactWindow,
    horizon: usize,
    tol: &Tolerances,
) -> Result<(DilationModel, ShiftWeights)> {
    let r = rep.hprime_dim();
    let pw = build_p_and_weights(&rep.a, m, horizon, tol)?;
    let b = sqrt_psd(&HermitianMatrix::identity(r).sub(&rep.a), tol.psd)?;
    let model = DilationModel {
        m,
        path,
        t: t.clone(),
        delta,
        beta_m,
        q,
        u: rep.embedding(t.dim()),
        hprime_basis: rep.hprime_basis,
        a: rep.a,
        b,
        p_coeffs: pw.p_coeffs,
        ratio_bound_c: pw.ratio_bound_c,
        rayleigh_bound: pw.rayleigh_bound,
        welldef_residual: rep.welldef_residual,
        window,
    };
    Ok((model, pw.weights))
}

/// General path: `U = Q^{1/2}`, `A` represents `β_m` relative to `Q`, and
/// the weights come from `p(z) = binom(z, m−1)(−A) + I`.
///
/// `horizon` is the number of weights `S_1..S_horizon` produced.
pub fn general_model(
    t: &OperatorCorner,
    m: usize,
    q: QSolution,
    horizon: usize,
    tol: &Tolerances,
) -> Result<(DilationModel, ShiftWeights)> {
    if m < 2 {
        return Err(Error::Precondition(format!("general path needs m ≥ 2, got {m}")));
    }
    if q.q.dim() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Q is {0}×{0}, T is {1}×{1}",
            q.q.dim(),
            t.dim()
        )));
    }
    let (beta_full, window) = beta_form(t, m)?;
    let beta_m = window.restrict(&beta_full);
    let delta = window.restrict(&beta_on_window(t, m - 1)?);
    let rep = build_a_general(&q, &beta_full, window, tol)?;
    finish(m, DilationPath::GeneralM, t, delta, beta_m, Some(q), rep, window, horizon, tol)
}

/// 3-concave path: `U = Δ^{1/2}` with `Δ = β_2(T)`, `A` represents
/// `T*β_3(T)T` relative to `Δ`.
pub fn three_concave_model(
    t: &OperatorCorner,
    horizon: usize,
    tol: &Tolerances,
) -> Result<(DilationModel, ShiftWeights)> {
    let window = t.window_after(4)?;
    let (delta_full, _) = beta_form(t, 2)?;
    let delta = window.restrict(&delta_full);
    let d = psd_check(&delta, tol.psd)?;
    if !d.is_psd {
        return Err(Error::Precondition(format!(
            "three_concave path needs β_2(T) ⪰ 0, λ_min = {:.6e}",
            d.min_eig
        )));
    }
    let beta_m = window.restrict(&beta_form(t, 3)?.0);
    let c = psd_check(&beta_m.neg(), tol.psd)?;
    if !c.is_psd {
        return Err(Error::Precondition(format!(
            "three_concave path needs β_3(T) ⪯ 0, λ_max = {:.6e}",
            -c.min_eig
        )));
    }
    let rep = build_a_three_concave(t, &delta_full, window, tol)?;
    finish(3, DilationPath::ThreeConcave, t, delta, beta_m, None, rep, window, horizon, tol)
}

/// Reference 2-isometric dilation: `U′ = (Q − β_1(T))^{1/2}`, all weights `I`.
///
/// The model reports `A = 0`, `B = I` and `p ≡ I`, which is what the general
/// construction produces for identity weights.
pub fn badea_model(
    t: &OperatorCorner,
    q: QSolution,
    horizon: usize,
    tol: &Tolerances,
) -> Result<(DilationModel, ShiftWeights)> {
    if q.q.dim() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Q is {0}×{0}, T is {1}×{1}",
            q.q.dim(),
            t.dim()
        )));
    }
    let window = t.window_after(2)?;
    let delta = window.restrict(&beta_on_window(t, 1)?);
    let beta_m = window.restrict(&beta_on_window(t, 2)?);
    let gap = window.restrict(&q.q).sub(&delta);
    let root = sqrt_psd(&gap, tol.psd)?;
    let range = pinv_sqrt(&gap, tol.rank, tol.psd)?.range_basis;
    let r = range.cols();
    let rep = RepresentingOperator {
        a: HermitianMatrix::zeros(r),
        hprime_basis: range,
        root,
        welldef_residual: 0.0,
    };
    let model = DilationModel {
        m: 2,
        path: DilationPath::Badea2Iso,
        t: t.clone(),
        delta,
        beta_m,
        q: Some(q),
        u: rep.embedding(t.dim()),
        hprime_basis: rep.hprime_basis,
        a: rep.a,
        b: HermitianMatrix::identity(r),
        p_coeffs: vec![HermitianMatrix::identity(r), HermitianMatrix::zeros(r)],
        ratio_bound_c: 2.0,
        rayleigh_bound: 2.0,
        welldef_residual: 0.0,
        window,
    };
    Ok((model, ShiftWeights::identity(r, horizon)))
}
