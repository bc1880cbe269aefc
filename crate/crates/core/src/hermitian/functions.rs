use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::{eigh, EigenDecomposition, HermitianMatrix};
use crate::error::{Error, Result};

/// `V·diag(f(λ))·V*`.
pub fn spectral_map(e: &EigenDecomposition, f: impl Fn(f64) -> f64) -> HermitianMatrix {
    let n = e.dim();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| e.basis[(i, j)] * f(e.values[j]));
    HermitianMatrix::symmetrize(scaled.matmul(&e.basis.adjoint()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    pub is_psd: bool,
    /// Smallest eigenvalue; 0 for the empty matrix.
    pub min_eig: f64,
}

/// `is_psd ⇔ λ_min ≥ −tol·(1 + ‖X‖_max)`.
pub fn psd_check(x: &HermitianMatrix, tol: f64) -> Result<PsdCheck> {
    let min_eig = eigh(x)?.min_value().unwrap_or(0.0);
    Ok(PsdCheck {
        is_psd: min_eig >= -tol * (1.0 + x.max_norm()),
        min_eig,
    })
}

fn ensure_psd(e: &EigenDecomposition, x: &HermitianMatrix, psd_tol: f64) -> Result<()> {
    let threshold = psd_tol * (1.0 + x.max_norm());
    match e.min_value() {
        Some(min_eig) if min_eig < -threshold => Err(Error::NotPsd {
            min_eig,
            threshold: -threshold,
        }),
        _ => Ok(()),
    }
}

/// Principal square root. Negative eigenvalues within `psd_tol` are clamped
/// to zero; anything more negative is an error.
pub fn sqrt_psd(x: &HermitianMatrix, psd_tol: f64) -> Result<HermitianMatrix> {
    let e = eigh(x)?;
    ensure_psd(&e, x, psd_tol)?;
    Ok(spectral_map(&e, |l| l.max(0.0).sqrt()))
}

/// Pseudo-inverse square root together with the numerical range.
#[derive(Debug, Clone, PartialEq)]
pub struct PinvSqrt {
    /// `X^{+1/2}`: inverse square root on the numerical range, zero on the kernel.
    pub inv_sqrt: HermitianMatrix,
    /// Orthogonal projector onto the numerical range.
    pub projector: HermitianMatrix,
    pub rank: usize,
    /// Orthonormal columns spanning the numerical range, in canonical order
    /// (see [`canonical_order`]).
    pub range_basis: ComplexMatrix,
}

/// Eigenvalues `λ ≤ rank_tol·max(λ_max, 1)` count as kernel.
///
/// The absolute floor keeps round-off sized matrices (e.g. `T*T − I` of a
/// unitary `T`) from being promoted to full rank.
pub fn pinv_sqrt(x: &HermitianMatrix, rank_tol: f64, psd_tol: f64) -> Result<PinvSqrt> {
    let e = eigh(x)?;
    ensure_psd(&e, x, psd_tol)?;
    let n = e.dim();
    let cutoff = rank_tol * e.max_value().unwrap_or(0.0).max(1.0);
    let kept: Vec<usize> = (0..n).filter(|&j| e.values[j] > cutoff).collect();

    let inv_sqrt = spectral_map(&e, |l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let projector = spectral_map(&e, |l| if l > cutoff { 1.0 } else { 0.0 });
    let raw = ComplexMatrix::from_fn(n, kept.len(), |i, j| e.basis[(i, kept[j])]);
    Ok(PinvSqrt {
        inv_sqrt,
        projector,
        rank: kept.len(),
        range_basis: canonical_order(&raw),
    })
}

/// Orders orthonormal columns by the row index of their dominant entry and
/// rotates each column's phase so that entry is real and positive.
///
/// For diagonal inputs the range basis then consists of coordinate vectors
/// in increasing order, so auxiliary-space coordinates line up with the
/// coordinates of the underlying space.
pub fn canonical_order(basis: &ComplexMatrix) -> ComplexMatrix {
    let (n, k) = (basis.rows(), basis.cols());
    let mut keyed: Vec<(usize, usize)> = (0..k)
        .map(|j| {
            let col = basis.column(j);
            let big = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let lead = col
                .iter()
                .position(|z| z.norm() >= big * (1.0 - 1e-9))
                .unwrap_or(0);
            (lead, j)
        })
        .collect();
    keyed.sort();
    let mut out = ComplexMatrix::zeros(n, k);
    for (new_j, &(lead, old_j)) in keyed.iter().enumerate() {
        let pivot = basis[(lead, old_j)];
        let phase = if pivot.norm() > 0.0 {
            (pivot / pivot.norm()).conj()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            out[(i, new_j)] = basis[(i, old_j)] * phase;
        }
    }
    out
}

/// `Σ_k coeffs[k]·n^k` for pairwise commuting Hermitian coefficients.
pub fn poly_eval(coeffs: &[HermitianMatrix], n: i64, comm_tol: f64) -> Result<HermitianMatrix> {
    let dim = coeffs.first().map_or(0, HermitianMatrix::dim);
    if coeffs.iter().any(|c| c.dim() != dim) {
        return Err(Error::DimensionMismatch("polynomial coefficients differ in size".into()));
    }
    for (i, a) in coeffs.iter().enumerate() {
        for b in &coeffs[i + 1..] {
            let defect = a.as_matrix().commutator_max(b.as_matrix());
            if defect > comm_tol * (1.0 + a.max_norm() * b.max_norm()) {
                return Err(Error::NotCommuting { defect });
            }
        }
    }
    let mut acc = ComplexMatrix::zeros(dim, dim);
    let mut power: i128 = 1;
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = power
                .checked_mul(n as i128)
                .ok_or_else(|| Error::Precondition(format!("{n}^{k} overflows")))?;
        }
        acc = &acc + &c.as_matrix().scale_real(power as f64);
    }
    Ok(HermitianMatrix::symmetrize(acc))
}
