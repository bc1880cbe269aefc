//! Self-contained dense complex linear algebra: Hermitian wrapper, Jacobi
//! eigendecomposition, and the spectral functions the construction needs.

mod functions;
mod jacobi;
mod lu;
mod matrix;
mod rank;

pub use functions::{pinv_sqrt, poly_eval, psd_check, spectral_map, sqrt_psd, PinvSqrt, PsdCheck};
pub use jacobi::{eigh, eigh_with, JacobiOptions};
pub use lu::inverse;
pub use matrix::{ComplexMatrix, C64};
pub use rank::numerical_rank;

pub(crate) use matrix::{vec_dot, vec_norm_sqr};

use crate::error::{Error, Result};

/// A square matrix known to be self-adjoint, stored as `(X + X*)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    base: ComplexMatrix,
    hermit_defect: f64,
}

impl HermitianMatrix {
    /// Wraps `x`, failing when `‖X − X*‖_max > herm_tol·(1 + ‖X‖_max)`.
    pub fn new(x: ComplexMatrix, herm_tol: f64) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}×{}",
                x.rows(),
                x.cols()
            )));
        }
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = x.hermitian_defect();
        let threshold = herm_tol * (1.0 + x.max_norm());
        if defect > threshold {
            return Err(Error::NotHermitian { defect, threshold });
        }
        Ok(Self::symmetrize(x))
    }

    /// Symmetrizes without a tolerance gate. Used for quantities that are
    /// Hermitian by construction, e.g. `X*·H·X` or sums of such terms.
    pub fn symmetrize(x: ComplexMatrix) -> Self {
        assert!(x.is_square(), "symmetrize needs a square matrix");
        let hermit_defect = x.hermitian_defect();
        let n = x.rows();
        let base = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(x[(i, i)].re, 0.0)
            } else {
                (x[(i, j)] + x[(j, i)].conj()) * 0.5
            }
        });
        Self { base, hermit_defect }
    }

    pub fn identity(n: usize) -> Self {
        Self::symmetrize(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self::symmetrize(ComplexMatrix::zeros(n, n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::symmetrize(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.base.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.base
    }

    pub fn hermit_defect(&self) -> f64 {
        self.hermit_defect
    }

    pub fn max_norm(&self) -> f64 {
        self.base.max_norm()
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        self.base.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn leading(&self, n: usize) -> Self {
        Self::symmetrize(self.base.leading(n))
    }

    /// `E*·X·E` for a basis `E` with orthonormal columns.
    pub fn compress(&self, basis: &ComplexMatrix) -> Self {
        Self::symmetrize(self.base.congruence(basis))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::symmetrize(&self.base + &other.base)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::symmetrize(&self.base - &other.base)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::symmetrize(self.base.scale_real(s))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }
}

/// `X = V·diag(values)·V*` with ascending `values`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub basis: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min_value(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max_value(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        spectral_map(self, |l| l).into_matrix()
    }

    /// `‖X − VΛV*‖_max`.
    pub fn reconstruction_residual(&self, x: &HermitianMatrix) -> f64 {
        (x.as_matrix() - &self.reconstruct()).max_norm()
    }

    /// `‖V*V − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.basis.adjoint_mul(&self.basis);
        (&g - &ComplexMatrix::identity(self.dim())).max_norm()
    }
}
