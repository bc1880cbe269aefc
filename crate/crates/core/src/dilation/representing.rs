use crate::error::{Error, Result};
use crate::hermitian::{eigh, pinv_sqrt, sqrt_psd, ComplexMatrix, HermitianMatrix};
use crate::operator::{beta_form, ExactWindow, OperatorCorner};
use crate::qsolver::QSolution;
use crate::tolerance::Tolerances;

/// Operator `A` on `H′ = closure of ran R` with `⟨A R f, R g⟩ = ⟨X f, g⟩`,
/// realised as `R⁺ X R⁺` compressed to an orthonormal basis of `ran R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentingOperator {
    /// `A` in `hprime_basis` coordinates.
    pub a: HermitianMatrix,
    /// Orthonormal columns spanning `H′` inside the window coordinates.
    pub hprime_basis: ComplexMatrix,
    /// `R`, the square root of the dominating form on the window.
    pub root: HermitianMatrix,
    /// `‖X − R·A_full·R‖_max`: zero iff `X` vanishes on `ker R`.
    pub welldef_residual: f64,
}

impl RepresentingOperator {
    pub fn hprime_dim(&self) -> usize {
        self.hprime_basis.cols()
    }

    /// `U = E*·R`, padded with zero columns up to `h_dim`.
    pub fn embedding(&self, h_dim: usize) -> ComplexMatrix {
        let compressed = self.hprime_basis.adjoint_mul(self.root.as_matrix());
        let mut u = ComplexMatrix::zeros(self.hprime_dim(), h_dim);
        u.set_block(0, 0, &compressed);
        u
    }
}

/// Represents the form `X` relative to `G = R²`.
fn represent(g: &HermitianMatrix, x: &HermitianMatrix, tol: &Tolerances) -> Result<RepresentingOperator> {
    let root = sqrt_psd(g, tol.psd)?;
    let pinv = pinv_sqrt(g, tol.rank, tol.psd)?;
    let a_full = HermitianMatrix::symmetrize(x.as_matrix().congruence(pinv.inv_sqrt.as_matrix()));
    let rebuilt = a_full.as_matrix().congruence(root.as_matrix());
    let welldef_residual = (x.as_matrix() - &rebuilt).max_norm();
    let threshold = tol.welldef * (1.0 + x.max_norm());
    if welldef_residual > threshold {
        return Err(Error::IllDefinedForm {
            residual: welldef_residual,
            threshold,
        });
    }
    let a = a_full.compress(&pinv.range_basis);
    if let Some(max_eig) = eigh(&a)?.max_value() {
        let threshold = tol.psd * (1.0 + a.max_norm());
        if max_eig > threshold {
            return Err(Error::NotNegative { max_eig, threshold });
        }
    }
    Ok(RepresentingOperator {
        a,
        hprime_basis: pinv.range_basis,
        root,
        welldef_residual,
    })
}

/// `⟨A Q^{1/2} f, Q^{1/2} g⟩ = ⟨β_m(T) f, g⟩` on the window.
pub fn build_a_general(
    q: &QSolution,
    beta_m: &HermitianMatrix,
    window: ExactWindow,
    tol: &Tolerances,
) -> Result<RepresentingOperator> {
    let w = window.valid_dim;
    if q.q.dim() < w || beta_m.dim() < w {
        return Err(Error::DimensionMismatch(format!(
            "window {w} exceeds Q ({}) or β_m ({})",
            q.q.dim(),
            beta_m.dim()
        )));
    }
    represent(&q.q.leading(w), &beta_m.leading(w), tol)
}

/// `⟨A Δ^{1/2} f, Δ^{1/2} g⟩ = ⟨T*β_3(T)T f, g⟩` on the window, `Δ = β_2(T)`.
///
/// `window` must not exceed the exact window of `T*β_3(T)T`, i.e. four
/// multiplications by `T` or `T*`.
pub fn build_a_three_concave(
    t: &OperatorCorner,
    delta: &HermitianMatrix,
    window: ExactWindow,
    tol: &Tolerances,
) -> Result<RepresentingOperator> {
    let w = window.valid_dim;
    let limit = t.window_after(4)?;
    if w > limit.valid_dim || delta.dim() < w {
        return Err(Error::DimensionMismatch(format!(
            "window {w} exceeds the exact window {} of T*β_3T or Δ ({})",
            limit.valid_dim,
            delta.dim()
        )));
    }
    let (beta_3, _) = beta_form(t, 3)?;
    let x = HermitianMatrix::symmetrize(beta_3.as_matrix().congruence(t.matrix()));
    represent(&delta.leading(w), &x.leading(w), tol)
}
