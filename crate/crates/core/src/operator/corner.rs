use serde::{Deserialize, Serialize};

use super::WeightRule;
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix, C64};

/// Leading block of a computed corner whose entries coincide with those of
/// the untruncated operator expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactWindow {
    pub valid_dim: usize,
}

impl ExactWindow {
    pub fn restrict(&self, x: &HermitianMatrix) -> HermitianMatrix {
        x.leading(self.valid_dim)
    }

    pub fn restrict_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        x.leading(self.valid_dim)
    }

    pub fn min(self, other: ExactWindow) -> ExactWindow {
        ExactWindow {
            valid_dim: self.valid_dim.min(other.valid_dim),
        }
    }
}

/// `N×N` upper-left corner of a banded operator, or a free-standing
/// finite-dimensional operator when `exact` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorCorner {
    matrix: ComplexMatrix,
    lower_band: usize,
    upper_band: usize,
    exact: bool,
    rule: Option<WeightRule>,
}

impl OperatorCorner {
    /// Corner of the scalar weighted shift `e_{j-1} ↦ w_j e_j`.
    pub fn shift(rule: WeightRule, n: usize) -> Result<Self> {
        rule.validate()?;
        if n < 2 {
            return Err(Error::Precondition(format!("shift corner needs N ≥ 2, got {n}")));
        }
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 1..n {
            m[(j, j - 1)] = C64::new(rule.weight(j), 0.0);
        }
        Ok(Self {
            matrix: m,
            lower_band: 1,
            upper_band: 0,
            exact: true,
            rule: Some(rule),
        })
    }

    /// A finite-dimensional operator; windows never shrink.
    pub fn finite(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 {
            return Err(Error::DimensionMismatch("operator must be nonempty".into()));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let (lower_band, upper_band) = measured_bands(&matrix);
        Ok(Self {
            matrix,
            lower_band,
            upper_band,
            exact: false,
            rule: None,
        })
    }

    /// Exact corner of a declared infinite banded operator.
    pub fn banded(matrix: ComplexMatrix, lower_band: usize, upper_band: usize) -> Result<Self> {
        let mut c = Self::finite(matrix)?;
        let (lo, up) = (c.lower_band, c.upper_band);
        if lo > lower_band || up > upper_band {
            return Err(Error::Precondition(format!(
                "entries outside declared band ({lower_band}, {upper_band}); measured ({lo}, {up})"
            )));
        }
        c.lower_band = lower_band;
        c.upper_band = upper_band;
        c.exact = true;
        Ok(c)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn lower_band(&self) -> usize {
        self.lower_band
    }

    pub fn upper_band(&self) -> usize {
        self.upper_band
    }

    /// Total bandwidth; each product with this operator costs this many
    /// exact rows.
    pub fn bandwidth(&self) -> usize {
        self.lower_band + self.upper_band
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn rule(&self) -> Option<&WeightRule> {
        self.rule.as_ref()
    }

    /// Window left after `ops` multiplications by `T` or `T*`.
    pub fn window_after(&self, ops: usize) -> Result<ExactWindow> {
        let n = self.dim();
        if !self.exact {
            return Ok(ExactWindow { valid_dim: n });
        }
        let lost = ops * self.bandwidth();
        if lost >= n {
            return Err(Error::WindowExhausted { size: n, lost });
        }
        Ok(ExactWindow { valid_dim: n - lost })
    }
}

fn measured_bands(m: &ComplexMatrix) -> (usize, usize) {
    let (mut lo, mut up) = (0, 0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m[(i, j)] != C64::new(0.0, 0.0) {
                if i > j {
                    lo = lo.max(i - j);
                } else {
                    up = up.max(j - i);
                }
            }
        }
    }
    (lo, up)
}

/// `T^n` together with its exact window.
pub fn power_window(t: &OperatorCorner, n: usize) -> Result<(ComplexMatrix, ExactWindow)> {
    let window = t.window_after(n)?;
    let mut p = ComplexMatrix::identity(t.dim());
    for _ in 0..n {
        p = t.matrix().matmul(&p);
    }
    Ok((p, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subdiag(c: &OperatorCorner) -> Vec<f64> {
        (1..c.dim()).map(|j| c.matrix()[(j, j - 1)].re).collect()
    }

    #[test]
    fn unweighted_shift_corner() {
        let c = OperatorCorner::shift(WeightRule::Constant { c: 1.0 }, 3).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(c.matrix(), &expect);
        assert!(c.is_exact());
        assert_eq!((c.lower_band(), c.upper_band()), (1, 0));
    }

    #[test]
    fn dirichlet_and_geometric_subdiagonals() {
        let d = subdiag(&OperatorCorner::shift(WeightRule::Dirichlet, 3).unwrap());
        assert!((d[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((d[1] - 1.5f64.sqrt()).abs() < 1e-15);
        let g = subdiag(&OperatorCorner::shift(WeightRule::GeometricConcave { r: 0.5 }, 3).unwrap());
        assert!((g[0] - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((g[1] - 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shift_preconditions() {
        assert!(OperatorCorner::shift(WeightRule::Dirichlet, 1).is_err());
        assert!(matches!(
            OperatorCorner::shift(WeightRule::GeometricConcave { r: 1.5 }, 4),
            Err(Error::InvalidRule(_))
        ));
    }

    #[test]
    fn banded_rejects_entries_outside_band() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0, 1.0], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert!(OperatorCorner::banded(m.clone(), 0, 1).is_err());
        let c = OperatorCorner::banded(m, 0, 2).unwrap();
        assert_eq!(c.window_after(1).unwrap().valid_dim, 1);
    }

    #[test]
    fn power_examples() {
        let t = OperatorCorner::shift(WeightRule::Constant { c: 1.0 }, 4).unwrap();
        let (p0, w0) = power_window(&t, 0).unwrap();
        assert_eq!(p0, ComplexMatrix::identity(4));
        assert_eq!(w0.valid_dim, 4);
        let (p, w) = power_window(&t, 2).unwrap();
        assert_eq!(w.valid_dim, 2);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j + 2 { 1.0 } else { 0.0 };
                assert_eq!(p[(i, j)].re, want);
            }
        }
        let d = OperatorCorner::shift(WeightRule::Dirichlet, 5).unwrap();
        let (p, _) = power_window(&d, 2).unwrap();
        assert!((p[(2, 0)].re - 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(power_window(&t, 4), Err(Error::WindowExhausted { .. })));
    }

    #[test]
    fn finite_operator_keeps_full_window() {
        let t = OperatorCorner::finite(ComplexMatrix::identity(3)).unwrap();
        assert_eq!(t.window_after(10).unwrap().valid_dim, 3);
    }
}
