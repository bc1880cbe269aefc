use super::{ExactWindow, OperatorCorner};
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix};

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn sign(m: usize, k: usize) -> f64 {
    if (m - k).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `β_m(T) = Σ_{k=0}^{m} (−1)^{m−k} C(m,k) T*^k T^k` on the full corner,
/// with the window on which it is exact.
pub fn beta_form(t: &OperatorCorner, m: usize) -> Result<(HermitianMatrix, ExactWindow)> {
    let window = t.window_after(m)?;
    let n = t.dim();
    let mut power = ComplexMatrix::identity(n);
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in 0..=m {
        if k > 0 {
            power = t.matrix().matmul(&power);
        }
        let gram = power.adjoint_mul(&power);
        acc = &acc + &gram.scale_real(sign(m, k) * binomial(m, k));
    }
    Ok((HermitianMatrix::symmetrize(acc), window))
}

/// `β_m` through `β_k = T*β_{k−1}T − β_{k−1}` from `β_0 = I`.
pub fn beta_recurrence(t: &OperatorCorner, m: usize) -> Result<(HermitianMatrix, ExactWindow)> {
    let window = t.window_after(m)?;
    let mut b = ComplexMatrix::identity(t.dim());
    for _ in 0..m {
        b = &b.congruence(t.matrix()) - &b;
    }
    Ok((HermitianMatrix::symmetrize(b), window))
}

/// `β_m` restricted to its exact window; `β_0 = I`.
pub fn beta_on_window(t: &OperatorCorner, m: usize) -> Result<HermitianMatrix> {
    if m == 0 {
        return Ok(HermitianMatrix::identity(t.dim()));
    }
    let (b, w) = beta_form(t, m)?;
    Ok(w.restrict(&b))
}

pub(crate) fn ensure_order(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::Precondition("order m must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::C64;
    use crate::operator::WeightRule;

    #[test]
    fn identity_is_m_isometric() {
        let t = OperatorCorner::finite(ComplexMatrix::identity(3)).unwrap();
        let (b, w) = beta_form(&t, 2).unwrap();
        assert_eq!(b.max_norm(), 0.0);
        assert_eq!(w.valid_dim, 3);
    }

    #[test]
    fn scalar_collapses_to_power() {
        let t = OperatorCorner::finite(
            ComplexMatrix::new(1, 1, vec![C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)]).unwrap(),
        )
        .unwrap();
        let (b, _) = beta_form(&t, 3).unwrap();
        assert!((b.real_diagonal()[0] + 0.125).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_is_two_isometric_on_window() {
        let t = OperatorCorner::shift(WeightRule::Dirichlet, 6).unwrap();
        let (b, w) = beta_form(&t, 2).unwrap();
        assert_eq!(w.valid_dim, 4);
        assert!(w.restrict(&b).max_norm() < 1e-14);
        // truncation shows up just outside the window
        assert!(b.max_norm() > 0.1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(7, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}
