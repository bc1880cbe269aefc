use crate::error::{Error, Result};
use crate::hermitian::{eigh, pinv_sqrt, poly_eval, sqrt_psd, HermitianMatrix};
use crate::tolerance::Tolerances;

/// `S_1, S_2, …` on `H′` and the products `|S_n⋯S_1|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftWeights {
    /// `weights[j − 1] = S_j`.
    pub weights: Vec<HermitianMatrix>,
    /// `cumulative[n] = |S_n⋯S_1|²`, with `cumulative[0] = I`.
    pub cumulative: Vec<HermitianMatrix>,
}

impl ShiftWeights {
    /// `S_j` for `j ≥ 1`.
    pub fn get(&self, j: usize) -> &HermitianMatrix {
        &self.weights[j - 1]
    }

    pub fn horizon(&self) -> usize {
        self.weights.len()
    }

    /// All `S_j = I_r`.
    pub fn identity(r: usize, horizon: usize) -> Self {
        Self {
            weights: vec![HermitianMatrix::identity(r); horizon],
            cumulative: vec![HermitianMatrix::identity(r); horizon + 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialWeights {
    /// Monomial coefficients of `p`, constant term first.
    pub p_coeffs: Vec<HermitianMatrix>,
    pub weights: ShiftWeights,
    pub ratio_bound_c: f64,
    /// `max{‖B‖², C}`.
    pub rayleigh_bound: f64,
}

/// Monomial coefficients of `z(z−1)⋯(z−k+1)`, i.e. signed Stirling numbers
/// of the first kind.
pub fn falling_factorial_coeffs(k: usize) -> Vec<i128> {
    let mut c = vec![1i128];
    for j in 0..k as i128 {
        let mut next = vec![0i128; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= j * ci;
        }
        c = next;
    }
    c
}

/// `sup_{n ≥ m−1} (n+1)n⋯(n−m+3) / (n(n−1)⋯(n−m+2))`.
///
/// The ratio simplifies to `(n+1)/(n−m+2)`, decreasing in `n`, so the
/// supremum sits at `n = m−1` and equals `m`.
pub fn ratio_bound_c(m: usize) -> f64 {
    m as f64
}

/// `p(z) = binom(z, m−1)·(−A) + I`.
pub fn p_coefficients(a: &HermitianMatrix, m: usize) -> Result<Vec<HermitianMatrix>> {
    if m < 2 {
        return Err(Error::Precondition(format!("the weight polynomial needs m ≥ 2, got {m}")));
    }
    let ff = falling_factorial_coeffs(m - 1);
    let fact: f64 = (1..m).map(|k| k as f64).product();
    let neg_a = a.neg();
    let mut coeffs: Vec<HermitianMatrix> = ff.iter().map(|&c| neg_a.scale(c as f64 / fact)).collect();
    coeffs[0] = coeffs[0].add(&HermitianMatrix::identity(a.dim()));
    Ok(coeffs)
}

/// Builds `p`, the telescoping weights `S_n = p(n)^{1/2} p(n−1)^{−1/2}` for
/// `n = 1..=horizon`, and the cumulative products.
pub fn build_p_and_weights(
    a: &HermitianMatrix,
    m: usize,
    horizon: usize,
    tol: &Tolerances,
) -> Result<PolynomialWeights> {
    let r = a.dim();
    let p_coeffs = p_coefficients(a, m)?;
    let eval = |n: usize| poly_eval(&p_coeffs, n as i64, tol.comm);

    let floor = tol.inv;
    let check_invertible = |x: &HermitianMatrix, what: String| -> Result<()> {
        match eigh(x)?.min_value() {
            Some(l) if l <= floor => Err(Error::NotInvertible(format!("{what}: min eigenvalue {l:.3e}"))),
            _ => Ok(()),
        }
    };

    let mut weights = Vec::with_capacity(horizon);
    let mut cumulative = vec![HermitianMatrix::identity(r)];
    let mut prev = eval(0)?;
    let mut prod = crate::hermitian::ComplexMatrix::identity(r);
    for n in 1..=horizon {
        let cur = eval(n)?;
        check_invertible(&cur, format!("p({n})"))?;
        let num = sqrt_psd(&cur, tol.psd)?;
        let den = pinv_sqrt(&prev, tol.rank, tol.psd)?;
        let s = HermitianMatrix::symmetrize(num.as_matrix().matmul(den.inv_sqrt.as_matrix()));
        check_invertible(&s, format!("S_{n}"))?;
        prod = s.as_matrix().matmul(&prod);
        cumulative.push(HermitianMatrix::symmetrize(prod.adjoint_mul(&prod)));
        weights.push(s);
        prev = cur;
    }

    let b_sq_norm = eigh(&HermitianMatrix::identity(r).sub(a))?.max_value().unwrap_or(0.0);
    let ratio_bound_c = ratio_bound_c(m);
    Ok(PolynomialWeights {
        p_coeffs,
        weights: ShiftWeights { weights, cumulative },
        ratio_bound_c,
        rayleigh_bound: b_sq_norm.max(ratio_bound_c),
    })
}
