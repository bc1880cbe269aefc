//! Scalar arithmetic for weighted shifts: every form and every `H′`
//! operator is diagonal, so each coordinate is handled on its own. Serves
//! as an oracle for the dense path.

use super::model::DilationPath;
use crate::error::{Error, Result};
use crate::operator::WeightRule;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalModel {
    pub m: usize,
    pub path: DilationPath,
    /// `q_0..q_{window−1}`; empty on the three_concave path.
    pub q: Vec<f64>,
    /// Diagonal of `Δ` on the window.
    pub delta: Vec<f64>,
    /// Diagonal of `β_m` on the window.
    pub beta_m: Vec<f64>,
    /// Coordinates spanning `H′`, increasing.
    pub support: Vec<usize>,
    /// `U e_{support[i]} = u[i]·f_i`.
    pub u: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `weights[j − 1][i]` is the `i`-th diagonal entry of `S_j`.
    pub weights: Vec<Vec<f64>>,
}

/// `β_k(T)` at coordinate `n` for the shift with weights from `rule`.
pub fn beta_diag(rule: &WeightRule, k: usize, n: usize) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k + 1 - j) as f64 / j as f64;
        }
        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * binom * rule.weight_sq_product(n, j);
    }
    acc
}

/// `binom(x, k)` for real `x`.
fn binom_real(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// `q_0..q_horizon` of the minimal diagonal solution, `q_n = q_0/Π_{j≤n} w_j²`.
pub fn minimal_q(rule: &WeightRule, m: usize, horizon: usize) -> Vec<f64> {
    let mut prod = 1.0;
    let mut q0 = 0.0f64;
    let mut products = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        if n > 0 {
            prod *= rule.weight_sq(n);
        }
        products.push(prod);
        q0 = q0.max(beta_diag(rule, m - 1, n).max(0.0) * prod);
    }
    products.into_iter().map(|p| q0 / p).collect()
}

fn weights_from_a(a: &[f64], m: usize, count: usize) -> Vec<Vec<f64>> {
    let p = |k: usize, a: f64| 1.0 - binom_real(k as f64, m - 1) * a;
    (1..=count)
        .map(|k| a.iter().map(|&ai| (p(k, ai) / p(k - 1, ai)).sqrt()).collect())
        .collect()
}

/// Diagonal counterpart of the dense construction for the shift defined by
/// `rule` on an `n`-dimensional corner; `count` weights are produced.
pub fn diagonal_model(
    rule: &WeightRule,
    path: DilationPath,
    m: usize,
    n: usize,
    horizon: usize,
    count: usize,
    tol: &Tolerances,
) -> Result<DiagonalModel> {
    rule.validate()?;
    let window = |ops: usize| {
        if ops >= n {
            Err(Error::WindowExhausted { size: n, lost: ops })
        } else {
            Ok(n - ops)
        }
    };
    let cutoff = |v: &[f64]| tol.rank * v.iter().copied().fold(1.0, f64::max);
    match path {
        DilationPath::GeneralM | DilationPath::Badea2Iso => {
            if path == DilationPath::Badea2Iso && m != 2 {
                return Err(Error::Precondition("badea_2iso needs m = 2".into()));
            }
            let w = window(m)?;
            let q: Vec<f64> = minimal_q(rule, m, horizon)[..w].to_vec();
            let delta: Vec<f64> = (0..w).map(|i| beta_diag(rule, m - 1, i)).collect();
            let beta_m: Vec<f64> = (0..w).map(|i| beta_diag(rule, m, i)).collect();
            let root: Vec<f64> = if path == DilationPath::GeneralM {
                q.clone()
            } else {
                q.iter().zip(&delta).map(|(q, d)| (q - d).max(0.0)).collect()
            };
            let c = cutoff(&root);
            let support: Vec<usize> = (0..w).filter(|&i| root[i] > c).collect();
            let u = support.iter().map(|&i| root[i].sqrt()).collect();
            let a: Vec<f64> = if path == DilationPath::GeneralM {
                support.iter().map(|&i| beta_m[i] / q[i]).collect()
            } else {
                vec![0.0; support.len()]
            };
            let b = a.iter().map(|x| (1.0 - x).sqrt()).collect();
            let weights = weights_from_a(&a, m, count);
            Ok(DiagonalModel {
                m,
                path,
                q,
                delta,
                beta_m,
                support,
                u,
                a,
                b,
                weights,
            })
        }
        DilationPath::ThreeConcave => {
            let w = window(4)?;
            let delta: Vec<f64> = (0..w).map(|i| beta_diag(rule, 2, i)).collect();
            let beta_m: Vec<f64> = (0..w).map(|i| beta_diag(rule, 3, i)).collect();
            let c = cutoff(&delta);
            let support: Vec<usize> = (0..w).filter(|&i| delta[i] > c).collect();
            let u = support.iter().map(|&i| delta[i].sqrt()).collect();
            let a: Vec<f64> = support
                .iter()
                .map(|&i| rule.weight_sq(i + 1) * beta_diag(rule, 3, i + 1) / delta[i])
                .collect();
            let b = a.iter().map(|x| (1.0 - x).sqrt()).collect();
            let weights = weights_from_a(&a, 3, count);
            Ok(DiagonalModel {
                m: 3,
                path,
                q: Vec::new(),
                delta,
                beta_m,
                support,
                u,
                a,
                b,
                weights,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_of_geometric_shift() {
        let rule = WeightRule::GeometricConcave { r: 0.5 };
        for n in 0..20 {
            let b1 = 0.5f64.powi(n as i32 + 1);
            let b2 = -(0.5f64.powi(n as i32 + 2)) * (1.0 - 0.5f64.powi(n as i32 + 1));
            assert!((beta_diag(&rule, 1, n) - b1).abs() < 1e-15);
            assert!((beta_diag(&rule, 2, n) - b2).abs() < 1e-15);
        }
    }

    #[test]
    fn dirichlet_q_and_weights() {
        let m = diagonal_model(&WeightRule::Dirichlet, DilationPath::GeneralM, 2, 20, 80, 8, &Tolerances::default()).unwrap();
        for (n, q) in m.q.iter().enumerate() {
            assert!((q - 1.0 / (n as f64 + 1.0)).abs() < 1e-14);
        }
        assert!(m.weights.iter().flatten().all(|s| (s - 1.0).abs() < 1e-14));
    }

    #[test]
    fn geometric_badea_root_vanishes_at_origin() {
        let m = diagonal_model(
            &WeightRule::GeometricConcave { r: 0.5 },
            DilationPath::Badea2Iso,
            2,
            20,
            80,
            4,
            &Tolerances::default(),
        )
        .unwrap();
        assert_ne!(m.support.first(), Some(&0));
        assert!((m.q[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn constant_contraction_three_concave() {
        let c: f64 = 0.8;
        let m = diagonal_model(&WeightRule::Constant { c }, DilationPath::ThreeConcave, 3, 12, 48, 4, &Tolerances::default()).unwrap();
        let t2 = c * c;
        let expect = t2 * (t2 - 1.0).powi(3) / (t2 - 1.0).powi(2);
        assert!(m.a.iter().all(|a| (a - expect).abs() < 1e-14));
    }
}
