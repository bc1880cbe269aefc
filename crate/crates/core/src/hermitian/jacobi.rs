use super::matrix::{ComplexMatrix, C64};
use super::{EigenDecomposition, HermitianMatrix};
use crate::error::{Error, Result};

/// Iteration budget for the cyclic Jacobi eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiOptions {
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self { max_sweeps: 64 }
    }
}

/// Eigendecomposition of a Hermitian matrix with the default budget.
pub fn eigh(x: &HermitianMatrix) -> Result<EigenDecomposition> {
    eigh_with(x, JacobiOptions::default())
}

/// Cyclic complex Jacobi.
///
/// Each pivot `(p, q)` is annihilated by `V = D·R` where `D` removes the
/// phase of `a_pq` and `R` is the real plane rotation of the resulting
/// symmetric 2×2 problem. Eigenvalues come back ascending; columns of the
/// basis are the matching eigenvectors.
pub fn eigh_with(x: &HermitianMatrix, opts: JacobiOptions) -> Result<EigenDecomposition> {
    let n = x.dim();
    let mut a = x.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if n > 1 && scale > 0.0 {
        let stop = f64::EPSILON * scale;
        let mut converged = false;
        let mut off = off_norm(&a);
        for sweep in 0..opts.max_sweeps {
            if off <= stop {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q, sweep);
                }
            }
            off = off_norm(&a);
        }
        if !converged && off > stop {
            return Err(Error::NoConvergence {
                sweeps: opts.max_sweeps,
                off_norm: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let basis = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, basis })
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, sweep: usize) {
    let g = a[(p, q)];
    let ag = g.norm();
    if ag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Once the pivot is below the resolution of both diagonal entries the
    // rotation cannot change them; zero it directly.
    if sweep > 3 && app.abs() + 100.0 * ag == app.abs() && aqq.abs() + 100.0 * ag == aqq.abs() {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }

    let theta = (aqq - app) / (2.0 * ag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase_conj = (g / ag).conj();

    let vpp = C64::new(c, 0.0);
    let vpq = C64::new(s, 0.0);
    let vqp = phase_conj * (-s);
    let vqq = phase_conj * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
        a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * ag, 0.0);
    a[(q, q)] = C64::new(aqq + t * ag, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(rows: &[Vec<f64>]) -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_real_rows(rows).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn diagonal_input_is_sorted_by_permutation() {
        let e = eigh(&herm(&[vec![3.0, 0.0], vec![0.0, 1.0]])).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        assert_eq!(e.basis[(1, 0)].re, 1.0);
        assert_eq!(e.basis[(0, 1)].re, 1.0);
    }

    #[test]
    fn two_by_two_roots_of_characteristic_polynomial() {
        // λ² − 4λ + 3 = 0
        let e = eigh(&herm(&[vec![2.0, 1.0], vec![1.0, 2.0]])).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = eigh(&HermitianMatrix::identity(5)).unwrap();
        assert!(e.values.iter().all(|&l| l == 1.0));
        assert!(e.unitarity_residual() < 1e-15);
    }

    #[test]
    fn complex_pivot_is_annihilated() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)],
            vec![C64::new(0.0, -2.0), C64::new(1.0, 0.0)],
        ])
        .unwrap();
        let x = HermitianMatrix::new(m, 1e-12).unwrap();
        let e = eigh(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        assert!(e.reconstruction_residual(&x) < 1e-14);
    }

    #[test]
    fn zero_sweep_budget_reports_no_convergence() {
        let x = herm(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let err = eigh_with(&x, JacobiOptions { max_sweeps: 0 }).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { sweeps: 0, .. }));
    }
}
