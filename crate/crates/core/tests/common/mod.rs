#![allow(dead_code)]

use mdilate::hermitian::{ComplexMatrix, HermitianMatrix, C64};
use proptest::prelude::*;

pub fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, rows * cols * 2).prop_map(move |v| {
        let data = v.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    })
}

/// `G G*` with `G` of size `n × k`, so the rank is at most `k`.
pub fn psd_of_rank(n: usize, k: usize) -> impl Strategy<Value = HermitianMatrix> {
    complex_matrix(n, k).prop_map(|g| HermitianMatrix::symmetrize(g.matmul(&g.adjoint())))
}

pub fn psd(max_dim: usize) -> impl Strategy<Value = HermitianMatrix> {
    (1..=max_dim).prop_flat_map(|n| psd_of_rank(n, n))
}

pub fn hermitian(max_dim: usize) -> impl Strategy<Value = HermitianMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        complex_matrix(n, n).prop_map(HermitianMatrix::symmetrize)
    })
}

/// Unitary from Gram–Schmidt on a random square matrix.
pub fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n, n).prop_filter_map("singular draw", move |x| {
        let mut q = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut v = x.column(j);
            for i in 0..j {
                let b = q.column(i);
                let proj: C64 = b.iter().zip(&v).map(|(a, c)| a.conj() * c).sum();
                for (vi, bi) in v.iter_mut().zip(&b) {
                    *vi -= proj * bi;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            q.set_column(j, &v.iter().map(|z| z / norm).collect::<Vec<_>>());
        }
        Some(q)
    })
}

pub fn max_abs(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    (x - y).max_norm()
}
