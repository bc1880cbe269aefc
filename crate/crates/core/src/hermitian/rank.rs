use super::matrix::{vec_dot, vec_norm_sqr, ComplexMatrix, C64};

/// Numerical rank of the column set of `m`.
///
/// Gram–Schmidt with column pivoting and one reorthogonalization pass: at
/// each step the remaining column of largest residual norm is taken, and the
/// process stops once that norm falls to `rel_tol` times the largest
/// original column norm.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let scale = cols.iter().map(|c| vec_norm_sqr(c).sqrt()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let cutoff = rel_tol * scale;
    let max_rank = m.rows().min(m.cols());
    let mut basis: Vec<Vec<C64>> = Vec::new();

    while basis.len() < max_rank && !cols.is_empty() {
        let (best, norm) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, vec_norm_sqr(c).sqrt()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if norm <= cutoff {
            break;
        }
        let mut q = cols.swap_remove(best);
        for _ in 0..2 {
            for b in &basis {
                let proj = vec_dot(b, &q);
                for (qi, bi) in q.iter_mut().zip(b) {
                    *qi -= proj * bi;
                }
            }
        }
        let qn = vec_norm_sqr(&q).sqrt();
        if qn <= cutoff {
            continue;
        }
        for qi in q.iter_mut() {
            *qi /= qn;
        }
        for c in cols.iter_mut() {
            let proj = vec_dot(&q, c);
            for (ci, qi) in c.iter_mut().zip(&q) {
                *ci -= proj * qi;
            }
        }
        basis.push(q);
    }
    basis.len()
}
