use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotInvertible(format!("{}×{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    let floor = 1e-14 * m.max_norm().max(f64::MIN_POSITIVE);

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
            .unwrap();
        let pivot = a[(pivot_row, col)];
        if pivot.norm() <= floor {
            return Err(Error::NotInvertible(format!(
                "pivot {:.3e} in column {col} is numerically zero",
                pivot.norm()
            )));
        }
        if pivot_row != col {
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(pivot_row, j)];
                a[(pivot_row, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(pivot_row, j)];
                inv[(pivot_row, j)] = t;
            }
        }
        let scale = ONE / pivot;
        for j in 0..n {
            a[(col, j)] *= scale;
            inv[(col, j)] *= scale;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let ac = a[(col, j)];
                let ic = inv[(col, j)];
                a[(i, j)] -= f * ac;
                inv[(i, j)] -= f * ic;
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::C64;

    #[test]
    fn inverse_of_complex_matrix() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(0.0, 1.0), C64::new(2.0, 0.0)],
            vec![C64::new(1.0, 0.0), C64::new(1.0, -1.0)],
        ])
        .unwrap();
        let inv = inverse(&m).unwrap();
        let id = m.matmul(&inv);
        assert!((&id - &ComplexMatrix::identity(2)).max_norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&m), Err(Error::NotInvertible(_))));
    }
}
