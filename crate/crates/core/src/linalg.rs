//! Small dense kernels: a cyclic Jacobi eigensolver for symmetric matrices
//! and a pivoted modified Gram-Schmidt used to orthonormalize ranges.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Eigenvalues sorted in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `values`.
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Cyclic Jacobi eigendecomposition. Only the symmetric part of `m` is used.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<SymEigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidInput(format!(
            "eigensolver needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("non-finite matrix entry".into()));
    }
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm();

    let mut converged = n <= 1 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate_columns(&mut a, p, q, c, s);
                rotate_rows(&mut a, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEigen { values, vectors })
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.nrows() {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
}

fn rotate_rows(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.ncols() {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
}

/// Orthonormal basis (as columns) of the column range of `m`.
///
/// Column-pivoted modified Gram-Schmidt: at every step the remaining column
/// with the largest residual is accepted, and the process stops once that
/// residual drops to `cutoff` or below. Each accepted vector is
/// re-orthogonalized once.
pub fn orthonormal_range(m: &DMatrix<f64>, cutoff: f64) -> DMatrix<f64> {
    let n = m.nrows();
    let mut residuals: Vec<DVector<f64>> = m.column_iter().map(|c| c.into_owned()).collect();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    while basis.len() < n {
        let Some((best, norm)) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm <= cutoff {
            break;
        }
        let mut q = residuals.swap_remove(best) / norm;
        for b in &basis {
            let proj = b.dot(&q);
            q -= b * proj;
        }
        let qn = q.norm();
        if qn <= cutoff {
            continue;
        }
        q /= qn;
        for r in residuals.iter_mut() {
            let proj = q.dot(r);
            *r -= &q * proj;
        }
        basis.push(q);
    }
    if basis.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&basis)
    }
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest absolute entry of `m - mᵀ`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs_diff(m, &m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_by_two_by_hand() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let eig = symmetric_eigen(&m).unwrap();
        assert_abs_diff_eq!(eig.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.values[1], -1.0, epsilon = 1e-14);
        let v0 = eig.vectors.column(0);
        assert_abs_diff_eq!(v0[0].abs(), 0.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(v0[0], v0[1], epsilon = 1e-14);
    }

    #[test]
    fn reconstructs_random_symmetric() {
        let n = 7;
        let m = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) as f64).sin() + ((j * 7 + i * 3) as f64).sin());
        let eig = symmetric_eigen(&m).unwrap();
        let d = DMatrix::from_diagonal(&DVector::from_vec(eig.values.clone()));
        let back = &eig.vectors * d * eig.vectors.transpose();
        assert!(max_abs_diff(&back, &m) < 1e-12);
        let gram = eig.vectors.transpose() * &eig.vectors;
        assert!(max_abs_diff(&gram, &DMatrix::identity(n, n)) < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn range_of_projector_has_its_rank() {
        let u = DVector::from_vec(vec![1.0, 2.0, 0.0, -1.0]).normalize();
        let w = DVector::from_vec(vec![0.0, 1.0, 1.0, 2.0]);
        let w = (&w - &u * u.dot(&w)).normalize();
        let p = &u * u.transpose() + &w * w.transpose();
        let q = orthonormal_range(&p, 1e-8);
        assert_eq!(q.ncols(), 2);
        assert!(max_abs_diff(&(&q * q.transpose()), &p) < 1e-12);
        assert_eq!(orthonormal_range(&DMatrix::zeros(3, 3), 1e-8).ncols(), 0);
    }

    #[test]
    fn empty_and_scalar() {
        let e = symmetric_eigen(&DMatrix::zeros(0, 0)).unwrap();
        assert!(e.values.is_empty());
        let s = symmetric_eigen(&DMatrix::from_element(1, 1, -3.0)).unwrap();
        assert_eq!(s.values, vec![-3.0]);
    }
}
