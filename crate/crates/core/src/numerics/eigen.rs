//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{validation, Error, Result};

/// Default stopping threshold on the off-diagonal Frobenius mass.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in decreasing order with an orthonormal frame whose
/// columns are the matching eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub frame: Matrix,
}

impl EigenResult {
    /// `frame · diag(values) · frameᵀ`
    pub fn reconstruct(&self) -> Matrix {
        spectral_synthesis(&self.frame, &self.values)
    }
}

/// `F · diag(d) · Fᵀ` for a square frame `F`.
pub fn spectral_synthesis(frame: &Matrix, diag: &[f64]) -> Matrix {
    let n = frame.rows();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = (0..diag.len())
                .map(|k| frame[(i, k)] * diag[k] * frame[(j, k)])
                .sum();
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Largest asymmetry `|a_ij - a_ji|` relative to `1 + max|a|`.
pub fn asymmetry(matrix: &Matrix) -> f64 {
    let n = matrix.rows();
    let scale = 1.0 + matrix.as_slice().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Sweeps continue until the off-diagonal Frobenius mass drops below
/// `tol · max(1, ‖A‖_F)`.
pub fn sym_eigen(matrix: &Matrix, tol: f64) -> Result<EigenResult> {
    if !matrix.is_square() || matrix.rows() == 0 {
        return Err(validation(format!(
            "expected a nonempty square matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    if matrix.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(validation("matrix has non-finite entries"));
    }
    if asymmetry(matrix) > 1e-12 {
        return Err(validation("matrix is not symmetric"));
    }
    let n = matrix.rows();
    let mut a = matrix.clone();
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = m;
            a[(j, i)] = m;
        }
    }
    let mut v = Matrix::identity(n);
    let threshold = tol * matrix.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_mass(&a) >= threshold {
        return Err(Error::Numeric(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let diag = a.diag();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their column order
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut frame = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        frame.set_col(dst, &v.col(src));
    }
    Ok(EigenResult { values, frame })
}

fn off_diagonal_mass(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = a.rows();
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
