//! Singular value decomposition of square real matrices.
//!
//! One-sided (Hestenes) Jacobi: plane rotations are applied to the columns
//! of `A` until they are mutually orthogonal, which diagonalizes `AᵀA`
//! implicitly. The right factor accumulates the rotations; the left factor
//! is recovered column by column as `A v_k / σ_k`, so the signs of the two
//! factors are consistent by construction.

use serde::{Deserialize, Serialize};

use super::matrix::{dot, norm, Matrix};
use crate::error::{validation, Error, Result};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdResult {
    /// Decreasing, nonnegative.
    pub values: Vec<f64>,
    pub left: Matrix,
    pub right: Matrix,
}

impl SvdResult {
    /// `left · diag(d) · rightᵀ`
    pub fn synthesize(&self, d: &[f64]) -> Matrix {
        let n = self.left.rows();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..d.len())
                    .map(|k| self.left[(i, k)] * d[k] * self.right[(j, k)])
                    .sum();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.synthesize(&self.values)
    }
}

pub fn svd_values(matrix: &Matrix, tol: f64) -> Result<SvdResult> {
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
    let n = matrix.rows();
    // columns of A stored as rows of `w` for contiguous access
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| matrix.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = dot(&w[i], &w[i]);
                let beta = dot(&w[j], &w[j]);
                let gamma = dot(&w[i], &w[j]);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, i, j, c, s);
                rotate_pair(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let sigmas: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigmas[b].total_cmp(&sigmas[a]));
    let values: Vec<f64> = order.iter().map(|&k| sigmas[k]).collect();
    let cutoff = values[0] * 1e-14;

    let mut left_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut right = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        right.set_col(dst, &v[src]);
        let sigma = sigmas[src];
        let col = if sigma > cutoff && sigma > 0.0 {
            w[src].iter().map(|x| x / sigma).collect()
        } else {
            vec![0.0; n]
        };
        left_cols.push(col);
    }
    let left_cols = orthonormal_completion(left_cols);
    let mut left = Matrix::zeros(n, n);
    for (j, c) in left_cols.iter().enumerate() {
        left.set_col(j, c);
    }
    Ok(SvdResult {
        values,
        left,
        right,
    })
}

fn rotate_pair(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(j);
    let (a, b) = (&mut lo[i], &mut hi[0]);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Re-orthonormalizes the given columns in order (two passes of modified
/// Gram-Schmidt). Zero columns are replaced by standard basis vectors
/// orthogonalized against the rest.
pub(crate) fn orthonormal_completion(cols: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = cols.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (k, c) in cols.into_iter().enumerate() {
        if norm(&c) == 0.0 {
            pending.push(k);
            out.push(c);
            continue;
        }
        let mut c = c;
        for _ in 0..2 {
            for q in out.iter().filter(|q| norm(q) > 0.0) {
                let p = dot(&c, q);
                for (x, y) in c.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
        }
        let nc = norm(&c);
        out.push(c.into_iter().map(|x| x / nc).collect());
    }
    let mut basis = 0;
    for k in pending {
        loop {
            let mut c: Vec<f64> = (0..n).map(|i| if i == basis { 1.0 } else { 0.0 }).collect();
            basis += 1;
            for _ in 0..2 {
                for q in out.iter().filter(|q| norm(q) > 0.0) {
                    let p = dot(&c, q);
                    for (x, y) in c.iter_mut().zip(q) {
                        *x -= p * y;
                    }
                }
            }
            let nc = norm(&c);
            if nc > 1e-8 {
                out[k] = c.into_iter().map(|x| x / nc).collect();
                break;
            }
        }
    }
    out
}
