//! Convex-hull membership over an explicit vertex list.
//!
//! Wolfe's minimum-norm-point algorithm is run on the vertices translated
//! by the query point; the query lies in the hull exactly when the
//! minimum-norm point of the translated hull is the origin.

use serde::{Deserialize, Serialize};

use super::matrix::{dot, norm, solve, Matrix};
use crate::error::{validation, Result};

pub const DEFAULT_HULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullVerdict {
    pub inside: bool,
    /// Convex coefficients over the caller's vertex list, present when inside.
    pub weights: Option<Vec<f64>>,
    /// Distance from the query to the hull.
    pub distance: f64,
}

/// Decides whether `point` lies within `tol` of `conv(vertices)`.
pub fn hull_membership(point: &[f64], vertices: &[Vec<f64>], tol: f64) -> Result<HullVerdict> {
    if vertices.is_empty() {
        return Err(validation("vertex list is empty"));
    }
    let d = point.len();
    if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != d) {
        return Err(validation(format!(
            "vertex {i} has dimension {}, query has {d}",
            v.len()
        )));
    }

    // Collapse duplicate vertices; `owner[k]` is the caller index that
    // receives the weight of unique vertex k.
    let mut unique: Vec<Vec<f64>> = Vec::new();
    let mut owner: Vec<usize> = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        let shifted: Vec<f64> = v.iter().zip(point).map(|(a, b)| a - b).collect();
        let dup = unique.iter().any(|u| {
            u.iter()
                .zip(&shifted)
                .all(|(a, b)| (a - b).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())))
        });
        if !dup {
            unique.push(shifted);
            owner.push(i);
        }
    }

    let (z, corral, w) = min_norm_point(&unique, 10 * vertices.len());
    let distance = norm(&z);
    let inside = distance <= tol;
    let weights = inside.then(|| {
        let mut out = vec![0.0; vertices.len()];
        for (&k, &wk) in corral.iter().zip(&w) {
            out[owner[k]] += wk;
        }
        out
    });
    Ok(HullVerdict {
        inside,
        weights,
        distance,
    })
}

/// Returns the minimum-norm point of `conv(points)`, the active corral and
/// its convex weights.
fn min_norm_point(points: &[Vec<f64>], max_iter: usize) -> (Vec<f64>, Vec<usize>, Vec<f64>) {
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0f64, f64::max);
    let eps = 1e-15 * scale.max(f64::MIN_POSITIVE);

    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .expect("nonempty");
    let mut corral = vec![start];
    let mut w = vec![1.0];
    let mut z = points[start].clone();

    for _ in 0..max_iter {
        let zz = dot(&z, &z);
        if zz <= eps {
            break;
        }
        let (j, zp) = (0..points.len())
            .map(|j| (j, dot(&z, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        // optimality: no vertex improves the supporting hyperplane
        if zz - zp <= 1e-12 * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        w.push(0.0);

        // minor cycles
        let mut stalled = false;
        loop {
            let Some(alpha) = affine_minimizer(points, &corral) else {
                // affinely dependent corral; keep the current iterate
                stalled = true;
                break;
            };
            if alpha.iter().all(|&a| a > 1e-14) {
                w = alpha;
                z = combine(points, &corral, &w);
                break;
            }
            let mut theta = 1.0f64;
            for (&wi, &ai) in w.iter().zip(&alpha) {
                if ai <= 1e-14 && wi - ai > 0.0 {
                    theta = theta.min(wi / (wi - ai));
                }
            }
            for (wi, ai) in w.iter_mut().zip(&alpha) {
                *wi = theta * ai + (1.0 - theta) * *wi;
            }
            let mut k = 0;
            while k < corral.len() {
                if w[k] <= 1e-14 {
                    corral.remove(k);
                    w.remove(k);
                } else {
                    k += 1;
                }
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            z = combine(points, &corral, &w);
            if corral.len() == 1 {
                break;
            }
        }
        if stalled {
            let keep: Vec<bool> = w.iter().map(|&x| x > 0.0).collect();
            let mut it = keep.iter();
            corral.retain(|_| *it.next().unwrap());
            w.retain(|&x| x > 0.0);
            break;
        }
    }
    (z, corral, w)
}

fn combine(points: &[Vec<f64>], corral: &[usize], w: &[f64]) -> Vec<f64> {
    let d = points[0].len();
    let mut z = vec![0.0; d];
    for (&k, &wk) in corral.iter().zip(w) {
        for (zi, pi) in z.iter_mut().zip(&points[k]) {
            *zi += wk * pi;
        }
    }
    z
}

/// Minimizes `‖Σ αᵢ pᵢ‖` subject to `Σ αᵢ = 1` over the corral via the
/// bordered Gram system.
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    let m = corral.len();
    let mut a = Matrix::zeros(m + 1, m + 1);
    let mut scale: f64 = 0.0;
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate() {
            let g = dot(&points[i], &points[j]);
            a[(r, c)] = g;
            scale = scale.max(g.abs());
        }
    }
    let unit = scale.max(1.0);
    for r in 0..m {
        a[(r, m)] = unit;
        a[(m, r)] = unit;
    }
    let mut b = vec![0.0; m + 1];
    b[m] = unit;
    let sol = solve(&a, &b, 1e-13 * unit)?;
    Some(sol[..m].to_vec())
}
