//! Doubly stochastic matrices and transformations.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::automorphisms::{check_map_dim, LinearMap, MapKind};
use crate::campaign::{require_samples, run_campaign, CheckReport, Finding};
use crate::center::unit_element;
use crate::error::{validation, Error, Result};
use crate::instances::InstanceSpec;
use crate::majorization::{hlp_majorize, majorize_normal_form};
use crate::numerics::{argsort_desc, sym_eigen, Matrix, DEFAULT_EIGEN_TOL};
use crate::system::{lambda, witness_a3, Element, Spectrum, System};

/// A square matrix with nonnegative entries and unit row and column sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsMatrix {
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffTerm {
    pub weight: f64,
    /// Row `i` of the permutation matrix has its one in column
    /// `permutation[i]`.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffDecomposition {
    pub terms: Vec<BirkhoffTerm>,
}

impl BirkhoffDecomposition {
    pub fn reconstruct(&self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for t in &self.terms {
            for (i, &j) in t.permutation.iter().enumerate() {
                m[(i, j)] += t.weight;
            }
        }
        m
    }
}

pub fn is_ds_matrix(m: &Matrix, tol: f64) -> bool {
    if !m.is_square() || m.as_slice().iter().any(|v| !v.is_finite()) {
        return false;
    }
    let n = m.rows();
    let rows_ok = (0..n).all(|i| (m.row(i).iter().sum::<f64>() - 1.0).abs() <= tol);
    let cols_ok = (0..n).all(|j| (m.col(j).iter().sum::<f64>() - 1.0).abs() <= tol);
    rows_ok && cols_ok && m.as_slice().iter().all(|&v| v >= -tol)
}

/// A doubly stochastic `M` with `My = x`, assembled from T-transforms.
///
/// On the sorted vectors, each step picks the largest index `j` with
/// `z_j > x_j` and the smallest `k > j` with `z_k < x_k`, and moves
/// `min(z_j − x_j, x_k − z_k)` from `z_j` to `z_k`. The result is
/// conjugated back by the sorting permutations.
pub fn construct_ds_witness(x: &[f64], y: &[f64], tol: f64) -> Result<DsMatrix> {
    let verdict = hlp_majorize(x, y, tol)?;
    if !verdict.holds {
        return Err(Error::NotMajorized(format!(
            "{x:?} is not majorized by {y:?} (margin {:.3e})",
            verdict.margin
        )));
    }
    let n = x.len();
    let spread = x.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
        - x.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if n > 0 && spread <= 1e-15 * (1.0 + x[0].abs()) {
        // constant x is the barycenter of the orbit of y
        return Ok(DsMatrix {
            matrix: Matrix::from_row_major(n, n, vec![1.0 / n as f64; n * n])?,
        });
    }
    let (px, py) = (argsort_desc(x), argsort_desc(y));
    let target: Vec<f64> = px.iter().map(|&i| x[i]).collect();
    let mut z: Vec<f64> = py.iter().map(|&i| y[i]).collect();
    let eps = 1e-15 * (1.0 + z.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let mut d = Matrix::identity(n);
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&j| z[j] - target[j] > eps) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&k| target[k] - z[k] > eps) else {
            break;
        };
        let delta = (z[j] - target[j]).min(target[k] - z[k]);
        let s = delta / (z[j] - z[k]);
        let t = 1.0 - s;
        let (zj, zk) = (z[j], z[k]);
        z[j] = t * zj + s * zk;
        z[k] = s * zj + t * zk;
        // d ← T d with T acting on rows j and k
        for c in 0..n {
            let (a, b) = (d[(j, c)], d[(k, c)]);
            d[(j, c)] = t * a + s * b;
            d[(k, c)] = s * a + t * b;
        }
    }
    // M = P_xᵀ D P_y with (P_y y)_r = y[py[r]] and x[px[r]] = (D P_y y)_r
    let mut m = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            m[(px[r], py[c])] = d[(r, c)];
        }
    }
    Ok(DsMatrix { matrix: m })
}

/// Perfect matching on `{(i, j) : allowed(i, j)}` by augmenting paths.
fn perfect_matching(n: usize, allowed: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn augment(
        i: usize,
        n: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        col_owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..n {
            if allowed(i, j) && !seen[j] {
                seen[j] = true;
                if col_owner[j].is_none_or(|o| augment(o, n, allowed, seen, col_owner)) {
                    col_owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut col_owner = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, n, &allowed, &mut seen, &mut col_owner) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, o) in col_owner.iter().enumerate() {
        perm[o.expect("perfect")] = j;
    }
    Some(perm)
}

/// Matching maximizing its smallest entry (bottleneck), found by
/// bisection over the distinct positive entries.
fn bottleneck_matching(r: &Matrix, eps: f64) -> Option<Vec<usize>> {
    let n = r.rows();
    let mut levels: Vec<f64> = r.as_slice().iter().copied().filter(|&v| v > eps).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut best = perfect_matching(n, |i, j| r[(i, j)] > eps)?;
    let (mut lo, mut hi) = (0usize, levels.len());
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(n, |i, j| r[(i, j)] >= levels[mid]) {
            Some(p) => {
                best = p;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    Some(best)
}

/// `M = Σ wₖ Pₖ` with at most `(n−1)² + 1` terms.
pub fn birkhoff_decompose(m: &Matrix, tol: f64) -> Result<BirkhoffDecomposition> {
    if !is_ds_matrix(m, tol) {
        return Err(validation("matrix is not doubly stochastic"));
    }
    let n = m.rows();
    let eps = 1e-14;
    let mut r = m.clone();
    let mut terms: Vec<BirkhoffTerm> = Vec::new();
    let mut remaining = 1.0f64;
    while remaining > eps * n as f64 && terms.len() <= n * n {
        let Some(perm) = bottleneck_matching(&r, eps) else {
            if remaining > tol {
                return Err(Error::Numeric(format!(
                    "no positive perfect matching with mass {remaining:.3e} left"
                )));
            }
            break;
        };
        let w = perm.iter().enumerate().map(|(i, &j)| r[(i, j)]).fold(f64::INFINITY, f64::min);
        for (i, &j) in perm.iter().enumerate() {
            r[(i, j)] -= w;
            if r[(i, j)] <= eps {
                r[(i, j)] = 0.0;
            }
        }
        remaining -= w;
        terms.push(BirkhoffTerm {
            weight: w,
            permutation: perm,
        });
    }
    let bound = (n - 1) * (n - 1) + 1;
    while terms.len() > bound {
        caratheodory_step(&mut terms, n)?;
    }
    Ok(BirkhoffDecomposition { terms })
}

/// Removes one term using an affine dependence among the permutation
/// matrices: `Σ αₖ Pₖ = 0`, `Σ αₖ = 0`.
fn caratheodory_step(terms: &mut Vec<BirkhoffTerm>, n: usize) -> Result<()> {
    let m = terms.len();
    let rows = n * n + 1;
    let mut a = Matrix::zeros(rows, m);
    for (k, t) in terms.iter().enumerate() {
        for (i, &j) in t.permutation.iter().enumerate() {
            a[(i * n + j, k)] = 1.0;
        }
        a[(n * n, k)] = 1.0;
    }
    let alpha = null_vector(a)
        .ok_or_else(|| Error::Numeric("permutation matrices are affinely independent".into()))?;
    let theta = terms
        .iter()
        .zip(&alpha)
        .filter(|(_, &al)| al > 1e-12)
        .map(|(t, &al)| t.weight / al)
        .fold(f64::INFINITY, f64::min);
    for (t, al) in terms.iter_mut().zip(&alpha) {
        t.weight -= theta * al;
    }
    let drop = terms
        .iter()
        .enumerate()
        .filter(|(_, t)| t.weight <= 1e-15)
        .map(|(k, _)| k)
        .next()
        .unwrap_or_else(|| {
            (0..terms.len())
                .min_by(|&a, &b| terms[a].weight.total_cmp(&terms[b].weight))
                .expect("nonempty")
        });
    terms.remove(drop);
    terms.retain(|t| t.weight > 1e-15);
    let s: f64 = terms.iter().map(|t| t.weight).sum();
    terms.iter_mut().for_each(|t| t.weight /= s);
    Ok(())
}

/// A nonzero vector in the null space of `a` (more columns than rank).
fn null_vector(mut a: Matrix) -> Option<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = (r..rows).max_by(|&x, &y| a[(x, c)].abs().total_cmp(&a[(y, c)].abs()))?;
        if a[(p, c)].abs() <= 1e-10 {
            continue;
        }
        for k in 0..cols {
            let tmp = a[(r, k)];
            a[(r, k)] = a[(p, k)];
            a[(p, k)] = tmp;
        }
        let piv = a[(r, c)];
        for k in 0..cols {
            a[(r, k)] /= piv;
        }
        for i in 0..rows {
            if i != r && a[(i, c)] != 0.0 {
                let f = a[(i, c)];
                for k in 0..cols {
                    a[(i, k)] -= f * a[(r, k)];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![0.0; cols];
    v[free] = 1.0;
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[(row, free)];
    }
    Some(v)
}

fn require_form(sys: &System) -> Result<crate::reduction::WNormalForm> {
    sys.reduced_form().ok_or_else(|| {
        Error::Unsupported(format!("{} has no registered reduced pair", sys.name()))
    })
}

/// `λ(Dx) ≺ λ(x)` on sampled `x`.
pub fn is_ds_transform(
    sys: &System,
    d: &LinearMap,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let form = require_form(sys)?;
    check_map_dim(sys, d)?;
    require_samples(n_samples)?;
    Ok(run_campaign(n_samples, seed, tol, |_, rng| {
        let x = sys.sample_element(rng);
        let probe = || -> Result<(Spectrum, Spectrum, f64)> {
            let lx = lambda(sys, &x)?;
            let ldx = lambda(sys, &d.apply_element(&x))?;
            let v = majorize_normal_form(form, &ldx.0, &lx.0, tol)?;
            Ok((lx, ldx, v.margin))
        };
        match probe() {
            Ok((lx, ldx, margin)) => Finding::new(
                (-margin).max(0.0),
                json!({ "x": x, "lambda_x": lx, "lambda_dx": ldx, "margin": margin }),
            ),
            Err(e) => Finding::new(1.0, json!({ "x": x, "error": e.to_string() })),
        }
    }))
}

/// `De = e`, `Dᵀe = e` exactly, and `λ(x) ≥ 0 ⟹ λ(Dx) ≥ 0` on sampled
/// elements with nonnegative spectrum.
pub fn eja_ds_criteria(
    sys: &System,
    d: &LinearMap,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    check_map_dim(sys, d)?;
    require_samples(n_samples)?;
    let e = unit_element(sys)
        .ok_or_else(|| Error::Unsupported(format!("{} has no unit element", sys.name())))?;
    let mut report = CheckReport::new(seed, tol);
    let de = d.apply_element(&e).sub(&e).norm() / (1.0 + e.norm());
    let dte = d.transpose().apply_element(&e).sub(&e).norm() / (1.0 + e.norm());
    report.record(de.max(dte), || json!({ "unit_defect": de, "adjoint_unit_defect": dte }));
    let sampled = run_campaign(n_samples, seed, tol, |_, rng| {
        let c = sys.sample_element(rng);
        let probe = || -> Result<(Element, Spectrum)> {
            let q = lambda(sys, &c)?;
            let low = q.0.iter().copied().fold(0.0f64, f64::min);
            let shifted = Spectrum(q.0.iter().map(|v| v - low).collect());
            let x = witness_a3(sys, &c, &shifted)?;
            let ldx = lambda(sys, &d.apply_element(&x))?;
            Ok((x, ldx))
        };
        match probe() {
            Ok((x, ldx)) => {
                let neg = -ldx.0.iter().copied().fold(0.0f64, f64::min);
                Finding::new(neg / (1.0 + x.norm()), json!({ "x": x, "lambda_dx": ldx }))
            }
            Err(e) => Finding::new(1.0, json!({ "c": c, "error": e.to_string() })),
        }
    });
    report.absorb(sampled);
    Ok(report)
}

/// Transition matrix of a doubly stochastic map on symmetric matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub matrix: DsMatrix,
    /// Set when `x` or `Dx` has a repeated eigenvalue, in which case the
    /// frames (and `M`) are not unique.
    pub degenerate_frame: bool,
}

/// `m_ij = f_iᵀ D(e_j e_jᵀ) f_i` for eigenframes `(e_j)` of `x` and `(f_i)`
/// of `Dx`, so that `λ(Dx) = M λ(x)`.
pub fn extract_transition_matrix(sys: &System, d: &LinearMap, x: &Element) -> Result<TransitionMatrix> {
    let InstanceSpec::Sym { dim: n } = *sys.spec() else {
        return Err(Error::Unsupported(
            "transition matrices are extracted for symmetric matrices only".into(),
        ));
    };
    check_map_dim(sys, d)?;
    sys.check_element(x)?;
    let dx = d.apply_element(x);
    sys.check_element(&dx)?;
    let as_matrix = |v: &[f64]| Matrix::from_row_major(n, n, v.to_vec());
    let ex = sym_eigen(&as_matrix(&x.0)?, DEFAULT_EIGEN_TOL)?;
    let ey = sym_eigen(&as_matrix(&dx.0)?, DEFAULT_EIGEN_TOL)?;
    let gap = |v: &[f64]| {
        let scale = 1.0 + v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        v.windows(2).any(|w| (w[0] - w[1]).abs() <= 1e-8 * scale)
    };
    let mut m = Matrix::zeros(n, n);
    for j in 0..n {
        let ej = ex.frame.col(j);
        let mut proj = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                proj[a * n + b] = ej[a] * ej[b];
            }
        }
        let image = as_matrix(&d.apply(&proj))?;
        for i in 0..n {
            let fi = ey.frame.col(i);
            m[(i, j)] = crate::numerics::dot(&fi, &image.matvec(&fi));
        }
    }
    Ok(TransitionMatrix {
        matrix: DsMatrix { matrix: m },
        degenerate_frame: gap(&ex.values) || gap(&ey.values),
    })
}

/// `D = Σ wᵢ Aᵢ` for convex weights.
pub fn ds_from_automorphisms(sys: &System, weights: &[f64], maps: &[LinearMap]) -> Result<LinearMap> {
    if weights.is_empty() || weights.len() != maps.len() {
        return Err(validation(format!(
            "{} weights for {} maps",
            weights.len(),
            maps.len()
        )));
    }
    if weights.iter().any(|&w| w.is_nan() || w < -1e-12) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(validation(format!("weights {weights:?} are not convex")));
    }
    let n = sys.dim_v();
    let mut acc = Matrix::zeros(n, n);
    for (w, a) in weights.iter().zip(maps) {
        check_map_dim(sys, a)?;
        acc = acc.add(&a.matrix.scale(*w));
    }
    Ok(LinearMap::new(acc, MapKind::DoublyStochastic))
}

/// `Du = u` and `Dᵀu = u` for every center basis vector `u`.
pub fn ds_fixed_points(sys: &System, d: &LinearMap, tol: f64) -> Result<CheckReport> {
    check_map_dim(sys, d)?;
    let mut report = CheckReport::new(0, tol);
    let dt = d.transpose();
    for b in sys.center_desc().basis {
        let a = d.apply_element(&b).sub(&b).norm();
        let t = dt.apply_element(&b).sub(&b).norm();
        report.record(a.max(t), || json!({ "center_vector": b, "defect": a, "adjoint_defect": t }));
    }
    Ok(report)
}
