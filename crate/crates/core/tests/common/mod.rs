//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's numerical kernels.

#![allow(dead_code)]

use ftvn::instances::{make_system, InstanceSpec};
use ftvn::{Element, Spectrum, System};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn sys(spec: InstanceSpec) -> System {
    make_system(&spec).unwrap()
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gauss(r: &mut impl Rng, n: usize) -> Vec<f64> {
    // Box-Muller, independent of rand_distr
    (0..n)
        .map(|_| {
            let u: f64 = r.gen_range(f64::EPSILON..1.0);
            let v: f64 = r.gen();
            (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        })
        .collect()
}

pub fn el(v: &[f64]) -> Element {
    Element(v.to_vec())
}

pub fn sp(v: &[f64]) -> Spectrum {
    Spectrum(v.to_vec())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Eigenvalues of a symmetric 2×2 matrix from its characteristic
/// polynomial, decreasing.
pub fn charpoly_eig2(a: f64, b: f64, d: f64) -> [f64; 2] {
    let m = 0.5 * (a + d);
    let r = (0.25 * (a - d).powi(2) + b * b).sqrt();
    [m + r, m - r]
}

/// Eigenvalues of a symmetric 3×3 matrix by the trigonometric solution of
/// its characteristic cubic, decreasing.
pub fn charpoly_eig3(m: &[f64]) -> [f64; 3] {
    let (a, b, c, d, e, f) = (m[0], m[4], m[8], m[1], m[5], m[2]);
    let p1 = d * d + e * e + f * f;
    let q = (a + b + c) / 3.0;
    let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
    if p2 == 0.0 {
        return [q; 3];
    }
    let p = (p2 / 6.0).sqrt();
    let bm = [
        (a - q) / p, d / p, f / p,
        d / p, (b - q) / p, e / p,
        f / p, e / p, (c - q) / p,
    ];
    let det = bm[0] * (bm[4] * bm[8] - bm[5] * bm[7]) - bm[1] * (bm[3] * bm[8] - bm[5] * bm[6])
        + bm[2] * (bm[3] * bm[7] - bm[4] * bm[6]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [l1, 3.0 * q - l1 - l3, l3]
}

/// Decreasing eigenvalues via nalgebra.
pub fn na_eigenvalues(flat: &[f64], n: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, flat);
    desc(m.symmetric_eigen().eigenvalues.as_slice())
}

/// Decreasing singular values via nalgebra.
pub fn na_singular_values(flat: &[f64], n: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, flat);
    desc(m.singular_values().as_slice())
}

/// Random symmetric matrix, flattened.
pub fn rand_sym(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let g = gauss(r, n * n);
    let mut x = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            x[i * n + j] = 0.5 * (g[i * n + j] + g[j * n + i]);
        }
    }
    x
}

/// Orthogonal matrix from nalgebra's QR of a Gaussian matrix, flattened.
pub fn rand_orthogonal(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, &gauss(r, n * n));
    let q = m.qr().q();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = q[(i, j)];
        }
    }
    out
}

/// `Q X Qᵀ` on flattened matrices.
pub fn conjugate(q: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    let qm = DMatrix::from_row_slice(n, n, q);
    let xm = DMatrix::from_row_slice(n, n, x);
    let y = &qm * xm * qm.transpose();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = y[(i, j)];
        }
    }
    out
}

/// `x*_k = inf{α ≥ 0 : #{i : |x_i| > α} ≤ k}` (0-based `k`), evaluated by
/// scanning the candidate levels `{0} ∪ {|x_i|}`.
pub fn inf_formula_rearrangement(x: &[f64]) -> Vec<f64> {
    let mut levels: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    levels.push(0.0);
    (0..x.len())
        .map(|k| {
            levels
                .iter()
                .copied()
                .filter(|&a| x.iter().filter(|v| v.abs() > a).count() <= k)
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Solves a small dense system by Gaussian elimination with partial
/// pivoting; `None` when singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for k in c..n {
                a[i][k] -= f * a[c][k];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `x ∈ conv(vertices)` by barycentric coordinates over every simplex of
/// `dim + 1` vertices, where the vertices span an affine space of
/// dimension `dim` and lie in the hyperplane of constant coordinate sum.
pub fn barycentric_inside(x: &[f64], vertices: &[Vec<f64>], tol: f64) -> bool {
    let n = x.len();
    let k = n; // permutohedron: affine dimension n − 1
    for s in subsets(vertices.len(), k) {
        // rows: first n − 1 coordinates plus the affine constraint
        let mut a = vec![vec![0.0; k]; k];
        let mut b = vec![0.0; k];
        for r in 0..n - 1 {
            for (c, &vi) in s.iter().enumerate() {
                a[r][c] = vertices[vi][r];
            }
            b[r] = x[r];
        }
        a[k - 1] = vec![1.0; k];
        b[k - 1] = 1.0;
        if let Some(w) = gauss_solve(a, b) {
            if w.iter().all(|&wi| wi >= -tol) {
                let mut comb = vec![0.0; n];
                for (c, &vi) in s.iter().enumerate() {
                    for i in 0..n {
                        comb[i] += w[c] * vertices[vi][i];
                    }
                }
                if dist(&comb, x) <= tol * (1.0 + x.iter().map(|v| v.abs()).sum::<f64>()) {
                    return true;
                }
            }
        }
    }
    false
}

pub fn all_permutations(v: &[f64]) -> Vec<Vec<f64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let h = rest.remove(i);
        for mut t in all_permutations(&rest) {
            t.insert(0, h);
            out.push(t);
        }
    }
    out
}

/// Random doubly stochastic matrix as a convex combination of `k` random
/// permutation matrices, row-major.
pub fn random_ds(r: &mut impl Rng, n: usize, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| r.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let mut m = vec![0.0; n * n];
    for wk in w {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, r.gen_range(0..=i));
        }
        for (i, &j) in p.iter().enumerate() {
            m[i * n + j] += wk;
        }
    }
    m
}

pub fn matvec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..m.len() / n).map(|i| dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// The shipped FTvN instances.
pub fn catalog() -> Vec<InstanceSpec> {
    let theta: f64 = 0.7;
    vec![
        InstanceSpec::RnDown { dim: 5 },
        InstanceSpec::RnAbs { dim: 4 },
        InstanceSpec::NormSystem { dim: 3 },
        InstanceSpec::Sym { dim: 4 },
        InstanceSpec::SingVal { dim: 3 },
        InstanceSpec::Spin { dim: 3 },
        InstanceSpec::Discrete {
            isometry: vec![vec![theta.cos(), -theta.sin()], vec![theta.sin(), theta.cos()]],
        },
        InstanceSpec::Twisted { inner: Box::new(InstanceSpec::RnDown { dim: 4 }) },
        InstanceSpec::Product {
            parts: vec![InstanceSpec::RnDown { dim: 2 }, InstanceSpec::Sym { dim: 3 }],
        },
        InstanceSpec::FiniteSeq { dim: 6 },
    ]
}
