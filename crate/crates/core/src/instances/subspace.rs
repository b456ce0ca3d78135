//! The two-dimensional subspace `V = span{(1,1,1), (3,1,0)}` of `R³` with
//! `λ(x) = x↓`. Writing `x = α(1,1,1) + β(3,1,0)`,
//! `λ(x) = x` when `β ≥ 0` and `λ(x) = α(1,1,1) + β(0,1,3)` when `β < 0`.
//!
//! A1 and A2 are inherited from `R³`, but A3 fails: for `c = (3,1,0)` and
//! `q = λ(−c) = (0,−1,−3)` the only preimage of `q` is `−c`, so
//! `⟨c,x⟩ = −10` while `⟨λ(c),q⟩ = −1`.

use serde::{Deserialize, Serialize};

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::{validation, Error, Result};
use crate::instances::rn::check_same_orbit;
use crate::instances::{gaussian_vec, make_system, InstanceSpec};
use crate::numerics::{dot, norm, Matrix};
use crate::system::{Element, Instance, System};

const ONES: [f64; 3] = [1.0, 1.0, 1.0];
const B: [f64; 3] = [3.0, 1.0, 0.0];
const B_REV: [f64; 3] = [0.0, 1.0, 3.0];
/// Normal of the plane `V` in `R³`.
const NORMAL: [f64; 3] = [1.0, -3.0, 2.0];

fn combo(alpha: f64, beta: f64, b: &[f64; 3]) -> Vec<f64> {
    (0..3).map(|i| alpha * ONES[i] + beta * b[i]).collect()
}

/// `(α, β)` of a point of `V`.
pub(crate) fn coords(x: &[f64]) -> (f64, f64) {
    (x[2], x[1] - x[2])
}

fn plane_residual(x: &[f64]) -> f64 {
    dot(&NORMAL, x).abs() / norm(&NORMAL)
}

/// Every `x ∈ V` with `λ(x) = q`, one candidate per branch at most.
fn preimages(q: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let scale = 1.0 + norm(q);
    let mut out = Vec::new();
    // β ≥ 0: x = q itself
    if plane_residual(q) <= tol * scale && q[1] - q[2] >= -tol * scale {
        out.push(q.to_vec());
    }
    // β < 0: q = α(1,1,1) + β(0,1,3)
    let (alpha, beta) = (q[0], q[1] - q[0]);
    let fit = combo(alpha, beta, &B_REV);
    let resid = norm(&crate::numerics::sub(&fit, q));
    if resid <= tol * scale && beta < 0.0 {
        out.push(combo(alpha, beta, &B));
    }
    out
}

/// Result of an exhaustive search for an A3 witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A3Search {
    /// All `x ∈ V` with `λ(x) = q`.
    pub preimages: Vec<Vec<f64>>,
    /// Preimage maximizing `⟨c,x⟩`.
    pub best: Option<Vec<f64>>,
    pub best_inner: f64,
    /// `⟨λ(c), q⟩`.
    pub target: f64,
    /// `target − best_inner`; zero when A3 holds for `(c, q)`.
    pub gap: f64,
    pub witness_found: bool,
}

/// The fixed failing scenario and its accessors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceScenario {
    pub basis: [Vec<f64>; 2],
    pub c: Vec<f64>,
    pub u: Vec<f64>,
    pub q: Vec<f64>,
}

pub fn subspace_counterexample() -> SubspaceScenario {
    SubspaceScenario {
        basis: [ONES.to_vec(), B.to_vec()],
        c: B.to_vec(),
        u: B.iter().map(|v| -v).collect(),
        q: vec![0.0, -1.0, -3.0],
    }
}

impl SubspaceScenario {
    /// `α(1,1,1) + β(3,1,0)`.
    pub fn point(&self, alpha: f64, beta: f64) -> Vec<f64> {
        combo(alpha, beta, &B)
    }

    pub fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_in_plane(x)?;
        Ok(branch_lambda(x))
    }

    pub fn a3_search(&self, c: &[f64], q: &[f64], tol: f64) -> Result<A3Search> {
        check_in_plane(c)?;
        if q.len() != 3 {
            return Err(validation("q must have 3 coordinates"));
        }
        let target = dot(&branch_lambda(c), q);
        let preimages = preimages(q, 1e-12);
        let best = preimages
            .iter()
            .max_by(|a, b| dot(c, a).total_cmp(&dot(c, b)))
            .cloned();
        let best_inner = best.as_ref().map_or(f64::NEG_INFINITY, |x| dot(c, x));
        let gap = target - best_inner;
        Ok(A3Search {
            witness_found: gap.abs() <= tol * (1.0 + norm(c) * norm(q)),
            preimages,
            best,
            best_inner,
            target,
            gap,
        })
    }

    pub fn system(&self) -> System {
        make_system(&InstanceSpec::SubspaceCounterexample).expect("fixed spec is valid")
    }
}

fn branch_lambda(x: &[f64]) -> Vec<f64> {
    let (alpha, beta) = coords(x);
    if beta >= 0.0 {
        combo(alpha, beta, &B)
    } else {
        combo(alpha, beta, &B_REV)
    }
}

fn check_in_plane(x: &[f64]) -> Result<()> {
    if x.len() != 3 {
        return Err(validation("subspace elements have 3 coordinates"));
    }
    if plane_residual(x) > 1e-10 * (1.0 + norm(x)) {
        return Err(validation(format!("{x:?} is not in span{{(1,1,1),(3,1,0)}}")));
    }
    Ok(())
}

#[derive(Debug)]
pub(crate) struct Subspace;

impl Instance for Subspace {
    fn dim_v(&self) -> usize {
        3
    }

    fn dim_w(&self) -> usize {
        3
    }

    fn validate(&self, x: &[f64]) -> Result<()> {
        check_in_plane(x)
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(branch_lambda(x))
    }

    fn witness(&self, _c: &[f64], _q: &[f64]) -> Result<Vec<f64>> {
        Err(Error::Unsupported(
            "this system has no A3 witness in general; use the exhaustive search".into(),
        ))
    }

    /// Best preimage of `q` by exhaustive search over both branches.
    fn a3_candidate(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        subspace_counterexample()
            .a3_search(c, q, 0.0)?
            .best
            .ok_or_else(|| Error::Range(format!("{q:?} has no preimage")))
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        !preimages(q, tol).is_empty()
    }

    /// `λ(−x) = −λ(x)` forces `β = 0`.
    fn center(&self) -> CenterDescriptor {
        let s = 1.0 / 3f64.sqrt();
        CenterDescriptor::from_basis(vec![Element(vec![s; 3])], 3)
    }

    fn unit(&self) -> Option<Vec<f64>> {
        Some(ONES.to_vec())
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        let g = gaussian_vec(rng, 2);
        combo(g[0], g[1], &B)
    }

    /// Every orbit is a singleton, so only the identity acts.
    fn sample_automorphism(&self, _rng: &mut SampleRng) -> LinearMap {
        LinearMap::new(Matrix::identity(3), MapKind::Identity)
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        check_same_orbit(&branch_lambda(x), &branch_lambda(y), tol)?;
        check_same_orbit(x, y, tol)?;
        Ok(LinearMap::new(Matrix::identity(3), MapKind::Identity))
    }

    fn designated_probes(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        let s = subspace_counterexample();
        vec![(s.c, s.u)]
    }
}
