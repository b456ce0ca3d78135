//! Automorphisms: invertible linear maps `A` of `V` with `λ(Ax) = λ(x)`.
//! Every such map is orthogonal and fixes the center pointwise.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{require_samples, run_campaign, sample_rng, CheckReport, Finding, SampleRng};
use crate::error::{validation, Error, Result};
use crate::numerics::{norm, sub, Matrix};
use crate::system::{lambda, Element, System};

/// Where a map came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Identity,
    Permutation,
    SignedPermutation,
    /// `X ↦ UXVᵀ` on flattened matrices (`U = V` for symmetric instances).
    Conjugation,
    Orthogonal,
    /// Block-diagonal or otherwise composed maps.
    Composite,
    /// Convex combinations of automorphisms.
    DoublyStochastic,
}

/// A linear map of `V` in coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub matrix: Matrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<MapKind>,
}

impl LinearMap {
    pub fn new(matrix: Matrix, kind: MapKind) -> Self {
        Self {
            matrix,
            meta: Some(kind),
        }
    }

    /// A map without provenance.
    pub fn from_matrix(matrix: Matrix) -> Self {
        Self { matrix, meta: None }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Matrix::identity(n), MapKind::Identity)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.matvec(x)
    }

    pub fn apply_element(&self, x: &Element) -> Element {
        Element(self.apply(&x.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let kind = match (self.meta, other.meta) {
            (Some(a), Some(b)) if a == b => a,
            _ => MapKind::Composite,
        };
        LinearMap::new(self.matrix.matmul(&other.matrix), kind)
    }

    /// The adjoint `Aᵀ` (the inverse for orthogonal maps).
    pub fn transpose(&self) -> LinearMap {
        LinearMap {
            matrix: self.matrix.transpose(),
            meta: self.meta,
        }
    }
}

pub(crate) fn check_map_dim(sys: &System, a: &LinearMap) -> Result<()> {
    let m = &a.matrix;
    if !m.is_square() || m.rows() != sys.dim_v() {
        return Err(validation(format!(
            "{}: map is {}×{}, expected {}×{}",
            sys.name(),
            m.rows(),
            m.cols(),
            sys.dim_v(),
            sys.dim_v()
        )));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(validation("map has non-finite entries"));
    }
    Ok(())
}

/// Random element of the center (zero when the center is trivial).
pub(crate) fn sample_center_element(sys: &System, rng: &mut SampleRng) -> Element {
    use rand_distr::{Distribution, StandardNormal};
    let mut z = vec![0.0; sys.dim_v()];
    for b in &sys.center_desc().basis {
        let t: f64 = StandardNormal.sample(rng);
        for (zi, bi) in z.iter_mut().zip(&b.0) {
            *zi += t * bi;
        }
    }
    Element(z)
}

/// `‖λ(Ax) − λ(x)‖ / (1 + ‖x‖)`; errors when `Ax` is not a valid element.
fn spectral_drift(sys: &System, a: &LinearMap, x: &Element) -> Result<f64> {
    let ax = a.apply_element(x);
    let lx = lambda(sys, x)?;
    let lax = lambda(sys, &ax)?;
    Ok(lax.sub(&lx).norm() / (1.0 + x.norm()))
}

/// Checks invertibility, `λ(Ax) = λ(x)` on sampled `x`, and `Az = z` on
/// sampled center elements `z`.
pub fn is_automorphism(
    sys: &System,
    a: &LinearMap,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    check_map_dim(sys, a)?;
    require_samples(n_samples)?;
    let mut report = CheckReport::new(seed, tol);
    let (det, min_pivot) = a.matrix.elimination_pivots();
    report.record(if det > 1e-10 { 0.0 } else { 1.0 }, || {
        json!({ "reason": "singular", "abs_det": det, "min_pivot": min_pivot })
    });
    let sampled = run_campaign(n_samples, seed, tol, |_, rng| {
        let x = sys.sample_element(rng);
        let z = sample_center_element(sys, rng);
        let drift = match spectral_drift(sys, a, &x) {
            Ok(d) => d,
            Err(e) => return Finding::new(1.0, json!({ "x": x, "error": e.to_string() })),
        };
        let az = a.apply_element(&z);
        let moved = az.sub(&z).norm() / (1.0 + z.norm());
        Finding::new(
            drift.max(moved),
            json!({ "x": x, "spectral_drift": drift, "center_element": z, "center_drift": moved }),
        )
    });
    report.absorb(sampled);
    Ok(report)
}

/// One sample from the instance's automorphism group.
pub fn automorphism_sampler(sys: &System, seed: u64) -> LinearMap {
    sys.sample_automorphism(&mut sample_rng(seed, 0))
}

/// An automorphism `A` with `Ax = y`, for `x` and `y` in the same orbit.
pub fn orbit_transport(sys: &System, x: &Element, y: &Element, tol: f64) -> Result<LinearMap> {
    let (lx, ly) = (lambda(sys, x)?, lambda(sys, y)?);
    if lx.sub(&ly).norm() > tol * (1.0 + lx.norm()) {
        return Err(Error::OrbitMismatch(format!(
            "λ(x) = {:?} differs from λ(y) = {:?}",
            lx.0, ly.0
        )));
    }
    let a = sys.transport(x, y, tol)?;
    let miss = norm(&sub(&a.apply(&x.0), &y.0));
    if miss > tol * (1.0 + x.norm()) {
        return Err(Error::Numeric(format!(
            "transport misses its target by {miss:.3e}"
        )));
    }
    Ok(a)
}

/// Checks the normal-decomposition characterization on samples:
/// `λ(Eλ(x)) = λ(x)` for the embedding `E: W → V`, and transport between
/// `x` and witness-generated orbit mates.
pub fn nds_check(sys: &System, n_samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_samples(n_samples)?;
    let embed = match sys.embedding() {
        Some(e) => e,
        None if sys.dim_w() == sys.dim_v() => Matrix::identity(sys.dim_v()),
        None => {
            return Err(Error::Unsupported(format!(
                "{} declares no embedding of W into V",
                sys.name()
            )))
        }
    };
    Ok(run_campaign(n_samples, seed, tol, |_, rng| {
        let x = sys.sample_element(rng);
        let c = sys.sample_element(rng);
        let probe = sys.sample_element(rng);
        match nds_sample(sys, &embed, &x, &c, &probe, tol) {
            Ok((idem, transport, payload)) => Finding::new(idem.max(transport), payload),
            Err(e) => Finding::new(1.0, json!({ "x": x, "c": c, "error": e.to_string() })),
        }
    }))
}

fn nds_sample(
    sys: &System,
    embed: &Matrix,
    x: &Element,
    c: &Element,
    probe: &Element,
    tol: f64,
) -> Result<(f64, f64, serde_json::Value)> {
    let q = lambda(sys, x)?;
    let eq = Element(embed.matvec(&q.0));
    let lq = lambda(sys, &eq)?;
    let idem = lq.sub(&q).norm() / (1.0 + q.norm());
    let mate = sys.a3_candidate(c, &q)?;
    let transport = match orbit_transport(sys, x, &mate, tol.max(1e-9)) {
        Ok(a) => {
            let miss = a.apply_element(x).sub(&mate).norm() / (1.0 + x.norm());
            miss.max(spectral_drift(sys, &a, probe)?)
        }
        Err(_) => 1.0,
    };
    let payload = json!({ "x": x, "lambda_x": q, "mate": mate, "idempotence_defect": idem, "transport_defect": transport });
    Ok((idem, transport, payload))
}
