//! The FTvN system contract.
//!
//! A system is a triple `(V, W, λ)` of real inner-product spaces and a
//! norm-preserving spectral map satisfying
//!
//! * `‖λ(x)‖ = ‖x‖` (A1),
//! * `⟨x, y⟩ ≤ ⟨λ(x), λ(y)⟩` (A2),
//! * for every `c` and every `q` in the range of `λ` there is an `x` with
//!   `λ(x) = q` and `⟨c, x⟩ = ⟨λ(c), q⟩` (A3).
//!
//! Elements of both spaces are dense coordinate vectors and inner products
//! are the standard dot product on those coordinates (matrix instances
//! flatten row-major, which turns the trace inner product into a dot
//! product).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::automorphisms::LinearMap;
use crate::campaign::{require_samples, run_campaign, CheckReport, Finding, SampleRng};
use crate::center::CenterDescriptor;
use crate::error::{validation, Error, Result};
use crate::instances::InstanceSpec;
use crate::numerics::{add, dot, norm, sub, Matrix};
use crate::reduction::WNormalForm;

/// A point of `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<f64>);

/// A point of `W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum(pub Vec<f64>);

macro_rules! coord_vector {
    ($t:ty) => {
        impl $t {
            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }
            pub fn len(&self) -> usize {
                self.0.len()
            }
            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }
            pub fn norm(&self) -> f64 {
                norm(&self.0)
            }
            pub fn dot(&self, other: &Self) -> f64 {
                dot(&self.0, &other.0)
            }
            pub fn zeros(n: usize) -> Self {
                Self(vec![0.0; n])
            }
            pub fn add(&self, other: &Self) -> Self {
                Self(add(&self.0, &other.0))
            }
            pub fn sub(&self, other: &Self) -> Self {
                Self(sub(&self.0, &other.0))
            }
            pub fn scale(&self, s: f64) -> Self {
                Self(self.0.iter().map(|x| x * s).collect())
            }
            pub fn neg(&self) -> Self {
                self.scale(-1.0)
            }
        }

        impl From<Vec<f64>> for $t {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

coord_vector!(Element);
coord_vector!(Spectrum);

/// Per-instance behaviour behind a [`System`].
pub(crate) trait Instance: Send + Sync + fmt::Debug {
    fn dim_v(&self) -> usize;
    fn dim_w(&self) -> usize;
    /// Instance-specific shape constraints on raw coordinates.
    fn validate(&self, _x: &[f64]) -> Result<()> {
        Ok(())
    }
    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// Called only with `q` already known to be in range.
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>>;
    /// Best attainable A3 candidate; differs from `witness` only for
    /// instances without a constructive witness.
    fn a3_candidate(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        self.witness(c, q)
    }
    fn range_contains(&self, q: &[f64], tol: f64) -> bool;
    fn center(&self) -> CenterDescriptor;
    /// Designated unit element when the center is a line.
    fn unit(&self) -> Option<Vec<f64>> {
        let c = self.center();
        (c.basis.len() == 1).then(|| c.basis[0].0.clone())
    }
    fn sample(&self, rng: &mut SampleRng) -> Vec<f64>;
    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap;
    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap>;
    fn reduced_form(&self) -> Option<WNormalForm> {
        None
    }
    /// Linear isometry `W → V` realizing `W ⊆ V`, when declared.
    fn embedding(&self) -> Option<Matrix> {
        None
    }
    /// Fixed `(c, u)` pairs checked before random samples.
    fn designated_probes(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        Vec::new()
    }
}

/// An immutable system descriptor.
#[derive(Clone)]
pub struct System {
    pub(crate) spec: InstanceSpec,
    pub(crate) inner: Arc<dyn Instance>,
}

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("System").field("spec", &self.spec).finish()
    }
}

impl System {
    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.name()
    }

    pub fn dim_v(&self) -> usize {
        self.inner.dim_v()
    }

    pub fn dim_w(&self) -> usize {
        self.inner.dim_w()
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        if x.len() != self.dim_v() {
            return Err(validation(format!(
                "{}: element has {} coordinates, expected {}",
                self.name(),
                x.len(),
                self.dim_v()
            )));
        }
        if x.0.iter().any(|v| !v.is_finite()) {
            return Err(validation("element has non-finite coordinates"));
        }
        self.inner.validate(&x.0)
    }

    pub fn check_spectrum(&self, q: &Spectrum) -> Result<()> {
        if q.len() != self.dim_w() {
            return Err(validation(format!(
                "{}: spectrum has {} coordinates, expected {}",
                self.name(),
                q.len(),
                self.dim_w()
            )));
        }
        if q.0.iter().any(|v| !v.is_finite()) {
            return Err(validation("spectrum has non-finite coordinates"));
        }
        Ok(())
    }

    pub fn range_contains(&self, q: &Spectrum, tol: f64) -> bool {
        q.len() == self.dim_w() && self.inner.range_contains(&q.0, tol)
    }

    pub fn center_desc(&self) -> CenterDescriptor {
        self.inner.center()
    }

    /// Random element: i.i.d. standard normal coordinates followed by the
    /// instance projection.
    pub fn sample_element(&self, rng: &mut SampleRng) -> Element {
        Element(self.inner.sample(rng))
    }

    pub fn reduced_form(&self) -> Option<WNormalForm> {
        self.inner.reduced_form()
    }

    pub fn embedding(&self) -> Option<Matrix> {
        self.inner.embedding()
    }

    pub(crate) fn unit(&self) -> Option<Element> {
        self.inner.unit().map(Element)
    }

    pub(crate) fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        self.inner.sample_automorphism(rng)
    }

    pub(crate) fn transport(&self, x: &Element, y: &Element, tol: f64) -> Result<LinearMap> {
        self.inner.orbit_transport(&x.0, &y.0, tol)
    }

    pub(crate) fn a3_candidate(&self, c: &Element, q: &Spectrum) -> Result<Element> {
        self.inner.a3_candidate(&c.0, &q.0).map(Element)
    }

    pub(crate) fn designated_probes(&self) -> Vec<(Element, Element)> {
        self.inner
            .designated_probes()
            .into_iter()
            .map(|(c, u)| (Element(c), Element(u)))
            .collect()
    }
}

/// `λ(x)`.
pub fn lambda(sys: &System, x: &Element) -> Result<Spectrum> {
    sys.check_element(x)?;
    sys.inner.lambda(&x.0).map(Spectrum)
}

/// Constructs `x` with `λ(x) = q` and `⟨c, x⟩ = ⟨λ(c), q⟩`.
pub fn witness_a3(sys: &System, c: &Element, q: &Spectrum) -> Result<Element> {
    sys.check_element(c)?;
    sys.check_spectrum(q)?;
    if !sys.range_contains(q, 1e-12) {
        return Err(Error::Range(format!(
            "{:?} is not in the range of λ for {}",
            q.0,
            sys.name()
        )));
    }
    sys.inner.witness(&c.0, &q.0).map(Element)
}

/// `max{⟨c,x⟩ : λ(x) = λ(u)} = ⟨λ(c), λ(u)⟩` together with a maximizer.
pub fn orbit_support(sys: &System, c: &Element, u: &Element) -> Result<(f64, Element)> {
    let lc = lambda(sys, c)?;
    let lu = lambda(sys, u)?;
    let value = lc.dot(&lu);
    let maximizer = witness_a3(sys, c, &lu)?;
    Ok((value, maximizer))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionStatus {
    Holds,
    Fails,
    /// Defect between `tol` and `10·tol`: too close to call.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    /// Scaled defect; zero when the criterion holds exactly.
    pub defect: f64,
    pub status: CriterionStatus,
}

impl Criterion {
    fn classify(defect: f64, tol: f64) -> Self {
        let status = if defect <= tol {
            CriterionStatus::Holds
        } else if defect > 10.0 * tol {
            CriterionStatus::Fails
        } else {
            CriterionStatus::Indeterminate
        };
        Self { defect, status }
    }
}

/// The three equivalent commutation criteria:
/// (i) `⟨x,y⟩ = ⟨λ(x),λ(y)⟩`, (ii) `λ(x+y) = λ(x)+λ(y)`,
/// (iii) `‖λ(x)−λ(y)‖ = ‖x−y‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommuteReport {
    pub verdict: bool,
    pub inner_product: Criterion,
    pub additivity: Criterion,
    pub distance: Criterion,
}

impl CommuteReport {
    pub fn criteria(&self) -> [&Criterion; 3] {
        [&self.inner_product, &self.additivity, &self.distance]
    }

    /// Whether the three criteria agree; `None` if any is indeterminate.
    pub fn agreement(&self) -> Option<bool> {
        let s = self.criteria().map(|c| c.status);
        if s.contains(&CriterionStatus::Indeterminate) {
            None
        } else {
            Some(s[0] == s[1] && s[1] == s[2])
        }
    }
}

pub fn commute(sys: &System, x: &Element, y: &Element, tol: f64) -> Result<CommuteReport> {
    let lx = lambda(sys, x)?;
    let ly = lambda(sys, y)?;
    let lxy = lambda(sys, &x.add(y))?;
    let (nx, ny) = (x.norm(), y.norm());

    let d1 = (lx.dot(&ly) - x.dot(y)).abs() / (1.0 + nx * ny);
    let d2 = lxy.sub(&lx.add(&ly)).norm() / (1.0 + nx + ny);
    let d3 = (x.sub(y).norm() - lx.sub(&ly).norm()).abs() / (1.0 + nx + ny);

    let inner_product = Criterion::classify(d1, tol);
    Ok(CommuteReport {
        verdict: inner_product.status == CriterionStatus::Holds,
        inner_product,
        additivity: Criterion::classify(d2, tol),
        distance: Criterion::classify(d3, tol),
    })
}

/// Per-sample defects of the three axioms.
pub(crate) fn axiom_defects(
    sys: &System,
    c: &Element,
    u: &Element,
) -> Result<(f64, f64, f64, serde_json::Value)> {
    let lc = lambda(sys, c)?;
    let q = lambda(sys, u)?;
    let a1 = (lc.norm() - c.norm()).abs() / (1.0 + c.norm());
    let a2 = (c.dot(u) - lc.dot(&q)).max(0.0) / (1.0 + c.norm() * u.norm());
    let x = sys.a3_candidate(c, &q)?;
    let lx = lambda(sys, &x)?;
    let inner = c.dot(&x);
    let spectral = lc.dot(&q);
    let a3 = ((inner - spectral).abs() / (1.0 + c.norm() * q.norm()))
        .max(lx.sub(&q).norm() / (1.0 + q.norm()));
    let payload = json!({
        "c": c,
        "u": u,
        "q": q,
        "x": x,
        "inner_product": inner,
        "spectral_inner_product": spectral,
        "gap": spectral - inner,
        "a1_defect": a1,
        "a2_defect": a2,
        "a3_defect": a3,
    });
    Ok((a1, a2, a3, payload))
}

/// Randomized check of A1, A2 and A3 on `n_samples` pairs, preceded by
/// any designated probes the instance exposes.
pub fn check_axioms(sys: &System, n_samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_samples(n_samples)?;
    let mut report = CheckReport::new(seed, tol);
    for (c, u) in sys.designated_probes() {
        let (a1, a2, a3, payload) = axiom_defects(sys, &c, &u)?;
        report.record(a1.max(a2).max(a3), || payload);
    }
    let sampled = run_campaign(n_samples, seed, tol, |_, rng| {
        let c = sys.sample_element(rng);
        let u = sys.sample_element(rng);
        match axiom_defects(sys, &c, &u) {
            Ok((a1, a2, a3, payload)) => Finding::new(a1.max(a2).max(a3), payload),
            Err(e) => Finding::new(f64::MAX, json!({ "c": c, "u": u, "error": e.to_string() })),
        }
    });
    report.absorb(sampled);
    Ok(report)
}

/// `⟨λ(c), Σλ(xᵢ)⟩ − ⟨λ(c), λ(Σxᵢ)⟩`; nonnegative in any FTvN system.
pub fn sublinearity_gap(sys: &System, c: &Element, xs: &[Element]) -> Result<f64> {
    let first = xs
        .first()
        .ok_or_else(|| validation("sublinearity_gap needs at least one element"))?;
    let lc = lambda(sys, c)?;
    let mut sum = first.clone();
    let mut spec_sum = lambda(sys, first)?;
    for x in &xs[1..] {
        sum = sum.add(x);
        spec_sum = spec_sum.add(&lambda(sys, x)?);
    }
    let ls = lambda(sys, &sum)?;
    Ok(lc.dot(&spec_sum) - lc.dot(&ls))
}
