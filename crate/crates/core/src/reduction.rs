//! Reduced systems `(W, W, μ)` with `μ∘λ = λ` (C1) and `ran μ ⊆ ran λ`
//! (C2), and the dual-cone test for majorization on the reduced side.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{require_samples, run_campaign, sample_rng, CheckReport, Finding};
use crate::center::unit_element;
use crate::error::{validation, Error, Result};
use crate::instances::gaussian_vec;
use crate::majorization::majorize_normal_form;
use crate::numerics::{abs_sort_desc, dot, norm, sort_desc, sub};
use crate::system::{lambda, Spectrum, System};

/// Normal forms of the shipped reduced maps `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WNormalForm {
    /// `μ(q) = q↓`
    Decreasing,
    /// `μ(q) = |q|↓`
    AbsDecreasing,
    /// `μ(q) = q`
    Identity,
}

impl WNormalForm {
    pub fn apply(self, q: &[f64]) -> Vec<f64> {
        match self {
            Self::Decreasing => sort_desc(q),
            Self::AbsDecreasing => abs_sort_desc(q),
            Self::Identity => q.to_vec(),
        }
    }

    /// Orthonormal basis of the center of `(W, W, μ)`.
    pub fn center_basis(self, n: usize) -> Vec<Vec<f64>> {
        match self {
            Self::Decreasing => vec![vec![1.0 / (n as f64).sqrt(); n]],
            Self::AbsDecreasing => Vec::new(),
            Self::Identity => (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect(),
        }
    }

    /// `r ∈ F*` for `F = ran μ`.
    ///
    /// * decreasing: `F` is generated by `(1,0,…)`, `(1,1,0,…)`, …,
    ///   `±(1,…,1)`, so `r ∈ F*` iff every partial sum is `≥ 0` and the
    ///   total is `0`;
    /// * absolute: `F` is generated by the same vectors without `−(1,…,1)`;
    /// * identity: `F = W` and `F* = {0}`.
    pub fn in_dual_cone(self, r: &[f64], tol: f64) -> bool {
        let scale = 1.0 + r.iter().map(|x| x.abs()).sum::<f64>();
        let mut s = 0.0;
        let sums: Vec<f64> = r
            .iter()
            .map(|x| {
                s += x;
                s
            })
            .collect();
        let nonneg = sums.iter().all(|&p| p >= -tol * scale);
        match self {
            Self::Decreasing => nonneg && sums.last().is_none_or(|t| t.abs() <= tol * scale),
            Self::AbsDecreasing => nonneg,
            Self::Identity => norm(r) <= tol * scale,
        }
    }
}

type MuFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A system together with a reduced map `μ` on its spectral space.
#[derive(Clone)]
pub struct ReducedPair {
    pub base: System,
    /// Normal form of `μ`; `None` for custom maps.
    pub form: Option<WNormalForm>,
    mu: Arc<MuFn>,
}

impl fmt::Debug for ReducedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReducedPair")
            .field("base", &self.base)
            .field("form", &self.form)
            .finish()
    }
}

impl ReducedPair {
    /// Pairs `base` with an arbitrary `μ`; used to exercise the checks
    /// against maps that are not reduced.
    pub fn with_custom_mu(
        base: System,
        mu: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            base,
            form: None,
            mu: Arc::new(mu),
        }
    }

    pub fn mu(&self, q: &Spectrum) -> Spectrum {
        Spectrum((self.mu)(&q.0))
    }

    /// `μ` membership: `q = μ(q)`.
    pub fn range_w(&self, q: &Spectrum, tol: f64) -> bool {
        norm(&sub(&(self.mu)(&q.0), &q.0)) <= tol * (1.0 + q.norm())
    }

    fn form(&self) -> Result<WNormalForm> {
        self.form
            .ok_or_else(|| Error::Unsupported("custom μ has no normal form".into()))
    }
}

pub fn make_reduced_pair(sys: &System) -> Result<ReducedPair> {
    let form = sys.reduced_form().ok_or_else(|| {
        Error::Unsupported(format!("{} has no registered reduced pair", sys.name()))
    })?;
    Ok(ReducedPair {
        base: sys.clone(),
        form: Some(form),
        mu: Arc::new(move |q| form.apply(q)),
    })
}

/// Samples `x ∈ V` and `w ∈ W` and checks `μ(λ(x)) = λ(x)` (C1, which is
/// also ran-equality), `μ(w) ∈ ran λ` (C2) and `μ(μ(w)) = μ(w)`.
pub fn check_reduced(pair: &ReducedPair, n_samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_samples(n_samples)?;
    let sys = &pair.base;
    Ok(run_campaign(n_samples, seed, tol, |_, rng| {
        let x = sys.sample_element(rng);
        let w = Spectrum(gaussian_vec(rng, sys.dim_w()));
        let q = match lambda(sys, &x) {
            Ok(q) => q,
            Err(e) => return Finding::new(1.0, json!({ "x": x, "error": e.to_string() })),
        };
        let c1 = pair.mu(&q).sub(&q).norm() / (1.0 + q.norm());
        let m = pair.mu(&w);
        let c2 = if sys.range_contains(&m, tol) { 0.0 } else { 1.0 };
        let idem = pair.mu(&m).sub(&m).norm() / (1.0 + m.norm());
        Finding::new(
            c1.max(c2).max(idem),
            json!({ "x": x, "w": w, "c1_defect": c1, "c2_defect": c2, "idempotence_defect": idem }),
        )
    }))
}

/// Center dimensions agree on both sides, the W-side basis is central
/// for `μ`, and `λ` maps the unit of `V` (if any) to a nonzero central
/// element of `W`.
pub fn center_correspondence(pair: &ReducedPair, tol: f64) -> Result<CheckReport> {
    let form = pair.form()?;
    let sys = &pair.base;
    let mut report = CheckReport::new(0, tol);
    let v_dim = sys.center_desc().dim();
    let w_basis = form.center_basis(sys.dim_w());
    report.record(if v_dim == w_basis.len() { 0.0 } else { 1.0 }, || {
        json!({ "v_center_dim": v_dim, "w_center_dim": w_basis.len() })
    });
    let w_central = |q: &[f64]| -> f64 {
        let neg: Vec<f64> = q.iter().map(|x| -x).collect();
        let a = form.apply(&neg);
        let b = form.apply(q);
        a.iter().zip(&b).map(|(x, y)| (x + y).powi(2)).sum::<f64>().sqrt() / (1.0 + norm(q))
    };
    for b in &w_basis {
        let d = w_central(b);
        report.record(d, || json!({ "w_basis_vector": b, "center_defect": d }));
    }
    if let Some(e) = unit_element(sys) {
        let le = lambda(sys, &e)?;
        let d = w_central(&le.0);
        let zero = if le.norm() > tol { 0.0 } else { 1.0 };
        let proj: f64 = w_basis.iter().map(|b| dot(b, &le.0).powi(2)).sum::<f64>().sqrt();
        let span = (le.norm() - proj).abs() / (1.0 + le.norm());
        report.record(d.max(zero).max(span), || {
            json!({ "unit": e, "lambda_unit": le, "center_defect": d, "span_defect": span })
        });
    }
    Ok(report)
}

/// If `u, v ∈ F` and `u − v ∈ F*`, then `v ≺ u`. The hypothesis is
/// tested exactly; `n_dirs` sampled directions of `F` cross-check it, and
/// the conclusion is asserted on the reduced side.
pub fn dual_cone_majorization_check(
    pair: &ReducedPair,
    u: &Spectrum,
    v: &Spectrum,
    n_dirs: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let form = pair.form()?;
    let sys = &pair.base;
    for (name, q) in [("u", u), ("v", v)] {
        sys.check_spectrum(q)?;
        if !sys.range_contains(q, tol) {
            return Err(validation(format!("{name} = {:?} is not in F = ran μ", q.0)));
        }
    }
    let r = u.sub(v);
    if !form.in_dual_cone(&r.0, tol) {
        return Err(Error::HypothesisNotMet(format!(
            "u − v = {:?} is not in the dual cone F*",
            r.0
        )));
    }
    let mut report = CheckReport::new(seed, tol);
    let verdict = majorize_normal_form(form, &v.0, &u.0, tol)?;
    report.record((-verdict.margin).max(0.0), || {
        json!({ "u": u, "v": v, "margin": verdict.margin })
    });
    for i in 0..n_dirs {
        let mut rng = sample_rng(seed, i as u64);
        let f = form.apply(&gaussian_vec(&mut rng, sys.dim_w()));
        let s = dot(&f, &r.0) / (1.0 + norm(&f) * r.norm());
        report.record((-s).max(0.0), || json!({ "direction": f, "pairing": s }));
    }
    Ok(report)
}
