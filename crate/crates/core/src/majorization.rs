//! Majorization in `W` (partial sums of decreasing rearrangements) and in
//! `V` (`x ∈ conv[y]`), decided on the reduced side.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{require_samples, run_campaign, CheckReport, Finding};
use crate::doubly_stochastic::{birkhoff_decompose, construct_ds_witness};
use crate::error::{validation, Error, Result};
use crate::instances::InstanceSpec;
use crate::numerics::{abs_sort_desc, hull_membership, norm, sort_desc, sub};
use crate::reduction::WNormalForm;
use crate::system::{lambda, Element, Spectrum, System};

/// Largest `n` accepted by [`hull_oracle_rn`] (`n!` vertices).
pub const HULL_ORACLE_MAX_DIM: usize = 6;

/// `x = Σ wₖ vₖ` with each `vₖ` in the orbit of the majorizing vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullWitness {
    pub weights: Vec<f64>,
    pub vertices: Vec<Vec<f64>>,
}

impl HullWitness {
    pub fn combine(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.vertices.first().map_or(0, Vec::len)];
        for (w, v) in self.weights.iter().zip(&self.vertices) {
            for (o, vi) in out.iter_mut().zip(v) {
                *o += w * vi;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub weak_holds: bool,
    /// Smallest slack of the deciding inequalities relative to
    /// `1 + ‖v‖₁`; negative when one is violated.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<HullWitness>,
}

fn check_lengths(u: &[f64], v: &[f64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(validation(format!(
            "length mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    if u.iter().chain(v).any(|x| !x.is_finite()) {
        return Err(validation("non-finite entries"));
    }
    Ok(())
}

/// Relative slacks `(Σₖ v↓ − Σₖ u↓) / (1 + ‖v‖₁)` for `k = 1..n`.
fn partial_sum_slacks(u_sorted: &[f64], v_sorted: &[f64], scale: f64) -> Vec<f64> {
    let (mut su, mut sv) = (0.0, 0.0);
    u_sorted
        .iter()
        .zip(v_sorted)
        .map(|(a, b)| {
            su += a;
            sv += b;
            (sv - su) / scale
        })
        .collect()
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// `u ≺ v` and `u ≺_w v` in `Rⁿ`.
pub fn hlp_majorize(u: &[f64], v: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    check_lengths(u, v)?;
    let n = u.len();
    if n == 0 {
        return Ok(MajorizationVerdict {
            holds: true,
            weak_holds: true,
            margin: 0.0,
            witness: None,
        });
    }
    let slacks = partial_sum_slacks(&sort_desc(u), &sort_desc(v), 1.0 + l1(v));
    let weak_holds = slacks.iter().all(|&s| s >= -tol);
    let eq = slacks[n - 1].abs();
    let ineq = slacks[..n - 1].iter().copied().fold(f64::INFINITY, f64::min);
    let holds = ineq >= -tol && eq <= tol;
    let margin = match (n, eq <= tol) {
        (1, true) => 0.0,
        (1, false) => -eq,
        (_, true) => ineq,
        (_, false) => ineq.min(-eq),
    };
    Ok(MajorizationVerdict {
        holds,
        weak_holds,
        margin,
        witness: None,
    })
}

/// `u ≺ v` in the reduced system with normal form `form`:
/// partial sums for the decreasing form, weak majorization of absolute
/// values for the absolute form, equality for the identity form.
pub fn majorize_normal_form(
    form: WNormalForm,
    u: &[f64],
    v: &[f64],
    tol: f64,
) -> Result<MajorizationVerdict> {
    check_lengths(u, v)?;
    match form {
        WNormalForm::Decreasing => hlp_majorize(u, v, tol),
        WNormalForm::AbsDecreasing => {
            let (ua, va) = (abs_sort_desc(u), abs_sort_desc(v));
            let slacks = partial_sum_slacks(&ua, &va, 1.0 + l1(&va));
            let margin = slacks.iter().copied().fold(f64::INFINITY, f64::min);
            let margin = if margin.is_finite() { margin } else { 0.0 };
            Ok(MajorizationVerdict {
                holds: margin >= -tol,
                weak_holds: margin >= -tol,
                margin,
                witness: None,
            })
        }
        WNormalForm::Identity => {
            let margin = -norm(&sub(u, v)) / (1.0 + l1(v));
            Ok(MajorizationVerdict {
                holds: margin >= -tol,
                weak_holds: margin >= -tol,
                margin,
                witness: None,
            })
        }
    }
}

fn reduced_form(sys: &System) -> Result<WNormalForm> {
    sys.reduced_form().ok_or_else(|| {
        Error::Unsupported(format!("{} has no registered reduced pair", sys.name()))
    })
}

/// `x ≺ y` in `V`, decided as `λ(x) ≺ λ(y)` on the reduced side. For `Rⁿ`
/// with the decreasing rearrangement a convex-combination certificate
/// over permutations of `y` is attached.
pub fn majorize_in_v(sys: &System, x: &Element, y: &Element, tol: f64) -> Result<MajorizationVerdict> {
    let form = reduced_form(sys)?;
    let (lx, ly) = (lambda(sys, x)?, lambda(sys, y)?);
    let mut verdict = majorize_normal_form(form, &lx.0, &ly.0, tol)?;
    if verdict.holds && matches!(sys.spec(), InstanceSpec::RnDown { .. }) {
        let m = construct_ds_witness(&x.0, &y.0, tol)?;
        let terms = birkhoff_decompose(&m.matrix, 1e-9)?.terms;
        verdict.witness = Some(HullWitness {
            weights: terms.iter().map(|t| t.weight).collect(),
            vertices: terms
                .iter()
                .map(|t| t.permutation.iter().map(|&j| y.0[j]).collect())
                .collect(),
        });
    }
    Ok(verdict)
}

fn permutations(v: &[f64]) -> Vec<Vec<f64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// `x ∈ conv{Py : P a permutation}` by explicit vertex enumeration.
/// Independent of [`hlp_majorize`]; `weak_holds` mirrors `holds`.
pub fn hull_oracle_rn(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    check_lengths(x, y)?;
    if x.len() > HULL_ORACLE_MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "hull oracle enumerates n! vertices; n = {} exceeds {HULL_ORACLE_MAX_DIM}",
            x.len()
        )));
    }
    let vertices = permutations(y);
    let h = hull_membership(x, &vertices, tol)?;
    let witness = h.weights.map(|w| {
        let (weights, vertices): (Vec<f64>, Vec<Vec<f64>>) = w
            .into_iter()
            .zip(vertices)
            .filter(|(wk, _)| *wk > 0.0)
            .unzip();
        HullWitness { weights, vertices }
    });
    Ok(MajorizationVerdict {
        holds: h.inside,
        weak_holds: h.inside,
        margin: -h.distance / (1.0 + l1(y)),
        witness,
    })
}

/// Necessary conditions for `x ≺ y` over sampled directions `c`:
/// `⟨c,x⟩ ≤ ⟨λ(c),λ(y)⟩` and `⟨λ(c),λ(x)⟩ ≤ ⟨λ(c),λ(y)⟩`.
pub fn support_test(
    sys: &System,
    x: &Element,
    y: &Element,
    n_dirs: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    require_samples(n_dirs)?;
    let (lx, ly) = (lambda(sys, x)?, lambda(sys, y)?);
    Ok(run_campaign(n_dirs, seed, tol, |_, rng| {
        let c = sys.sample_element(rng);
        let lc = match lambda(sys, &c) {
            Ok(l) => l,
            Err(e) => return Finding::new(1.0, json!({ "c": c, "error": e.to_string() })),
        };
        let bound = lc.dot(&ly);
        let scale = 1.0 + c.norm() * y.norm();
        let v1 = (c.dot(x) - bound) / scale;
        let v2 = (lc.dot(&lx) - bound) / scale;
        Finding::new(
            v1.max(v2).max(0.0),
            json!({ "c": c, "inner": c.dot(x), "spectral_inner": lc.dot(&lx), "bound": bound }),
        )
    }))
}

/// `x ≺ y` and `y ≺ x`; holds exactly when `λ(x) = λ(y)`.
pub fn mutual_majorization_check(sys: &System, x: &Element, y: &Element, tol: f64) -> Result<bool> {
    Ok(majorize_in_v(sys, x, y, tol)?.holds && majorize_in_v(sys, y, x, tol)?.holds)
}

/// `λ(x₁+…+x_k) ≺ λ(x₁)+…+λ(x_k)` on the reduced side.
pub fn lidskii_sum_check(sys: &System, xs: &[Element], tol: f64) -> Result<MajorizationVerdict> {
    let form = reduced_form(sys)?;
    let first = xs
        .first()
        .ok_or_else(|| validation("lidskii_sum_check needs at least one element"))?;
    let mut sum = first.clone();
    let mut spec_sum = lambda(sys, first)?;
    for x in &xs[1..] {
        sum = sum.add(x);
        spec_sum = spec_sum.add(&lambda(sys, x)?);
    }
    let ls: Spectrum = lambda(sys, &sum)?;
    majorize_normal_form(form, &ls.0, &spec_sum.0, tol)
}
