//! The center `C = {x : λ(−x) = −λ(x)}`, unit elements and the orthogonal
//! decomposition `V = C + C⊥`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::automorphisms::sample_center_element;
use crate::campaign::{require_samples, run_campaign, sample_rng, CheckReport, Finding};
use crate::error::Result;
use crate::numerics::dot;
use crate::system::{lambda, Element, System};

pub const DEFAULT_N_PROBE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterKind {
    /// `C = {0}`
    Trivial,
    /// `C = R·e`
    Line,
    /// `C = V`
    Full,
    Custom,
}

/// Orthonormal basis of the center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterDescriptor {
    pub basis: Vec<Element>,
    pub kind: CenterKind,
}

impl CenterDescriptor {
    pub fn from_basis(basis: Vec<Element>, dim_v: usize) -> Self {
        let kind = match basis.len() {
            0 => CenterKind::Trivial,
            d if d == dim_v => CenterKind::Full,
            1 => CenterKind::Line,
            _ => CenterKind::Custom,
        };
        Self { basis, kind }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `‖λ(−x) + λ(x)‖ / (1 + ‖x‖)`
pub fn center_defect(sys: &System, x: &Element) -> Result<f64> {
    let lx = lambda(sys, x)?;
    let lnx = lambda(sys, &x.neg())?;
    Ok(lnx.add(&lx).norm() / (1.0 + x.norm()))
}

pub fn in_center(sys: &System, x: &Element, tol: f64) -> Result<bool> {
    Ok(center_defect(sys, x)? <= tol)
}

/// Probes the orbit of `x` with A3 maximizers for `n_probe` random
/// directions; true iff every probe lands back on `x`.
pub fn orbit_singleton(
    sys: &System,
    x: &Element,
    n_probe: usize,
    seed: u64,
    tol: f64,
) -> Result<bool> {
    let q = lambda(sys, x)?;
    for i in 0..n_probe {
        let c = sys.sample_element(&mut sample_rng(seed, i as u64));
        let w = sys.a3_candidate(&c, &q)?;
        if w.sub(x).norm() > tol * (1.0 + x.norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The designated unit when the center is a line.
pub fn unit_element(sys: &System) -> Option<Element> {
    (sys.center_desc().kind == CenterKind::Line)
        .then(|| sys.unit())
        .flatten()
}

/// `x = x_c + x_⊥` with `x_c` the orthogonal projection onto `C`.
pub fn decompose(sys: &System, x: &Element) -> Result<(Element, Element)> {
    sys.check_element(x)?;
    let mut xc = vec![0.0; x.len()];
    for b in &sys.center_desc().basis {
        let t = dot(&x.0, &b.0);
        for (ci, bi) in xc.iter_mut().zip(&b.0) {
            *ci += t * bi;
        }
    }
    let xc = Element(xc);
    let xp = x.sub(&xc);
    Ok((xc, xp))
}

/// `λ(C) = λ(V) ∩ −λ(V)`: on samples, `−λ(x)` lies in the range exactly
/// when `x` is central. Half of the samples are drawn from the center.
pub fn lineality_check(sys: &System, n_samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    require_samples(n_samples)?;
    Ok(run_campaign(n_samples, seed, tol, |i, rng| {
        let x = if i % 2 == 0 {
            sys.sample_element(rng)
        } else {
            sample_center_element(sys, rng)
        };
        let probe = || -> Result<(bool, bool)> {
            let lx = lambda(sys, &x)?;
            Ok((sys.range_contains(&lx.neg(), tol), in_center(sys, &x, tol)?))
        };
        match probe() {
            Ok((a, b)) if a == b => Finding::ok(),
            Ok((a, b)) => Finding::new(
                1.0,
                json!({ "x": x, "neg_spectrum_in_range": a, "in_center": b }),
            ),
            Err(e) => Finding::new(1.0, json!({ "x": x, "error": e.to_string() })),
        }
    }))
}
