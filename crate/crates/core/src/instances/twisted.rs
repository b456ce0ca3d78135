//! `λ̃(x) = −λ(−x)` over an inner system.

use crate::automorphisms::LinearMap;
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::Result;
use crate::system::{Instance, System};

fn neg(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

#[derive(Debug)]
pub(crate) struct Twisted {
    inner: System,
}

impl Twisted {
    pub(crate) fn new(inner: System) -> Self {
        Self { inner }
    }

    fn base(&self) -> &dyn Instance {
        self.inner.inner.as_ref()
    }
}

impl Instance for Twisted {
    fn dim_v(&self) -> usize {
        self.base().dim_v()
    }

    fn dim_w(&self) -> usize {
        self.base().dim_w()
    }

    fn validate(&self, x: &[f64]) -> Result<()> {
        self.base().validate(x)
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(neg(&self.base().lambda(&neg(x))?))
    }

    /// `−x'` where `x'` is the inner witness for `(−c, −q)`.
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        Ok(neg(&self.base().witness(&neg(c), &neg(q))?))
    }

    fn a3_candidate(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        Ok(neg(&self.base().a3_candidate(&neg(c), &neg(q))?))
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        self.base().range_contains(&neg(q), tol)
    }

    /// `λ̃(−x) = −λ̃(x)` iff `λ(−x) = −λ(x)`, so the center is unchanged.
    fn center(&self) -> CenterDescriptor {
        self.base().center()
    }

    fn unit(&self) -> Option<Vec<f64>> {
        self.base().unit()
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        self.base().sample(rng)
    }

    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        self.base().sample_automorphism(rng)
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        self.base().orbit_transport(&neg(x), &neg(y), tol)
    }
}
