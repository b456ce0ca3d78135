//! A real inner-product space with `λ(x) = ‖x‖`.

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::Result;
use crate::instances::rn::check_same_orbit;
use crate::instances::{gaussian_vec, haar_orthogonal, householder};
use crate::numerics::{norm, Matrix};
use crate::system::Instance;

#[derive(Debug)]
pub(crate) struct NormSystem {
    n: usize,
}

impl NormSystem {
    pub(crate) fn new(n: usize) -> Self {
        Self { n }
    }
}

impl Instance for NormSystem {
    fn dim_v(&self) -> usize {
        self.n
    }

    fn dim_w(&self) -> usize {
        1
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![norm(x)])
    }

    /// `q · c/‖c‖`, or `q·e₁` when `c = 0`.
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let nc = norm(c);
        if nc == 0.0 {
            let mut x = vec![0.0; self.n];
            x[0] = q[0];
            return Ok(x);
        }
        Ok(c.iter().map(|v| q[0] * v / nc).collect())
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        q[0] >= -tol
    }

    fn center(&self) -> CenterDescriptor {
        CenterDescriptor::from_basis(Vec::new(), self.n)
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        gaussian_vec(rng, self.n)
    }

    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        LinearMap::new(haar_orthogonal(rng, self.n), MapKind::Orthogonal)
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        check_same_orbit(&[norm(x)], &[norm(y)], tol)?;
        Ok(LinearMap::new(householder(x, y), MapKind::Orthogonal))
    }

    /// `t ↦ t·e₁`
    fn embedding(&self) -> Option<Matrix> {
        let mut m = Matrix::zeros(self.n, 1);
        m[(0, 0)] = 1.0;
        Some(m)
    }
}
