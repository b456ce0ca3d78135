//! `R × Rᵐ` with `μ(t, v) = ((t+‖v‖)/√2, (t−‖v‖)/√2)`, the composition of
//! the product system `(t, ‖v‖)` with the rotation
//! `(w₁, w₂) ↦ ((w₁+w₂)/√2, (w₁−w₂)/√2)`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::Result;
use crate::instances::rn::check_same_orbit;
use crate::instances::{gaussian_vec, haar_orthogonal, householder, is_decreasing};
use crate::numerics::{norm, Matrix};
use crate::reduction::WNormalForm;
use crate::system::{Element, Instance};

#[derive(Debug)]
pub(crate) struct Spin {
    m: usize,
}

impl Spin {
    pub(crate) fn new(m: usize) -> Self {
        Self { m }
    }

    fn spectrum(x: &[f64]) -> Vec<f64> {
        let (t, r) = (x[0], norm(&x[1..]));
        vec![FRAC_1_SQRT_2 * (t + r), FRAC_1_SQRT_2 * (t - r)]
    }
}

impl Instance for Spin {
    fn dim_v(&self) -> usize {
        1 + self.m
    }

    fn dim_w(&self) -> usize {
        2
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(Self::spectrum(x))
    }

    /// `t = (a+b)/√2` and `v = ((a−b)/√2)·w/‖w‖`, aligned with the vector
    /// part `w` of `c` (or with `e₁` when `w = 0`).
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let t = FRAC_1_SQRT_2 * (q[0] + q[1]);
        let rho = FRAC_1_SQRT_2 * (q[0] - q[1]);
        let w = &c[1..];
        let nw = norm(w);
        let mut x = Vec::with_capacity(self.dim_v());
        x.push(t);
        if nw == 0.0 {
            x.push(rho);
            x.extend(std::iter::repeat_n(0.0, self.m - 1));
        } else {
            x.extend(w.iter().map(|v| rho * v / nw));
        }
        Ok(x)
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        is_decreasing(q, tol)
    }

    fn center(&self) -> CenterDescriptor {
        let mut e = vec![0.0; self.dim_v()];
        e[0] = 1.0;
        CenterDescriptor::from_basis(vec![Element(e)], self.dim_v())
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        gaussian_vec(rng, self.dim_v())
    }

    /// `(t, v) ↦ (t, Qv)`
    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        let q = haar_orthogonal(rng, self.m);
        LinearMap::new(Matrix::block_diag(&[Matrix::identity(1), q]), MapKind::Orthogonal)
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        check_same_orbit(&Self::spectrum(x), &Self::spectrum(y), tol)?;
        let h = householder(&x[1..], &y[1..]);
        Ok(LinearMap::new(Matrix::block_diag(&[Matrix::identity(1), h]), MapKind::Orthogonal))
    }

    /// The reduced side sorts pairs decreasingly.
    fn reduced_form(&self) -> Option<WNormalForm> {
        Some(WNormalForm::Decreasing)
    }

    /// `(a, b) ↦ ((a+b)/√2, ((a−b)/√2)·e₁)`
    fn embedding(&self) -> Option<Matrix> {
        let mut m = Matrix::zeros(self.dim_v(), 2);
        m[(0, 0)] = FRAC_1_SQRT_2;
        m[(0, 1)] = FRAC_1_SQRT_2;
        m[(1, 0)] = FRAC_1_SQRT_2;
        m[(1, 1)] = -FRAC_1_SQRT_2;
        Some(m)
    }
}
