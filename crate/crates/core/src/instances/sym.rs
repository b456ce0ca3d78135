//! Real symmetric matrices with the decreasing eigenvalue map.
//!
//! Elements are `n×n` matrices flattened row-major, so the trace inner
//! product `tr(XY)` is the coordinate dot product.

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::{validation, Result};
use crate::instances::rn::check_same_orbit;
use crate::instances::{gaussian_vec, haar_orthogonal, is_decreasing};
use crate::numerics::{asymmetry, spectral_synthesis, sym_eigen, EigenResult, Matrix, DEFAULT_EIGEN_TOL};
use crate::reduction::WNormalForm;
use crate::system::{Element, Instance};

#[derive(Debug)]
pub(crate) struct Sym {
    n: usize,
}

impl Sym {
    pub(crate) fn new(n: usize) -> Self {
        Self { n }
    }

    fn matrix(&self, x: &[f64]) -> Matrix {
        Matrix::from_row_major(self.n, self.n, x.to_vec()).expect("length checked by System")
    }

    fn eigen(&self, x: &[f64]) -> Result<EigenResult> {
        sym_eigen(&self.matrix(x), DEFAULT_EIGEN_TOL)
    }
}

impl Instance for Sym {
    fn dim_v(&self) -> usize {
        self.n * self.n
    }

    fn dim_w(&self) -> usize {
        self.n
    }

    fn validate(&self, x: &[f64]) -> Result<()> {
        if asymmetry(&self.matrix(x)) > 1e-12 {
            return Err(validation("element is not a symmetric matrix"));
        }
        Ok(())
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.eigen(x)?.values)
    }

    /// `F diag(q) Fᵀ` on an eigenframe `F` of `c`.
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let e = self.eigen(c)?;
        Ok(spectral_synthesis(&e.frame, q).into_vec())
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        is_decreasing(q, tol)
    }

    fn center(&self) -> CenterDescriptor {
        let e = Matrix::identity(self.n).scale(1.0 / (self.n as f64).sqrt());
        CenterDescriptor::from_basis(vec![Element(e.into_vec())], self.dim_v())
    }

    fn unit(&self) -> Option<Vec<f64>> {
        Some(Matrix::identity(self.n).into_vec())
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        let g = gaussian_vec(rng, self.n * self.n);
        let mut x = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                x[i * self.n + j] = 0.5 * (g[i * self.n + j] + g[j * self.n + i]);
            }
        }
        x
    }

    /// `X ↦ QXQᵀ` for a Haar-random orthogonal `Q`.
    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        let q = haar_orthogonal(rng, self.n);
        LinearMap::new(q.kron(&q), MapKind::Conjugation)
    }

    /// Conjugation by `F_y F_xᵀ`.
    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        let (ex, ey) = (self.eigen(x)?, self.eigen(y)?);
        check_same_orbit(&ex.values, &ey.values, tol)?;
        let q = ey.frame.matmul(&ex.frame.transpose());
        Ok(LinearMap::new(q.kron(&q), MapKind::Conjugation))
    }

    fn reduced_form(&self) -> Option<WNormalForm> {
        Some(WNormalForm::Decreasing)
    }

    /// `q ↦ diag(q)`
    fn embedding(&self) -> Option<Matrix> {
        let mut m = Matrix::zeros(self.n * self.n, self.n);
        for i in 0..self.n {
            m[(i * self.n + i, i)] = 1.0;
        }
        Some(m)
    }
}
