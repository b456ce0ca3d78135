//! Real square matrices with the decreasing singular value map.

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::Result;
use crate::instances::rn::check_same_orbit;
use crate::instances::{gaussian_vec, haar_orthogonal, is_nonneg_decreasing};
use crate::numerics::{svd_values, Matrix, SvdResult};
use crate::reduction::WNormalForm;
use crate::system::Instance;

pub(crate) const SVD_TOL: f64 = 1e-14;

#[derive(Debug)]
pub(crate) struct SingVal {
    n: usize,
}

impl SingVal {
    pub(crate) fn new(n: usize) -> Self {
        Self { n }
    }

    fn svd(&self, x: &[f64]) -> Result<SvdResult> {
        let m = Matrix::from_row_major(self.n, self.n, x.to_vec()).expect("length checked by System");
        svd_values(&m, SVD_TOL)
    }
}

impl Instance for SingVal {
    fn dim_v(&self) -> usize {
        self.n * self.n
    }

    fn dim_w(&self) -> usize {
        self.n
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.svd(x)?.values)
    }

    /// `U diag(q) Vᵀ` from an SVD `c = U diag(s(c)) Vᵀ`.
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        Ok(self.svd(c)?.synthesize(q).into_vec())
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        is_nonneg_decreasing(q, tol)
    }

    fn center(&self) -> CenterDescriptor {
        CenterDescriptor::from_basis(Vec::new(), self.dim_v())
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        gaussian_vec(rng, self.n * self.n)
    }

    /// `X ↦ UXVᵀ` for independent Haar-random `U`, `V`.
    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        let u = haar_orthogonal(rng, self.n);
        let v = haar_orthogonal(rng, self.n);
        LinearMap::new(u.kron(&v), MapKind::Conjugation)
    }

    /// `X ↦ (U_y U_xᵀ) X (V_x V_yᵀ)`
    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        let (sx, sy) = (self.svd(x)?, self.svd(y)?);
        check_same_orbit(&sx.values, &sy.values, tol)?;
        let l = sy.left.matmul(&sx.left.transpose());
        let r = sy.right.matmul(&sx.right.transpose());
        Ok(LinearMap::new(l.kron(&r), MapKind::Conjugation))
    }

    fn reduced_form(&self) -> Option<WNormalForm> {
        Some(WNormalForm::AbsDecreasing)
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
