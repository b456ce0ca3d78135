//! `Rⁿ` with `λ(x) = Sx` for a fixed orthogonal `S`. Every orbit is a
//! singleton and the center is all of `V`.

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::{validation, Result};
use crate::instances::gaussian_vec;
use crate::instances::rn::check_same_orbit;
use crate::numerics::Matrix;
use crate::reduction::WNormalForm;
use crate::system::{Element, Instance};

#[derive(Debug)]
pub(crate) struct Discrete {
    s: Matrix,
}

impl Discrete {
    pub(crate) fn new(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(validation("discrete isometry is empty"));
        }
        let s = Matrix::from_rows(rows)?;
        if !s.is_square() {
            return Err(validation(format!(
                "discrete isometry must be square, got {}×{}",
                s.rows(),
                s.cols()
            )));
        }
        if s.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(validation("discrete isometry has non-finite entries"));
        }
        let defect = s.orthogonality_defect();
        if defect > 1e-10 {
            return Err(validation(format!(
                "discrete isometry is not orthogonal (‖SᵀS − I‖ = {defect:.3e})"
            )));
        }
        Ok(Self { s })
    }
}

impl Instance for Discrete {
    fn dim_v(&self) -> usize {
        self.s.rows()
    }

    fn dim_w(&self) -> usize {
        self.s.rows()
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.s.matvec(x))
    }

    /// `Sᵀq`, the unique preimage.
    fn witness(&self, _c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        Ok(self.s.tr_matvec(q))
    }

    fn range_contains(&self, _q: &[f64], _tol: f64) -> bool {
        true
    }

    fn center(&self) -> CenterDescriptor {
        let n = self.dim_v();
        let basis = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                Element(e)
            })
            .collect();
        CenterDescriptor::from_basis(basis, n)
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        gaussian_vec(rng, self.dim_v())
    }

    fn sample_automorphism(&self, _rng: &mut SampleRng) -> LinearMap {
        LinearMap::new(Matrix::identity(self.dim_v()), MapKind::Identity)
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        check_same_orbit(&self.s.matvec(x), &self.s.matvec(y), tol)?;
        Ok(LinearMap::new(Matrix::identity(self.dim_v()), MapKind::Identity))
    }

    fn reduced_form(&self) -> Option<WNormalForm> {
        Some(WNormalForm::Identity)
    }

    fn embedding(&self) -> Option<Matrix> {
        Some(Matrix::identity(self.dim_v()))
    }
}
