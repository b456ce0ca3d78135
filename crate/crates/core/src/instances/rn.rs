//! `Rⁿ` with the decreasing rearrangement, and with the decreasing
//! rearrangement of absolute values (which also serves the finite-sequence
//! system).

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::{Error, Result};
use crate::instances::{
    gaussian_vec, is_decreasing, is_nonneg_decreasing, random_permutation,
    signed_permutation_matrix,
};
use crate::numerics::{abs_sort_desc, argsort_abs_desc, argsort_desc, norm, sort_desc, Matrix};
use crate::reduction::WNormalForm;
use crate::system::{Element, Instance};

#[derive(Debug)]
pub(crate) struct RnDown {
    n: usize,
}

impl RnDown {
    pub(crate) fn new(n: usize) -> Self {
        Self { n }
    }
}

impl Instance for RnDown {
    fn dim_v(&self) -> usize {
        self.n
    }

    fn dim_w(&self) -> usize {
        self.n
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(sort_desc(x))
    }

    /// Places `q` in the sort order of `c`.
    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.n];
        for (k, &i) in argsort_desc(c).iter().enumerate() {
            x[i] = q[k];
        }
        Ok(x)
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        is_decreasing(q, tol)
    }

    fn center(&self) -> CenterDescriptor {
        let s = 1.0 / (self.n as f64).sqrt();
        CenterDescriptor::from_basis(vec![Element(vec![s; self.n])], self.n)
    }

    fn unit(&self) -> Option<Vec<f64>> {
        Some(vec![1.0; self.n])
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        gaussian_vec(rng, self.n)
    }

    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        let p = random_permutation(rng, self.n);
        let src: Vec<usize> = (0..self.n).collect();
        LinearMap::new(
            signed_permutation_matrix(&p, &src, &vec![1.0; self.n]),
            MapKind::Permutation,
        )
    }

    /// Composes the sorting permutations of `x` and `y`.
    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        check_same_orbit(&sort_desc(x), &sort_desc(y), tol)?;
        let m = signed_permutation_matrix(&argsort_desc(y), &argsort_desc(x), &vec![1.0; self.n]);
        Ok(LinearMap::new(m, MapKind::Permutation))
    }

    fn reduced_form(&self) -> Option<WNormalForm> {
        Some(WNormalForm::Decreasing)
    }

    fn embedding(&self) -> Option<Matrix> {
        Some(Matrix::identity(self.n))
    }
}

/// `|x|↓`. Also backs the finitely-supported sequence system, whose
/// spectral map and witness construction coincide with this one.
#[derive(Debug)]
pub(crate) struct RnAbs {
    n: usize,
}

impl RnAbs {
    pub(crate) fn new(n: usize) -> Self {
        Self { n }
    }
}

fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Nonzero entries of `c` in decreasing `|c|` order receive `±q₁, ±q₂, …`
/// with the sign of the entry; the remaining entries of `q` fill the zero
/// positions of `c` in ascending index order.
pub(crate) fn signed_placement(c: &[f64], q: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; c.len()];
    let order = argsort_abs_desc(c);
    let (nonzero, zero): (Vec<usize>, Vec<usize>) = order.iter().partition(|&&i| c[i] != 0.0);
    let mut zero = zero;
    zero.sort_unstable();
    for (k, &i) in nonzero.iter().chain(zero.iter()).enumerate() {
        x[i] = sign(c[i]) * q[k];
    }
    x
}

impl Instance for RnAbs {
    fn dim_v(&self) -> usize {
        self.n
    }

    fn dim_w(&self) -> usize {
        self.n
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(abs_sort_desc(x))
    }

    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        Ok(signed_placement(c, q))
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        is_nonneg_decreasing(q, tol)
    }

    fn center(&self) -> CenterDescriptor {
        CenterDescriptor::from_basis(Vec::new(), self.n)
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        gaussian_vec(rng, self.n)
    }

    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        use rand::Rng;
        let p = random_permutation(rng, self.n);
        let src: Vec<usize> = (0..self.n).collect();
        let signs: Vec<f64> = (0..self.n)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        LinearMap::new(
            signed_permutation_matrix(&p, &src, &signs),
            MapKind::SignedPermutation,
        )
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        check_same_orbit(&abs_sort_desc(x), &abs_sort_desc(y), tol)?;
        let (sx, sy) = (argsort_abs_desc(x), argsort_abs_desc(y));
        let signs: Vec<f64> = sx.iter().zip(&sy).map(|(&i, &j)| sign(x[i]) * sign(y[j])).collect();
        Ok(LinearMap::new(
            signed_permutation_matrix(&sy, &sx, &signs),
            MapKind::SignedPermutation,
        ))
    }

    fn reduced_form(&self) -> Option<WNormalForm> {
        Some(WNormalForm::AbsDecreasing)
    }

    fn embedding(&self) -> Option<Matrix> {
        Some(Matrix::identity(self.n))
    }
}

pub(crate) fn check_same_orbit(lx: &[f64], ly: &[f64], tol: f64) -> Result<()> {
    let d: Vec<f64> = lx.iter().zip(ly).map(|(a, b)| a - b).collect();
    if lx.len() != ly.len() || norm(&d) > tol * (1.0 + norm(lx)) {
        return Err(Error::OrbitMismatch(format!(
            "spectra differ: {lx:?} vs {ly:?}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn down_witness_aligns_with_sort_order() {
        let s = RnDown::new(2);
        assert_eq!(s.witness(&[1.0, 2.0], &[5.0, 3.0]).unwrap(), vec![3.0, 5.0]);
    }

    #[test]
    fn abs_witness_matches_signs_and_magnitudes() {
        // |c| order is 2,1,0 at indices 0,2,1
        let x = signed_placement(&[-2.0, 0.0, 1.0], &[3.0, 1.0, 0.0]);
        assert_eq!(x, vec![-3.0, 0.0, 1.0]);
    }

    #[test]
    fn finite_sequence_leftovers_fill_zero_slots_in_order() {
        let x = signed_placement(&[0.0, 5.0, 0.0, -2.0], &[4.0, 3.0, 0.0, 0.0]);
        assert_eq!(x, vec![0.0, 4.0, 0.0, -3.0]);
        let x = signed_placement(&[0.0, 5.0, 0.0], &[4.0, 3.0, 2.0]);
        assert_eq!(x, vec![3.0, 4.0, 2.0]);
    }

    #[test]
    fn transport_maps_x_to_y() {
        let s = RnAbs::new(3);
        let (x, y) = ([1.0, -3.0, 2.0], [-2.0, 1.0, 3.0]);
        let a = s.orbit_transport(&x, &y, 1e-12).unwrap();
        assert_eq!(a.apply(&x), y.to_vec());
    }
}
