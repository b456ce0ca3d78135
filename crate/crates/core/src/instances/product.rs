//! Cartesian products; coordinates, spectra and maps are concatenated or
//! block-diagonal.

use crate::automorphisms::{LinearMap, MapKind};
use crate::campaign::SampleRng;
use crate::center::CenterDescriptor;
use crate::error::Result;
use crate::numerics::Matrix;
use crate::system::{Element, Instance, System};

#[derive(Debug)]
pub(crate) struct Product {
    parts: Vec<System>,
    v_off: Vec<usize>,
    w_off: Vec<usize>,
}

impl Product {
    pub(crate) fn new(parts: Vec<System>) -> Self {
        let mut v_off = vec![0];
        let mut w_off = vec![0];
        for p in &parts {
            v_off.push(v_off.last().unwrap() + p.dim_v());
            w_off.push(w_off.last().unwrap() + p.dim_w());
        }
        Self { parts, v_off, w_off }
    }

    fn part(&self, k: usize) -> &dyn Instance {
        self.parts[k].inner.as_ref()
    }

    fn v_slice<'a>(&self, x: &'a [f64], k: usize) -> &'a [f64] {
        &x[self.v_off[k]..self.v_off[k + 1]]
    }

    fn w_slice<'a>(&self, q: &'a [f64], k: usize) -> &'a [f64] {
        &q[self.w_off[k]..self.w_off[k + 1]]
    }

    fn embed_v(&self, k: usize, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_v()];
        out[self.v_off[k]..self.v_off[k + 1]].copy_from_slice(x);
        out
    }

    fn blocks(&self, maps: Vec<LinearMap>) -> LinearMap {
        let mats: Vec<Matrix> = maps.into_iter().map(|m| m.matrix).collect();
        LinearMap::new(Matrix::block_diag(&mats), MapKind::Composite)
    }
}

impl Instance for Product {
    fn dim_v(&self) -> usize {
        *self.v_off.last().unwrap()
    }

    fn dim_w(&self) -> usize {
        *self.w_off.last().unwrap()
    }

    fn validate(&self, x: &[f64]) -> Result<()> {
        (0..self.parts.len()).try_for_each(|k| self.part(k).validate(self.v_slice(x, k)))
    }

    fn lambda(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.dim_w());
        for k in 0..self.parts.len() {
            out.extend(self.part(k).lambda(self.v_slice(x, k))?);
        }
        Ok(out)
    }

    fn witness(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.dim_v());
        for k in 0..self.parts.len() {
            out.extend(self.part(k).witness(self.v_slice(c, k), self.w_slice(q, k))?);
        }
        Ok(out)
    }

    fn a3_candidate(&self, c: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.dim_v());
        for k in 0..self.parts.len() {
            out.extend(self.part(k).a3_candidate(self.v_slice(c, k), self.w_slice(q, k))?);
        }
        Ok(out)
    }

    fn range_contains(&self, q: &[f64], tol: f64) -> bool {
        (0..self.parts.len()).all(|k| self.part(k).range_contains(self.w_slice(q, k), tol))
    }

    /// `C = C₁ × … × C_k`.
    fn center(&self) -> CenterDescriptor {
        let mut basis = Vec::new();
        for k in 0..self.parts.len() {
            for b in self.part(k).center().basis {
                basis.push(Element(self.embed_v(k, &b.0)));
            }
        }
        CenterDescriptor::from_basis(basis, self.dim_v())
    }

    /// A unit exists only when exactly one factor has a line center and
    /// every other factor has a trivial one.
    fn unit(&self) -> Option<Vec<f64>> {
        let dims: Vec<usize> = (0..self.parts.len())
            .map(|k| self.part(k).center().basis.len())
            .collect();
        if dims.iter().sum::<usize>() != 1 {
            return None;
        }
        let k = dims.iter().position(|&d| d == 1)?;
        Some(self.embed_v(k, &self.part(k).unit()?))
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<f64> {
        (0..self.parts.len()).flat_map(|k| self.part(k).sample(rng)).collect()
    }

    fn sample_automorphism(&self, rng: &mut SampleRng) -> LinearMap {
        let maps = (0..self.parts.len())
            .map(|k| self.part(k).sample_automorphism(rng))
            .collect();
        self.blocks(maps)
    }

    fn orbit_transport(&self, x: &[f64], y: &[f64], tol: f64) -> Result<LinearMap> {
        let maps = (0..self.parts.len())
            .map(|k| {
                self.part(k)
                    .orbit_transport(self.v_slice(x, k), self.v_slice(y, k), tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.blocks(maps))
    }

    fn embedding(&self) -> Option<Matrix> {
        let mats = (0..self.parts.len())
            .map(|k| self.part(k).embedding())
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::block_diag(&mats))
    }
}
