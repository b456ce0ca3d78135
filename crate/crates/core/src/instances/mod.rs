//! Catalog of concrete systems.
//!
//! | kind | `V` | `W` | `λ` |
//! |------|-----|-----|-----|
//! | `rn-down` | `Rⁿ` | `Rⁿ` | `x↓` |
//! | `rn-abs` | `Rⁿ` | `Rⁿ` | `|x|↓` |
//! | `norm-system` | `Rⁿ` | `R` | `‖x‖` |
//! | `sym` | `Sⁿ` | `Rⁿ` | eigenvalues, decreasing |
//! | `sing-val` | real `n×n` | `Rⁿ` | singular values, decreasing |
//! | `spin` | `R × Rᵐ` | `R²` | `((t+‖v‖)/√2, (t−‖v‖)/√2)` |
//! | `discrete` | `Rⁿ` | `Rⁿ` | `Sx` for an orthogonal `S` |
//! | `twisted` | inner `V` | inner `W` | `−λ(−x)` |
//! | `product` | `V₁×…×V_k` | `W₁×…×W_k` | componentwise |
//! | `finite-seq` | finitely supported sequences of length `n` | same | `|x|↓` |
//! | `subspace-counterexample` | `span{(1,1,1),(3,1,0)}` | `R³` | `x↓` |

mod discrete;
mod norm;
mod product;
mod rearrangement;
mod rn;
mod singval;
mod spin;
mod subspace;
mod sym;
mod twisted;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::campaign::SampleRng;
use crate::error::{validation, Result};
use crate::numerics::{orthonormal_completion, Matrix};
use crate::system::{Instance, System};

pub use rearrangement::{decreasing_rearrangement, distribution_function, RearrangementResult};
pub use subspace::{subspace_counterexample, A3Search, SubspaceScenario};

/// Declarative description of a system instance; also the JSON form
/// accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    RnDown { dim: usize },
    RnAbs { dim: usize },
    NormSystem { dim: usize },
    Sym { dim: usize },
    SingVal { dim: usize },
    /// `dim` is the dimension of the vector part `v`; `V = R × R^dim`.
    Spin { dim: usize },
    /// `isometry` is a square orthogonal matrix given by rows.
    Discrete { isometry: Vec<Vec<f64>> },
    Twisted { inner: Box<InstanceSpec> },
    Product { parts: Vec<InstanceSpec> },
    FiniteSeq { dim: usize },
    SubspaceCounterexample,
}

impl InstanceSpec {
    pub fn name(&self) -> String {
        match self {
            Self::RnDown { dim } => format!("rn-down({dim})"),
            Self::RnAbs { dim } => format!("rn-abs({dim})"),
            Self::NormSystem { dim } => format!("norm-system({dim})"),
            Self::Sym { dim } => format!("sym({dim})"),
            Self::SingVal { dim } => format!("sing-val({dim})"),
            Self::Spin { dim } => format!("spin({dim})"),
            Self::Discrete { isometry } => format!("discrete({})", isometry.len()),
            Self::Twisted { inner } => format!("twisted({})", inner.name()),
            Self::Product { parts } => {
                let names: Vec<String> = parts.iter().map(|p| p.name()).collect();
                format!("product({})", names.join(","))
            }
            Self::FiniteSeq { dim } => format!("finite-seq({dim})"),
            Self::SubspaceCounterexample => "subspace-counterexample".to_string(),
        }
    }
}

/// Builds a system from its spec, validating dimensions and (for the
/// discrete system) orthogonality of the isometry.
pub fn make_system(spec: &InstanceSpec) -> Result<System> {
    let positive = |dim: usize| {
        if dim == 0 {
            Err(validation(format!("{}: dimension must be at least 1", spec.name())))
        } else {
            Ok(dim)
        }
    };
    let inner: Arc<dyn Instance> = match spec {
        InstanceSpec::RnDown { dim } => Arc::new(rn::RnDown::new(positive(*dim)?)),
        InstanceSpec::RnAbs { dim } => Arc::new(rn::RnAbs::new(positive(*dim)?)),
        InstanceSpec::FiniteSeq { dim } => Arc::new(rn::RnAbs::new(positive(*dim)?)),
        InstanceSpec::NormSystem { dim } => Arc::new(norm::NormSystem::new(positive(*dim)?)),
        InstanceSpec::Sym { dim } => Arc::new(sym::Sym::new(positive(*dim)?)),
        InstanceSpec::SingVal { dim } => Arc::new(singval::SingVal::new(positive(*dim)?)),
        InstanceSpec::Spin { dim } => Arc::new(spin::Spin::new(positive(*dim)?)),
        InstanceSpec::Discrete { isometry } => Arc::new(discrete::Discrete::new(isometry)?),
        InstanceSpec::Twisted { inner } => Arc::new(twisted::Twisted::new(make_system(inner)?)),
        InstanceSpec::Product { parts } => {
            if parts.is_empty() {
                return Err(validation("product needs at least one factor"));
            }
            let systems = parts.iter().map(make_system).collect::<Result<Vec<_>>>()?;
            Arc::new(product::Product::new(systems))
        }
        InstanceSpec::SubspaceCounterexample => Arc::new(subspace::Subspace),
    };
    Ok(System {
        spec: spec.clone(),
        inner,
    })
}

pub(crate) fn gaussian_vec(rng: &mut SampleRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Haar-distributed orthogonal matrix (Gram-Schmidt on a Gaussian matrix).
pub(crate) fn haar_orthogonal(rng: &mut SampleRng, n: usize) -> Matrix {
    let cols: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vec(rng, n)).collect();
    let cols = orthonormal_completion(cols);
    let mut q = Matrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        q.set_col(j, c);
    }
    q
}

pub(crate) fn random_permutation(rng: &mut SampleRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Matrix sending coordinate `src[k]` to coordinate `dst[k]` with sign
/// `signs[k]`.
pub(crate) fn signed_permutation_matrix(dst: &[usize], src: &[usize], signs: &[f64]) -> Matrix {
    let n = dst.len();
    let mut m = Matrix::zeros(n, n);
    for k in 0..n {
        m[(dst[k], src[k])] = signs[k];
    }
    m
}

/// Orthogonal reflection mapping `x` onto `y` (`‖x‖ = ‖y‖`); identity
/// when they already coincide.
pub(crate) fn householder(x: &[f64], y: &[f64]) -> Matrix {
    let n = x.len();
    let w: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let ww: f64 = w.iter().map(|v| v * v).sum();
    let scale: f64 = x.iter().chain(y).map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut h = Matrix::identity(n);
    if ww <= 1e-30 * scale {
        return h;
    }
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= 2.0 * w[i] * w[j] / ww;
        }
    }
    h
}

pub(crate) fn is_decreasing(q: &[f64], tol: f64) -> bool {
    let scale = 1.0 + q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    q.windows(2).all(|w| w[0] - w[1] >= -tol * scale)
}

pub(crate) fn is_nonneg_decreasing(q: &[f64], tol: f64) -> bool {
    let scale = 1.0 + q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    is_decreasing(q, tol) && q.iter().all(|&x| x >= -tol * scale)
}
