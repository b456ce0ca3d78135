//! Numerical kernels shared by every system instance: symmetric
//! eigendecomposition, SVD, decreasing sorts and convex-hull membership.

mod eigen;
mod hull;
mod matrix;
mod sort;
mod svd;

pub use eigen::{asymmetry, spectral_synthesis, sym_eigen, EigenResult, DEFAULT_EIGEN_TOL};
pub use hull::{hull_membership, HullVerdict, DEFAULT_HULL_TOL};
pub use matrix::{add, approx_eq, dot, norm, scaled, solve, sub, Matrix};
pub use sort::{abs_sort_desc, argsort_abs_desc, argsort_desc, sort_desc};
pub use svd::{svd_values, SvdResult};

pub(crate) use svd::orthonormal_completion;
