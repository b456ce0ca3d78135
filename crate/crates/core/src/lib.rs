//! FTvN systems `(V, W, λ)`: axiom checks, centers,
//! automorphisms, majorization, doubly stochastic maps and reduced systems
//! over a catalog of concrete instances.

pub mod automorphisms;
pub mod campaign;
pub mod center;
pub mod doubly_stochastic;
pub mod error;
pub mod instances;
pub mod majorization;
pub mod numerics;
pub mod reduction;
pub mod system;

pub use error::{Error, Result};
pub use system::{Element, Spectrum, System};
