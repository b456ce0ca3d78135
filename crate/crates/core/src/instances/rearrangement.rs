//! Decreasing rearrangement of finitely supported sequences under counting
//! measure.

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::numerics::argsort_abs_desc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RearrangementResult {
    /// `x*`: nonnegative and decreasing.
    pub star: Vec<f64>,
    /// `permutation[k]` is the input index whose magnitude lands at
    /// `star[k]`, listed for the nonzero entries only.
    pub permutation: Vec<usize>,
}

/// `x* = |x|↓`, with ties broken by input index.
pub fn decreasing_rearrangement(x: &[f64]) -> RearrangementResult {
    let order = argsort_abs_desc(x);
    let star = order.iter().map(|&i| x[i].abs()).collect();
    let permutation = order.into_iter().filter(|&i| x[i] != 0.0).collect();
    RearrangementResult { star, permutation }
}

/// Number of entries with `|xᵢ| > alpha`.
pub fn distribution_function(x: &[f64], alpha: f64) -> Result<usize> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(validation(format!("alpha must be nonnegative, got {alpha}")));
    }
    Ok(x.iter().filter(|v| v.abs() > alpha).count())
}
