//! Seeded randomized campaigns.
//!
//! Every sample draws from its own ChaCha stream keyed by `(seed, index)`,
//! so a campaign's report does not depend on evaluation order or on the
//! number of worker threads. Aggregation is order-insensitive: the maximum
//! violation, and the counterexample of the lowest failing index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{validation, Result};

pub type SampleRng = ChaCha8Rng;

/// Default tolerance for property checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// RNG stream for sample `index` of a campaign seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Outcome of a randomized property campaign.
///
/// `max_violation` is the largest scaled defect observed; it is compared
/// against `tol`, so `passed ⟺ max_violation ≤ tol ⟺ counterexample absent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub samples: usize,
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    pub seed: u64,
    pub tol: f64,
}

impl CheckReport {
    pub fn new(seed: u64, tol: f64) -> Self {
        Self {
            passed: true,
            samples: 0,
            max_violation: 0.0,
            counterexample: None,
            seed,
            tol,
        }
    }

    /// Records one sample's worst defect and its payload.
    pub fn record(&mut self, violation: f64, payload: impl FnOnce() -> Value) {
        self.samples += 1;
        let violation = if violation.is_nan() { f64::MAX } else { violation };
        if violation > self.max_violation {
            self.max_violation = violation;
        }
        if violation > self.tol && self.counterexample.is_none() {
            self.counterexample = Some(payload());
        }
        self.passed = self.max_violation <= self.tol;
    }

    /// Folds another report in (used to chain sub-campaigns).
    pub fn absorb(&mut self, other: CheckReport) {
        self.samples += other.samples;
        self.max_violation = self.max_violation.max(other.max_violation);
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        self.passed = self.max_violation <= self.tol && self.counterexample.is_none();
    }
}

/// One sample's result: its worst scaled defect and a payload describing
/// the inputs, produced lazily only when the sample fails.
pub struct Finding {
    pub violation: f64,
    pub payload: Value,
}

impl Finding {
    pub fn ok() -> Self {
        Self {
            violation: 0.0,
            payload: Value::Null,
        }
    }

    pub fn new(violation: f64, payload: Value) -> Self {
        Self { violation, payload }
    }
}

pub(crate) fn require_samples(n: usize) -> Result<()> {
    if n == 0 {
        return Err(validation("n_samples must be at least 1"));
    }
    Ok(())
}

/// Runs `n` samples of `probe` in parallel and aggregates them in index
/// order.
pub fn run_campaign<F>(n: usize, seed: u64, tol: f64, probe: F) -> CheckReport
where
    F: Fn(usize, &mut SampleRng) -> Finding + Sync,
{
    let findings: Vec<Finding> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            probe(i, &mut rng)
        })
        .collect();
    let mut report = CheckReport::new(seed, tol);
    for f in findings {
        let Finding { violation, payload } = f;
        report.record(violation, || payload);
    }
    report
}
