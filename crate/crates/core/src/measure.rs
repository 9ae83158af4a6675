//! Joint projective measurement with seeded or forced outcomes.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::MeasurementBasis;
use crate::error::{Error, Result};
use crate::state::{Residual, StateVector};
use crate::TOLERANCE;

/// Measurement outcome, printed 1-based as `k` and stored 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome(usize);

impl Outcome {
    /// From the 1-based label `k`. Panics on `k == 0`.
    pub fn from_k(k: usize) -> Self {
        assert!(k >= 1, "outcome labels start at 1");
        Self(k - 1)
    }

    pub fn from_index(index: usize) -> Self {
        Self(index)
    }

    pub fn k(self) -> usize {
        self.0 + 1
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl core::fmt::Display for Outcome {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "k={}", self.k())
    }
}

/// How a measurement picks its outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeSelector {
    /// Sample with a `ChaCha8Rng` seeded from this value.
    Seeded(u64),
    /// Take this branch; it must have nonzero probability.
    Forced(Outcome),
}

impl OutcomeSelector {
    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: Outcome,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits; `None` when every qubit
    /// was measured.
    pub post_state: Option<StateVector>,
    /// Probabilities of all outcomes, in basis order.
    pub probabilities: Vec<f64>,
}

/// Index of the first cumulative bin exceeding `u`; never lands on a
/// zero-probability outcome.
pub fn sample_index(probabilities: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = i;
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}

fn finish(residuals: Vec<Residual>, outcome: Outcome) -> Result<Measurement> {
    let probabilities: Vec<f64> = residuals.iter().map(Residual::probability).collect();
    let chosen = &residuals[outcome.index()];
    let probability = probabilities[outcome.index()];
    if probability <= TOLERANCE * TOLERANCE {
        return Err(Error::ZeroProbabilityOutcome { k: outcome.k() });
    }
    let post_state = if chosen.n_qubits() == 0 {
        None
    } else {
        Some(chosen.normalize()?.0)
    };
    Ok(Measurement {
        outcome,
        probability,
        post_state,
        probabilities,
    })
}

/// Measures `measured` (1-based labels, basis qubit order) in `basis`.
pub fn measure(
    state: &StateVector,
    basis: &MeasurementBasis,
    measured: &[usize],
    selector: OutcomeSelector,
) -> Result<Measurement> {
    match selector {
        OutcomeSelector::Seeded(seed) => {
            let mut rng = OutcomeSelector::rng(seed);
            measure_with_rng(state, basis, measured, &mut rng)
        }
        OutcomeSelector::Forced(outcome) => {
            if outcome.index() >= basis.len() {
                return Err(Error::OutcomeOutOfRange {
                    k: outcome.k(),
                    count: basis.len(),
                });
            }
            finish(state.project_many(basis.vectors(), measured)?, outcome)
        }
    }
}

/// Sampling variant drawing a single uniform number from `rng`.
pub fn measure_with_rng<R: Rng + ?Sized>(
    state: &StateVector,
    basis: &MeasurementBasis,
    measured: &[usize],
    rng: &mut R,
) -> Result<Measurement> {
    let residuals = state.project_many(basis.vectors(), measured)?;
    let probabilities: Vec<f64> = residuals.iter().map(Residual::probability).collect();
    let u: f64 = rng.random::<f64>() * probabilities.iter().sum::<f64>();
    let index = sample_index(&probabilities, u);
    finish(residuals, Outcome::from_index(index))
}
