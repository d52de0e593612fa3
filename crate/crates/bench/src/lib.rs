//! Shared inputs for the criterion benches.

use loh_core::data::{generate, generate_hypotheses, Distribution};
use loh_core::ScoredHypothesis;

pub const SEED: u64 = 17;

pub fn values(n: usize) -> Vec<f64> {
    generate(n, Distribution::UniformReal, SEED)
}

pub fn hypotheses(n: usize, tp_rate: f64) -> Vec<ScoredHypothesis> {
    generate_hypotheses(n, tp_rate, SEED)
}
