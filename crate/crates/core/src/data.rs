//! Seeded input generators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fdr::{Label, ScoredHypothesis};
use crate::rng::{stream, uniform_below, unit_f64};

/// Number of levels used by [`Distribution::FewDistinct`].
pub const FEW_DISTINCT_LEVELS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    /// Uniform in `[0, 1)`.
    UniformReal,
    /// Uniform integers in `[0, n)`; duplicates are likely.
    UniformInt,
    /// Uniform reals, ascending.
    Sorted,
    /// Uniform reals, descending.
    ReverseSorted,
    /// Integers drawn from `0..FEW_DISTINCT_LEVELS`.
    FewDistinct,
}

impl Distribution {
    pub const ALL: [Distribution; 5] = [
        Distribution::UniformReal,
        Distribution::UniformInt,
        Distribution::Sorted,
        Distribution::ReverseSorted,
        Distribution::FewDistinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::UniformReal => "uniform-real",
            Distribution::UniformInt => "uniform-int",
            Distribution::Sorted => "sorted",
            Distribution::ReverseSorted => "reverse-sorted",
            Distribution::FewDistinct => "few-distinct",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown distribution `{s}`")))
    }
}

pub fn generate(n: usize, distribution: Distribution, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed);
    let mut values: Vec<f64> = match distribution {
        Distribution::UniformReal | Distribution::Sorted | Distribution::ReverseSorted => {
            (0..n).map(|_| unit_f64(&mut rng)).collect()
        }
        Distribution::UniformInt => (0..n)
            .map(|_| uniform_below(&mut rng, n.max(1) as u64) as f64)
            .collect(),
        Distribution::FewDistinct => (0..n)
            .map(|_| uniform_below(&mut rng, FEW_DISTINCT_LEVELS) as f64)
            .collect(),
    };
    match distribution {
        Distribution::Sorted => values.sort_by(f64::total_cmp),
        Distribution::ReverseSorted => values.sort_by(|a, b| b.total_cmp(a)),
        _ => {}
    }
    values
}

/// Labelled hypotheses with informative scores: a true positive scores
/// uniformly in `[0.5, 1.5)`, a false positive in `[0, 1)`. Ids are the
/// positions.
pub fn generate_hypotheses(n: usize, tp_rate: f64, seed: u64) -> Vec<ScoredHypothesis> {
    let mut rng = stream(seed);
    (0..n)
        .map(|id| {
            let label = if unit_f64(&mut rng) < tp_rate {
                Label::Tp
            } else {
                Label::Fp
            };
            let shift = if label == Label::Tp { 0.5 } else { 0.0 };
            ScoredHypothesis {
                score: unit_f64(&mut rng) + shift,
                label,
                id,
            }
        })
        .collect()
}
