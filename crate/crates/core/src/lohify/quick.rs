use std::cmp::Ordering;
use std::time::Instant;

use rand::RngCore;

use super::LohResult;
use crate::error::{Error, Result};
use crate::layout::LayerLayout;
use crate::rng::{stream, uniform_below, unit_f64};
use crate::select::{f64_comparator, partition_slice, InstrumentedComparator};

/// Randomized construction: partition the active prefix around a uniformly
/// random element, cut at the start of the pivot's equal band, and continue
/// on the strictly-smaller part until at most one element remains.
///
/// The layer count is random. Expected comparisons are about `2n`.
pub fn quick_lohify<T, F>(array: &mut [T], seed: u64, cmp: &mut InstrumentedComparator<F>) -> Result<LohResult>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    if array.is_empty() {
        return Err(Error::Empty);
    }
    let start = Instant::now();
    let before = cmp.tally();
    let mut rng = stream(seed);
    let mut cuts = Vec::new();
    let mut end = array.len();
    while end > 1 {
        let r = uniform_below(&mut rng, end as u64) as usize;
        let pivot = array[r].clone();
        let zones = partition_slice(&mut array[..end], &pivot, cmp);
        cuts.push(zones.low_end);
        end = zones.low_end;
    }
    let layout = LayerLayout::from_cuts(array.len(), cuts)?;
    Ok(LohResult {
        layout,
        comparisons: cmp.tally() - before,
        elapsed: start.elapsed(),
    })
}

fn harmonic(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Closed-form expected rank of a Quick-LOHify layout:
///
/// `(2n²H_n + 2nH_n − 3n² + 7n − 12) / (2n² − 2n)`.
///
/// Grows like `ln n`.
pub fn expected_quick_alpha(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("expected rank needs n >= 2".into()));
    }
    let h = harmonic(n);
    let n = n as f64;
    Ok((2.0 * n * n * h + 2.0 * n * h - 3.0 * n * n + 7.0 * n - 12.0) / (2.0 * n * n - 2.0 * n))
}

/// Monte Carlo summary of Quick-LOHify over distinct random inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct QuickStats {
    pub n: usize,
    pub trials: usize,
    pub mean_comparisons: f64,
    pub se_comparisons: f64,
    /// Trials whose layout had at least two layers.
    pub ratio_trials: usize,
    pub mean_ratio: f64,
    pub se_ratio: f64,
}

impl QuickStats {
    pub fn expected_comparisons(&self) -> f64 {
        2.0 * self.n as f64 - 2.0
    }
}

#[derive(Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
    }
}

pub fn quick_stats(n: usize, trials: usize, seed: u64) -> Result<QuickStats> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let mut rng = stream(seed);
    let mut values = vec![0.0f64; n];
    let mut comparisons = Moments::default();
    let mut ratios = Moments::default();
    for _ in 0..trials {
        values.iter_mut().for_each(|x| *x = unit_f64(&mut rng));
        let mut cmp = f64_comparator();
        let result = quick_lohify(&mut values, rng.next_u64(), &mut cmp)?;
        comparisons.push(result.comparisons as f64);
        if let Some(ratio) = result.last_layer_ratio() {
            ratios.push(ratio);
        }
    }
    Ok(QuickStats {
        n,
        trials,
        mean_comparisons: comparisons.mean,
        se_comparisons: comparisons.standard_error(),
        ratio_trials: ratios.count,
        mean_ratio: ratios.mean,
        se_ratio: ratios.standard_error(),
    })
}
