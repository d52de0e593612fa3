use serde::{Deserialize, Serialize};

use crate::lohify::StrategyKind;

/// Column order of the benchmark CSV.
pub const BENCH_CSV_HEADER: [&str; 6] = ["strategy", "n", "alpha", "trial", "comparisons", "elapsed_ns"];

/// One benchmark observation. `alpha` is `None` for strategies that pick
/// their own layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub strategy: StrategyKind,
    pub n: usize,
    pub alpha: Option<f64>,
    pub trial: usize,
    pub comparisons: u64,
    pub elapsed_ns: u64,
}

impl BenchRecord {
    /// Sort key `(strategy, n, alpha, trial)`.
    pub fn sort_key(&self) -> (StrategyKind, usize, u64, usize) {
        (self.strategy, self.n, self.alpha.map_or(0, f64::to_bits), self.trial)
    }
}
