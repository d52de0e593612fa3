//! Layer-ordered heaps: exact layouts, construction strategies built on
//! worst-case linear selection, and an FDR threshold search that uses them.
//!
//! A layer-ordered heap of rank `alpha` splits an array into contiguous
//! layers `L_0 <= L_1 <= ... <= L_{l-1}` whose sizes grow roughly by a
//! factor of `alpha`. Rank 1 is a sorted array.
//!
//! ```
//! use loh_core::{is_loh, lohify, f64_comparator, LohifyStrategy, Rank, StrategyKind};
//!
//! let mut values = vec![9.0, 1.0, 8.0, 2.0, 7.0, 3.0, 6.0, 4.0, 5.0, 0.0];
//! let strategy = LohifyStrategy::new(StrategyKind::Ppcca, Rank::new(2.0).unwrap());
//! let mut cmp = f64_comparator();
//! let result = lohify(&mut values, &strategy, &mut cmp).unwrap();
//! assert_eq!(result.layout.boundaries(), &[0, 1, 3, 7, 10]);
//! assert!(is_loh(&values, &result.layout).unwrap());
//! ```

pub mod data;
pub mod error;
pub mod fdr;
pub mod layout;
pub mod lohify;
pub mod record;
pub mod rng;
pub mod select;

pub use error::{Error, Result};
pub use fdr::{
    best_first, fdr_threshold_by_loh, fdr_threshold_by_sort, FdrAnswer, FdrQuery, FdrRun, Label, LayerTally,
    ScoredHypothesis,
};
pub use layout::{
    first_violation_by, is_loh, is_loh_by, layer_count_bounds, layout_for, pivot_count_bound, LayerCountBounds,
    LayerLayout, Rank,
};
pub use lohify::{
    expected_quick_alpha, lohify, lohify_ppcca, lohify_sdrpih, lohify_slwgi, lohify_sort, quick_lohify, quick_stats,
    LohResult, LohifyStrategy, QuickStats, StrategyKind,
};
pub use record::BenchRecord;
pub use select::{
    f64_comparator, ord_comparator, partition_three_way, select_nth, InstrumentedComparator, PartitionResult,
};
