//! Strategies for permuting an array into a layer-ordered heap.
//!
//! Layers are oriented smallest-first: `L_0` holds the minimum. Callers
//! that want best-is-largest pass an inverted order.

mod center;
mod halving;
mod iterative;
mod quick;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{layout_for, LayerLayout, Rank};
use crate::select::InstrumentedComparator;

pub use quick::{expected_quick_alpha, quick_lohify, quick_stats, QuickStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    #[serde(rename = "SORT")]
    Sort,
    /// Select away the layer with the greatest index, repeatedly.
    #[serde(rename = "SLWGI")]
    Slwgi,
    /// Select at the median remaining pivot and recurse on both halves.
    #[serde(rename = "SDRPIH")]
    Sdrpih,
    /// Select at the pivot closest to the center of the subarray.
    #[serde(rename = "PPCCA")]
    Ppcca,
    /// Randomized construction that picks its own boundaries.
    #[serde(rename = "QUICK")]
    Quick,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Sort,
        StrategyKind::Slwgi,
        StrategyKind::Sdrpih,
        StrategyKind::Ppcca,
        StrategyKind::Quick,
    ];

    pub const DETERMINISTIC: [StrategyKind; 4] = [
        StrategyKind::Sort,
        StrategyKind::Slwgi,
        StrategyKind::Sdrpih,
        StrategyKind::Ppcca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Sort => "SORT",
            StrategyKind::Slwgi => "SLWGI",
            StrategyKind::Sdrpih => "SDRPIH",
            StrategyKind::Ppcca => "PPCCA",
            StrategyKind::Quick => "QUICK",
        }
    }

    /// Whether the strategy honours a requested rank.
    pub fn uses_rank(self) -> bool {
        self != StrategyKind::Quick
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LohifyStrategy {
    pub kind: StrategyKind,
    /// Ignored by [`StrategyKind::Quick`].
    pub rank: Rank,
    /// Only used by [`StrategyKind::Quick`]; `None` means seed 0.
    pub seed: Option<u64>,
}

impl LohifyStrategy {
    pub fn new(kind: StrategyKind, rank: Rank) -> Self {
        LohifyStrategy { kind, rank, seed: None }
    }

    pub fn quick(seed: u64) -> Self {
        LohifyStrategy {
            kind: StrategyKind::Quick,
            rank: Rank::SORTED,
            seed: Some(seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LohResult {
    pub layout: LayerLayout,
    pub comparisons: u64,
    pub elapsed: Duration,
}

impl LohResult {
    /// Size of the last layer over the size of the one before it; `None`
    /// for single-layer layouts.
    pub fn last_layer_ratio(&self) -> Option<f64> {
        let sizes = self.layout.layer_sizes();
        match sizes.as_slice() {
            [.., a, b] => Some(*b as f64 / *a as f64),
            _ => None,
        }
    }
}

/// Permutes `array` into a layer-ordered heap using `strategy`.
pub fn lohify<T, F>(
    array: &mut [T],
    strategy: &LohifyStrategy,
    cmp: &mut InstrumentedComparator<F>,
) -> Result<LohResult>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    match strategy.kind {
        StrategyKind::Sort => lohify_sort(array, strategy.rank, cmp),
        StrategyKind::Slwgi => lohify_slwgi(array, strategy.rank, cmp),
        StrategyKind::Sdrpih => lohify_sdrpih(array, strategy.rank, cmp),
        StrategyKind::Ppcca => lohify_ppcca(array, strategy.rank, cmp),
        StrategyKind::Quick => quick_lohify(array, strategy.seed.unwrap_or(0), cmp),
    }
}

/// Runs `body` against the canonical layout, recording comparisons and time.
fn run_with_layout<T, F>(
    array: &mut [T],
    rank: Rank,
    cmp: &mut InstrumentedComparator<F>,
    body: impl FnOnce(&mut [T], &LayerLayout, &mut InstrumentedComparator<F>),
) -> Result<LohResult>
where
    F: FnMut(&T, &T) -> Ordering,
{
    if array.is_empty() {
        return Err(Error::Empty);
    }
    let start = Instant::now();
    let before = cmp.tally();
    let layout = layout_for(array.len(), rank)?;
    body(array, &layout, cmp);
    Ok(LohResult {
        layout,
        comparisons: cmp.tally() - before,
        elapsed: start.elapsed(),
    })
}

/// Full comparison sort; satisfies every layout.
pub fn lohify_sort<T, F>(array: &mut [T], rank: Rank, cmp: &mut InstrumentedComparator<F>) -> Result<LohResult>
where
    F: FnMut(&T, &T) -> Ordering,
{
    run_with_layout(array, rank, cmp, |v, _, cmp| {
        v.sort_unstable_by(|a, b| cmp.compare(a, b))
    })
}

pub fn lohify_slwgi<T, F>(array: &mut [T], rank: Rank, cmp: &mut InstrumentedComparator<F>) -> Result<LohResult>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    run_with_layout(array, rank, cmp, |v, layout, cmp| {
        iterative::select_away_greatest(v, layout.boundaries(), cmp)
    })
}

pub fn lohify_sdrpih<T, F>(array: &mut [T], rank: Rank, cmp: &mut InstrumentedComparator<F>) -> Result<LohResult>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    run_with_layout(array, rank, cmp, |v, layout, cmp| {
        halving::split_median_pivot(v, layout.interior(), 0, v.len(), cmp)
    })
}

pub fn lohify_ppcca<T, F>(array: &mut [T], rank: Rank, cmp: &mut InstrumentedComparator<F>) -> Result<LohResult>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    run_with_layout(array, rank, cmp, |v, layout, cmp| {
        center::split_center_pivot(v, layout.interior(), 0, v.len(), cmp)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::is_loh;
    use crate::select::ord_comparator;

    fn rank(a: f64) -> Rank {
        Rank::new(a).unwrap()
    }

    #[test]
    fn sort_strategy_example() {
        let mut v = [9, 1, 8, 2, 7, 3, 6, 4, 5, 0];
        let s = LohifyStrategy::new(StrategyKind::Sort, rank(2.0));
        let r = lohify(&mut v, &s, &mut ord_comparator()).unwrap();
        assert_eq!(v, [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(r.layout.boundaries(), &[0, 1, 3, 7, 10]);
    }

    #[test]
    fn sort_small_cases() {
        let mut v = [3, 1, 2];
        let r = lohify_sort(&mut v, rank(2.0), &mut ord_comparator()).unwrap();
        assert_eq!(v, [1, 2, 3]);
        assert_eq!(r.layout.boundaries(), &[0, 1, 3]);

        let mut v = [1];
        lohify_sort(&mut v, rank(3.0), &mut ord_comparator()).unwrap();
        assert_eq!(v, [1]);

        let mut v: Vec<i32> = (0..20).collect();
        let r = lohify_sort(&mut v, rank(1.5), &mut ord_comparator()).unwrap();
        assert_eq!(v, (0..20).collect::<Vec<_>>());
        assert!(is_loh(&v, &r.layout).unwrap());
    }

    #[test]
    fn rank_one_sorts_for_every_strategy() {
        for kind in StrategyKind::DETERMINISTIC {
            let mut v = [5, 3, 8, 1, 9, 2, 7, 4, 6, 0, 3];
            lohify(&mut v, &LohifyStrategy::new(kind, Rank::SORTED), &mut ord_comparator()).unwrap();
            assert_eq!(v, [0, 1, 2, 3, 3, 4, 5, 6, 7, 8, 9], "{kind}");
        }
    }

    #[test]
    fn all_equal_input() {
        for kind in StrategyKind::ALL {
            let mut v = [5, 5, 5, 5];
            let r = lohify(&mut v, &LohifyStrategy::new(kind, rank(2.0)), &mut ord_comparator()).unwrap();
            assert_eq!(v, [5, 5, 5, 5]);
            assert!(is_loh(&v, &r.layout).unwrap());
        }
    }

    #[test]
    fn empty_input_is_rejected() {
        for kind in StrategyKind::ALL {
            let mut v: [i32; 0] = [];
            let s = LohifyStrategy::new(kind, rank(2.0));
            assert_eq!(lohify(&mut v, &s, &mut ord_comparator()), Err(Error::Empty));
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for kind in StrategyKind::ALL {
            assert_eq!(kind.name().parse::<StrategyKind>().unwrap(), kind);
        }
        assert_eq!("ppcca".parse::<StrategyKind>().unwrap(), StrategyKind::Ppcca);
        assert!("heap".parse::<StrategyKind>().is_err());
    }

    #[test]
    fn ratio_of_last_layers() {
        let r = LohResult {
            layout: LayerLayout::from_boundaries(vec![0, 1, 3, 10]).unwrap(),
            comparisons: 0,
            elapsed: Duration::ZERO,
        };
        assert_eq!(r.last_layer_ratio(), Some(3.5));
        let r = LohResult {
            layout: LayerLayout::single(4).unwrap(),
            ..r
        };
        assert_eq!(r.last_layer_ratio(), None);
    }
}
