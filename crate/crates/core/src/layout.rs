//! Layer boundaries of a layer-ordered heap.
//!
//! A layout of `n` elements is a strictly increasing list of boundaries
//! `0 = b_0 < b_1 < ... < b_l = n`; layer `i` occupies `[b_i, b_{i+1})`.
//! For a rank `alpha` the interior boundaries are the pivots
//! `p_i = ceil(sum_{j=0..=i} alpha^j)`, truncated at `n`.

use std::cmp::Ordering;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to snap a cumulative pivot sum onto an integer
/// before taking its ceiling.
const SNAP_TOLERANCE: f64 = 1e-9;

/// Target ratio between consecutive layer sizes. Always finite and `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rank(f64);

impl Rank {
    /// Rank 1: every layer holds one element, i.e. the array is sorted.
    pub const SORTED: Rank = Rank(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::Domain(format!("rank must be a finite value >= 1, got {alpha}")));
        }
        Ok(Rank(alpha))
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_sorted_rank(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for Rank {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Rank::new(alpha)
    }
}

impl From<Rank> for f64 {
    fn from(rank: Rank) -> f64 {
        rank.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerLayout {
    boundaries: Vec<usize>,
}

impl LayerLayout {
    /// Builds a layout from an explicit boundary list.
    ///
    /// The list must start at 0, be strictly increasing, and contain at
    /// least two entries (so that `n >= 1`).
    pub fn from_boundaries(boundaries: Vec<usize>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidLayout("need at least two boundaries".into()));
        }
        if boundaries[0] != 0 {
            return Err(Error::InvalidLayout(format!(
                "first boundary must be 0, got {}",
                boundaries[0]
            )));
        }
        if let Some(w) = boundaries.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidLayout(format!(
                "boundaries must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(LayerLayout { boundaries })
    }

    /// Builds a layout from unsorted cut points in `[0, n]`, collapsing
    /// duplicates (and therefore empty layers).
    pub fn from_cuts(n: usize, cuts: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut boundaries: Vec<usize> = cuts.into_iter().filter(|&c| c > 0 && c < n).collect();
        boundaries.push(0);
        boundaries.push(n);
        boundaries.sort_unstable();
        boundaries.dedup();
        LayerLayout::from_boundaries(boundaries)
    }

    /// The layout with a single layer covering all `n` elements.
    pub fn single(n: usize) -> Result<Self> {
        LayerLayout::from_boundaries(vec![0, n])
    }

    pub fn n(&self) -> usize {
        *self.boundaries.last().expect("layout is never empty")
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// Boundaries strictly between 0 and `n`.
    pub fn interior(&self) -> &[usize] {
        &self.boundaries[1..self.boundaries.len() - 1]
    }

    pub fn layer_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn layer(&self, i: usize) -> Range<usize> {
        self.boundaries[i]..self.boundaries[i + 1]
    }

    pub fn layers(&self) -> impl DoubleEndedIterator<Item = Range<usize>> + ExactSizeIterator + '_ {
        self.boundaries.windows(2).map(|w| w[0]..w[1])
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.boundaries.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Number of boundaries strictly inside `(start, end)`.
    pub fn pivot_count_in_range(&self, start: usize, end: usize) -> Result<usize> {
        if start > end || end > self.n() {
            return Err(Error::Range {
                start,
                end,
                len: self.n(),
            });
        }
        let interior = self.interior();
        let lo = interior.partition_point(|&b| b <= start);
        let hi = interior.partition_point(|&b| b < end);
        Ok(hi.saturating_sub(lo))
    }
}

/// The canonical layout of `n` elements for `rank`.
pub fn layout_for(n: usize, rank: Rank) -> Result<LayerLayout> {
    if n == 0 {
        return Err(Error::Domain("a layout needs at least one element".into()));
    }
    if rank.is_sorted_rank() {
        return Ok(LayerLayout {
            boundaries: (0..=n).collect(),
        });
    }

    let alpha = rank.alpha();
    let mut boundaries = vec![0];
    let mut sum = 0.0f64;
    let mut term = 1.0f64;
    loop {
        sum += term;
        let pivot = snapped_ceil(sum);
        if pivot >= n as f64 {
            boundaries.push(n);
            break;
        }
        let pivot = pivot as usize;
        if pivot > *boundaries.last().unwrap() {
            boundaries.push(pivot);
        }
        term *= alpha;
    }
    Ok(LayerLayout { boundaries })
}

fn snapped_ceil(sum: f64) -> f64 {
    let nearest = sum.round();
    if (sum - nearest).abs() < SNAP_TOLERANCE * sum.max(1.0) {
        nearest
    } else {
        sum.ceil()
    }
}

/// Bounds on the number of layers of an `alpha`-layout over `n` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerCountBounds {
    pub lower: f64,
    pub upper: f64,
}

impl LayerCountBounds {
    /// Whether `layers` lies in `[lower, upper]`, allowing for rounding in
    /// the logarithms.
    pub fn contains(&self, layers: usize) -> bool {
        let l = layers as f64;
        let slack = 1e-9 * self.upper.max(1.0);
        l >= self.lower - slack && l <= self.upper + slack
    }
}

/// `log_alpha(n(alpha-1)+1)` and one more than it.
///
/// Only defined for `alpha > 1`; at `alpha == 1` the layer count is
/// exactly `n`.
pub fn layer_count_bounds(n: usize, rank: Rank) -> Result<LayerCountBounds> {
    if n == 0 {
        return Err(Error::Domain("a layout needs at least one element".into()));
    }
    let alpha = rank.alpha();
    if alpha <= 1.0 {
        return Err(Error::Domain("layer count bounds need alpha > 1".into()));
    }
    let excess = alpha - 1.0;
    let lower = (n as f64 * excess).ln_1p() / excess.ln_1p();
    Ok(LayerCountBounds {
        lower,
        upper: lower + 1.0,
    })
}

/// Upper bound on the number of canonical pivots strictly inside
/// `(start, end)`:
///
/// `log_alpha((end(alpha-1)+1) / max(1, (start-1)(alpha-1)+1)) + 1`.
///
/// The additive `+ 1` is required: a narrow range can still contain one
/// pivot (e.g. `(6, 8)` at `alpha = 2` contains pivot 7).
pub fn pivot_count_bound(start: usize, end: usize, rank: Rank) -> Result<f64> {
    let alpha = rank.alpha();
    if alpha <= 1.0 {
        return Err(Error::Domain("pivot count bound needs alpha > 1".into()));
    }
    if start > end {
        return Err(Error::Range { start, end, len: end });
    }
    let excess = alpha - 1.0;
    let numerator = end as f64 * excess + 1.0;
    let denominator = ((start as f64 - 1.0) * excess + 1.0).max(1.0);
    Ok((numerator / denominator).ln() / excess.ln_1p() + 1.0)
}

/// Index `i` of the first adjacent layer pair `(i, i+1)` where some element
/// of layer `i` is greater than some element of layer `i+1`.
pub fn first_violation_by<T, F>(array: &[T], layout: &LayerLayout, mut order: F) -> Result<Option<usize>>
where
    F: FnMut(&T, &T) -> Ordering,
{
    if array.len() != layout.n() {
        return Err(Error::LengthMismatch {
            layout: layout.n(),
            array: array.len(),
        });
    }
    let mut previous_max: Option<&T> = None;
    for (i, range) in layout.layers().enumerate() {
        let layer = &array[range];
        let (mut min, mut max) = (&layer[0], &layer[0]);
        for x in &layer[1..] {
            if order(x, min) == Ordering::Less {
                min = x;
            }
            if order(x, max) == Ordering::Greater {
                max = x;
            }
        }
        if let Some(prev) = previous_max {
            if order(prev, min) == Ordering::Greater {
                return Ok(Some(i - 1));
            }
        }
        previous_max = Some(max);
    }
    Ok(None)
}

/// Whether `array` satisfies `L_0 <= L_1 <= ... <= L_{l-1}` under `order`.
pub fn is_loh_by<T, F>(array: &[T], layout: &LayerLayout, order: F) -> Result<bool>
where
    F: FnMut(&T, &T) -> Ordering,
{
    first_violation_by(array, layout, order).map(|v| v.is_none())
}

/// [`is_loh_by`] with the natural order of `T`.
pub fn is_loh<T: PartialOrd>(array: &[T], layout: &LayerLayout) -> Result<bool> {
    is_loh_by(array, layout, |a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(alpha: f64) -> Rank {
        Rank::new(alpha).unwrap()
    }

    #[test]
    fn unit_rank_gives_unit_layers() {
        let layout = layout_for(5, Rank::SORTED).unwrap();
        assert_eq!(layout.boundaries(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(layout.layer_sizes(), vec![1; 5]);
    }

    #[test]
    fn rank_two_over_ten() {
        let layout = layout_for(10, rank(2.0)).unwrap();
        assert_eq!(layout.boundaries(), &[0, 1, 3, 7, 10]);
        assert_eq!(layout.layer_sizes(), vec![1, 2, 4, 3]);
    }

    #[test]
    fn rank_one_and_a_half_over_ten() {
        let layout = layout_for(10, rank(1.5)).unwrap();
        assert_eq!(layout.boundaries(), &[0, 1, 3, 5, 9, 10]);
        assert_eq!(layout.layer_sizes(), vec![1, 2, 2, 4, 1]);
    }

    #[test]
    fn pivot_landing_on_n_closes_once() {
        assert_eq!(layout_for(7, rank(2.0)).unwrap().boundaries(), &[0, 1, 3, 7]);
        assert_eq!(layout_for(1, rank(3.0)).unwrap().boundaries(), &[0, 1]);
    }

    #[test]
    fn integral_sums_are_not_bumped() {
        // 1 + 3 + 9 + 27 = 40 exactly.
        let layout = layout_for(100, rank(3.0)).unwrap();
        assert_eq!(layout.boundaries(), &[0, 1, 4, 13, 40, 100]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Rank::new(0.5).is_err());
        assert!(Rank::new(f64::NAN).is_err());
        assert!(Rank::new(f64::INFINITY).is_err());
        assert!(layout_for(0, rank(2.0)).is_err());
    }

    #[test]
    fn count_bounds_examples() {
        let b = layer_count_bounds(10, rank(2.0)).unwrap();
        assert!((b.lower - 3.459_431_618_637_297).abs() < 1e-12);
        assert!((b.upper - 4.459_431_618_637_297).abs() < 1e-12);
        assert!(b.contains(4));

        let b = layer_count_bounds(10, rank(1.5)).unwrap();
        assert!((b.lower - 4.419_022_582_702_909).abs() < 1e-12);
        assert!(b.contains(5));

        let b = layer_count_bounds(1, rank(1.7)).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12);
        assert!(b.contains(1));

        assert!(layer_count_bounds(10, Rank::SORTED).is_err());
    }

    #[test]
    fn pivot_counts() {
        let layout = layout_for(10, rank(2.0)).unwrap();
        assert_eq!(layout.pivot_count_in_range(0, 10).unwrap(), 3);
        assert_eq!(layout.pivot_count_in_range(3, 7).unwrap(), 0);
        assert_eq!(layout.pivot_count_in_range(2, 8).unwrap(), 2);
        for k in 0..=10 {
            assert_eq!(layout.pivot_count_in_range(k, k).unwrap(), 0);
        }
        assert!(layout.pivot_count_in_range(5, 4).is_err());
        assert!(layout.pivot_count_in_range(0, 11).is_err());
    }

    #[test]
    fn narrow_range_needs_the_additive_one() {
        let layout = layout_for(10, rank(2.0)).unwrap();
        let m = layout.pivot_count_in_range(6, 8).unwrap();
        assert_eq!(m, 1);
        let unshifted = pivot_count_bound(6, 8, rank(2.0)).unwrap() - 1.0;
        assert!((m as f64) > unshifted);
        assert!((m as f64) <= pivot_count_bound(6, 8, rank(2.0)).unwrap());
    }

    #[test]
    fn loh_examples() {
        let layout = LayerLayout::from_boundaries(vec![0, 1, 3, 6]).unwrap();
        assert!(is_loh(&[1, 3, 2, 7, 5, 4], &layout).unwrap());
        assert!(!is_loh(&[4, 3, 2, 7, 5, 1], &layout).unwrap());
        assert_eq!(
            first_violation_by(&[4, 3, 2, 7, 5, 1], &layout, |a: &i32, b| a.cmp(b)).unwrap(),
            Some(0)
        );
        let single = LayerLayout::single(4).unwrap();
        assert!(is_loh(&[9, 1, 8, 2], &single).unwrap());
    }

    #[test]
    fn equal_values_may_straddle() {
        let layout = LayerLayout::from_boundaries(vec![0, 2, 4]).unwrap();
        assert!(is_loh(&[1, 2, 2, 3], &layout).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let layout = LayerLayout::single(3).unwrap();
        assert!(matches!(
            is_loh(&[1, 2], &layout),
            Err(Error::LengthMismatch { layout: 3, array: 2 })
        ));
    }

    #[test]
    fn explicit_boundaries_are_validated() {
        assert!(LayerLayout::from_boundaries(vec![0]).is_err());
        assert!(LayerLayout::from_boundaries(vec![1, 3]).is_err());
        assert!(LayerLayout::from_boundaries(vec![0, 2, 2, 4]).is_err());
        let l = LayerLayout::from_cuts(5, [3, 0, 3, 5, 1]).unwrap();
        assert_eq!(l.boundaries(), &[0, 1, 3, 5]);
    }
}
