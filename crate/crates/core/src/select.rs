//! In-place three-way partitioning and worst-case linear selection.
//!
//! Every comparison goes through an [`InstrumentedComparator`], so the
//! tally it carries is the cost model for all construction strategies.

use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{Error, Result};

/// Ranges shorter than this are finished by insertion sort.
const SMALL_RANGE: usize = 10;
const GROUP: usize = 5;

/// A total order plus a running count of how many times it was consulted.
///
/// One call to [`compare`](Self::compare) counts as one comparison,
/// regardless of whether the caller uses the full three-way result.
#[derive(Debug, Clone)]
pub struct InstrumentedComparator<F> {
    order: F,
    tally: u64,
}

impl<F> InstrumentedComparator<F> {
    pub fn new(order: F) -> Self {
        InstrumentedComparator { order, tally: 0 }
    }

    #[inline]
    pub fn compare<T>(&mut self, a: &T, b: &T) -> Ordering
    where
        F: FnMut(&T, &T) -> Ordering,
    {
        self.tally += 1;
        (self.order)(a, b)
    }

    #[inline]
    pub fn less<T>(&mut self, a: &T, b: &T) -> bool
    where
        F: FnMut(&T, &T) -> Ordering,
    {
        self.compare(a, b) == Ordering::Less
    }

    pub fn tally(&self) -> u64 {
        self.tally
    }

    /// Adds comparisons made through a derived comparator.
    pub(crate) fn charge(&mut self, comparisons: u64) {
        self.tally += comparisons;
    }

    /// The uninstrumented order, for checks that should not be counted.
    pub fn order_mut(&mut self) -> &mut F {
        &mut self.order
    }
}

/// Comparator over `f64` using IEEE total ordering.
pub fn f64_comparator() -> InstrumentedComparator<impl FnMut(&f64, &f64) -> Ordering + Copy> {
    InstrumentedComparator::new(|a: &f64, b: &f64| a.total_cmp(b))
}

/// Comparator over any `Ord` type.
pub fn ord_comparator<T: Ord>() -> InstrumentedComparator<impl FnMut(&T, &T) -> Ordering + Copy> {
    InstrumentedComparator::new(|a: &T, b: &T| a.cmp(b))
}

/// Zones produced by a three-way partition, relative to the partitioned
/// range: `[0, low_end)` is less than the pivot, `[low_end, high_start)`
/// equal, and `[high_start, len)` greater.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionResult {
    pub low_end: usize,
    pub high_start: usize,
}

fn check_range(range: &Range<usize>, len: usize) -> Result<()> {
    if range.start > range.end || range.end > len {
        return Err(Error::Range {
            start: range.start,
            end: range.end,
            len,
        });
    }
    Ok(())
}

/// Three-way partitions `array[range]` around `pivot`.
pub fn partition_three_way<T, F>(
    array: &mut [T],
    range: Range<usize>,
    pivot: &T,
    cmp: &mut InstrumentedComparator<F>,
) -> Result<PartitionResult>
where
    F: FnMut(&T, &T) -> Ordering,
{
    check_range(&range, array.len())?;
    Ok(partition_slice(&mut array[range], pivot, cmp))
}

/// Dutch-flag partition; exactly one comparison per element.
pub(crate) fn partition_slice<T, F>(v: &mut [T], pivot: &T, cmp: &mut InstrumentedComparator<F>) -> PartitionResult
where
    F: FnMut(&T, &T) -> Ordering,
{
    let (mut lt, mut i, mut gt) = (0, 0, v.len());
    while i < gt {
        match cmp.compare(&v[i], pivot) {
            Ordering::Less => {
                v.swap(lt, i);
                lt += 1;
                i += 1;
            }
            Ordering::Greater => {
                gt -= 1;
                v.swap(i, gt);
            }
            Ordering::Equal => i += 1,
        }
    }
    PartitionResult {
        low_end: lt,
        high_start: gt,
    }
}

/// Places the `k`-th smallest element of `array[range]` at `range.start + k`
/// with everything before it `<=` and everything after it `>=`, and returns
/// a copy of it.
pub fn select_nth<T, F>(
    array: &mut [T],
    range: Range<usize>,
    k: usize,
    cmp: &mut InstrumentedComparator<F>,
) -> Result<T>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    check_range(&range, array.len())?;
    let v = &mut array[range];
    if k >= v.len() {
        return Err(Error::Rank { k, len: v.len() });
    }
    select_slice(v, k, cmp);
    Ok(v[k].clone())
}

/// Median-of-medians selection on a whole slice. `k < v.len()`.
pub(crate) fn select_slice<T, F>(mut v: &mut [T], mut k: usize, cmp: &mut InstrumentedComparator<F>)
where
    F: FnMut(&T, &T) -> Ordering,
{
    debug_assert!(k < v.len());
    loop {
        let len = v.len();
        if len < SMALL_RANGE {
            insertion_sort(v, cmp);
            return;
        }
        // Extreme ranks need only a single scan.
        if k == 0 {
            let m = extreme_index(v, cmp, Ordering::Less);
            v.swap(0, m);
            return;
        }
        if k == len - 1 {
            let m = extreme_index(v, cmp, Ordering::Greater);
            v.swap(len - 1, m);
            return;
        }

        let (low_end, high_start) = median_of_medians_round(v, cmp);
        if k < low_end {
            v = &mut v[..low_end];
        } else if k < high_start {
            return;
        } else {
            k -= high_start;
            v = &mut v[high_start..];
        }
    }
}

fn extreme_index<T, F>(v: &[T], cmp: &mut InstrumentedComparator<F>, want: Ordering) -> usize
where
    F: FnMut(&T, &T) -> Ordering,
{
    cmp.charge(v.len() as u64 - 1);
    let order = cmp.order_mut();
    let mut best = 0;
    for i in 1..v.len() {
        if order(&v[i], &v[best]) == want {
            best = i;
        }
    }
    best
}

/// Rearranges five elements so that slots 0 and 1 are `<=` slot 2 and
/// slots 3 and 4 are `>=` it, using exactly six comparisons.
fn median_of_five<T, F>(v: &mut [T], cmp: &mut InstrumentedComparator<F>)
where
    F: FnMut(&T, &T) -> Ordering,
{
    if cmp.less(&v[1], &v[0]) {
        v.swap(0, 1);
    }
    if cmp.less(&v[3], &v[2]) {
        v.swap(2, 3);
    }
    if cmp.less(&v[2], &v[0]) {
        v.swap(0, 2);
        v.swap(1, 3);
    }
    // v[0] is below three others, so it cannot be above the median.
    if cmp.less(&v[4], &v[1]) {
        v.swap(1, 4);
    }
    if cmp.less(&v[2], &v[1]) {
        v.swap(1, 2);
        v.swap(3, 4);
    }
    // Same for v[1]; the median is the smaller of v[2] and v[4].
    if cmp.less(&v[4], &v[2]) {
        v.swap(2, 4);
    }
}

/// Side of the pivot an element is known to lie on before partitioning.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Unknown,
    Low,
    Pivot,
    High,
}

/// One round of median-of-medians: arranges each full group of five around
/// its median, selects the median of those medians, and partitions `v`
/// into `<= p | == p | >= p`. Returns the bounds of the middle zone.
///
/// Three elements of every group are already known to sit on one side of
/// the pivot once the medians are ordered, so only the rest are compared.
fn median_of_medians_round<T, F>(v: &mut [T], cmp: &mut InstrumentedComparator<F>) -> (usize, usize)
where
    F: FnMut(&T, &T) -> Ordering,
{
    let len = v.len();
    let groups = len / GROUP;
    for chunk in v.chunks_exact_mut(GROUP) {
        median_of_five(chunk, cmp);
    }

    let mut medians: Vec<usize> = (0..groups).map(|g| g * GROUP + 2).collect();
    let mid = (groups - 1) / 2;
    let inner_tally = {
        let order = cmp.order_mut();
        let v_ref: &[T] = v;
        let mut by_position = |a: &usize, b: &usize| order(&v_ref[*a], &v_ref[*b]);
        let mut inner = InstrumentedComparator::new(&mut by_position as &mut dyn FnMut(&usize, &usize) -> Ordering);
        select_slice(&mut medians, mid, &mut inner);
        inner.tally()
    };
    cmp.charge(inner_tally);

    let mut side = vec![Side::Unknown; len];
    for (i, &m) in medians.iter().enumerate() {
        let g = m - 2;
        match i.cmp(&mid) {
            Ordering::Less => side[g..=m].fill(Side::Low),
            Ordering::Greater => side[m..g + GROUP].fill(Side::High),
            Ordering::Equal => {
                side[g..m].fill(Side::Low);
                side[m] = Side::Pivot;
                side[m + 1..g + GROUP].fill(Side::High);
            }
        }
    }
    let pivot_at = medians[mid];
    for i in 0..len {
        if side[i] == Side::Unknown {
            side[i] = match cmp.compare(&v[i], &v[pivot_at]) {
                Ordering::Less => Side::Low,
                Ordering::Equal => Side::Pivot,
                Ordering::Greater => Side::High,
            };
        }
    }

    let (mut lt, mut i, mut gt) = (0, 0, len);
    while i < gt {
        match side[i] {
            Side::Low => {
                v.swap(lt, i);
                side.swap(lt, i);
                lt += 1;
                i += 1;
            }
            Side::High => {
                gt -= 1;
                v.swap(i, gt);
                side.swap(i, gt);
            }
            _ => i += 1,
        }
    }
    (lt, gt)
}

pub(crate) fn insertion_sort<T, F>(v: &mut [T], cmp: &mut InstrumentedComparator<F>)
where
    F: FnMut(&T, &T) -> Ordering,
{
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && cmp.less(&v[j], &v[j - 1]) {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
}
