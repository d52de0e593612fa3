use std::cmp::Ordering;

use crate::select::{select_slice, InstrumentedComparator};

/// Selects at the lower-median boundary of `bounds` (all strictly inside
/// `(start, end)`) and recurses on both halves of the boundary list.
pub(super) fn split_median_pivot<T, F>(
    v: &mut [T],
    bounds: &[usize],
    start: usize,
    end: usize,
    cmp: &mut InstrumentedComparator<F>,
) where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    split_median_pivot_traced(v, bounds, start, end, cmp, &mut |_| {})
}

pub(super) fn split_median_pivot_traced<T, F>(
    v: &mut [T],
    bounds: &[usize],
    start: usize,
    end: usize,
    cmp: &mut InstrumentedComparator<F>,
    on_select: &mut dyn FnMut(usize),
) where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    if bounds.is_empty() {
        return;
    }
    let mid = (bounds.len() - 1) / 2;
    let x = bounds[mid];
    on_select(x);
    select_slice(&mut v[start..end], x - start, cmp);
    split_median_pivot_traced(v, &bounds[..mid], start, x, cmp, on_select);
    split_median_pivot_traced(v, &bounds[mid + 1..], x, end, cmp, on_select);
}
