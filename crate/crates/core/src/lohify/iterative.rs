use std::cmp::Ordering;

use crate::select::{select_slice, InstrumentedComparator};

/// For each layer from the last down to the second, selects the layer's
/// first element within the still-unplaced prefix.
pub(super) fn select_away_greatest<T, F>(v: &mut [T], boundaries: &[usize], cmp: &mut InstrumentedComparator<F>)
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    select_away_greatest_traced(v, boundaries, cmp, &mut |_| {})
}

pub(super) fn select_away_greatest_traced<T, F>(
    v: &mut [T],
    boundaries: &[usize],
    cmp: &mut InstrumentedComparator<F>,
    on_select: &mut dyn FnMut(usize),
) where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    for w in boundaries[1..].windows(2).rev() {
        let (first, prefix_end) = (w[0], w[1]);
        on_select(first);
        select_slice(&mut v[..prefix_end], first, cmp);
    }
}
