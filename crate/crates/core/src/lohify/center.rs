use std::cmp::Ordering;

use crate::select::{select_slice, InstrumentedComparator};

/// Index into `bounds` of the boundary closest to the center of
/// `[start, end)`; ties go to the smaller boundary.
fn nearest_to_center(bounds: &[usize], start: usize, end: usize) -> usize {
    let twice_center = start + end;
    let after = bounds.partition_point(|&b| 2 * b < twice_center);
    if after == 0 {
        return 0;
    }
    if after == bounds.len() {
        return after - 1;
    }
    let below = twice_center - 2 * bounds[after - 1];
    let above = 2 * bounds[after] - twice_center;
    if below <= above {
        after - 1
    } else {
        after
    }
}

/// Selects at the boundary nearest the middle of `[start, end)` and
/// recurses on both sides until no boundary is left strictly inside.
pub(super) fn split_center_pivot<T, F>(
    v: &mut [T],
    bounds: &[usize],
    start: usize,
    end: usize,
    cmp: &mut InstrumentedComparator<F>,
) where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    split_center_pivot_traced(v, bounds, start, end, cmp, &mut |_| {})
}

pub(super) fn split_center_pivot_traced<T, F>(
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
    let i = nearest_to_center(bounds, start, end);
    let x = bounds[i];
    on_select(x);
    select_slice(&mut v[start..end], x - start, cmp);
    split_center_pivot_traced(v, &bounds[..i], start, x, cmp, on_select);
    split_center_pivot_traced(v, &bounds[i + 1..], x, end, cmp, on_select);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{is_loh, layout_for, Rank};
    use crate::select::ord_comparator;

    fn trace(n: usize, alpha: f64, v: &mut [i32]) -> Vec<usize> {
        let layout = layout_for(n, Rank::new(alpha).unwrap()).unwrap();
        let mut order = vec![];
        split_center_pivot_traced(v, layout.interior(), 0, n, &mut ord_comparator(), &mut |x| {
            order.push(x)
        });
        assert!(is_loh(v, &layout).unwrap());
        order
    }

    #[test]
    fn tie_goes_to_smaller_boundary() {
        let mut v = [4, 9, 0, 7, 2, 8, 1, 6, 3, 5];
        assert_eq!(trace(10, 2.0, &mut v), vec![3, 1, 7]);
    }

    #[test]
    fn two_elements_one_selection() {
        let mut v = [2, 1];
        assert_eq!(trace(2, 2.0, &mut v), vec![1]);
        assert_eq!(v, [1, 2]);
        let mut v = [2, 1];
        assert_eq!(trace(2, 6.0, &mut v), vec![1]);
    }

    #[test]
    fn unit_rank_sorts() {
        let mut v = [7, 3, 5, 1, 0, 6, 2, 4];
        trace(8, 1.0, &mut v);
        assert_eq!(v, [0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn nearest_boundary_choice() {
        assert_eq!(nearest_to_center(&[1, 3, 7], 0, 10), 1);
        assert_eq!(nearest_to_center(&[1, 3, 7], 3, 10), 2);
        assert_eq!(nearest_to_center(&[8, 9], 0, 10), 0);
        assert_eq!(nearest_to_center(&[1, 2], 0, 10), 1);
        assert_eq!(nearest_to_center(&[4, 6], 0, 10), 0);
    }
}
