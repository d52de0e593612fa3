//! Most permissive score threshold at a target false discovery rate.
//!
//! Hypotheses are ranked best-first: higher score is better, ties broken by
//! ascending id. For the `k` best hypotheses the empirical FDR is
//! `#FP / k`; the answer is the largest `k` with FDR at most `tau`.
//!
//! [`fdr_threshold_by_sort`] sorts and scans. [`fdr_threshold_by_loh`]
//! builds a layer-ordered heap, uses exact label counts at layer boundaries
//! together with best/worst within-layer arrangements to discard layers,
//! and only refines the layer that may hold the answer.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{LayerLayout, Rank};
use crate::lohify::lohify_ppcca;
use crate::select::{select_slice, InstrumentedComparator};

/// Layers at or below this size are sorted and scanned directly.
pub const SMALL_LIST: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "TP")]
    Tp,
    #[serde(rename = "FP")]
    Fp,
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "TP" => Ok(Label::Tp),
            "FP" => Ok(Label::Fp),
            other => Err(Error::Domain(format!("label must be TP or FP, got `{other}`"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Tp => "TP",
            Label::Fp => "FP",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredHypothesis {
    pub score: f64,
    pub label: Label,
    pub id: usize,
}

impl ScoredHypothesis {
    pub fn is_fp(&self) -> bool {
        self.label == Label::Fp
    }
}

/// Best-first order: descending score, then ascending id.
pub fn best_first(a: &ScoredHypothesis, b: &ScoredHypothesis) -> Ordering {
    b.score.total_cmp(&a.score).then(a.id.cmp(&b.id))
}

/// Target FDR, strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdrQuery {
    tau: f64,
}

impl FdrQuery {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Domain(format!("tau must lie in (0, 1), got {tau}")));
        }
        Ok(FdrQuery { tau })
    }

    pub fn tau(self) -> f64 {
        self.tau
    }

    /// Whether `fp` false positives among `k` accepted hypotheses is
    /// within the target. Both methods go through this one expression.
    #[inline]
    pub fn accepts(self, fp: usize, k: usize) -> bool {
        fp as f64 / k as f64 <= self.tau
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdrAnswer {
    /// Number of accepted hypotheses; 0 when no prefix qualifies.
    pub k: usize,
    /// Score of the worst accepted hypothesis; `None` when `k == 0`.
    pub threshold_score: Option<f64>,
    /// `#FP / k` among the accepted; 0 when `k == 0`.
    pub achieved_fdr: f64,
}

impl FdrAnswer {
    fn none() -> Self {
        FdrAnswer {
            k: 0,
            threshold_score: None,
            achieved_fdr: 0.0,
        }
    }

    fn found(k: usize, fp: usize, score: f64) -> Self {
        FdrAnswer {
            k,
            threshold_score: Some(score),
            achieved_fdr: fp as f64 / k as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdrRun {
    pub answer: FdrAnswer,
    pub comparisons: u64,
}

fn validate(data: &[ScoredHypothesis]) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(h) = data.iter().find(|h| !h.score.is_finite()) {
        return Err(Error::Domain(format!(
            "hypothesis {} has non-finite score {}",
            h.id, h.score
        )));
    }
    let mut seen = HashSet::with_capacity(data.len());
    if let Some(h) = data.iter().find(|h| !seen.insert(h.id)) {
        return Err(Error::Domain(format!("duplicate hypothesis id {}", h.id)));
    }
    Ok(())
}

/// Sort best-first, then advance one hypothesis at a time.
pub fn fdr_threshold_by_sort(data: &[ScoredHypothesis], query: FdrQuery) -> Result<FdrRun> {
    validate(data)?;
    let mut items = data.to_vec();
    let mut cmp = InstrumentedComparator::new(best_first);
    items.sort_by(|a, b| cmp.compare(a, b));
    let answer = scan_sorted(&items, 0, query).map_or_else(FdrAnswer::none, |f| f.answer());
    Ok(FdrRun {
        answer,
        comparisons: cmp.tally(),
    })
}

#[derive(Debug, Clone, Copy)]
struct Found {
    k: usize,
    fp: usize,
    score: f64,
}

impl Found {
    fn answer(self) -> FdrAnswer {
        FdrAnswer::found(self.k, self.fp, self.score)
    }
}

/// Largest qualifying prefix of best-first `items`, which follow `before`
/// already-accepted hypotheses of which `before_fp` are false.
fn scan_sorted(items: &[ScoredHypothesis], before: usize, query: FdrQuery) -> Option<Found> {
    scan_sorted_after(items, before, 0, query)
}

fn scan_sorted_after(items: &[ScoredHypothesis], before: usize, before_fp: usize, query: FdrQuery) -> Option<Found> {
    let mut fp = before_fp;
    let mut best = None;
    for (i, h) in items.iter().enumerate() {
        fp += h.is_fp() as usize;
        let k = before + i + 1;
        if query.accepts(fp, k) {
            best = Some(Found { k, fp, score: h.score });
        }
    }
    best
}

/// Label counts for one layer and for everything ranked before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerTally {
    pub before: usize,
    pub before_fp: usize,
    pub tp: usize,
    pub fp: usize,
}

impl LayerTally {
    pub fn len(&self) -> usize {
        self.tp + self.fp
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// False positives among the first `m` of the layer if its true
    /// positives come first.
    pub fn optimistic_fp(&self, m: usize) -> usize {
        self.before_fp + m.saturating_sub(self.tp)
    }

    /// False positives among the first `m` of the layer if its false
    /// positives come first.
    pub fn pessimistic_fp(&self, m: usize) -> usize {
        self.before_fp + m.min(self.fp)
    }

    pub fn optimistic_fdr(&self, m: usize) -> f64 {
        self.optimistic_fp(m) as f64 / (self.before + m) as f64
    }

    pub fn pessimistic_fdr(&self, m: usize) -> f64 {
        self.pessimistic_fp(m) as f64 / (self.before + m) as f64
    }

    /// Largest `m` in `1..=len` that could qualify under any arrangement.
    pub fn optimistic_last(&self, query: FdrQuery) -> Option<usize> {
        (1..=self.len())
            .rev()
            .find(|&m| query.accepts(self.optimistic_fp(m), self.before + m))
    }

    /// Largest `m` in `1..=len` that qualifies under every arrangement.
    pub fn pessimistic_last(&self, query: FdrQuery) -> Option<usize> {
        (1..=self.len())
            .rev()
            .find(|&m| query.accepts(self.pessimistic_fp(m), self.before + m))
    }
}

/// Layer-ordered-heap threshold search at rank `rank`.
///
/// Produces the same `k` and threshold score as [`fdr_threshold_by_sort`].
pub fn fdr_threshold_by_loh(data: &[ScoredHypothesis], query: FdrQuery, rank: Rank) -> Result<FdrRun> {
    validate(data)?;
    let mut items = data.to_vec();
    let mut cmp = InstrumentedComparator::new(best_first);
    let found = largest_qualifying(&mut items, 0, 0, false, query, rank, &mut cmp)?;
    Ok(FdrRun {
        answer: found.map_or_else(FdrAnswer::none, Found::answer),
        comparisons: cmp.tally(),
    })
}

fn largest_qualifying<F>(
    items: &mut [ScoredHypothesis],
    before: usize,
    before_fp: usize,
    mirrored: bool,
    query: FdrQuery,
    rank: Rank,
    cmp: &mut InstrumentedComparator<F>,
) -> Result<Option<Found>>
where
    F: FnMut(&ScoredHypothesis, &ScoredHypothesis) -> Ordering,
{
    if items.len() <= SMALL_LIST {
        items.sort_by(|a, b| cmp.compare(a, b));
        return Ok(scan_sorted_after(items, before, before_fp, query));
    }

    let layout = if mirrored {
        lohify_worst_first(items, rank, cmp)?
    } else {
        lohify_ppcca(items, rank, cmp)?.layout
    };

    let mut tallies = Vec::with_capacity(layout.layer_count());
    let (mut seen, mut seen_fp) = (before, before_fp);
    for range in layout.layers() {
        let fp = items[range.clone()].iter().filter(|h| h.is_fp()).count();
        let tally = LayerTally {
            before: seen,
            before_fp: seen_fp,
            tp: range.len() - fp,
            fp,
        };
        seen += range.len();
        seen_fp += fp;
        tallies.push(tally);
    }

    for (range, tally) in layout.layers().zip(tallies).rev() {
        let Some(upper) = tally.optimistic_last(query) else {
            continue;
        };
        let layer = &mut items[range];
        if tally.pessimistic_last(query) == Some(upper) {
            select_slice(layer, upper - 1, cmp);
            let fp = tally.before_fp + layer[..upper].iter().filter(|h| h.is_fp()).count();
            return Ok(Some(Found {
                k: tally.before + upper,
                fp,
                score: layer[upper - 1].score,
            }));
        }
        // Put the fine layers on whichever end the answer is likely nearer.
        // The answer lies between the two bounds; put the fine layers on
        // whichever end of the layer that window is nearer to.
        let mirror = tally.pessimistic_last(query).unwrap_or(0) + upper > layer.len();
        if let Some(found) = largest_qualifying(layer, tally.before, tally.before_fp, mirror, query, rank, cmp)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Lays `items` out best-first with the small layers at the worst end:
/// LOHify worst-first, then reverse.
fn lohify_worst_first<F>(
    items: &mut [ScoredHypothesis],
    rank: Rank,
    cmp: &mut InstrumentedComparator<F>,
) -> Result<LayerLayout>
where
    F: FnMut(&ScoredHypothesis, &ScoredHypothesis) -> Ordering,
{
    let order = cmp.order_mut();
    let mut reversed = InstrumentedComparator::new(|a: &ScoredHypothesis, b: &ScoredHypothesis| order(b, a));
    let layout = lohify_ppcca(items, rank, &mut reversed)?.layout;
    let spent = reversed.tally();
    cmp.charge(spent);
    items.reverse();
    let n = items.len();
    LayerLayout::from_boundaries(layout.boundaries().iter().rev().map(|b| n - b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyps(labels: &[Label]) -> Vec<ScoredHypothesis> {
        labels
            .iter()
            .enumerate()
            .map(|(i, &label)| ScoredHypothesis {
                score: (labels.len() - i) as f64,
                label,
                id: i,
            })
            .collect()
    }

    use Label::{Fp, Tp};

    #[test]
    fn hand_scan_example() {
        let data = hyps(&[Tp, Tp, Fp, Tp]);
        let q = FdrQuery::new(0.25).unwrap();
        let run = fdr_threshold_by_sort(&data, q).unwrap();
        assert_eq!(run.answer.k, 4);
        assert_eq!(run.answer.achieved_fdr, 0.25);
        assert_eq!(run.answer.threshold_score, Some(1.0));
    }

    #[test]
    fn all_false_positives_accept_nothing() {
        let data = hyps(&[Fp; 50]);
        for tau in [0.01, 0.5, 0.99] {
            let q = FdrQuery::new(tau).unwrap();
            for run in [
                fdr_threshold_by_sort(&data, q).unwrap(),
                fdr_threshold_by_loh(&data, q, Rank::new(2.0).unwrap()).unwrap(),
            ] {
                assert_eq!(
                    run.answer,
                    FdrAnswer {
                        k: 0,
                        threshold_score: None,
                        achieved_fdr: 0.0
                    }
                );
            }
        }
    }

    #[test]
    fn all_true_positives_accept_everything() {
        let data = hyps(&[Tp; 70]);
        let q = FdrQuery::new(0.01).unwrap();
        let run = fdr_threshold_by_loh(&data, q, Rank::new(3.0).unwrap()).unwrap();
        assert_eq!(run.answer.k, 70);
        assert_eq!(run.answer.achieved_fdr, 0.0);
        assert_eq!(run.answer.threshold_score, Some(1.0));
        assert_eq!(run.answer, fdr_threshold_by_sort(&data, q).unwrap().answer);
    }

    #[test]
    fn small_input_matches_sort() {
        let mut data = hyps(&[Tp, Fp, Tp, Tp, Fp, Tp, Tp, Tp, Fp, Fp]);
        data.reverse();
        for tau in [0.1, 0.2, 0.3, 0.5] {
            let q = FdrQuery::new(tau).unwrap();
            assert_eq!(
                fdr_threshold_by_loh(&data, q, Rank::new(2.0).unwrap()).unwrap().answer,
                fdr_threshold_by_sort(&data, q).unwrap().answer
            );
        }
    }

    #[test]
    fn homogeneous_layers_have_coinciding_bounds() {
        let q = FdrQuery::new(0.1).unwrap();
        let fps = LayerTally {
            before: 90,
            before_fp: 5,
            tp: 0,
            fp: 10,
        };
        assert_eq!(fps.optimistic_last(q), fps.pessimistic_last(q));
        // 9/94 qualifies, 10/95 does not
        assert_eq!(fps.optimistic_last(q), Some(4));
        let tps = LayerTally {
            before: 10,
            before_fp: 3,
            tp: 40,
            fp: 0,
        };
        assert_eq!(tps.optimistic_last(q), tps.pessimistic_last(q));
        assert_eq!(tps.optimistic_last(q), Some(40));
    }

    #[test]
    fn ties_in_score_are_broken_by_id() {
        let data: Vec<_> = (0..100)
            .map(|i| ScoredHypothesis {
                score: (i % 3) as f64,
                label: if i % 7 == 0 { Fp } else { Tp },
                id: i,
            })
            .collect();
        for tau in [0.05, 0.1, 0.2] {
            let q = FdrQuery::new(tau).unwrap();
            assert_eq!(
                fdr_threshold_by_loh(&data, q, Rank::new(2.0).unwrap()).unwrap().answer,
                fdr_threshold_by_sort(&data, q).unwrap().answer
            );
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FdrQuery::new(0.0).is_err());
        assert!(FdrQuery::new(1.0).is_err());
        assert!(FdrQuery::new(f64::NAN).is_err());
        let q = FdrQuery::new(0.1).unwrap();
        assert_eq!(fdr_threshold_by_sort(&[], q), Err(Error::Empty));
        let nan = [ScoredHypothesis {
            score: f64::NAN,
            label: Tp,
            id: 0,
        }];
        assert!(fdr_threshold_by_sort(&nan, q).is_err());
        let dup = [
            ScoredHypothesis {
                score: 1.0,
                label: Tp,
                id: 0,
            },
            ScoredHypothesis {
                score: 2.0,
                label: Tp,
                id: 0,
            },
        ];
        assert!(fdr_threshold_by_loh(&dup, q, Rank::SORTED).is_err());
    }

    #[test]
    fn labels_parse() {
        assert_eq!("TP".parse::<Label>().unwrap(), Tp);
        assert_eq!("FP".parse::<Label>().unwrap(), Fp);
        assert!("tp".parse::<Label>().is_err());
    }
}
