//! Decreasing rearrangements.
//!
//! Finite exact vectors sort directly. Sequences with analytic tails use a
//! merge: the head is sorted once, and each built-in tail family yields its
//! own absolute values in nonincreasing order, so the rearrangement of the
//! whole sequence streams out of a two-pointer merge. Enclosure-valued
//! entries merge by midpoint; consumers account for the widths.

use crate::enclosure::Enclosure;
use crate::seq::{Seq, TailFamily};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Signed;

/// Absolute values of the nonzero entries, sorted in nonincreasing order.
pub fn sorted_abs_exact(values: &[BigRational]) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = values
        .iter()
        .filter(|r| !num_traits::Zero::is_zero(*r))
        .map(|r| r.abs())
        .collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Where a merged value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Head,
    Tail,
}

/// Streaming decreasing rearrangement of `|x|`.
///
/// Infinite when `x` has a tail; otherwise ends after the nonzero head
/// entries. Values are yielded by enclosure midpoint; ties and overlapping
/// enclosures resolve by midpoint order, which is harmless for weighted
/// sums against nonincreasing weights (the swap error is covered by the
/// widths).
pub struct MergedStream<'a> {
    head: Vec<Enclosure>,
    head_pos: usize,
    tail: Option<&'a TailFamily>,
    from: u64,
    tail_rank: u64,
}

impl<'a> MergedStream<'a> {
    pub fn new(x: &'a Seq) -> Result<Self> {
        if let Some(t) = x.tail() {
            // Every built-in family knows its sorted order; a family that
            // did not would make the rearrangement uncomputable.
            let _ = t.sorted_env(x.head_len());
            if !t.abs_monotone() && !matches!(t, TailFamily::AlternatingSquares) {
                return Err(Error::UnrearrangeableTail(
                    "tail family has no computable sorted order".into(),
                ));
            }
        }
        let mut head: Vec<Enclosure> = x
            .head()
            .iter()
            .filter(|h| !h.is_zero())
            .map(|h| h.enc().abs())
            .collect();
        head.sort_unstable_by(|a, b| b.value.total_cmp(&a.value));
        Ok(MergedStream {
            head,
            head_pos: 0,
            tail: x.tail(),
            from: x.head_len(),
            tail_rank: 0,
        })
    }

    /// How many head entries have been consumed so far.
    pub fn head_consumed(&self) -> usize {
        self.head_pos
    }

    /// Head entries not yet yielded (each no larger than the last yield).
    pub fn head_remaining(&self) -> &[Enclosure] {
        &self.head[self.head_pos..]
    }

    /// Sorted-rank position inside the tail (number of tail values yielded).
    pub fn tail_consumed(&self) -> u64 {
        self.tail_rank
    }

    /// Cut index the tail stream started from (= head length).
    pub fn tail_from(&self) -> u64 {
        self.from
    }
}

impl<'a> Iterator for MergedStream<'a> {
    type Item = (Enclosure, Source);

    fn next(&mut self) -> Option<(Enclosure, Source)> {
        let h = self.head.get(self.head_pos).copied();
        let t = self
            .tail
            .map(|t| t.sorted_abs_value(self.from, self.tail_rank + 1));
        match (h, t) {
            (Some(hv), Some(tv)) => {
                if hv.value >= tv.value {
                    self.head_pos += 1;
                    Some((hv, Source::Head))
                } else {
                    self.tail_rank += 1;
                    Some((tv, Source::Tail))
                }
            }
            (Some(hv), None) => {
                self.head_pos += 1;
                Some((hv, Source::Head))
            }
            (None, Some(tv)) => {
                self.tail_rank += 1;
                Some((tv, Source::Tail))
            }
            (None, None) => None,
        }
    }
}

/// First `k` values of the decreasing rearrangement `x*`.
pub fn decreasing_rearrangement(x: &Seq, k: u64) -> Result<Vec<Enclosure>> {
    Ok(MergedStream::new(x)?.take(k as usize).map(|(e, _)| e).collect())
}
