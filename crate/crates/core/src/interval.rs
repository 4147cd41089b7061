//! Closed intervals on the real line and gap extraction from unions.

use crate::scalar::Scalar;

/// Closed interval `[lo, hi]`. Gap lists reuse the same type with open
/// semantics (the endpoints belong to the neighboring closed sets).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    /// Containment of `inner` in `self` with slack on both ends.
    pub fn contains_interval(&self, inner: &Self, tol: T) -> bool {
        inner.lo >= self.lo - tol && inner.hi <= self.hi + tol
    }

    pub fn shifted(&self, by: T) -> Self {
        Self {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }
}

/// Maximal open intervals inside `[min lo, max hi]` not covered by the union
/// of the given closed intervals. Touching intervals produce no gap.
pub fn gaps_in_union<T: Scalar>(intervals: &[Interval<T>]) -> Vec<Interval<T>> {
    let mut sorted: Vec<&Interval<T>> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite endpoints"));
    let mut gaps = Vec::new();
    let mut covered_to = match sorted.first() {
        Some(first) => first.hi,
        None => return gaps,
    };
    for iv in &sorted[1..] {
        if iv.lo > covered_to {
            gaps.push(Interval {
                lo: covered_to,
                hi: iv.lo,
            });
        }
        covered_to = covered_to.max(iv.hi);
    }
    gaps
}
