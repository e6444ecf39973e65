//! Integer thresholds of monotone predicates.

use crate::error::{Error, Result};

/// Points checked on each side of a threshold after the search.
pub const COLLAR: u64 = 10;

/// Smallest `n` in `[lo, hi]` with `pred(n)`, assuming `pred` is false then
/// true on the range. `None` if `pred(hi)` is false.
pub fn first_true(lo: u64, hi: u64, mut pred: impl FnMut(u64) -> bool) -> Option<u64> {
    if lo > hi || !pred(hi) {
        return None;
    }
    let (mut lo, mut hi) = (lo, hi);
    // Invariant: pred(hi); every n < lo has !pred(n).
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(hi)
}

/// [`first_true`] starting from `lo`, doubling the upper end until the
/// predicate holds, then checking `COLLAR` points either side of the answer.
pub fn find_threshold(lo: u64, mut pred: impl FnMut(u64) -> bool) -> Result<u64> {
    let mut hi = lo.max(1);
    while !pred(hi) {
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::Internal("predicate never becomes true".into()))?;
    }
    let t = first_true(lo, hi, &mut pred).expect("pred(hi) holds");
    for m in t.saturating_sub(COLLAR).max(lo)..t {
        if pred(m) {
            return Err(Error::Internal(format!(
                "predicate not monotone: holds at {m} below threshold {t}"
            )));
        }
    }
    for m in t..=t + COLLAR {
        if !pred(m) {
            return Err(Error::Internal(format!(
                "predicate not monotone: fails at {m} above threshold {t}"
            )));
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edges() {
        assert_eq!(first_true(0, 10, |_| true), Some(0));
        assert_eq!(first_true(0, 10, |n| n >= 10), Some(10));
        assert_eq!(first_true(0, 10, |n| n >= 11), None);
        assert_eq!(first_true(5, 4, |_| true), None);
        assert_eq!(find_threshold(1, |n| n * n > 1000).unwrap(), 32);
    }

    #[test]
    fn collar_catches_non_monotone_predicates() {
        assert!(find_threshold(1, |n| n >= 100 && n != 103).is_err());
        assert!(find_threshold(1, |n| n >= 100 || n == 95).is_err());
    }

    proptest! {
        #[test]
        fn finds_the_step(lo in 0u64..1000, width in 0u64..100_000, step in 0u64..200_000) {
            let hi = lo + width;
            let expect = (step >= lo && step <= hi).then_some(step).or((step < lo).then_some(lo));
            prop_assert_eq!(first_true(lo, hi, |n| n >= step), expect);
        }
    }
}
