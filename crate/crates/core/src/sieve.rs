//! Segmented, bit-packed sieve of Eratosthenes over the odd integers.
//!
//! Bit `i` of the table stands for the odd number `2i + 1`; 2 is handled
//! separately. Cumulative prime counts are stored at every block of
//! [`BLOCK_BITS`] bits, so `pi(x)` is one lookup plus a scan of at most half
//! a block.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Odd integers per cumulative-count block.
pub const BLOCK_BITS: u64 = 1 << 16;
const BLOCK_WORDS: usize = (BLOCK_BITS / 64) as usize;

/// Odd integers per sieving segment (32 KiB of bits).
const SEGMENT_WORDS: usize = 4096;

/// Default cap on sieve memory, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1024 * 1024 * 1024;

/// Upper bound on the bytes needed to sieve up to `limit`.
pub fn sieve_bytes(limit: u64) -> u64 {
    let odds = limit.div_ceil(2).max(1);
    let words = odds.div_ceil(64);
    let blocks = odds.div_ceil(BLOCK_BITS);
    words * 8 + blocks * 8
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    odd_bits: Vec<u64>,
    block_counts: Vec<u64>,
    prime_count_total: u64,
}

impl PrimeTable {
    /// Sieve `[0, limit]` under the default memory budget.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn build_with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidInput(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        let need = sieve_bytes(limit);
        if need > budget_bytes {
            return Err(Error::ResourceLimit(format!(
                "sieving to {limit} needs {need} bytes, budget is {budget_bytes}"
            )));
        }

        let odds = limit.div_ceil(2) as usize;
        let words = odds.div_ceil(64);
        let mut odd_bits = vec![u64::MAX; words];
        // 1 is not prime.
        odd_bits[0] &= !1;
        let tail = odds % 64;
        if tail != 0 {
            odd_bits[words - 1] &= (1u64 << tail) - 1;
        }

        let base = small_odd_primes(isqrt(limit));
        odd_bits
            .par_chunks_mut(SEGMENT_WORDS)
            .enumerate()
            .for_each(|(seg, chunk)| sieve_segment(chunk, seg * SEGMENT_WORDS * 64, &base));

        let per_block: Vec<u64> = odd_bits
            .par_chunks(BLOCK_WORDS)
            .map(|b| b.iter().map(|w| u64::from(w.count_ones())).sum())
            .collect();
        let mut block_counts = Vec::with_capacity(per_block.len());
        // Start from 1 to account for the prime 2.
        let mut running = 1u64;
        for c in per_block {
            running += c;
            block_counts.push(running);
        }

        Ok(Self {
            limit,
            odd_bits,
            prime_count_total: running,
            block_counts,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// pi(limit).
    pub fn prime_count_total(&self) -> u64 {
        self.prime_count_total
    }

    pub fn block_counts(&self) -> &[u64] {
        &self.block_counts
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::OutOfRange {
                what: "x",
                value: x,
                max: self.limit,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn bit(&self, idx: u64) -> bool {
        (self.odd_bits[(idx / 64) as usize] >> (idx % 64)) & 1 == 1
    }

    /// Primality for `x <= limit` without the range check.
    #[inline]
    pub(crate) fn is_prime_unchecked(&self, x: u64) -> bool {
        if x % 2 == 0 {
            x == 2
        } else {
            self.bit(x / 2)
        }
    }

    pub fn is_prime(&self, x: u64) -> Result<bool> {
        self.check(x)?;
        Ok(self.is_prime_unchecked(x))
    }

    /// pi(x), the number of primes `<= x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x < 2 {
            return Ok(0);
        }
        // Index of the largest odd number <= x.
        let idx = (x - 1) / 2;
        let block = (idx / BLOCK_BITS) as usize;
        let word = (idx / 64) as usize;
        let below_mask = if idx % 64 == 63 {
            u64::MAX
        } else {
            (1u64 << (idx % 64 + 1)) - 1
        };
        let block_start = block * BLOCK_WORDS;
        let block_end = ((block + 1) * BLOCK_WORDS).min(self.odd_bits.len());

        // Scan whichever end of the block is closer.
        if word - block_start <= block_end - word {
            let before = if block == 0 {
                1
            } else {
                self.block_counts[block - 1]
            };
            let full: u64 = self.odd_bits[block_start..word]
                .iter()
                .map(|w| u64::from(w.count_ones()))
                .sum();
            Ok(before + full + u64::from((self.odd_bits[word] & below_mask).count_ones()))
        } else {
            let after: u64 = self.odd_bits[word + 1..block_end]
                .iter()
                .map(|w| u64::from(w.count_ones()))
                .sum();
            let above = u64::from((self.odd_bits[word] & !below_mask).count_ones());
            Ok(self.block_counts[block] - after - above)
        }
    }

    /// p_k, the k-th prime (p_1 = 2).
    pub fn nth_prime(&self, k: u64) -> Result<u64> {
        if k == 0 {
            return Err(Error::InvalidInput("prime index k starts at 1".into()));
        }
        if k > self.prime_count_total {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                max: self.prime_count_total,
            });
        }
        if k == 1 {
            return Ok(2);
        }
        let block = self.block_counts.partition_point(|&c| c < k);
        let mut seen = if block == 0 {
            1
        } else {
            self.block_counts[block - 1]
        };
        let start = block * BLOCK_WORDS;
        for (i, &w) in self.odd_bits[start..].iter().enumerate() {
            let c = u64::from(w.count_ones());
            if seen + c >= k {
                let mut w = w;
                for _ in 0..(k - seen - 1) {
                    w &= w - 1;
                }
                let idx = ((start + i) as u64) * 64 + u64::from(w.trailing_zeros());
                return Ok(2 * idx + 1);
            }
            seen += c;
        }
        Err(Error::Internal(format!(
            "block counts disagree with bits while selecting p_{k}"
        )))
    }

    /// Smallest prime `> x`, if the table reaches it.
    pub fn next_prime(&self, x: u64) -> Option<u64> {
        if x < 2 {
            return (self.limit >= 2).then_some(2);
        }
        let idx = (x + 1) / 2;
        let mut word = (idx / 64) as usize;
        if word >= self.odd_bits.len() {
            return None;
        }
        let mut w = self.odd_bits[word] & (u64::MAX << (idx % 64));
        loop {
            if w != 0 {
                let v = 2 * (word as u64 * 64 + u64::from(w.trailing_zeros())) + 1;
                return (v <= self.limit).then_some(v);
            }
            word += 1;
            if word >= self.odd_bits.len() {
                return None;
            }
            w = self.odd_bits[word];
        }
    }

    /// All primes in the table, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let odd = self.odd_bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = u64::from(w.trailing_zeros());
                w &= w - 1;
                Some(2 * (i as u64 * 64 + b) + 1)
            })
        });
        std::iter::once(2).chain(odd)
    }
}

/// Walks p_k for non-decreasing k, stepping prime to prime instead of
/// selecting from scratch each time.
pub struct PrimeCursor<'a> {
    table: &'a PrimeTable,
    k: u64,
    p: u64,
}

impl<'a> PrimeCursor<'a> {
    pub fn new(table: &'a PrimeTable) -> Self {
        Self { table, k: 1, p: 2 }
    }

    /// p_k. Moving backwards, or more than a few thousand primes forward,
    /// falls back to [`PrimeTable::nth_prime`].
    pub fn nth(&mut self, k: u64) -> Result<u64> {
        if k < self.k || k - self.k > 4096 || k == 0 {
            self.p = self.table.nth_prime(k)?;
            self.k = k;
            return Ok(self.p);
        }
        while self.k < k {
            self.p = self.table.next_prime(self.p).ok_or(Error::OutOfRange {
                what: "k",
                value: k,
                max: self.table.prime_count_total(),
            })?;
            self.k += 1;
        }
        Ok(self.p)
    }
}

/// Smallest table holding at least `k` primes: start from a Dusart-style
/// estimate of p_k and grow by half on shortfall.
pub fn sieve_for_nth_prime(k: u64, budget_bytes: u64) -> Result<PrimeTable> {
    let estimate = crate::bounds::upper(k as f64)
        .ok()
        .filter(|u| u.is_finite())
        .map_or(0, |u| (1.1 * u).ceil() as u64);
    let mut limit = estimate.max(100);
    loop {
        let table = PrimeTable::build_with_budget(limit, budget_bytes)?;
        if table.prime_count_total() >= k {
            return Ok(table);
        }
        limit = limit + limit / 2;
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut p = 3;
    while p <= limit {
        if !composite[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= limit {
                composite[m] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    out
}

/// Clear composites in one segment. `first_idx` is the odd-index of the
/// segment's first bit.
fn sieve_segment(chunk: &mut [u64], first_idx: usize, base: &[u64]) {
    let first_idx = first_idx as u64;
    let end_idx = first_idx + chunk.len() as u64 * 64;
    let hi_value = 2 * end_idx - 1;
    for &p in base {
        let sq = p * p;
        if sq > hi_value {
            break;
        }
        // First odd multiple of p that is >= max(p^2, segment start).
        let lo_value = 2 * first_idx + 1;
        let mut start = if sq >= lo_value {
            sq
        } else {
            let m = lo_value.div_ceil(p) * p;
            if m % 2 == 0 {
                m + p
            } else {
                m
            }
        };
        if start > hi_value {
            continue;
        }
        start /= 2;
        let mut idx = start - first_idx;
        let span = end_idx - first_idx;
        while idx < span {
            chunk[(idx / 64) as usize] &= !(1u64 << (idx % 64));
            idx += p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(x: u64) -> bool {
        if x < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= x {
            if x % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn limit_ten() {
        let t = PrimeTable::build(10).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert_eq!(t.prime_count_total(), 4);
    }

    #[test]
    fn limit_two() {
        let t = PrimeTable::build(2).unwrap();
        assert_eq!(t.primes().collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.prime_count_total(), 1);
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert!(t.nth_prime(2).is_err());
    }

    #[test]
    fn rejects_tiny_limit() {
        assert!(matches!(PrimeTable::build(1), Err(Error::InvalidInput(_))));
        assert!(matches!(PrimeTable::build(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let err = PrimeTable::build_with_budget(1_000_000, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }

    #[test]
    fn pi_of_a_million() {
        // Independent count by trial division over odd candidates.
        let oracle = 1
            + (3..=1_000_000u64)
                .step_by(2)
                .filter(|&x| trial_division(x))
                .count() as u64;
        assert_eq!(oracle, 78498);
        let t = PrimeTable::build(1_000_000).unwrap();
        assert_eq!(t.prime_count_total(), oracle);
        assert_eq!(t.prime_count(1_000_000).unwrap(), oracle);
    }

    #[test]
    fn small_queries() {
        let t = PrimeTable::build(100).unwrap();
        assert!(t.is_prime(2).unwrap());
        assert!(!t.is_prime(1).unwrap());
        assert!(!t.is_prime(0).unwrap());
        assert!(t.is_prime(97).unwrap());
        assert_eq!(t.prime_count(10).unwrap(), 4);
        assert_eq!(t.prime_count(1).unwrap(), 0);
        assert_eq!(t.prime_count(11).unwrap(), 5);
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert_eq!(t.nth_prime(5).unwrap(), 11);
        assert_eq!(t.nth_prime(25).unwrap(), 97);
    }

    #[test]
    fn out_of_range_queries() {
        let t = PrimeTable::build(100).unwrap();
        assert!(matches!(t.is_prime(101), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.prime_count(101), Err(Error::OutOfRange { .. })));
        match t.nth_prime(26) {
            Err(Error::OutOfRange { max, .. }) => assert_eq!(max, 25),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn agrees_with_trial_division_exhaustively() {
        let t = PrimeTable::build(100_000).unwrap();
        let mut pi = 0;
        for x in 0..=100_000u64 {
            let p = trial_division(x);
            assert_eq!(t.is_prime(x).unwrap(), p, "x = {x}");
            pi += u64::from(p);
            assert_eq!(t.prime_count(x).unwrap(), pi, "pi({x})");
        }
    }

    #[test]
    fn nth_prime_inverts_prime_count() {
        // Spans several count blocks.
        let t = PrimeTable::build(3_000_000).unwrap();
        for k in 1..=t.prime_count_total() {
            let p = t.nth_prime(k).unwrap();
            assert_eq!(t.prime_count(p).unwrap(), k);
            assert_eq!(t.prime_count(p - 1).unwrap(), k - 1);
        }
    }

    #[test]
    fn block_counts_are_cumulative() {
        let t = PrimeTable::build(2_000_003).unwrap();
        assert!(t.block_counts().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*t.block_counts().last().unwrap(), t.prime_count_total());
        assert_eq!(t.primes().count() as u64, t.prime_count_total());
    }

    #[test]
    fn cursor_and_next_prime_agree_with_selection() {
        let t = PrimeTable::build(1_000_000).unwrap();
        assert_eq!(t.next_prime(0), Some(2));
        assert_eq!(t.next_prime(2), Some(3));
        assert_eq!(t.next_prime(7), Some(11));
        assert_eq!(t.next_prime(8), Some(11));
        assert_eq!(t.next_prime(999_983), None);
        let mut c = PrimeCursor::new(&t);
        for k in (1..=t.prime_count_total()).step_by(3) {
            assert_eq!(c.nth(k).unwrap(), t.nth_prime(k).unwrap());
        }
        assert_eq!(c.nth(10).unwrap(), 29);
        assert!(c.nth(t.prime_count_total() + 1).is_err());
    }

    #[test]
    fn grows_until_enough_primes() {
        let t = sieve_for_nth_prime(1000, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(t.prime_count_total() >= 1000);
        assert_eq!(t.nth_prime(1000).unwrap(), 7919);
        let t = sieve_for_nth_prime(1, DEFAULT_MEMORY_BUDGET).unwrap();
        assert_eq!(t.limit(), 100);
    }
}
