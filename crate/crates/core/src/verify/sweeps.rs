//! Exhaustive per-n sweeps against a computed Ramanujan table or sieve.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::bounds::{self, BoundParams};
use crate::error::{Error, Result};
use crate::ramanujan::{rho, RamanujanTable};
use crate::sieve::{PrimeCursor, PrimeTable};

use super::report::{sweep, sweep_with, InequalityReport, ParamsInfo};

/// First n covered by the corollary bound.
pub const COROLLARY_MIN_N: u64 = 44;
/// First n covered by the log n + loglog n - 4 bound.
pub const SN2014_MIN_N: u64 = 242;
/// First k covered by the Dusart upper bound.
pub const DUSART_UPPER_MIN_K: u64 = 688_383;
pub const DUSART_LOWER_MIN_K: u64 = 3;

fn check_table_range(tab: &RamanujanTable, lo: u64, hi: u64, min_lo: u64) -> Result<()> {
    if lo < min_lo {
        return Err(Error::InvalidInput(format!(
            "range starts at {lo}, below the first admissible n = {min_lo}"
        )));
    }
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty range [{lo}, {hi}]")));
    }
    if hi > tab.n_max() {
        return Err(Error::InvalidInput(format!(
            "range ends at {hi} but the table stops at n_max = {}",
            tab.n_max()
        )));
    }
    Ok(())
}

/// s < alpha(n) for every n in `[lo, hi]`.
pub fn verify_corollary(
    tab: &RamanujanTable,
    p: &BoundParams,
    lo: u64,
    hi: u64,
    tie_band: f64,
) -> Result<InequalityReport> {
    check_table_range(tab, lo, hi, COROLLARY_MIN_N)?;
    let started = Instant::now();
    let entries = tab.entries();
    let tally = sweep(lo, hi, |n, t| {
        let s = entries[(n - 1) as usize].s as f64;
        match p.alpha(n as f64) {
            Ok(a) => t.less(n, s, a, tie_band),
            Err(_) => t.fail(n, s, f64::NAN),
        }
    });
    Ok(tally.into_report(
        "corollary",
        [lo, hi],
        tie_band,
        started,
        Some(ParamsInfo::from(p)),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicBound {
    /// p_{2n} < R_n.
    SondowLower,
    /// R_n < p_{4n}.
    SondowUpper,
    /// R_n < p_{3n}.
    Laishram,
    /// s < 2n(1 + 3/(log n + loglog n - 4)) for n > 241.
    Sn2014,
    /// p_{s-n} < R_n / 2.
    Lemma221,
}

impl ClassicBound {
    pub const ALL: [ClassicBound; 5] = [
        ClassicBound::SondowLower,
        ClassicBound::SondowUpper,
        ClassicBound::Laishram,
        ClassicBound::Sn2014,
        ClassicBound::Lemma221,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassicBound::SondowLower => "sondow-lower",
            ClassicBound::SondowUpper => "sondow-upper",
            ClassicBound::Laishram => "laishram",
            ClassicBound::Sn2014 => "sn2014",
            ClassicBound::Lemma221 => "lemma221",
        }
    }

    fn min_n(self) -> u64 {
        match self {
            ClassicBound::Sn2014 => SN2014_MIN_N,
            _ => 1,
        }
    }

    /// Largest prime index the check needs at n.
    fn prime_index_needed(self, n: u64) -> u64 {
        match self {
            ClassicBound::SondowLower => 2 * n,
            ClassicBound::SondowUpper => 4 * n,
            ClassicBound::Laishram => 3 * n,
            ClassicBound::Sn2014 | ClassicBound::Lemma221 => 0,
        }
    }
}

impl fmt::Display for ClassicBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassicBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown classic bound `{s}`")))
    }
}

pub fn verify_classic(
    tab: &RamanujanTable,
    primes: &PrimeTable,
    which: ClassicBound,
    lo: u64,
    hi: u64,
    tie_band: f64,
) -> Result<InequalityReport> {
    check_table_range(tab, lo, hi, which.min_n())?;
    let need = which.prime_index_needed(hi);
    if need > primes.prime_count_total() {
        return Err(Error::OutOfRange {
            what: "prime index",
            value: need,
            max: primes.prime_count_total(),
        });
    }
    let started = Instant::now();
    let entries = tab.entries();
    let tally = sweep_with(
        lo,
        hi,
        || PrimeCursor::new(primes),
        |cursor, n, t| {
            let e = entries[(n - 1) as usize];
            let mut nth = |k: u64| cursor.nth(k).map_err(|_| ());
            let res: std::result::Result<(), ()> = (|| {
                match which {
                    ClassicBound::SondowLower => t.less_int(n, nth(2 * n)?, e.r),
                    ClassicBound::SondowUpper => t.less_int(n, e.r, nth(4 * n)?),
                    ClassicBound::Laishram => t.less_int(n, e.r, nth(3 * n)?),
                    ClassicBound::Sn2014 => {
                        let nf = n as f64;
                        let denom = nf.ln() + nf.ln().ln() - 4.0;
                        t.less(n, e.s as f64, 2.0 * nf * (1.0 + 3.0 / denom), tie_band);
                    }
                    ClassicBound::Lemma221 => {
                        // p_0 is undefined; only n = 1 has s <= n.
                        if e.s > n {
                            let q = nth(e.s - n)?;
                            t.less(n, q as f64, e.r as f64 / 2.0, tie_band);
                        }
                    }
                }
                Ok(())
            })();
            if res.is_err() {
                t.fail(n, e.r as f64, f64::NAN);
            }
        },
    );
    Ok(tally.into_report(which.name(), [lo, hi], tie_band, started, None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DusartSide {
    Lower,
    Upper,
}

impl FromStr for DusartSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(DusartSide::Lower),
            "upper" => Ok(DusartSide::Upper),
            _ => Err(Error::InvalidInput(format!("unknown side `{s}`"))),
        }
    }
}

/// L(k) < p_k (lower) or p_k < U(k) (upper) for every k in `[k_lo, k_hi]`.
pub fn verify_dusart(
    primes: &PrimeTable,
    side: DusartSide,
    k_lo: u64,
    k_hi: u64,
    tie_band: f64,
) -> Result<InequalityReport> {
    let (min_k, name) = match side {
        DusartSide::Lower => (DUSART_LOWER_MIN_K, "dusart-lower"),
        DusartSide::Upper => (DUSART_UPPER_MIN_K, "dusart-upper"),
    };
    if k_lo < min_k {
        return Err(Error::InvalidInput(format!(
            "{name} holds from k = {min_k}; range starts at {k_lo}"
        )));
    }
    if k_lo > k_hi {
        return Err(Error::InvalidInput(format!("empty range [{k_lo}, {k_hi}]")));
    }
    if k_hi > primes.prime_count_total() {
        return Err(Error::OutOfRange {
            what: "k",
            value: k_hi,
            max: primes.prime_count_total(),
        });
    }
    let started = Instant::now();
    let tally = sweep_with(
        k_lo,
        k_hi,
        || PrimeCursor::new(primes),
        |cursor, k, t| {
            let pk = match cursor.nth(k) {
                Ok(p) => p as f64,
                Err(_) => return t.fail(k, f64::NAN, f64::NAN),
            };
            let kf = k as f64;
            match side {
                DusartSide::Lower => match bounds::lower(kf) {
                    Ok(l) => t.less(k, l, pk, tie_band),
                    Err(_) => t.fail(k, f64::NAN, pk),
                },
                DusartSide::Upper => match bounds::upper(kf) {
                    Ok(u) => t.less(k, pk, u, tie_band),
                    Err(_) => t.fail(k, pk, f64::NAN),
                },
            }
        },
    );
    Ok(tally.into_report(name, [k_lo, k_hi], tie_band, started, None))
}

/// Re-derive every row of a (possibly loaded) table from the sieve. Each n
/// contributes four equality checks: R_n prime, rho(R_n) = n,
/// rho(R_n - 1) = n - 1 and pi(R_n) = s. Failures carry observed/expected.
pub fn verify_table_integrity(
    tab: &RamanujanTable,
    primes: &PrimeTable,
) -> Result<InequalityReport> {
    let started = Instant::now();
    let entries = tab.entries();
    let hi = tab.n_max();
    let tally = sweep(1, hi, |n, t| {
        let e = entries[(n - 1) as usize];
        if e.r > primes.limit() || e.r < 2 {
            t.fail(n, e.r as f64, f64::NAN);
            return;
        }
        let prime = primes.is_prime(e.r).unwrap_or(false);
        t.equal_int(n, e.r * u64::from(prime), e.r);
        t.equal_int(n, rho(primes, e.r).unwrap_or(0), n);
        t.equal_int(n, rho(primes, e.r - 1).unwrap_or(0), n - 1);
        t.equal_int(n, primes.prime_count(e.r).unwrap_or(0), e.s);
    });
    Ok(tally.into_report("table-integrity", [1, hi], 0.0, started, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramanujan::{build_table_with_sieve, Entry};
    use crate::sieve::DEFAULT_MEMORY_BUDGET;
    use crate::verify::report::{Sample, Tally, DEFAULT_TIE_BAND};

    fn small() -> (RamanujanTable, PrimeTable) {
        build_table_with_sieve(20_000, DEFAULT_MEMORY_BUDGET).unwrap()
    }

    #[test]
    fn corollary_small_range() {
        let (tab, _) = small();
        let p = BoundParams::corollary();
        let r = verify_corollary(&tab, &p, 44, 20_000, DEFAULT_TIE_BAND).unwrap();
        assert!(r.ok(), "{:?}", &r.failures[..r.failures.len().min(5)]);
        assert_eq!(r.checked, 20_000 - 43);
        let one = verify_corollary(&tab, &p, 44, 44, DEFAULT_TIE_BAND).unwrap();
        assert_eq!(one.checked, 1);
        assert!((tab.index_s(44).unwrap() as f64) < 114.772);
    }

    #[test]
    fn corollary_range_errors() {
        let (tab, _) = small();
        let p = BoundParams::corollary();
        assert!(matches!(
            verify_corollary(&tab, &p, 1, 43, DEFAULT_TIE_BAND),
            Err(Error::InvalidInput(_))
        ));
        assert!(verify_corollary(&tab, &p, 44, 20_001, DEFAULT_TIE_BAND).is_err());
        assert!(verify_corollary(&tab, &p, 50, 49, DEFAULT_TIE_BAND).is_err());
    }

    #[test]
    fn classic_bounds_hold_on_small_table() {
        let (tab, primes) = small();
        for b in ClassicBound::ALL {
            let lo = b.min_n();
            let r = verify_classic(&tab, &primes, b, lo, 20_000, DEFAULT_TIE_BAND).unwrap();
            if b == ClassicBound::SondowLower {
                // p_2 = 3 > R_1 = 2: the lower bound needs n > 1.
                assert_eq!(
                    r.failures,
                    vec![Sample {
                        n: 1,
                        lhs: 3.0,
                        rhs: 2.0
                    }]
                );
            } else {
                assert!(r.ok(), "{b}: {:?}", &r.failures[..r.failures.len().min(5)]);
            }
        }
        let r = verify_classic(
            &tab,
            &primes,
            ClassicBound::Lemma221,
            1,
            10,
            DEFAULT_TIE_BAND,
        )
        .unwrap();
        // n = 1 (s = 1) is skipped.
        assert_eq!(r.checked, 9);
        assert!(verify_classic(
            &tab,
            &primes,
            ClassicBound::Sn2014,
            241,
            300,
            DEFAULT_TIE_BAND
        )
        .is_err());
    }

    #[test]
    fn classic_names_parse() {
        for b in ClassicBound::ALL {
            assert_eq!(b.name().parse::<ClassicBound>().unwrap(), b);
        }
        assert!("sondow".parse::<ClassicBound>().is_err());
    }

    #[test]
    fn classic_detects_a_bad_row() {
        let (tab, primes) = small();
        // Shift R_100.. up by p_400 so R_100 > p_400, rows stay increasing.
        let shift = primes.nth_prime(400).unwrap();
        let rows: Vec<Entry> = tab
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| Entry {
                r: if i >= 99 { e.r + shift } else { e.r },
                s: e.s,
            })
            .collect();
        let bound = rows.last().unwrap().r;
        let bad = RamanujanTable::from_entries(rows, bound).unwrap();
        let r = verify_classic(
            &bad,
            &primes,
            ClassicBound::SondowUpper,
            1,
            200,
            DEFAULT_TIE_BAND,
        )
        .unwrap();
        assert_eq!(r.failures.first().map(|f| f.n), Some(100));
    }

    #[test]
    fn dusart_small_ranges() {
        let primes = PrimeTable::build(2_000_000).unwrap();
        let r = verify_dusart(&primes, DusartSide::Lower, 3, 100_000, DEFAULT_TIE_BAND).unwrap();
        assert!(r.ok());
        assert_eq!(r.checked, 100_000 - 2);
        assert!(matches!(
            verify_dusart(&primes, DusartSide::Upper, 10, 20, DEFAULT_TIE_BAND),
            Err(Error::InvalidInput(_))
        ));
        assert!(verify_dusart(&primes, DusartSide::Lower, 2, 20, DEFAULT_TIE_BAND).is_err());
        assert!(
            verify_dusart(&primes, DusartSide::Lower, 3, 10_000_000, DEFAULT_TIE_BAND).is_err()
        );
    }

    #[test]
    fn upper_bound_fails_below_its_range() {
        // Below k = 688383 the upper bound is not claimed; it does fail for
        // some small k, which the sweep must report.
        let primes = PrimeTable::build(1000).unwrap();
        let mut t = Tally::default();
        for k in 3..=100u64 {
            let pk = primes.nth_prime(k).unwrap() as f64;
            t.less(k, pk, bounds::upper(k as f64).unwrap(), DEFAULT_TIE_BAND);
        }
        assert!(!t.failures.is_empty());
    }

    #[test]
    fn integrity_flags_the_corrupted_row() {
        let (tab, primes) = small();
        let clean = verify_table_integrity(&tab, &primes).unwrap();
        assert!(clean.ok());
        assert_eq!(clean.checked, 4 * 20_000);
        let mut rows = tab.entries().to_vec();
        rows[49].r -= 1;
        let bad = RamanujanTable::from_entries(rows, tab.scan_bound()).unwrap();
        let r = verify_table_integrity(&bad, &primes).unwrap();
        assert!(!r.ok());
        assert!(r.failures.iter().all(|f| f.n == 50));
    }
}
