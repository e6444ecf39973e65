use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundParams;

pub const DEFAULT_TIE_BAND: f64 = 1e-9;

/// n values per parallel work unit. Fixed so that the partition, and hence
/// the merged report, does not depend on the worker count.
const CHUNK: u64 = 8192;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsInfo {
    pub epsilon: f64,
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub j: String,
}

impl From<&BoundParams> for ParamsInfo {
    fn from(p: &BoundParams) -> Self {
        Self {
            epsilon: p.epsilon,
            epsilon1: p.epsilon1,
            epsilon2: p.epsilon2,
            j: p.j_label(),
        }
    }
}

/// Outcome of one sweep. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub range: [u64; 2],
    pub checked: u64,
    pub passed: u64,
    pub failures: Vec<Sample>,
    pub near_ties: Vec<Sample>,
    pub tie_band: f64,
    pub elapsed_ms: u64,
    pub params: Option<ParamsInfo>,
}

impl InequalityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Same report with the timing zeroed, for byte comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Running counts for a sweep or a slice of one.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checked: u64,
    pub passed: u64,
    pub failures: Vec<Sample>,
    pub near_ties: Vec<Sample>,
}

impl Tally {
    /// Strict `lhs < rhs` on reals. Anything within `tie_band * max(1, |rhs|)`
    /// is counted as passed but flagged as a near tie.
    pub fn less(&mut self, n: u64, lhs: f64, rhs: f64, tie_band: f64) {
        self.checked += 1;
        let sample = Sample { n, lhs, rhs };
        if (lhs - rhs).abs() <= tie_band * rhs.abs().max(1.0) {
            self.passed += 1;
            self.near_ties.push(sample);
        } else if lhs < rhs {
            self.passed += 1;
        } else {
            // Includes NaN on either side.
            self.failures.push(sample);
        }
    }

    /// Strict `lhs < rhs` on integers; no tie band.
    pub fn less_int(&mut self, n: u64, lhs: u64, rhs: u64) {
        self.checked += 1;
        if lhs < rhs {
            self.passed += 1;
        } else {
            self.failures.push(Sample {
                n,
                lhs: lhs as f64,
                rhs: rhs as f64,
            });
        }
    }

    pub fn equal_int(&mut self, n: u64, observed: u64, expected: u64) {
        self.checked += 1;
        if observed == expected {
            self.passed += 1;
        } else {
            self.failures.push(Sample {
                n,
                lhs: observed as f64,
                rhs: expected as f64,
            });
        }
    }

    pub fn fail(&mut self, n: u64, lhs: f64, rhs: f64) {
        self.checked += 1;
        self.failures.push(Sample { n, lhs, rhs });
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.passed += other.passed;
        self.failures.extend(other.failures);
        self.near_ties.extend(other.near_ties);
        self
    }

    pub fn into_report(
        mut self,
        name: &str,
        range: [u64; 2],
        tie_band: f64,
        started: Instant,
        params: Option<ParamsInfo>,
    ) -> InequalityReport {
        self.failures.sort_by_key(|s| s.n);
        self.near_ties.sort_by_key(|s| s.n);
        InequalityReport {
            name: name.to_string(),
            range,
            checked: self.checked,
            passed: self.passed,
            failures: self.failures,
            near_ties: self.near_ties,
            tie_band,
            elapsed_ms: started.elapsed().as_millis() as u64,
            params,
        }
    }
}

/// Run `check` for every n in `[lo, hi]` on the current rayon pool.
pub fn sweep<F>(lo: u64, hi: u64, check: F) -> Tally
where
    F: Fn(u64, &mut Tally) + Sync,
{
    sweep_with(lo, hi, || (), |_, n, t| check(n, t))
}

/// [`sweep`] with per-chunk scratch state, created by `init` at the start of
/// each chunk and visited in ascending n.
pub fn sweep_with<S, I, F>(lo: u64, hi: u64, init: I, check: F) -> Tally
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64, &mut Tally) + Sync,
{
    if lo > hi {
        return Tally::default();
    }
    let chunks = (hi - lo) / CHUNK + 1;
    let parts: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * CHUNK;
            let end = (start + CHUNK - 1).min(hi);
            let mut state = init();
            let mut t = Tally::default();
            for n in start..=end {
                check(&mut state, n, &mut t);
            }
            t
        })
        .collect();
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

/// Like [`sweep`] over an explicit list of points (kept in the given order).
pub fn sweep_points<F>(points: &[u64], check: F) -> Tally
where
    F: Fn(u64, &mut Tally) + Sync,
{
    let parts: Vec<Tally> = points
        .par_chunks(CHUNK as usize)
        .map(|chunk| {
            let mut t = Tally::default();
            for &n in chunk {
                check(n, &mut t);
            }
            t
        })
        .collect();
    parts.into_iter().fold(Tally::default(), Tally::merge)
}
