//! Empirical search for the N in "s < alpha for all n > N" under a custom
//! j(n). Everything here is valid only up to the cap it was run with.

use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

use crate::bounds::BoundParams;
use crate::error::{Error, Result};
use crate::ramanujan::RamanujanTable;

use super::proof::dense_then_log_samples;
use super::report::{sweep, InequalityReport, ParamsInfo};

pub const MIN_CAP: u64 = 10_000;
const HYPOTHESIS_FROM: u64 = 1_000;

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisSample {
    pub n: u64,
    pub j: Option<f64>,
    pub n_j_prime: Option<f64>,
    pub g: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub samples: Vec<HypothesisSample>,
    pub j_positive: bool,
    pub j_increasing: bool,
    pub n_j_prime_shrinking: bool,
    pub g_at_least_one: bool,
    pub warnings: Vec<String>,
}

impl HypothesisReport {
    pub fn ok(&self) -> bool {
        self.j_positive && self.j_increasing && self.n_j_prime_shrinking && self.g_at_least_one
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Exploration {
    pub label: &'static str,
    pub cap: u64,
    pub empirical_n: Option<u64>,
    pub params: ParamsInfo,
    pub hypothesis: HypothesisReport,
    /// s < alpha on (N, min(cap, n_max)] when a table was supplied.
    pub table_check: Option<InequalityReport>,
}

fn log_samples(lo: u64, hi: u64, per_decade: u32) -> Vec<u64> {
    let (a, b) = ((lo as f64).log10(), (hi as f64).log10());
    let steps = ((b - a) * f64::from(per_decade)).ceil().max(1.0) as u64;
    let mut out: Vec<u64> = (0..=steps)
        .map(|i| {
            let x = 10f64.powf(a + (b - a) * i as f64 / steps as f64).round() as u64;
            x.clamp(lo, hi)
        })
        .collect();
    out.dedup();
    out
}

pub fn screen_hypotheses(p: &BoundParams, cap: u64) -> HypothesisReport {
    let mut warnings = Vec::new();
    let samples: Vec<HypothesisSample> = log_samples(HYPOTHESIS_FROM, cap, 4)
        .into_iter()
        .map(|n| {
            let nf = n as f64;
            HypothesisSample {
                n,
                j: p.j_value(nf).ok(),
                n_j_prime: p.j_prime(nf).ok().map(|d| nf * d),
                g: p.shape(nf).ok(),
            }
        })
        .collect();

    let j_positive = samples.iter().all(|s| s.j.is_some_and(|j| j > 0.0));
    if !j_positive {
        warnings.push("j(n) is not positive at every sample".to_string());
    }
    let js: Vec<f64> = samples.iter().filter_map(|s| s.j).collect();
    let j_increasing = js.len() == samples.len() && js.windows(2).all(|w| w[1] > w[0]);
    if !j_increasing {
        warnings.push("j(n) does not increase across samples (needs j -> infinity)".to_string());
    }
    let njs: Vec<f64> = samples
        .iter()
        .filter_map(|s| s.n_j_prime.map(f64::abs))
        .collect();
    let n_j_prime_shrinking = njs.len() == samples.len()
        && njs.windows(2).all(|w| w[1] <= w[0])
        && njs.last() < njs.first();
    if !n_j_prime_shrinking {
        warnings.push("|n j'(n)| does not shrink across samples (needs n j' -> 0)".to_string());
    }
    let g_at_least_one = samples.iter().all(|s| s.g.is_some_and(|g| g >= 1.0));
    if !g_at_least_one {
        warnings.push("g(n) < 1 (or undefined) at some sample".to_string());
    }
    HypothesisReport {
        samples,
        j_positive,
        j_increasing,
        n_j_prime_shrinking,
        g_at_least_one,
        warnings,
    }
}

/// Smallest N such that G(n) < 0 at every sampled n in (N, cap]; samples are
/// every integer up to 1e6 and ten per decade beyond. `None` when G(cap) is
/// not negative.
pub fn empirical_threshold(p: &BoundParams, cap: u64) -> Option<u64> {
    let samples = dense_then_log_samples(2, cap);
    let last_bad = samples
        .par_iter()
        .copied()
        .filter(|&n| {
            !p.separation_at_alpha(n as f64)
                .map(|g| g < 0.0)
                .unwrap_or(false)
        })
        .max();
    match last_bad {
        None => Some(1),
        Some(n) if n == cap => None,
        Some(n) => Some(n),
    }
}

pub fn explore_theorem(
    p: &BoundParams,
    cap: u64,
    table: Option<&RamanujanTable>,
    tie_band: f64,
) -> Result<Exploration> {
    if cap < MIN_CAP {
        return Err(Error::InvalidInput(format!(
            "exploration cap must be at least {MIN_CAP}, got {cap}"
        )));
    }
    p.validate()?;
    let hypothesis = screen_hypotheses(p, cap);
    let empirical_n = empirical_threshold(p, cap);

    let table_check = match (table, empirical_n) {
        (Some(tab), Some(n0)) if n0 < tab.n_max() && n0 < cap => {
            let started = Instant::now();
            let lo = n0 + 1;
            let hi = cap.min(tab.n_max());
            let entries = tab.entries();
            let tally = sweep(lo, hi, |n, t| {
                let s = entries[(n - 1) as usize].s as f64;
                match p.alpha(n as f64) {
                    Ok(a) => t.less(n, s, a, tie_band),
                    Err(_) => t.fail(n, s, f64::NAN),
                }
            });
            Some(tally.into_report(
                "theorem-empirical",
                [lo, hi],
                tie_band,
                started,
                Some(ParamsInfo::from(p)),
            ))
        }
        _ => None,
    };

    Ok(Exploration {
        label: "EMPIRICAL",
        cap,
        empirical_n,
        params: ParamsInfo::from(p),
        hypothesis,
        table_check,
    })
}
