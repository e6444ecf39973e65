//! Finite checks behind the corollary's analytic argument: the integer
//! threshold for log(log(2.4n)/log n) < eps2/5, the numeric inequalities used
//! above n = 688383, and negativity of G and G'.

use std::f64::consts::LN_2;
use std::time::Instant;

use crate::bounds::{self, loglog, BoundParams};
use crate::error::{Error, Result};
use crate::threshold::find_threshold;

use super::report::{sweep_points, InequalityReport, ParamsInfo, Tally};

/// Where the corollary's asymptotic argument takes over.
pub const PROOF_START: u64 = 688_383;

/// A per-sample evaluation that could not be completed.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleError {
    pub n: u64,
    pub message: String,
}

/// Smallest n with 2.4 < n^(e^(eps2/5) - 1), plus the real crossover
/// 2.4^(1/(e^(eps2/5) - 1)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eq4Threshold {
    pub threshold: u64,
    pub crossover: f64,
}

pub fn eq4_threshold(eps2: f64) -> Result<Eq4Threshold> {
    if !(eps2 > 0.0 && eps2.is_finite()) {
        return Err(Error::ParameterViolation(format!(
            "eps2 must be positive, got {eps2}"
        )));
    }
    let exponent = (eps2 / 5.0).exp_m1();
    let crossover = (2.4f64.ln() / exponent).exp();
    if !(crossover < 1e18) {
        return Err(Error::ResourceLimit(format!(
            "eps2 = {eps2} puts the threshold beyond 1e18"
        )));
    }
    // log form of 2.4 < n^exponent.
    let threshold = find_threshold(1, |n| exponent * (n as f64).ln() > 2.4f64.ln())?;
    Ok(Eq4Threshold {
        threshold,
        crossover,
    })
}

/// log(log(2.4n)/log n) < eps2/5 evaluated directly.
pub fn eq4_holds(n: u64, eps2: f64) -> Result<bool> {
    let nf = n as f64;
    if n < 2 {
        return Err(Error::Domain("eq4 needs n >= 2".into()));
    }
    Ok(((2.4 * nf).ln() / nf.ln()).ln() < eps2 / 5.0)
}

/// Left side of the `eq5` bound and whether it is below 4 eps2 / 5.
pub fn eq5_check(n: u64, eps2: f64) -> Result<(f64, bool)> {
    if n < 2 {
        return Err(Error::Domain(format!("eq5 needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let l = nf.ln();
    let value = loglog(2.4 * nf)? / (2.0 * nf).ln() + 1.1 / l + loglog(1.4 * nf)? / (l * l);
    Ok((value, value < 4.0 * eps2 / 5.0))
}

/// Both sides of n g'(n) / g(n)^2 < eps1 / (log n + loglog n - log 2 - eps),
/// with the left side in the closed form valid for the corollary's j.
pub fn eq2_sides(n: u64, p: &BoundParams) -> Result<(f64, f64)> {
    let nf = n as f64;
    let l = nf.ln();
    let base = l + loglog(nf)? - LN_2 - p.epsilon;
    let lhs = (LN_2 + p.epsilon) * (1.0 + l) / (l * base * base);
    Ok((lhs, p.epsilon1 / base))
}

pub fn eq2_check(n: u64, p: &BoundParams) -> Result<bool> {
    let (l, r) = eq2_sides(n, p)?;
    Ok(l < r)
}

/// A + f'(alpha - n) - log 2 against its explicit majorant.
pub fn eq3_sides(n: u64, p: &BoundParams) -> Result<(f64, f64)> {
    let nf = n as f64;
    let a = p.alpha(nf)?;
    let lhs = p.slope_difference(nf)? + bounds::gap_prime(a - nf)? - LN_2;
    let l = nf.ln();
    let rhs = ((2.4 * nf).ln() / l).ln()
        + loglog(2.4 * nf)? / (2.0 * nf).ln()
        + 1.1 / l
        + loglog(1.4 * nf)? / (l * l);
    Ok((lhs, rhs))
}

/// (A + f')/(-A + U'(alpha - n) - 2f') against
/// (log 2 + eps2)/(log n + loglog n - log 2 - eps2).
pub fn eq6_sides(n: u64, p: &BoundParams) -> Result<(f64, f64)> {
    let nf = n as f64;
    let (ratio, _) = eq7_parts(n, p)?;
    let rhs = (LN_2 + p.epsilon2) / (nf.ln() + loglog(nf)? - LN_2 - p.epsilon2);
    Ok((ratio, rhs))
}

fn eq7_parts(n: u64, p: &BoundParams) -> Result<(f64, f64)> {
    let nf = n as f64;
    let b = p.alpha(nf)? - nf;
    let a = p.slope_difference(nf)?;
    let fp = bounds::gap_prime(b)?;
    let ratio = (a + fp) / (-a + bounds::upper_prime(b)? - 2.0 * fp);
    let g = p.shape(nf)?;
    Ok((ratio, nf * p.shape_prime(nf)? / (g * g)))
}

/// (A + f')/(-A + U'(alpha - n) - 2f') + n g'/g^2 against 1/g(n).
pub fn eq7_sides(n: u64, p: &BoundParams) -> Result<(f64, f64)> {
    let (ratio, correction) = eq7_parts(n, p)?;
    Ok((ratio + correction, 1.0 / p.shape(n as f64)?))
}

/// Dense integers on `[lo, min(hi, 1e6)]`, then ten log-spaced points per
/// decade up to `hi`.
pub fn dense_then_log_samples(lo: u64, hi: u64) -> Vec<u64> {
    const DENSE_TOP: u64 = 1_000_000;
    let mut out: Vec<u64> = (lo..=hi.min(DENSE_TOP)).collect();
    let start = lo.max(DENSE_TOP + 1);
    if start <= hi {
        let (a, b) = ((start as f64).log10(), (hi as f64).log10());
        let steps = ((b - a) * 10.0).ceil().max(1.0) as u64;
        for i in 0..=steps {
            let x = 10f64.powf(a + (b - a) * i as f64 / steps as f64).round() as u64;
            out.push(x.clamp(start, hi));
        }
    }
    out.dedup();
    out
}

/// The sample set used for the corollary's post-688383 checks.
pub fn proof_samples() -> Vec<u64> {
    dense_then_log_samples(PROOF_START + 1, 1_000_000_000_000)
}

/// Evaluate `sides` at every sample and record `lhs < rhs`. Samples outside
/// the functions' domain are returned separately and do not count as checked.
pub fn check_samples<F>(
    name: &str,
    samples: &[u64],
    p: Option<&BoundParams>,
    tie_band: f64,
    sides: F,
) -> (InequalityReport, Vec<SampleError>)
where
    F: Fn(u64) -> Result<(f64, f64)> + Sync,
{
    let started = Instant::now();
    let errors = std::sync::Mutex::new(Vec::new());
    let tally = sweep_points(samples, |n, t: &mut Tally| match sides(n) {
        Ok((l, r)) => t.less(n, l, r, tie_band),
        Err(e) => errors.lock().unwrap().push(SampleError {
            n,
            message: e.to_string(),
        }),
    });
    let mut errors = errors.into_inner().unwrap();
    errors.sort_by_key(|e| e.n);
    let range = [
        samples.iter().copied().min().unwrap_or(0),
        samples.iter().copied().max().unwrap_or(0),
    ];
    let report = tally.into_report(name, range, tie_band, started, p.map(ParamsInfo::from));
    (report, errors)
}

#[derive(Clone, Debug)]
pub struct GNegative {
    /// G(n) < 0.
    pub g: InequalityReport,
    /// G'(n) < 0, by the closed-form derivative.
    pub g_prime: InequalityReport,
    pub errors: Vec<SampleError>,
}

/// G(n) < 0 and G'(n) < 0 at every sample; 688383 is always included.
pub fn check_g_negative(p: &BoundParams, samples: &[u64], tie_band: f64) -> GNegative {
    let mut pts = samples.to_vec();
    pts.push(PROOF_START);
    pts.sort_unstable();
    pts.dedup();
    let (g, mut errors) = check_samples("g-negative", &pts, Some(p), tie_band, |n| {
        Ok((p.separation_at_alpha(n as f64)?, 0.0))
    });
    let (g_prime, e2) = check_samples("g-prime-negative", &pts, Some(p), tie_band, |n| {
        Ok((p.separation_at_alpha_slope(n as f64)?, 0.0))
    });
    errors.extend(e2);
    errors.sort_by_key(|e| e.n);
    errors.dedup();
    GNegative { g, g_prime, errors }
}

/// First n0 in `[lo, hi]` from which 2n < alpha(n) < 2.4n holds for every
/// n in `[n0, hi]`, or `None` if it fails at `hi`.
pub fn alpha_ratio_onset(p: &BoundParams, lo: u64, hi: u64) -> Option<u64> {
    let holds = |n: u64| {
        let nf = n as f64;
        p.alpha(nf)
            .map(|a| 2.0 * nf < a && a < 2.4 * nf)
            .unwrap_or(false)
    };
    let mut n = hi;
    if !holds(n) {
        return None;
    }
    while n > lo && holds(n - 1) {
        n -= 1;
    }
    Some(n)
}
