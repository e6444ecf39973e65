use std::time::Instant;

use crate::bounds::{self, BoundParams};
use crate::error::Result;

use super::report::{sweep_points, InequalityReport, ParamsInfo, Tally};

pub const DEFAULT_REL_TOL: f64 = 1e-5;

/// Central difference with step `x * 1e-5`.
pub fn central_difference(f: impl Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
    let h = x * 1e-5;
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

fn relative_error(formula: f64, numeric: f64) -> f64 {
    if numeric == 0.0 {
        formula.abs()
    } else {
        ((formula - numeric) / numeric).abs()
    }
}

/// Compare U', L', f' and the closed-form G' against central differences of
/// U, L, f and G. Each point adds four checks of `relative error < rel_tol`.
/// The tolerance is itself the criterion, so no tie band applies to it.
pub fn derivative_consistency(
    p: &BoundParams,
    points: &[u64],
    rel_tol: f64,
    tie_band: f64,
) -> InequalityReport {
    let started = Instant::now();
    let tally = sweep_points(points, |n, t: &mut Tally| {
        let x = n as f64;
        let pairs: [(Result<f64>, Result<f64>); 4] = [
            (bounds::upper_prime(x), central_difference(bounds::upper, x)),
            (bounds::lower_prime(x), central_difference(bounds::lower, x)),
            (bounds::gap_prime(x), central_difference(bounds::gap, x)),
            (
                p.separation_at_alpha_slope(x),
                central_difference(|m| p.separation_at_alpha(m), x),
            ),
        ];
        for (formula, numeric) in pairs {
            match (formula, numeric) {
                (Ok(a), Ok(b)) => t.less(n, relative_error(a, b), rel_tol, 0.0),
                _ => t.fail(n, f64::NAN, rel_tol),
            }
        }
    });
    let range = [
        points.iter().copied().min().unwrap_or(0),
        points.iter().copied().max().unwrap_or(0),
    ];
    tally.into_report(
        "derivatives",
        range,
        tie_band,
        started,
        Some(ParamsInfo::from(p)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::report::DEFAULT_TIE_BAND;

    #[test]
    fn default_points_pass() {
        let p = BoundParams::corollary();
        let r = derivative_consistency(&p, &[1_000, 100_000, 100_000_000], 1e-5, DEFAULT_TIE_BAND);
        assert_eq!(r.checked, 12);
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn truncation_floor_shows_at_tight_tolerance() {
        let p = BoundParams::corollary();
        let r = derivative_consistency(&p, &[1_000, 100_000, 100_000_000], 1e-12, DEFAULT_TIE_BAND);
        assert!(!r.ok());
    }

    #[test]
    fn no_points() {
        let r = derivative_consistency(&BoundParams::corollary(), &[], 1e-5, DEFAULT_TIE_BAND);
        assert_eq!((r.checked, r.passed), (0, 0));
        assert!(r.ok());
    }

    #[test]
    fn out_of_domain_point_fails() {
        // G is undefined at n = 10 under the corollary's j.
        let r = derivative_consistency(&BoundParams::corollary(), &[10], 1e-5, DEFAULT_TIE_BAND);
        assert_eq!(r.failures.len(), 1);
    }
}
