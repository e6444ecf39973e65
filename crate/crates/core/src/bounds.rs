//! Explicit bounds for the k-th prime and the functions built from them.
//!
//! All logarithms are natural; `loglog(x)` is the iterated `log(log(x))`.
//! Every function checks its domain and returns [`Error::Domain`] rather than
//! propagating NaN.
//!
//! | symbol | function |
//! |--------|----------|
//! | L(k), U(k) | [`lower`], [`upper`] |
//! | f(x) = U - L | [`gap`] |
//! | F(x, n) = U(x) - 2L(x - n) | [`separation`] |
//! | g(n), alpha(n) | [`BoundParams::shape`], [`BoundParams::alpha`] |
//! | G(n) = F(alpha, n) | [`BoundParams::separation_at_alpha`] |
//! | A = U'(alpha) - U'(alpha - n) | [`BoundParams::slope_difference`] |
//! | G'(n) | [`BoundParams::separation_at_alpha_slope`] |

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::jexpr::{self, ExprNode};

fn require_gt_one(x: f64, what: &str) -> Result<()> {
    if x > 1.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs x > 1, got {x}")))
    }
}

/// log(log(x)) for x > 1.
pub fn loglog(x: f64) -> Result<f64> {
    require_gt_one(x, "loglog")?;
    Ok(x.ln().ln())
}

fn dusart(k: f64, c: f64, what: &str) -> Result<f64> {
    require_gt_one(k, what)?;
    let l = k.ln();
    let ll = l.ln();
    Ok(k * (l + ll - 1.0 + (ll - c) / l))
}

/// Dusart lower bound L(k) = k(log k + loglog k - 1 + (loglog k - 2.1)/log k).
pub fn lower(k: f64) -> Result<f64> {
    dusart(k, 2.1, "L")
}

/// Dusart upper bound U(k), constant 2 in place of 2.1.
pub fn upper(k: f64) -> Result<f64> {
    dusart(k, 2.0, "U")
}

/// f(x) = 0.1x / log x, so that U = L + f.
pub fn gap(x: f64) -> Result<f64> {
    require_gt_one(x, "f")?;
    Ok(0.1 * x / x.ln())
}

pub fn gap_prime(x: f64) -> Result<f64> {
    require_gt_one(x, "f'")?;
    let l = x.ln();
    Ok(0.1 * (l - 1.0) / (l * l))
}

/// U'(x).
pub fn upper_prime(x: f64) -> Result<f64> {
    require_gt_one(x, "U'")?;
    let l = x.ln();
    let ll = l.ln();
    let l2 = l * l;
    Ok(l + ll - 1.0 / l + 3.0 / l2 - ll / l2 + ll / l)
}

/// L'(x).
pub fn lower_prime(x: f64) -> Result<f64> {
    require_gt_one(x, "L'")?;
    let l = x.ln();
    let ll = l.ln();
    let l2 = l * l;
    Ok(l + ll + ll / l - ll / l2 - 1.1 / l + 3.1 / l2)
}

/// F(x, n) = U(x) - 2L(x - n).
pub fn separation(x: f64, n: f64) -> Result<f64> {
    Ok(upper(x)? - 2.0 * lower(x - n)?)
}

/// How j(n) is given.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    /// j(n) = loglog n - log 2 - 0.5, with eps = 0.5 = 0.1 + 0.4.
    Corollary,
    /// A user expression in `n`; derivatives are estimated numerically.
    Custom { source: String, expr: ExprNode },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundParams {
    pub epsilon: f64,
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub j: ShapeSpec,
}

impl BoundParams {
    pub fn corollary() -> Self {
        Self {
            epsilon: 0.5,
            epsilon1: 0.1,
            epsilon2: 0.4,
            j: ShapeSpec::Corollary,
        }
    }

    /// Custom j(n) from an expression. The split `epsilon1 + epsilon2` only
    /// matters for the inequality-chain checks.
    pub fn custom(epsilon: f64, epsilon1: f64, epsilon2: f64, j_source: &str) -> Result<Self> {
        let expr = jexpr::parse(j_source)?;
        let p = Self {
            epsilon,
            epsilon1,
            epsilon2,
            j: ShapeSpec::Custom {
                source: j_source.to_string(),
                expr,
            },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epsilon", self.epsilon),
            ("epsilon1", self.epsilon1),
            ("epsilon2", self.epsilon2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::ParameterViolation(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if (self.epsilon1 + self.epsilon2 - self.epsilon).abs() > 1e-12 {
            return Err(Error::ParameterViolation(format!(
                "epsilon1 + epsilon2 = {} but epsilon = {}",
                self.epsilon1 + self.epsilon2,
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn is_corollary(&self) -> bool {
        matches!(self.j, ShapeSpec::Corollary)
    }

    /// Text form of j(n) for reports.
    pub fn j_label(&self) -> String {
        match &self.j {
            ShapeSpec::Corollary => "log(log(n)) - log(2) - 0.5".to_string(),
            ShapeSpec::Custom { source, .. } => source.clone(),
        }
    }

    /// j(n), without the positivity requirement.
    pub fn j_value(&self, n: f64) -> Result<f64> {
        match &self.j {
            ShapeSpec::Corollary => Ok(loglog(n)? - LN_2 - 0.5),
            ShapeSpec::Custom { expr, .. } => Ok(expr.eval(n)?),
        }
    }

    pub fn j_prime(&self, n: f64) -> Result<f64> {
        match &self.j {
            ShapeSpec::Corollary => {
                require_gt_one(n, "j'")?;
                Ok(1.0 / (n * n.ln()))
            }
            ShapeSpec::Custom { expr, .. } => Ok(expr.derivative_est(n)?),
        }
    }

    fn scale(&self) -> f64 {
        LN_2 + self.epsilon
    }

    /// g(n) = (log n + j(n)) / (log 2 + eps). Requires j(n) > 0.
    pub fn shape(&self, n: f64) -> Result<f64> {
        if !(n >= 2.0) {
            return Err(Error::Domain(format!("g needs n >= 2, got {n}")));
        }
        let j = self.j_value(n)?;
        if !(j > 0.0) {
            return Err(Error::ParameterViolation(format!(
                "j({n}) = {j} is not positive"
            )));
        }
        Ok((n.ln() + j) / self.scale())
    }

    /// g'(n) = (1/n + j'(n)) / (log 2 + eps).
    pub fn shape_prime(&self, n: f64) -> Result<f64> {
        if !(n >= 2.0) {
            return Err(Error::Domain(format!("g' needs n >= 2, got {n}")));
        }
        Ok((1.0 / n + self.j_prime(n)?) / self.scale())
    }

    /// alpha(n) = 2n(1 + 1/g(n)). Requires g(n) >= 1.
    pub fn alpha(&self, n: f64) -> Result<f64> {
        let g = self.shape(n)?;
        if g < 1.0 {
            return Err(Error::ParameterViolation(format!("g({n}) = {g} < 1")));
        }
        Ok(2.0 * n * (1.0 + 1.0 / g))
    }

    fn alpha_minus_n(&self, n: f64) -> Result<(f64, f64)> {
        let a = self.alpha(n)?;
        if !(a - n > 1.0) {
            return Err(Error::Domain(format!(
                "alpha - n = {} must exceed 1 at n = {n}",
                a - n
            )));
        }
        Ok((a, a - n))
    }

    /// G(n) = F(alpha(n), n).
    pub fn separation_at_alpha(&self, n: f64) -> Result<f64> {
        let (a, _) = self.alpha_minus_n(n)?;
        separation(a, n)
    }

    /// A(n) = U'(alpha) - U'(alpha - n).
    pub fn slope_difference(&self, n: f64) -> Result<f64> {
        let (a, b) = self.alpha_minus_n(n)?;
        Ok(upper_prime(a)? - upper_prime(b)?)
    }

    /// (n/g)' = 1/g - n g'/g^2.
    pub fn n_over_shape_prime(&self, n: f64) -> Result<f64> {
        let g = self.shape(n)?;
        Ok(1.0 / g - n * self.shape_prime(n)? / (g * g))
    }

    /// G'(n) = 2[A + f'(alpha - n) + (n/g)'(A - U'(alpha - n) + 2f'(alpha - n))].
    pub fn separation_at_alpha_slope(&self, n: f64) -> Result<f64> {
        let (a, b) = self.alpha_minus_n(n)?;
        let slope = upper_prime(a)? - upper_prime(b)?;
        let fp = gap_prime(b)?;
        let q = self.n_over_shape_prime(n)?;
        Ok(2.0 * (slope + fp + q * (slope - upper_prime(b)? + 2.0 * fp)))
    }
}
