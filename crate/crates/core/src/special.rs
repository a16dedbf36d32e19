//! Special functions: log-gamma, upper incomplete gamma and a few log-space
//! helpers.

use crate::error::{Error, Result};

const CF_EPS: f64 = 1e-15;
const MAX_ITER: usize = 100_000;
const TINY: f64 = 1e-300;

/// `ln Γ(s)` for `s > 0`.
#[inline]
pub fn ln_gamma(s: f64) -> f64 {
    statrs::function::gamma::ln_gamma(s)
}

/// `ln(e^a + e^b)` without overflow.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}`; `-inf` for an empty input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `ln(1 - e^{x})` for `x <= 0`.
#[inline]
pub fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

fn check_domain(s: f64, x: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("incomplete gamma needs s > 0, got {s}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("incomplete gamma needs x >= 0, got {x}")));
    }
    Ok(())
}

/// ln of the series Σ_{n≥0} xⁿ / (s(s+1)…(s+n)), so that
/// `γ(s,x) = e^{-x} x^s · series`.
fn ln_lower_series(s: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut ap = s;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(sum.ln());
        }
    }
    Err(Error::Quadrature { requested: f64::EPSILON, achieved: (term / sum).abs() })
}

/// ln of the continued fraction `h` with `Γ(s,x) = e^{-x} x^s · h`
/// (modified Lentz).
fn ln_upper_fraction(s: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = if b.abs() < TINY { 1.0 / TINY } else { 1.0 / b };
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            return Ok(h.ln());
        }
    }
    Err(Error::Quadrature { requested: CF_EPS, achieved: f64::NAN })
}

/// `ln Q(s, x)` where `Q = Γ(s,x)/Γ(s)` is the regularized upper incomplete
/// gamma function. Stays finite where `Q` itself underflows.
pub fn ln_regularized_upper_gamma(s: f64, x: f64) -> Result<f64> {
    check_domain(s, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_pre = -x + s * x.ln();
    if x < s + 1.0 {
        let ln_p = ln_pre + ln_lower_series(s, x)? - ln_gamma(s);
        Ok(ln_one_minus_exp(ln_p.min(0.0)))
    } else {
        Ok(ln_pre + ln_upper_fraction(s, x)? - ln_gamma(s))
    }
}

/// `ln P(s, x)` for the regularized lower incomplete gamma function.
pub fn ln_regularized_lower_gamma(s: f64, x: f64) -> Result<f64> {
    check_domain(s, x)?;
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let ln_pre = -x + s * x.ln();
    if x < s + 1.0 {
        Ok((ln_pre + ln_lower_series(s, x)? - ln_gamma(s)).min(0.0))
    } else {
        let ln_q = ln_pre + ln_upper_fraction(s, x)? - ln_gamma(s);
        Ok(ln_one_minus_exp(ln_q.min(0.0)))
    }
}

/// Regularized upper incomplete gamma `Q(s, x) = Γ(s,x)/Γ(s)`.
pub fn regularized_upper_gamma(s: f64, x: f64) -> Result<f64> {
    ln_regularized_upper_gamma(s, x).map(f64::exp)
}

/// `ln Γ(s, x)`.
pub fn ln_upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    check_domain(s, x)?;
    if x == 0.0 {
        return Ok(ln_gamma(s));
    }
    if x < s + 1.0 {
        Ok(ln_regularized_upper_gamma(s, x)? + ln_gamma(s))
    } else {
        Ok(-x + s * x.ln() + ln_upper_fraction(s, x)?)
    }
}

/// Upper incomplete gamma function `Γ(s, x) = ∫_x^∞ u^{s-1} e^{-u} du`.
///
/// Series for `x < s + 1`, Lentz continued fraction otherwise.
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    ln_upper_incomplete_gamma(s, x).map(f64::exp)
}
