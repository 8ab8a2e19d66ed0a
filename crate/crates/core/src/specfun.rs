//! Scalar special functions used by the densities and CDFs.
//!
//! Everything here is pure `f64` code. The log-gamma function uses the
//! Stirling series with an upward shift; the error functions are expressed
//! through the regularized incomplete gamma function at `a = 1/2`, so that
//! `ln erfc` can be formed in log space for arbitrarily large arguments.

use crate::error::{Error, Result};

const MAX_ITER: usize = 300;
const EPS: f64 = 1e-15;
const TINY: f64 = 1e-300;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// Stirling series is used from this point on; smaller arguments are shifted up.
const STIRLING_CUTOFF: f64 = 15.0;

/// Below this value of x^2 the error functions use the incomplete-gamma
/// series; above it, the continued fraction (which converges slowly near 1).
const ERF_SERIES_LIMIT: f64 = 4.5;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} is not a positive finite number")));
    }
    Ok(lgamma(x))
}

/// Unchecked `ln Γ(x)`; the caller guarantees `x > 0`.
pub(crate) fn lgamma(x: f64) -> f64 {
    if x >= STIRLING_CUTOFF {
        return stirling(x);
    }
    // ln Γ(x) = ln Γ(x + k) - ln(x (x+1) ... (x+k-1))
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_CUTOFF {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

fn stirling(x: f64) -> f64 {
    // Bernoulli-number coefficients B_{2k} / (2k (2k-1)).
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in C.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series * inv
}

/// `erfc(x) < f64::EPSILON / 2` from here on.
const ERF_SATURATES: f64 = 6.0;
/// `erfc(x)` is below the smallest subnormal from here on.
const ERFC_UNDERFLOWS: f64 = 27.3;

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    if x >= ERF_SATURATES {
        return 1.0;
    }
    let x2 = x * x;
    if x2 < ERF_SERIES_LIMIT {
        gamma_p_series(0.5, x2)
    } else {
        1.0 - gamma_q_cf_ln(0.5, x2).exp()
    }
}

/// Complementary error function, `1 - erf(x)`, without cancellation for large `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 1.0 + erf(-x);
    }
    if x >= ERFC_UNDERFLOWS {
        return 0.0;
    }
    let x2 = x * x;
    if x2 < ERF_SERIES_LIMIT {
        1.0 - gamma_p_series(0.5, x2)
    } else {
        gamma_q_cf_ln(0.5, x2).exp()
    }
}

/// `ln erfc(x)`, evaluated in log space so it stays finite where `erfc`
/// underflows (x beyond ~26.5).
pub fn ln_erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let x2 = x * x;
    if x2 == f64::INFINITY && x > 0.0 {
        return f64::NEG_INFINITY;
    }
    if x < 0.0 || x2 < ERF_SERIES_LIMIT {
        erfc(x).ln()
    } else {
        gamma_q_cf_ln(0.5, x2)
    }
}

/// Regularized lower incomplete gamma function `P(a, x)`.
pub fn reg_inc_gamma_lower(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("reg_inc_gamma_lower", format!("a = {a} must be positive")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("reg_inc_gamma_lower", format!("x = {x} must be nonnegative")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        checked_series(a, x)
    } else {
        checked_cf(a, x).map(|ln_q| 1.0 - ln_q.exp())
    }
}

/// Regularized upper incomplete gamma function `Q(a, x) = 1 - P(a, x)`.
pub fn reg_inc_gamma_upper(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !(x >= 0.0) {
        return Err(Error::domain("reg_inc_gamma_upper", format!("a = {a}, x = {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        checked_series(a, x).map(|p| 1.0 - p)
    } else {
        checked_cf(a, x).map(f64::exp)
    }
}

fn checked_series(a: f64, x: f64) -> Result<f64> {
    let (value, converged) = gamma_p_series_impl(a, x);
    if converged {
        Ok(value)
    } else {
        Err(Error::NoConvergence { func: "reg_inc_gamma_lower", iterations: MAX_ITER })
    }
}

fn checked_cf(a: f64, x: f64) -> Result<f64> {
    let (value, converged) = gamma_q_cf_ln_impl(a, x);
    if converged {
        Ok(value)
    } else {
        Err(Error::NoConvergence { func: "reg_inc_gamma_upper", iterations: MAX_ITER })
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    gamma_p_series_impl(a, x).0
}

fn gamma_q_cf_ln(a: f64, x: f64) -> f64 {
    gamma_q_cf_ln_impl(a, x).0
}

fn gamma_p_series_impl(a: f64, x: f64) -> (f64, bool) {
    let mut ap = a;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            converged = true;
            break;
        }
    }
    let ln_prefix = -x + a * x.ln() - lgamma(a + 1.0);
    (sum * ln_prefix.exp(), converged)
}

/// `ln Q(a, x)` by the modified Lentz continued fraction; valid for `x > a + 1`
/// (and usable somewhat below it).
fn gamma_q_cf_ln_impl(a: f64, x: f64) -> (f64, bool) {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    let mut converged = false;
    for i in 1..=MAX_ITER {
        let i = i as f64;
        let an = -i * (i - a);
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
        if (delta - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    let ln_gamma_a = if a == 0.5 { LN_SQRT_PI } else { lgamma(a) };
    (-x + a * x.ln() - ln_gamma_a + h.ln(), converged)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("reg_inc_beta", format!("a = {a}, b = {b} must be positive")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("reg_inc_beta", format!("x = {x} outside [0, 1]")));
    }
    inc_beta_split(x, 1.0 - x, a, b)
}

/// `I_x(a, b)` given both `x` and `y = 1 - x`, so callers that know `y`
/// more accurately than `1 - x` (Student's t near the center) keep it.
pub(crate) fn inc_beta_split(x: f64, y: f64, a: f64, b: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if y <= 0.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let cf = beta_cf(x, a, b)?;
        Ok(ln_front.exp() * cf / a)
    } else {
        let cf = beta_cf(y, b, a)?;
        Ok(1.0 - ln_front.exp() * cf / b)
    }
}

pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    lgamma(a) + lgamma(b) - lgamma(a + b)
}

fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence { func: "reg_inc_beta", iterations: MAX_ITER })
}

/// `ln(e^a + e^b)` without overflow.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
