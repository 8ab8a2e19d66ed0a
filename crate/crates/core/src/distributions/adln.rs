//! Asymmetric double Laplace normal law: an asymmetric two-sided exponential
//! (rate `alpha` on the right, `beta` on the left) convolved with a normal.
//!
//! The density is the sum of two positive terms,
//!
//! ```text
//! K exp(-alpha (g - mu) + alpha^2 sigma^2 / 2) erfc(-(g - mu - alpha sigma^2) / (sqrt2 sigma))
//! K exp( beta  (g - mu) + beta^2  sigma^2 / 2) erfc( (g - mu + beta  sigma^2) / (sqrt2 sigma))
//! ```
//!
//! with `K = alpha beta / (2 (alpha + beta))`. The exponential factor and the
//! erfc factor of each term under/overflow separately for moderately large
//! rates, so each term is assembled as a log-magnitude with `ln_erfc` and the
//! two are combined by log-sum-exp.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{check_finite, check_positive};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, DEFAULT_ABS_TOL};
use crate::specfun::{ln_erfc, log_add_exp};

/// Distance (in units of sigma) beyond which the tails are closed analytically.
const TAIL_SIGMAS: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdLnParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl AdLnParams {
    pub fn new(alpha: f64, beta: f64, mu: f64, sigma: f64) -> Result<Self> {
        let p = Self { alpha, beta, mu, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("alpha", self.alpha)?;
        check_positive("beta", self.beta)?;
        check_finite("mu", self.mu)?;
        check_positive("sigma", self.sigma)
    }

    fn ln_k(&self) -> f64 {
        (self.alpha * self.beta / (2.0 * (self.alpha + self.beta))).ln()
    }

    /// Log-magnitudes of the right-rate and left-rate terms.
    pub(crate) fn ln_terms(&self, g: f64) -> (f64, f64) {
        let (a, b, s) = (self.alpha, self.beta, self.sigma);
        let d = g - self.mu;
        let root2s = std::f64::consts::SQRT_2 * s;
        let ln_k = self.ln_k();
        let upper = ln_k - a * d + 0.5 * a * a * s * s + ln_erfc(-(d - a * s * s) / root2s);
        let lower = ln_k + b * d + 0.5 * b * b * s * s + ln_erfc((d + b * s * s) / root2s);
        (upper, lower)
    }

    pub(crate) fn ln_pdf(&self, g: f64) -> Result<f64> {
        let (upper, lower) = self.ln_terms(g);
        let v = log_add_exp(upper, lower);
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::Evaluation(format!("adLn log-density is {v} at g = {g} for {self:?}")));
        }
        Ok(v)
    }

    fn lower_cut(&self) -> f64 {
        self.mu - TAIL_SIGMAS * self.sigma - self.beta * self.sigma * self.sigma
    }

    fn upper_cut(&self) -> f64 {
        self.mu + TAIL_SIGMAS * self.sigma + self.alpha * self.sigma * self.sigma
    }

    /// Mass below `g` for `g` at or below the lower cut: the left-rate term is
    /// a pure exponential there, so its integral is the term divided by `beta`.
    fn lower_tail(&self, g: f64) -> f64 {
        (self.ln_terms(g).1 - self.beta.ln()).exp()
    }

    fn upper_tail(&self, g: f64) -> f64 {
        (self.ln_terms(g).0 - self.alpha.ln()).exp()
    }

    fn pdf(&self, g: f64) -> f64 {
        let (u, l) = self.ln_terms(g);
        log_add_exp(u, l).exp()
    }

    pub(crate) fn cdf(&self, g: f64) -> f64 {
        let (lo, hi) = (self.lower_cut(), self.upper_cut());
        if g == f64::NEG_INFINITY {
            return 0.0;
        }
        if g == f64::INFINITY {
            return 1.0;
        }
        let f = |x: f64| self.pdf(x);
        let value = if g <= lo {
            self.lower_tail(g)
        } else if g >= hi {
            1.0 - self.upper_tail(g)
        } else if g <= self.mu {
            self.lower_tail(lo) + integrate(f, lo, g, DEFAULT_ABS_TOL)
        } else {
            1.0 - self.upper_tail(hi) - integrate(f, g, hi, DEFAULT_ABS_TOL)
        };
        value.clamp(0.0, 1.0)
    }

    /// Upper-tail mass `1 - cdf(g)`, evaluated without cancellation.
    pub(crate) fn sf(&self, g: f64) -> f64 {
        let (lo, hi) = (self.lower_cut(), self.upper_cut());
        if g == f64::NEG_INFINITY {
            return 1.0;
        }
        if g == f64::INFINITY {
            return 0.0;
        }
        let f = |x: f64| self.pdf(x);
        let value = if g >= hi {
            self.upper_tail(g)
        } else if g <= lo {
            1.0 - self.lower_tail(g)
        } else if g > self.mu {
            self.upper_tail(hi) + integrate(f, g, hi, DEFAULT_ABS_TOL)
        } else {
            1.0 - self.lower_tail(lo) - integrate(f, lo, g, DEFAULT_ABS_TOL)
        };
        value.clamp(0.0, 1.0)
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p_right = self.beta / (self.alpha + self.beta);
        let e: f64 = rng.sample(Exp1);
        let laplace = if rng.random::<f64>() < p_right { e / self.alpha } else { -e / self.beta };
        let z: f64 = rng.sample(StandardNormal);
        laplace + self.mu + self.sigma * z
    }
}
