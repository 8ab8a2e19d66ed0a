use rand::Rng;
use rand_distr::Gamma;

use super::{check_finite, check_positive};
use crate::error::{Error, Result};
use crate::specfun::{lgamma, reg_inc_gamma_lower, reg_inc_gamma_upper};

/// Asymmetric Subbotin law with per-side scale `a_*` and shape `b_*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ASubParams {
    pub a_l: f64,
    pub a_r: f64,
    pub b_l: f64,
    pub b_r: f64,
    pub mu: f64,
}

/// Unnormalized mass of one side: `a b^{1/b} Γ(1 + 1/b)`.
fn side_mass(a: f64, b: f64) -> f64 {
    (a.ln() + b.ln() / b + lgamma(1.0 + 1.0 / b)).exp()
}

impl ASubParams {
    pub fn new(a_l: f64, a_r: f64, b_l: f64, b_r: f64, mu: f64) -> Result<Self> {
        let p = Self { a_l, a_r, b_l, b_r, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("a_l", self.a_l)?;
        check_positive("a_r", self.a_r)?;
        check_positive("b_l", self.b_l)?;
        check_positive("b_r", self.b_r)?;
        check_finite("mu", self.mu)
    }

    /// Normalizer `d`, always recomputed from the current parameters.
    pub fn normalizer(&self) -> f64 {
        side_mass(self.a_l, self.b_l) + side_mass(self.a_r, self.b_r)
    }

    /// Probability mass at or below `mu`.
    pub fn left_share(&self) -> f64 {
        let l = side_mass(self.a_l, self.b_l);
        l / (l + side_mass(self.a_r, self.b_r))
    }

    pub(crate) fn prepare(&self) -> PreparedASub {
        PreparedASub { p: *self, ln_d: self.normalizer().ln() }
    }

    pub(crate) fn sampler(&self) -> Result<ASubSampler> {
        let gl = Gamma::new(1.0 / self.b_l, 1.0).map_err(|e| Error::InvalidParameter(format!("b_l: {e}")))?;
        let gr = Gamma::new(1.0 / self.b_r, 1.0).map_err(|e| Error::InvalidParameter(format!("b_r: {e}")))?;
        Ok(ASubSampler { p: *self, left: self.left_share(), gl, gr })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PreparedASub {
    pub p: ASubParams,
    ln_d: f64,
}

impl PreparedASub {
    pub fn ln_pdf(&self, g: f64) -> f64 {
        let p = &self.p;
        let (a, b) = if g <= p.mu { (p.a_l, p.b_l) } else { (p.a_r, p.b_r) };
        let r = (g - p.mu).abs() / a;
        -self.ln_d - r.powf(b) / b
    }

    pub fn cdf(&self, g: f64) -> f64 {
        let p = &self.p;
        let left = p.left_share();
        if g <= p.mu {
            let x = ((p.mu - g) / p.a_l).powf(p.b_l) / p.b_l;
            left * reg_inc_gamma_upper(1.0 / p.b_l, x).unwrap_or(f64::NAN)
        } else {
            let x = ((g - p.mu) / p.a_r).powf(p.b_r) / p.b_r;
            left + (1.0 - left) * reg_inc_gamma_lower(1.0 / p.b_r, x).unwrap_or(f64::NAN)
        }
    }

    /// Upper-tail mass `1 - cdf(g)`, evaluated without cancellation.
    pub fn sf(&self, g: f64) -> f64 {
        let p = &self.p;
        let left = p.left_share();
        if g <= p.mu {
            let x = ((p.mu - g) / p.a_l).powf(p.b_l) / p.b_l;
            1.0 - left + left * reg_inc_gamma_lower(1.0 / p.b_l, x).unwrap_or(f64::NAN)
        } else {
            let x = ((g - p.mu) / p.a_r).powf(p.b_r) / p.b_r;
            (1.0 - left) * reg_inc_gamma_upper(1.0 / p.b_r, x).unwrap_or(f64::NAN)
        }
    }
}

pub(crate) struct ASubSampler {
    p: ASubParams,
    left: f64,
    gl: Gamma<f64>,
    gr: Gamma<f64>,
}

impl ASubSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p = &self.p;
        if rng.random::<f64>() < self.left {
            let x: f64 = rng.sample(self.gl);
            p.mu - p.a_l * (p.b_l * x).powf(1.0 / p.b_l)
        } else {
            let x: f64 = rng.sample(self.gr);
            p.mu + p.a_r * (p.b_r * x).powf(1.0 / p.b_r)
        }
    }
}
