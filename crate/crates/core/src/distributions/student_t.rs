use rand::Rng;
use rand_distr::{ChiSquared, StandardNormal};

use super::{check_finite, check_positive};
use crate::error::{Error, Result};
use crate::specfun::{inc_beta_split, lgamma};

/// Non-standardized Student's t with location `mu`, scale `sigma` and `nu`
/// degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentTParams {
    pub mu: f64,
    pub sigma: f64,
    pub nu: f64,
}

impl StudentTParams {
    pub fn new(mu: f64, sigma: f64, nu: f64) -> Result<Self> {
        let p = Self { mu, sigma, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("mu", self.mu)?;
        check_positive("sigma", self.sigma)?;
        check_positive("nu", self.nu)
    }

    pub(crate) fn prepare(&self) -> PreparedT {
        let nu = self.nu;
        let ln_norm = lgamma(0.5 * (nu + 1.0))
            - lgamma(0.5 * nu)
            - 0.5 * (std::f64::consts::PI * nu).ln()
            - self.sigma.ln();
        let twice = nu + 1.0;
        let half_steps = (twice.fract() == 0.0 && twice <= 400.0).then_some(twice as i32);
        PreparedT { p: *self, ln_norm, norm: ln_norm.exp(), exponent: 0.5 * twice, half_steps }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, chi: &ChiSquared<f64>, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let v: f64 = rng.sample(chi);
        self.mu + self.sigma * z * (self.nu / v).sqrt()
    }

    pub(crate) fn chi_squared(&self) -> Result<ChiSquared<f64>> {
        ChiSquared::new(self.nu).map_err(|e| Error::InvalidParameter(format!("nu: {e}")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PreparedT {
    pub p: StudentTParams,
    ln_norm: f64,
    norm: f64,
    exponent: f64,
    /// `nu + 1` when it is a small integer, so the kernel needs only `powi` and `sqrt`.
    half_steps: Option<i32>,
}

impl PreparedT {
    pub fn ln_pdf(&self, g: f64) -> f64 {
        let z = (g - self.p.mu) / self.p.sigma;
        self.ln_norm - self.exponent * (z * z / self.p.nu).ln_1p()
    }

    /// Density itself; cheaper than `ln_pdf` for integer `nu`.
    pub fn pdf(&self, g: f64) -> f64 {
        let z = (g - self.p.mu) / self.p.sigma;
        let u = 1.0 + z * z / self.p.nu;
        match self.half_steps {
            Some(h) => {
                let kernel = u.powi(-(h / 2));
                self.norm * if h % 2 == 1 { kernel / u.sqrt() } else { kernel }
            }
            None => (self.ln_norm - self.exponent * u.ln()).exp(),
        }
    }

    pub fn cdf(&self, g: f64) -> f64 {
        let z = (g - self.p.mu) / self.p.sigma;
        if z == 0.0 {
            return 0.5;
        }
        if z.is_infinite() {
            return if z > 0.0 { 1.0 } else { 0.0 };
        }
        let nu = self.p.nu;
        let z2 = z * z;
        // one-sided tail mass: 0.5 * I_{nu/(nu+z^2)}(nu/2, 1/2)
        let x = nu / (nu + z2);
        let y = z2 / (nu + z2);
        let tail = 0.5 * inc_beta_split(x, y, 0.5 * nu, 0.5).unwrap_or(f64::NAN);
        if z < 0.0 {
            tail
        } else {
            1.0 - tail
        }
    }

    /// Upper-tail mass `1 - cdf(g)`, evaluated without cancellation.
    pub fn sf(&self, g: f64) -> f64 {
        self.cdf(2.0 * self.p.mu - g)
    }
}
