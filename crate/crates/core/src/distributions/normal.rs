use rand::Rng;
use rand_distr::StandardNormal;

use super::check_positive;
use crate::error::Result;
use crate::specfun::erfc;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalParams {
    pub mu: f64,
    pub sigma: f64,
}

impl NormalParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        let p = Self { mu, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        super::check_finite("mu", self.mu)?;
        check_positive("sigma", self.sigma)
    }

    pub(crate) fn ln_pdf(&self, g: f64) -> f64 {
        let z = (g - self.mu) / self.sigma;
        -0.5 * z * z - self.sigma.ln() - LN_SQRT_2PI
    }

    pub(crate) fn cdf(&self, g: f64) -> f64 {
        0.5 * erfc(-(g - self.mu) / (self.sigma * std::f64::consts::SQRT_2))
    }

    pub(crate) fn sf(&self, g: f64) -> f64 {
        0.5 * erfc((g - self.mu) / (self.sigma * std::f64::consts::SQRT_2))
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mu + self.sigma * z
    }
}
