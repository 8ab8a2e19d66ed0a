use rand::Rng;
use rand_distr::ChiSquared;

use super::student_t::{PreparedT, StudentTParams};
use super::{check_finite, check_positive};
use crate::error::{Error, Result};

/// Slack allowed on the weight simplex before a weight vector is rejected.
const WEIGHT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMixComponent {
    pub mu: f64,
    pub sigma: f64,
    pub nu: f64,
}

/// Student-t mixture with `m` components and `m - 1` free weights; the last
/// component takes the remaining mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TMixParams {
    pub components: Vec<TMixComponent>,
    pub weights: Vec<f64>,
}

impl TMixParams {
    pub fn new(components: Vec<TMixComponent>, weights: Vec<f64>) -> Result<Self> {
        let p = Self { components, weights };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.components.len();
        if m < 2 {
            return Err(Error::InvalidParameter(format!("a mixture needs at least 2 components, got {m}")));
        }
        if self.weights.len() != m - 1 {
            return Err(Error::InvalidParameter(format!(
                "{m} components need {} weights, got {}",
                m - 1,
                self.weights.len()
            )));
        }
        for c in &self.components {
            check_finite("mu_j", c.mu)?;
            check_positive("sigma_j", c.sigma)?;
            check_positive("nu_j", c.nu)?;
        }
        if self.components.windows(2).any(|w| w[0].nu >= w[1].nu) {
            return Err(Error::InvalidParameter("component dofs must be strictly increasing".into()));
        }
        let mut total = 0.0;
        for (j, &p) in self.weights.iter().enumerate() {
            if !(p >= 0.0 && p <= 1.0) {
                return Err(Error::InvalidParameter(format!("weight p_{} = {p} outside [0, 1]", j + 1)));
            }
            total += p;
        }
        if total > 1.0 + WEIGHT_SLACK {
            return Err(Error::InvalidParameter(format!("weights sum to {total} > 1")));
        }
        Ok(())
    }

    /// All `m` weights, including the implied last one.
    pub fn full_weights(&self) -> Vec<f64> {
        let mut w = self.weights.clone();
        w.push((1.0 - self.weights.iter().sum::<f64>()).max(0.0));
        w
    }

    pub fn dofs(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.nu).collect()
    }

    pub(crate) fn student(c: &TMixComponent) -> StudentTParams {
        StudentTParams { mu: c.mu, sigma: c.sigma, nu: c.nu }
    }

    pub(crate) fn prepare(&self) -> PreparedTMix {
        let parts = self
            .components
            .iter()
            .zip(self.full_weights())
            .filter(|(_, w)| *w > 0.0)
            .map(|(c, w)| (w, w.ln(), Self::student(c).prepare()))
            .collect();
        PreparedTMix { parts }
    }

    pub(crate) fn sampler(&self) -> Result<TMixSampler> {
        let comps = self
            .components
            .iter()
            .map(|c| {
                let t = Self::student(c);
                t.chi_squared().map(|chi| (t, chi))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = 0.0;
        let cumulative = self
            .full_weights()
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(TMixSampler { comps, cumulative })
    }
}

#[derive(Debug, Clone)]
pub struct PreparedTMix {
    /// (weight, ln weight, component)
    parts: Vec<(f64, f64, PreparedT)>,
}

impl PreparedTMix {
    pub fn ln_pdf(&self, g: f64) -> f64 {
        let direct: f64 = self.parts.iter().map(|(w, _, t)| w * t.pdf(g)).sum();
        if direct > f64::MIN_POSITIVE {
            return direct.ln();
        }
        // far tails: fall back to log-sum-exp
        let max = self.parts.iter().map(|(_, lw, t)| lw + t.ln_pdf(g)).fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return max;
        }
        max + self.parts.iter().map(|(_, lw, t)| (lw + t.ln_pdf(g) - max).exp()).sum::<f64>().ln()
    }

    pub fn sf(&self, g: f64) -> f64 {
        self.parts.iter().map(|(w, _, t)| w * t.sf(g)).sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn cdf(&self, g: f64) -> f64 {
        self.parts.iter().map(|(w, _, t)| w * t.cdf(g)).sum::<f64>().clamp(0.0, 1.0)
    }
}

pub(crate) struct TMixSampler {
    comps: Vec<(StudentTParams, ChiSquared<f64>)>,
    cumulative: Vec<f64>,
}

impl TMixSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let j = self
            .cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.comps.len() - 1);
        let (t, chi) = &self.comps[j];
        t.sample(chi, rng)
    }
}
