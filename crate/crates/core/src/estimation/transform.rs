//! Bijection between a family's constrained parameter space and R^k:
//! positive parameters go through `ln`, mixture weights through the additive
//! log-ratio map against the last (implied) weight, locations pass through.

use crate::distributions::{ModelParams, ModelSpec};
use crate::error::{Error, Result};

pub fn to_unconstrained(spec: &ModelSpec, params: &ModelParams) -> Result<Vec<f64>> {
    if &params.spec() != spec {
        return Err(Error::InvalidParameter(format!("parameters for {} given for spec {spec}", params.spec())));
    }
    params.validate()?;
    let v = params.to_vec();
    let mask = spec.positive_mask();
    let mut out: Vec<f64> = v.iter().zip(&mask).map(|(&x, &pos)| if pos { x.ln() } else { x }).collect();
    if let ModelSpec::TMix(dofs) = spec {
        let m = dofs.len();
        let weights = &v[2 * m..];
        let last = 1.0 - weights.iter().sum::<f64>();
        for (slot, &p) in out[2 * m..].iter_mut().zip(weights) {
            *slot = (p / last).ln();
        }
    }
    if let Some(bad) = out.iter().position(|x| !x.is_finite()) {
        let name = &spec.param_names()[bad];
        return Err(Error::InvalidParameter(format!("{name} lies on the boundary of the parameter space")));
    }
    Ok(out)
}

pub fn from_unconstrained(spec: &ModelSpec, y: &[f64]) -> Result<ModelParams> {
    if y.len() != spec.n_free_params() {
        return Err(Error::InvalidParameter(format!(
            "{spec} takes {} coordinates, got {}",
            spec.n_free_params(),
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite unconstrained coordinate".into()));
    }
    let mask = spec.positive_mask();
    let mut v: Vec<f64> = y.iter().zip(&mask).map(|(&x, &pos)| if pos { x.exp() } else { x }).collect();
    if let ModelSpec::TMix(dofs) = spec {
        let m = dofs.len();
        let logits = &y[2 * m..];
        // softmax with the last log-ratio pinned at 0
        let max = logits.iter().copied().fold(0.0, f64::max);
        let denom = (-max).exp() + logits.iter().map(|l| (l - max).exp()).sum::<f64>();
        for (slot, l) in v[2 * m..].iter_mut().zip(logits) {
            *slot = (l - max).exp() / denom;
        }
    }
    ModelParams::from_vec(spec, &v)
}
