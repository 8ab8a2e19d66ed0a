//! Maximum-likelihood estimation: multi-start Nelder–Mead on an
//! unconstrained reparameterization, followed by observed-information
//! standard errors in the original coordinates.

mod nelder_mead;
mod transform;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

pub use nelder_mead::{initial_step, nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use transform::{from_unconstrained, to_unconstrained};

use crate::distributions::{ModelParams, ModelSpec};
use crate::error::{Error, Result};
use crate::samples::GrowthSample;

/// Relative spread of the jittered starts.
const JITTER: f64 = 0.2;
/// Starting degrees of freedom for the Student's t family.
const START_NU: f64 = 5.0;
/// Starting shape for both sides of the asymmetric Subbotin family.
const START_SHAPE: f64 = 1.5;
/// Normal-consistency factor for the median absolute deviation.
const MAD_SCALE: f64 = 1.4826;
/// Objective values closer than this are treated as tied between starts.
const START_TIE: f64 = 1e-9;
/// Absolute floor on the finite-difference step.
const SE_STEP_FLOOR: f64 = 1e-6;
/// Cap on fresh-simplex restarts from a start's optimum.
const MAX_RESTARTS: usize = 10;
/// Tolerances of the screening pass that every start goes through.
const SCREEN_F_TOL: f64 = 1e-7;
const SCREEN_X_TOL: f64 = 1e-4;
/// Number of screened starts that are refined to full tolerance.
const POLISHED_STARTS: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub n_starts: usize,
    pub max_iters: usize,
    pub f_tol: f64,
    pub x_tol: f64,
    /// Relative central-difference step for the Hessian.
    pub se_step: f64,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { n_starts: 8, max_iters: 5000, f_tol: 1e-10, x_tol: 1e-8, se_step: 1e-4, seed: 0 }
    }
}

impl FitOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_starts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("n_starts and max_iters must be at least 1".into()));
        }
        for (name, v) in [("f_tol", self.f_tol), ("x_tol", self.x_tol), ("se_step", self.se_step)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    fn nm(&self) -> NelderMeadOptions {
        NelderMeadOptions { max_iters: self.max_iters, f_tol: self.f_tol, x_tol: self.x_tol }
    }
}

/// Outcome of the standard-error computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeStatus {
    Computed,
    /// The observed information was not positive definite.
    NotPositiveDefinite,
    /// The fit did not converge, so no standard errors were attempted.
    Skipped,
}

impl SeStatus {
    pub fn label(self) -> &'static str {
        match self {
            SeStatus::Computed => "computed",
            SeStatus::NotPositiveDefinite => "not_positive_definite",
            SeStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub spec: ModelSpec,
    pub params: ModelParams,
    /// One entry per free parameter, present only when `se_status` is `Computed`.
    pub std_errors: Option<Vec<f64>>,
    pub se_status: SeStatus,
    /// Maximized log-likelihood.
    pub log_lik: f64,
    pub n_obs: usize,
    pub converged: bool,
    pub n_starts_used: usize,
    pub best_start_index: usize,
}

impl FitResult {
    pub fn k(&self) -> usize {
        self.spec.n_free_params()
    }
}

/// `-sum ln f(g_i)`.
pub fn neg_log_likelihood(spec: &ModelSpec, params: &ModelParams, sample: &GrowthSample) -> Result<f64> {
    if &params.spec() != spec {
        return Err(Error::InvalidParameter(format!("parameters for {} given for spec {spec}", params.spec())));
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let density = params.prepare()?;
    let mut total = 0.0;
    for &g in sample.values() {
        total -= density.ln_pdf(g)?;
    }
    Ok(total)
}

/// Objective on the unconstrained space; anything that fails to evaluate is `+inf`.
fn objective(spec: &ModelSpec, sample: &GrowthSample, y: &[f64]) -> f64 {
    from_unconstrained(spec, y)
        .and_then(|p| neg_log_likelihood(spec, &p, sample))
        .unwrap_or(f64::INFINITY)
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

struct Moments {
    median: f64,
    scale: f64,
    sd: f64,
}

fn moments(sample: &GrowthSample) -> Moments {
    let v = sample.values();
    let n = v.len() as f64;
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let med = median(&sorted);
    let mut dev: Vec<f64> = v.iter().map(|g| (g - med).abs()).collect();
    dev.sort_by(f64::total_cmp);
    let mean = v.iter().sum::<f64>() / n;
    let sd = if v.len() > 1 { (v.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    let mad = MAD_SCALE * median(&dev);
    // heavy ties can zero the MAD of a sample that still has spread
    let scale = if mad > 0.0 { mad } else { sd };
    Moments { median: med, scale, sd }
}

fn moment_start(spec: &ModelSpec, m: &Moments) -> Result<ModelParams> {
    let v = match spec {
        ModelSpec::Normal => vec![m.median, m.scale],
        ModelSpec::StudentT => vec![m.median, m.scale, START_NU],
        ModelSpec::AdLn => vec![1.0 / m.sd, 1.0 / m.sd, m.median, m.scale],
        ModelSpec::ASub => vec![m.scale, m.scale, START_SHAPE, START_SHAPE, m.median],
        ModelSpec::TMix(dofs) => {
            let k = dofs.len();
            let mut v: Vec<f64> = (0..k).flat_map(|j| [m.median, m.scale * (k - j) as f64 / k as f64]).collect();
            v.extend(std::iter::repeat(1.0 / k as f64).take(k - 1));
            v
        }
    };
    ModelParams::from_vec(spec, &v)
}

/// Starting points on the unconstrained space. Start 0 is moment based;
/// the rest jitter it by about 20%, deterministically in `seed`.
pub fn default_starts(spec: &ModelSpec, sample: &GrowthSample, n_starts: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let v = sample.values();
    if v.iter().all(|&g| g == v[0]) {
        return Err(Error::DegenerateSample);
    }
    let m = moments(sample);
    let base = to_unconstrained(spec, &moment_start(spec, &m)?)?;
    let positive = spec.positive_mask();
    let n_weights = match spec {
        ModelSpec::TMix(d) => d.len() - 1,
        _ => 0,
    };
    let first_weight = base.len() - n_weights;
    let mut starts = vec![base.clone()];
    for i in 1..n_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let start = base
            .iter()
            .enumerate()
            .map(|(j, &y)| {
                let z: f64 = StandardNormal.sample(&mut rng);
                if positive[j] || j >= first_weight {
                    y + JITTER * z
                } else {
                    y + JITTER * m.scale * z
                }
            })
            .collect();
        starts.push(start);
    }
    Ok(starts)
}

struct StartOutcome {
    x: Vec<f64>,
    f: f64,
    converged: bool,
}

fn run_start(spec: &ModelSpec, sample: &GrowthSample, start: &[f64], opts: &FitOptions) -> StartOutcome {
    let nm = opts.nm();
    let mut r = nelder_mead(|y| objective(spec, sample, y), start, &nm);
    // a fresh simplex from the optimum guards against premature collapse
    for _ in 0..MAX_RESTARTS {
        if !r.f.is_finite() {
            break;
        }
        let again = nelder_mead(|y| objective(spec, sample, y), &r.x, &nm);
        let gain = r.f - again.f;
        let settled = gain <= opts.f_tol * r.f.abs().max(1.0);
        if again.f <= r.f {
            r = again;
        }
        if settled {
            break;
        }
    }
    StartOutcome { x: r.x, f: r.f, converged: r.converged }
}

/// Fits `spec` to `sample` by maximum likelihood.
pub fn fit_mle(spec: &ModelSpec, sample: &GrowthSample, opts: &FitOptions) -> Result<FitResult> {
    opts.validate()?;
    let k = spec.n_free_params();
    if sample.len() < k + 1 {
        return Err(Error::InsufficientData { needed: k + 1, got: sample.len() });
    }
    let starts = default_starts(spec, sample, opts.n_starts, opts.seed)?;

    // screen every start at loose tolerance, then refine the most promising
    let screen = NelderMeadOptions {
        max_iters: opts.max_iters,
        f_tol: opts.f_tol.max(SCREEN_F_TOL),
        x_tol: opts.x_tol.max(SCREEN_X_TOL),
    };
    let screened: Vec<NelderMeadResult> =
        starts.par_iter().map(|s| nelder_mead(|y| objective(spec, sample, y), s, &screen)).collect();
    let mut order: Vec<usize> = (0..screened.len()).filter(|&i| screened[i].f.is_finite()).collect();
    if order.is_empty() {
        return Err(Error::Evaluation(format!("{spec}: no start produced a finite likelihood")));
    }
    order.sort_by(|&a, &b| screened[a].f.total_cmp(&screened[b].f).then(a.cmp(&b)));
    order.truncate(POLISHED_STARTS);
    let polished: Vec<(usize, StartOutcome)> =
        order.par_iter().map(|&i| (i, run_start(spec, sample, &screened[i].x, opts))).collect();

    let f_min = polished.iter().map(|(_, o)| o.f).fold(f64::INFINITY, f64::min);
    let (best_start_index, best) = polished
        .iter()
        .filter(|(_, o)| o.f <= f_min + START_TIE)
        .min_by_key(|(i, _)| *i)
        .expect("at least one polished start");
    let best_start_index = *best_start_index;
    let params = from_unconstrained(spec, &best.x)?;

    let mut result = FitResult {
        spec: spec.clone(),
        params,
        std_errors: None,
        se_status: SeStatus::Skipped,
        log_lik: -best.f,
        n_obs: sample.len(),
        converged: best.converged,
        n_starts_used: starts.len(),
        best_start_index,
    };
    if result.converged {
        match standard_errors(&result, sample, opts)? {
            Some(se) => {
                result.std_errors = Some(se);
                result.se_status = SeStatus::Computed;
            }
            None => result.se_status = SeStatus::NotPositiveDefinite,
        }
    }
    Ok(result)
}

/// Observed-information standard errors at `result.params`, from a
/// central-difference Hessian of the negative log-likelihood in the
/// original coordinates. `None` when the information matrix is not
/// positive definite.
pub fn standard_errors(result: &FitResult, sample: &GrowthSample, opts: &FitOptions) -> Result<Option<Vec<f64>>> {
    let spec = &result.spec;
    let theta = result.params.to_vec();
    let k = theta.len();
    let f = |v: &[f64]| -> Option<f64> {
        let p = ModelParams::from_vec(spec, v).ok()?;
        neg_log_likelihood(spec, &p, sample).ok().filter(|x| x.is_finite())
    };
    let f0 = f(&theta).ok_or_else(|| Error::Evaluation("likelihood not finite at the optimum".into()))?;

    // shrink steps that would leave the parameter space
    let mut h: Vec<f64> = theta.iter().map(|t| (opts.se_step * t.abs()).max(SE_STEP_FLOOR)).collect();
    for i in 0..k {
        for _ in 0..40 {
            let mut ok = true;
            for s in [1.0, -1.0] {
                let mut v = theta.clone();
                v[i] += s * h[i];
                ok &= ModelParams::from_vec(spec, &v).is_ok();
            }
            if ok {
                break;
            }
            h[i] *= 0.5;
        }
    }

    let shifted = |moves: &[(usize, f64)]| -> Result<f64> {
        let mut v = theta.clone();
        for &(i, s) in moves {
            v[i] += s * h[i];
        }
        f(&v).ok_or_else(|| Error::Evaluation("likelihood not finite near the optimum".into()))
    };

    let mut hess = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        let fp = shifted(&[(i, 1.0)])?;
        let fm = shifted(&[(i, -1.0)])?;
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let fpp = shifted(&[(i, 1.0), (j, 1.0)])?;
            let fpm = shifted(&[(i, 1.0), (j, -1.0)])?;
            let fmp = shifted(&[(i, -1.0), (j, 1.0)])?;
            let fmm = shifted(&[(i, -1.0), (j, -1.0)])?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let hess = (&hess + hess.transpose()) * 0.5;
    let Some(chol) = hess.cholesky() else {
        return Ok(None);
    };
    let cov = chol.inverse();
    let se: Vec<f64> = (0..k).map(|i| cov[(i, i)]).map(f64::sqrt).collect();
    if se.iter().all(|s| s.is_finite() && *s >= 0.0) {
        Ok(Some(se))
    } else {
        Ok(None)
    }
}
