//! The model families: normal, non-standardized Student's t, asymmetric
//! double Laplace normal (adLn), asymmetric Subbotin (aSub) and Student-t
//! mixtures with degrees of freedom pinned in advance.
//!
//! [`ModelSpec`] names a family (and, for mixtures, the pinned dofs);
//! [`ModelParams`] carries a concrete parameter set. Parameter sets are
//! validated strictly: nothing is clamped into range.

mod adln;
mod asub;
mod normal;
mod student_t;
mod tmix;

use std::fmt;

use rand::Rng;

pub use adln::AdLnParams;
pub use asub::ASubParams;
pub use normal::NormalParams;
pub use student_t::StudentTParams;
pub use tmix::{TMixComponent, TMixParams};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, DEFAULT_ABS_TOL};
use crate::samples::GrowthSample;

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be positive and finite")))
    }
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must be finite")))
    }
}

/// A model family. Mixtures carry their pinned degrees of freedom, strictly
/// increasing.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Normal,
    StudentT,
    AdLn,
    ASub,
    TMix(Vec<f64>),
}

impl ModelSpec {
    pub fn tmix(dofs: Vec<f64>) -> Result<Self> {
        if dofs.len() < 2 {
            return Err(Error::InvalidParameter("a mixture needs at least two dofs".into()));
        }
        for &nu in &dofs {
            check_positive("nu", nu)?;
        }
        if dofs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("mixture dofs must be strictly increasing".into()));
        }
        Ok(ModelSpec::TMix(dofs))
    }

    /// Two components with dofs 4 and 12.
    pub fn two_st12() -> Self {
        ModelSpec::TMix(vec![4.0, 12.0])
    }

    /// Two components with dofs 4 and 39.
    pub fn two_st39() -> Self {
        ModelSpec::TMix(vec![4.0, 39.0])
    }

    /// Three components with dofs 4, 12 and 39.
    pub fn three_st() -> Self {
        ModelSpec::TMix(vec![4.0, 12.0, 39.0])
    }

    /// Parses a CLI label: `normal`, `student_t`, `adln`, `asub`, `2st12`,
    /// `2st39`, `3st`, or `tmix:4,7,20` for custom pinned dofs.
    pub fn from_label(label: &str) -> Result<Self> {
        let l = label.trim().to_ascii_lowercase();
        match l.as_str() {
            "normal" => Ok(ModelSpec::Normal),
            "student_t" | "studentt" | "t" => Ok(ModelSpec::StudentT),
            "adln" => Ok(ModelSpec::AdLn),
            "asub" => Ok(ModelSpec::ASub),
            "2st12" => Ok(Self::two_st12()),
            "2st39" => Ok(Self::two_st39()),
            "3st" => Ok(Self::three_st()),
            other => match other.strip_prefix("tmix:") {
                Some(list) => {
                    let dofs = list
                        .split(',')
                        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad dof `{s}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    Self::tmix(dofs)
                }
                None => Err(Error::Parse(format!("unknown model family `{label}`"))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModelSpec::Normal => "normal".into(),
            ModelSpec::StudentT => "student_t".into(),
            ModelSpec::AdLn => "adln".into(),
            ModelSpec::ASub => "asub".into(),
            ModelSpec::TMix(d) if d == &[4.0, 12.0] => "2st12".into(),
            ModelSpec::TMix(d) if d == &[4.0, 39.0] => "2st39".into(),
            ModelSpec::TMix(d) if d == &[4.0, 12.0, 39.0] => "3st".into(),
            ModelSpec::TMix(d) => {
                let list: Vec<String> = d.iter().map(|v| v.to_string()).collect();
                format!("tmix:{}", list.join(","))
            }
        }
    }

    /// Number of estimated parameters `k`.
    pub fn n_free_params(&self) -> usize {
        match self {
            ModelSpec::Normal => 2,
            ModelSpec::StudentT => 3,
            ModelSpec::AdLn => 4,
            ModelSpec::ASub => 5,
            ModelSpec::TMix(d) => 3 * d.len() - 1,
        }
    }

    /// Names of the free parameters, in the order used by parameter vectors.
    pub fn param_names(&self) -> Vec<String> {
        let fixed = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
        match self {
            ModelSpec::Normal => fixed(&["mu", "sigma"]),
            ModelSpec::StudentT => fixed(&["mu", "sigma", "nu"]),
            ModelSpec::AdLn => fixed(&["alpha", "beta", "mu", "sigma"]),
            ModelSpec::ASub => fixed(&["a_l", "a_r", "b_l", "b_r", "mu"]),
            ModelSpec::TMix(d) => {
                let m = d.len();
                let mut names = Vec::with_capacity(3 * m - 1);
                for j in 1..=m {
                    names.push(format!("mu_{j}"));
                    names.push(format!("sigma_{j}"));
                }
                names.extend((1..m).map(|j| format!("p_{j}")));
                names
            }
        }
    }

    /// Which free parameters are strictly positive (scales, rates, shapes).
    pub(crate) fn positive_mask(&self) -> Vec<bool> {
        match self {
            ModelSpec::Normal => vec![false, true],
            ModelSpec::StudentT => vec![false, true, true],
            ModelSpec::AdLn => vec![true, true, false, true],
            ModelSpec::ASub => vec![true, true, true, true, false],
            ModelSpec::TMix(d) => {
                let mut mask: Vec<bool> = (0..d.len()).flat_map(|_| [false, true]).collect();
                mask.extend(std::iter::repeat(false).take(d.len() - 1));
                mask
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Number of estimated parameters for a family.
pub fn n_free_params(spec: &ModelSpec) -> usize {
    spec.n_free_params()
}

/// A concrete parameter set for one family.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Normal(NormalParams),
    StudentT(StudentTParams),
    AdLn(AdLnParams),
    ASub(ASubParams),
    TMix(TMixParams),
}

impl ModelParams {
    pub fn spec(&self) -> ModelSpec {
        match self {
            ModelParams::Normal(_) => ModelSpec::Normal,
            ModelParams::StudentT(_) => ModelSpec::StudentT,
            ModelParams::AdLn(_) => ModelSpec::AdLn,
            ModelParams::ASub(_) => ModelSpec::ASub,
            ModelParams::TMix(p) => ModelSpec::TMix(p.dofs()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Normal(p) => p.validate(),
            ModelParams::StudentT(p) => p.validate(),
            ModelParams::AdLn(p) => p.validate(),
            ModelParams::ASub(p) => p.validate(),
            ModelParams::TMix(p) => p.validate(),
        }
    }

    /// Validates once and returns an evaluator with the constants folded in.
    pub fn prepare(&self) -> Result<Density> {
        self.validate()?;
        Ok(match self {
            ModelParams::Normal(p) => Density::Normal(*p),
            ModelParams::StudentT(p) => Density::StudentT(p.prepare()),
            ModelParams::AdLn(p) => Density::AdLn(*p),
            ModelParams::ASub(p) => Density::ASub(p.prepare()),
            ModelParams::TMix(p) => Density::TMix(p.prepare()),
        })
    }

    pub fn log_pdf(&self, g: f64) -> Result<f64> {
        self.prepare()?.ln_pdf(g)
    }

    pub fn cdf(&self, g: f64) -> Result<f64> {
        Ok(self.prepare()?.cdf(g))
    }

    /// Upper-tail mass `1 - cdf(g)`.
    pub fn sf(&self, g: f64) -> Result<f64> {
        Ok(self.prepare()?.sf(g))
    }

    /// `n` i.i.d. draws.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<GrowthSample> {
        if n == 0 {
            return Err(Error::InvalidParameter("draw count must be at least 1".into()));
        }
        self.validate()?;
        let values: Vec<f64> = match self {
            ModelParams::Normal(p) => (0..n).map(|_| p.sample(rng)).collect(),
            ModelParams::StudentT(p) => {
                let chi = p.chi_squared()?;
                (0..n).map(|_| p.sample(&chi, rng)).collect()
            }
            ModelParams::AdLn(p) => (0..n).map(|_| p.sample(rng)).collect(),
            ModelParams::ASub(p) => {
                let s = p.sampler()?;
                (0..n).map(|_| s.sample(rng)).collect()
            }
            ModelParams::TMix(p) => {
                let s = p.sampler()?;
                (0..n).map(|_| s.sample(rng)).collect()
            }
        };
        GrowthSample::new(values, format!("simulated {}", self.spec()))
    }

    /// Free parameters in [`ModelSpec::param_names`] order.
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            ModelParams::Normal(p) => vec![p.mu, p.sigma],
            ModelParams::StudentT(p) => vec![p.mu, p.sigma, p.nu],
            ModelParams::AdLn(p) => vec![p.alpha, p.beta, p.mu, p.sigma],
            ModelParams::ASub(p) => vec![p.a_l, p.a_r, p.b_l, p.b_r, p.mu],
            ModelParams::TMix(p) => {
                let mut v: Vec<f64> = p.components.iter().flat_map(|c| [c.mu, c.sigma]).collect();
                v.extend_from_slice(&p.weights);
                v
            }
        }
    }

    /// Inverse of [`ModelParams::to_vec`]; validates the result.
    pub fn from_vec(spec: &ModelSpec, v: &[f64]) -> Result<Self> {
        let k = spec.n_free_params();
        if v.len() != k {
            return Err(Error::InvalidParameter(format!("{spec} takes {k} parameters, got {}", v.len())));
        }
        let params = match spec {
            ModelSpec::Normal => ModelParams::Normal(NormalParams { mu: v[0], sigma: v[1] }),
            ModelSpec::StudentT => ModelParams::StudentT(StudentTParams { mu: v[0], sigma: v[1], nu: v[2] }),
            ModelSpec::AdLn => ModelParams::AdLn(AdLnParams { alpha: v[0], beta: v[1], mu: v[2], sigma: v[3] }),
            ModelSpec::ASub => ModelParams::ASub(ASubParams { a_l: v[0], a_r: v[1], b_l: v[2], b_r: v[3], mu: v[4] }),
            ModelSpec::TMix(dofs) => {
                let m = dofs.len();
                let components = dofs
                    .iter()
                    .enumerate()
                    .map(|(j, &nu)| TMixComponent { mu: v[2 * j], sigma: v[2 * j + 1], nu })
                    .collect();
                ModelParams::TMix(TMixParams { components, weights: v[2 * m..].to_vec() })
            }
        };
        params.validate()?;
        Ok(params)
    }

    /// Named values for records: the free parameters plus, for mixtures,
    /// the pinned `nu_j`.
    pub fn named_values(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self.spec().param_names().into_iter().zip(self.to_vec()).collect();
        if let ModelParams::TMix(p) = self {
            for (j, c) in p.components.iter().enumerate() {
                out.push((format!("nu_{}", j + 1), c.nu));
            }
        }
        out
    }

    /// Builds a parameter set from named values (the inverse of
    /// [`ModelParams::named_values`]; `nu_j` entries are checked against the model spec).
    pub fn from_named(spec: &ModelSpec, lookup: impl Fn(&str) -> Option<f64>) -> Result<Self> {
        let names = spec.param_names();
        let v = names
            .iter()
            .map(|n| lookup(n).ok_or_else(|| Error::Parse(format!("missing parameter `{n}` for {spec}"))))
            .collect::<Result<Vec<_>>>()?;
        if let ModelSpec::TMix(dofs) = spec {
            for (j, &nu) in dofs.iter().enumerate() {
                if let Some(given) = lookup(&format!("nu_{}", j + 1)) {
                    if given != nu {
                        return Err(Error::InvalidParameter(format!("nu_{} = {given} but {spec} pins {nu}", j + 1)));
                    }
                }
            }
        }
        Self::from_vec(spec, &v)
    }

    /// Locations of kinks and modes, used as quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ModelParams::Normal(p) => vec![p.mu],
            ModelParams::StudentT(p) => vec![p.mu],
            ModelParams::AdLn(p) => vec![p.mu],
            ModelParams::ASub(p) => vec![p.mu],
            ModelParams::TMix(p) => p.components.iter().map(|c| c.mu).collect(),
        }
    }

    /// A representative width of the density.
    pub fn spread(&self) -> f64 {
        match self {
            ModelParams::Normal(p) => p.sigma,
            ModelParams::StudentT(p) => p.sigma,
            ModelParams::AdLn(p) => p.sigma + 1.0 / p.alpha.min(p.beta),
            ModelParams::ASub(p) => p.a_l.max(p.a_r),
            ModelParams::TMix(p) => p.components.iter().map(|c| c.sigma).fold(0.0, f64::max),
        }
    }

    /// `[min break - k spread, max break + k spread]`.
    pub fn window(&self, k: f64) -> (f64, f64) {
        let b = self.breakpoints();
        let lo = b.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s = self.spread();
        (lo - k * s, hi + k * s)
    }
}

/// Validated parameters with constants precomputed, for repeated evaluation.
#[derive(Debug, Clone)]
pub enum Density {
    Normal(NormalParams),
    StudentT(student_t::PreparedT),
    AdLn(AdLnParams),
    ASub(asub::PreparedASub),
    TMix(tmix::PreparedTMix),
}

impl Density {
    pub fn ln_pdf(&self, g: f64) -> Result<f64> {
        match self {
            Density::Normal(p) => Ok(p.ln_pdf(g)),
            Density::StudentT(p) => Ok(p.ln_pdf(g)),
            Density::AdLn(p) => p.ln_pdf(g),
            Density::ASub(p) => Ok(p.ln_pdf(g)),
            Density::TMix(p) => Ok(p.ln_pdf(g)),
        }
    }

    pub fn cdf(&self, g: f64) -> f64 {
        match self {
            Density::Normal(p) => p.cdf(g),
            Density::StudentT(p) => p.cdf(g),
            Density::AdLn(p) => p.cdf(g),
            Density::ASub(p) => p.cdf(g),
            Density::TMix(p) => p.cdf(g),
        }
    }

    /// Upper-tail mass `1 - cdf(g)`, computed directly so it stays accurate
    /// far in the right tail.
    pub fn sf(&self, g: f64) -> f64 {
        match self {
            Density::Normal(p) => p.sf(g),
            Density::StudentT(p) => p.sf(g),
            Density::AdLn(p) => p.sf(g),
            Density::ASub(p) => p.sf(g),
            Density::TMix(p) => p.sf(g),
        }
    }
}

fn check_spec(spec: &ModelSpec, params: &ModelParams) -> Result<()> {
    if &params.spec() == spec {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("parameters for {} given for spec {spec}", params.spec())))
    }
}

/// `ln f(g)` for the family `spec`.
pub fn log_pdf(spec: &ModelSpec, params: &ModelParams, g: f64) -> Result<f64> {
    check_spec(spec, params)?;
    params.log_pdf(g)
}

pub fn cdf(spec: &ModelSpec, params: &ModelParams, g: f64) -> Result<f64> {
    check_spec(spec, params)?;
    params.cdf(g)
}

pub fn draw<R: Rng + ?Sized>(spec: &ModelSpec, params: &ModelParams, n: usize, rng: &mut R) -> Result<GrowthSample> {
    check_spec(spec, params)?;
    params.draw(n, rng)
}

/// Total probability: quadrature of the density over `window(60)` with the
/// mass outside the window closed through the CDF.
pub fn total_mass(params: &ModelParams) -> Result<f64> {
    let d = params.prepare()?;
    let (lo, hi) = params.window(60.0);
    let mut pts = params.breakpoints();
    pts.push(lo);
    pts.push(hi);
    let body = integrate_with_breaks(|g| d.ln_pdf(g).map(f64::exp).unwrap_or(f64::NAN), &pts, DEFAULT_ABS_TOL);
    Ok(d.cdf(lo) + body + (1.0 - d.cdf(hi)))
}
