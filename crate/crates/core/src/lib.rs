//! Maximum-likelihood fitting of log-growth-rate samples.
//!
//! The crate fits normal, Student's t, asymmetric double Laplace normal,
//! asymmetric Subbotin and Student-t mixture laws to samples of
//! `g = ln x_t - ln x_{t-1}`, reports observed-information standard errors
//! and AIC/BIC/HQC, and builds log-rank/log-corank diagnostics with
//! exponential tail fits. The `growthfit` binary wires these into batch runs.

pub mod cli;
pub mod diagnostics;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod quadrature;
pub mod samples;
pub mod selection;
pub mod specfun;

mod fmt;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        };
    }

    chapter!(introduction, "introduction.md");
    chapter!(growth_rates, "growth-rates.md");
    chapter!(families, "families.md");
    chapter!(fitting, "fitting.md");
    chapter!(selection, "selection.md");
    chapter!(rank_plots, "rank-plots.md");
    chapter!(command_line, "command-line.md");
}
