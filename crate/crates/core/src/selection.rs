//! Information criteria and per-sample model ranking.

use std::fmt;

use crate::error::{Error, Result};
use crate::estimation::FitResult;
use crate::fmt::sig6;

/// Criterion values closer than this are reported as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Akaike: `2k - 2 ln L`.
pub fn aic(k: usize, log_lik: f64) -> f64 {
    2.0 * k as f64 - 2.0 * log_lik
}

/// Schwarz: `k ln n - 2 ln L`.
pub fn bic(k: usize, n: usize, log_lik: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("bic", "n must be at least 1"));
    }
    Ok(k as f64 * (n as f64).ln() - 2.0 * log_lik)
}

/// Hannan–Quinn: `2k ln ln n - 2 ln L`, defined for `n >= 3`.
pub fn hqc(k: usize, n: usize, log_lik: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain("hqc", format!("n = {n} must be at least 3")));
    }
    Ok(2.0 * k as f64 * (n as f64).ln().ln() - 2.0 * log_lik)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaRow {
    pub model_label: String,
    pub k: usize,
    pub n: usize,
    pub log_lik: f64,
    pub aic: f64,
    pub bic: f64,
    pub hqc: f64,
    pub converged: bool,
}

impl CriteriaRow {
    pub fn new(model_label: impl Into<String>, k: usize, n: usize, log_lik: f64, converged: bool) -> Result<Self> {
        Ok(Self {
            model_label: model_label.into(),
            k,
            n,
            log_lik,
            aic: aic(k, log_lik),
            bic: bic(k, n, log_lik)?,
            hqc: hqc(k, n, log_lik)?,
            converged,
        })
    }

    pub fn from_fit(fit: &FitResult) -> Result<Self> {
        Self::new(fit.spec.label(), fit.k(), fit.n_obs, fit.log_lik, fit.converged)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Aic,
    Bic,
    Hqc,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Aic, Criterion::Bic, Criterion::Hqc];

    pub fn label(self) -> &'static str {
        match self {
            Criterion::Aic => "aic",
            Criterion::Bic => "bic",
            Criterion::Hqc => "hqc",
        }
    }

    pub fn of(self, row: &CriteriaRow) -> f64 {
        match self {
            Criterion::Aic => row.aic,
            Criterion::Bic => row.bic,
            Criterion::Hqc => row.hqc,
        }
    }
}

/// The converged models attaining a column minimum. More than one label
/// means a tie.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Winner {
    pub labels: Vec<String>,
}

impl Winner {
    pub fn is_tie(&self) -> bool {
        self.labels.len() > 1
    }

    pub fn is(&self, label: &str) -> bool {
        self.labels.len() == 1 && self.labels[0] == label
    }
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels.join("="))?;
        if self.is_tie() {
            f.write_str(" (tie)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    /// Sorted by AIC, then label.
    pub rows: Vec<CriteriaRow>,
    pub winner_aic: Winner,
    pub winner_bic: Winner,
    pub winner_hqc: Winner,
}

impl RankingTable {
    pub fn from_rows(mut rows: Vec<CriteriaRow>) -> Result<Self> {
        let n = rows.first().ok_or(Error::NoConvergedFit)?.n;
        if let Some(r) = rows.iter().find(|r| r.n != n) {
            return Err(Error::MismatchedSampleSize(n, r.n));
        }
        if !rows.iter().any(|r| r.converged) {
            return Err(Error::NoConvergedFit);
        }
        rows.sort_by(|a, b| a.aic.total_cmp(&b.aic).then_with(|| a.model_label.cmp(&b.model_label)));
        let winner = |c: Criterion| {
            let min = rows.iter().filter(|r| r.converged).map(|r| c.of(r)).fold(f64::INFINITY, f64::min);
            let mut labels: Vec<String> = rows
                .iter()
                .filter(|r| r.converged && c.of(r) <= min + TIE_TOL)
                .map(|r| r.model_label.clone())
                .collect();
            labels.sort();
            Winner { labels }
        };
        Ok(Self {
            winner_aic: winner(Criterion::Aic),
            winner_bic: winner(Criterion::Bic),
            winner_hqc: winner(Criterion::Hqc),
            rows,
        })
    }

    pub fn winner(&self, c: Criterion) -> &Winner {
        match c {
            Criterion::Aic => &self.winner_aic,
            Criterion::Bic => &self.winner_bic,
            Criterion::Hqc => &self.winner_hqc,
        }
    }

    /// Whether `row` wins column `c` (alone or tied).
    pub fn wins(&self, row: &CriteriaRow, c: Criterion) -> bool {
        self.winner(c).labels.contains(&row.model_label)
    }
}

/// Ranks fits made on the same sample.
pub fn rank_models(fits: &[FitResult]) -> Result<RankingTable> {
    let rows = fits.iter().map(CriteriaRow::from_fit).collect::<Result<Vec<_>>>()?;
    RankingTable::from_rows(rows)
}

impl fmt::Display for RankingTable {
    /// Aligned text; column winners carry a `*`, non-converged fits a `!`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["model", "k", "n", "log_lik", "aic", "bic", "hqc"];
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            let mark = |c: Criterion| {
                let v = sig6(c.of(r));
                if self.wins(r, c) {
                    format!("{v}*")
                } else {
                    v
                }
            };
            let label = if r.converged { r.model_label.clone() } else { format!("{}!", r.model_label) };
            cells.push(vec![
                label,
                r.k.to_string(),
                r.n.to_string(),
                sig6(r.log_lik),
                mark(Criterion::Aic),
                mark(Criterion::Bic),
                mark(Criterion::Hqc),
            ]);
        }
        let widths: Vec<usize> = (0..header.len()).map(|j| cells.iter().map(|row| row[j].len()).max().unwrap_or(0)).collect();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (c, w))| if j == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            writeln!(f, "{}", line.join("  ").trim_end())?;
        }
        writeln!(f, "winners: aic {}, bic {}, hqc {}", self.winner_aic, self.winner_bic, self.winner_hqc)
    }
}
