//! Ingestion of population panels and growth-rate columns, and the
//! descriptive summary of a growth sample.

use std::fmt;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::sig6;

/// Populations of one unit at the two census dates.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationPair {
    pub unit_id: String,
    pub pop_start: f64,
    pub pop_end: f64,
}

impl PopulationPair {
    pub fn new(unit_id: impl Into<String>, pop_start: f64, pop_end: f64) -> Result<Self> {
        let pair = Self { unit_id: unit_id.into(), pop_start, pop_end };
        pair.check().map_err(Error::InvalidParameter)?;
        Ok(pair)
    }

    fn check(&self) -> std::result::Result<(), String> {
        if !(self.pop_start > 0.0 && self.pop_start.is_finite()) {
            return Err(format!("nonpositive start population {}", self.pop_start));
        }
        if !(self.pop_end > 0.0 && self.pop_end.is_finite()) {
            return Err(format!("nonpositive end population {}", self.pop_end));
        }
        Ok(())
    }

    pub fn log_growth(&self) -> f64 {
        self.pop_end.ln() - self.pop_start.ln()
    }
}

/// Ordered log-growth observations. Every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSample {
    values: Vec<f64>,
    pub label: String,
    pub source_meta: Option<String>,
}

impl GrowthSample {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("observation {i} is not finite ({v})")));
        }
        Ok(Self { values, label: label.into(), source_meta: None })
    }

    pub fn with_meta(mut self, meta: impl Into<String>) -> Self {
        self.source_meta = Some(meta.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

}

/// A row that was dropped during ingestion. `line` is 1-based and counts the header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedRow {
    pub line: usize,
    pub unit_id: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestionReport {
    pub accepted: usize,
    pub rejected: Vec<RejectedRow>,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub sample: GrowthSample,
    pub report: IngestionReport,
}

/// Log-growth rates `ln(pop_end) - ln(pop_start)`, in input order. Pairs
/// violating the positivity invariant are reported and skipped.
pub fn compute_log_growth(pairs: &[PopulationPair], label: &str) -> Result<Ingested> {
    let mut report = IngestionReport::default();
    let mut values = Vec::with_capacity(pairs.len());
    for (i, pair) in pairs.iter().enumerate() {
        match pair.check() {
            Ok(()) => values.push(pair.log_growth()),
            Err(reason) => report.rejected.push(RejectedRow {
                line: i + 1,
                unit_id: Some(pair.unit_id.clone()),
                reason,
            }),
        }
    }
    finish(values, report, label)
}

fn finish(values: Vec<f64>, mut report: IngestionReport, label: &str) -> Result<Ingested> {
    if values.is_empty() {
        return Err(Error::Ingestion(format!(
            "no valid rows remain ({} rejected)",
            report.rejected.len()
        )));
    }
    report.accepted = values.len();
    Ok(Ingested { sample: GrowthSample::new(values, label)?, report })
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Ingestion(format!("missing required column `{name}`")))
}

fn parse_field(record: &csv::StringRecord, idx: usize, name: &str) -> std::result::Result<f64, String> {
    let raw = record.get(idx).map(str::trim).unwrap_or("");
    if raw.is_empty() {
        return Err(format!("missing {name}"));
    }
    raw.parse::<f64>().map_err(|_| format!("unparseable {name} `{raw}`"))
}

/// Reads a panel CSV with columns `id,pop_start,pop_end` (header required).
pub fn read_panel<R: Read>(reader: R, label: &str) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let (id_col, start_col, end_col) =
        (column(&headers, "id")?, column(&headers, "pop_start")?, column(&headers, "pop_end")?);
    let mut report = IngestionReport::default();
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                report.rejected.push(RejectedRow { line, unit_id: None, reason: e.to_string() });
                continue;
            }
        };
        let unit_id = record.get(id_col).map(|s| s.trim().to_string());
        let pair = parse_field(&record, start_col, "pop_start").and_then(|start| {
            let end = parse_field(&record, end_col, "pop_end")?;
            let pair = PopulationPair { unit_id: unit_id.clone().unwrap_or_default(), pop_start: start, pop_end: end };
            pair.check().map(|_| pair)
        });
        match pair {
            Ok(p) => values.push(p.log_growth()),
            Err(reason) => report.rejected.push(RejectedRow { line, unit_id, reason }),
        }
    }
    finish(values, report, label)
}

/// Reads a single-column CSV of precomputed growth rates (header `g`).
pub fn read_rates<R: Read>(reader: R, label: &str) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let g_col = column(&headers, "g")?;
    let mut report = IngestionReport::default();
    let mut values = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let parsed = record
            .map_err(|e| e.to_string())
            .and_then(|r| parse_field(&r, g_col, "g"))
            .and_then(|g| if g.is_finite() { Ok(g) } else { Err(format!("non-finite g {g}")) });
        match parsed {
            Ok(g) => values.push(g),
            Err(reason) => report.rejected.push(RejectedRow { line, unit_id: None, reason }),
        }
    }
    finish(values, report, label)
}

/// Writes the sample as a rates-mode CSV; values use the shortest exact representation.
pub fn write_rates<W: Write>(sample: &GrowthSample, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["g"])?;
    for v in sample.values() {
        w.write_record([v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-sample summary. `sd` uses the `n - 1` denominator (zero for a single observation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub n_obs: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe(sample: &GrowthSample) -> Result<DescriptiveStats> {
    let v = sample.values();
    if v.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
    let sd = if v.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
    let (min, max) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    // Summation rounding can push the mean a hair outside [min, max] for constant data.
    let mean = mean.clamp(min, max);
    Ok(DescriptiveStats { n_obs: v.len(), mean, sd, min, max })
}

impl DescriptiveStats {
    pub const HEADER: [&'static str; 5] = ["Obs", "Mean", "SD", "Min", "Max"];
}

impl fmt::Display for DescriptiveStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>10} {:>12} {:>12} {:>12} {:>12}",
            self.n_obs,
            sig6(self.mean),
            sig6(self.sd),
            sig6(self.min),
            sig6(self.max)
        )
    }
}
