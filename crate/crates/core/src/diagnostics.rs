//! Log-rank and log-corank series, exponential tail fits and their
//! straight-line ("tent") overlays, plus CSV and SVG output.
//!
//! Ranks count from the extreme observation: the largest value has upper
//! rank 1, the smallest has lower rank 1. Against a fitted model the
//! matching quantities are `ln(n (1 - F(g)))` and `ln(n F(g))`.

use std::fmt::Write as _;
use std::io::Write;

use crate::distributions::{ModelParams, ModelSpec};
use crate::error::{Error, Result};
use crate::samples::GrowthSample;

/// Minimum number of observations beyond each tail threshold.
pub const MIN_TAIL_OBS: usize = 20;
pub const DEFAULT_UPPER_Q: f64 = 0.95;
pub const DEFAULT_LOWER_Q: f64 = 0.05;
/// Arguments of `ln` below `e^-745` are treated as underflow.
const LN_FLOOR: f64 = -745.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    EmpiricalUpper,
    EmpiricalLower,
    ModelUpper,
    ModelLower,
}

impl SeriesKind {
    pub fn label(self) -> &'static str {
        match self {
            SeriesKind::EmpiricalUpper => "empirical_upper",
            SeriesKind::EmpiricalLower => "empirical_lower",
            SeriesKind::ModelUpper => "model_upper",
            SeriesKind::ModelLower => "model_lower",
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, SeriesKind::EmpiricalUpper | SeriesKind::ModelUpper)
    }
}

/// Points `(g, ln rank)` sorted by increasing `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankSeries {
    pub kind: SeriesKind,
    pub points: Vec<(f64, f64)>,
    pub n_ref: usize,
    /// Grid points dropped because `ln` would underflow.
    pub omitted: usize,
}

fn check_len(sample: &GrowthSample) -> Result<()> {
    match sample.len() {
        0 => Err(Error::EmptySample),
        1 => Err(Error::InsufficientData { needed: 2, got: 1 }),
        _ => Ok(()),
    }
}

fn sorted_values(sample: &GrowthSample) -> Vec<f64> {
    let mut v = sample.values().to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Upper series: the `i`-th largest value gets `ln i`.
pub fn empirical_log_rank(sample: &GrowthSample) -> Result<RankSeries> {
    check_len(sample)?;
    let v = sorted_values(sample);
    let n = v.len();
    let points = v.iter().enumerate().map(|(j, &g)| (g, ((n - j) as f64).ln())).collect();
    Ok(RankSeries { kind: SeriesKind::EmpiricalUpper, points, n_ref: n, omitted: 0 })
}

/// Lower series: the `i`-th smallest value gets `ln i`.
pub fn empirical_log_corank(sample: &GrowthSample) -> Result<RankSeries> {
    check_len(sample)?;
    let v = sorted_values(sample);
    let n = v.len();
    let points = v.iter().enumerate().map(|(j, &g)| (g, ((j + 1) as f64).ln())).collect();
    Ok(RankSeries { kind: SeriesKind::EmpiricalLower, points, n_ref: n, omitted: 0 })
}

/// `ln(n * mass(g))` on the sorted grid, for any tail-mass function.
/// Points whose argument underflows are dropped and counted.
pub fn log_rank_from_mass(
    mass: impl Fn(f64) -> f64,
    grid: &[f64],
    n: usize,
    kind: SeriesKind,
) -> Result<RankSeries> {
    if n == 0 {
        return Err(Error::InvalidParameter("reference count n must be at least 1".into()));
    }
    if let Some(g) = grid.iter().find(|g| g.is_nan()) {
        return Err(Error::InvalidParameter(format!("grid point {g} is not a number")));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let ln_n = (n as f64).ln();
    let mut points = Vec::with_capacity(grid.len());
    let mut omitted = 0;
    for g in grid {
        let ln_mass = mass(g).ln();
        let v = ln_n + ln_mass;
        if ln_mass.is_nan() || v < LN_FLOOR {
            omitted += 1;
        } else {
            points.push((g, v));
        }
    }
    Ok(RankSeries { kind, points, n_ref: n, omitted })
}

/// Model upper series `ln(n (1 - F(g)))`.
pub fn model_log_rank(spec: &ModelSpec, params: &ModelParams, grid: &[f64], n: usize) -> Result<RankSeries> {
    check_spec(spec, params)?;
    let d = params.prepare()?;
    log_rank_from_mass(|g| d.sf(g), grid, n, SeriesKind::ModelUpper)
}

/// Model lower series `ln(n F(g))`.
pub fn model_log_corank(spec: &ModelSpec, params: &ModelParams, grid: &[f64], n: usize) -> Result<RankSeries> {
    check_spec(spec, params)?;
    let d = params.prepare()?;
    log_rank_from_mass(|g| d.cdf(g), grid, n, SeriesKind::ModelLower)
}

fn check_spec(spec: &ModelSpec, params: &ModelParams) -> Result<()> {
    if &params.spec() == spec {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("parameters for {} given for spec {spec}", params.spec())))
    }
}

/// `m` evenly spaced points spanning the sample range.
pub fn sample_grid(sample: &GrowthSample, m: usize) -> Vec<f64> {
    let v = sample.values();
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m < 2 || lo == hi {
        return vec![lo];
    }
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

/// Exponential tail laws `c_u e^{-c_u (g - g_m)}` above `g_m` and
/// `c_l e^{c_l (g - g_M)}` below `g_M`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub c_u: f64,
    pub c_l: f64,
    pub g_m: f64,
    pub g_M: f64,
    pub n_u: usize,
    pub n_l: usize,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Fits both exponential tails with thresholds at the `upper_q` and
/// `lower_q` sample quantiles.
pub fn fit_exponential_tails(sample: &GrowthSample, upper_q: f64, lower_q: f64) -> Result<TailFit> {
    if !(0.0 < lower_q && lower_q < upper_q && upper_q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail quantiles must satisfy 0 < lower_q < upper_q < 1, got {lower_q} and {upper_q}"
        )));
    }
    check_len(sample)?;
    let v = sorted_values(sample);
    fit_exponential_tails_at(sample, quantile(&v, upper_q), quantile(&v, lower_q))
}

/// Exponential MLE on the excesses beyond explicit thresholds.
#[allow(non_snake_case)]
pub fn fit_exponential_tails_at(sample: &GrowthSample, g_m: f64, g_M: f64) -> Result<TailFit> {
    let (c_u, n_u) = exp_rate(sample.values().iter().filter(|&&g| g >= g_m).map(|g| g - g_m), "upper")?;
    let (c_l, n_l) = exp_rate(sample.values().iter().filter(|&&g| g <= g_M).map(|g| g_M - g), "lower")?;
    Ok(TailFit { c_u, c_l, g_m, g_M, n_u, n_l })
}

fn exp_rate(excesses: impl Iterator<Item = f64>, side: &'static str) -> Result<(f64, usize)> {
    let (sum, count) = excesses.fold((0.0, 0usize), |(s, c), e| (s + e, c + 1));
    if count < MIN_TAIL_OBS {
        return Err(Error::InsufficientTailData { side, got: count, needed: MIN_TAIL_OBS });
    }
    if !(sum > 0.0) {
        return Err(Error::DegenerateTail { side });
    }
    Ok((count as f64 / sum, count))
}

/// Empirical series with the fitted tail lines overlaid.
#[derive(Debug, Clone, PartialEq)]
pub struct TentProfile {
    pub upper: RankSeries,
    pub lower: RankSeries,
    /// `ln(n_u) - c_u (g - g_m)` at the empirical points with `g >= g_m`.
    pub upper_line: Vec<(f64, f64)>,
    /// `ln(n_l) + c_l (g - g_M)` at the empirical points with `g <= g_M`.
    pub lower_line: Vec<(f64, f64)>,
    /// Mean absolute gap between line and series beyond each threshold.
    pub upper_residual: f64,
    pub lower_residual: f64,
}

pub fn tent_profile(sample: &GrowthSample, fit: &TailFit) -> Result<TentProfile> {
    if !(fit.c_u > 0.0 && fit.c_l > 0.0) {
        return Err(Error::InvalidParameter("tail rates must be positive".into()));
    }
    let upper = empirical_log_rank(sample)?;
    let lower = empirical_log_corank(sample)?;
    let (ln_nu, ln_nl) = ((fit.n_u as f64).ln(), (fit.n_l as f64).ln());
    let upper_line: Vec<(f64, f64)> =
        upper.points.iter().filter(|p| p.0 >= fit.g_m).map(|&(g, _)| (g, ln_nu - fit.c_u * (g - fit.g_m))).collect();
    let lower_line: Vec<(f64, f64)> =
        lower.points.iter().filter(|p| p.0 <= fit.g_M).map(|&(g, _)| (g, ln_nl + fit.c_l * (g - fit.g_M))).collect();
    let residual = |series: &RankSeries, line: &[(f64, f64)], keep: &dyn Fn(f64) -> bool| {
        let gaps: Vec<f64> =
            series.points.iter().filter(|p| keep(p.0)).zip(line).map(|(p, l)| (p.1 - l.1).abs()).collect();
        gaps.iter().sum::<f64>() / gaps.len().max(1) as f64
    };
    let upper_residual = residual(&upper, &upper_line, &|g| g >= fit.g_m);
    let lower_residual = residual(&lower, &lower_line, &|g| g <= fit.g_M);
    Ok(TentProfile { upper, lower, upper_line, lower_line, upper_residual, lower_residual })
}

/// Writes series as CSV with columns `kind,g,log_rank`.
pub fn write_series_csv<W: Write>(series: &[&RankSeries], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["kind", "g", "log_rank"])?;
    for s in series {
        for &(g, r) in &s.points {
            w.write_record([s.kind.label(), &g.to_string(), &r.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 600.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;
const EMPIRICAL_COLOR: &str = "blue";
const MODEL_COLOR: &str = "red";

/// Tick positions at a 1-2-5 step covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(f64::EPSILON);
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.4}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Renders empirical points as blue dots and the model series as a red
/// polyline on an 800x600 canvas. Empirical points falling on the same
/// pixel are drawn once.
pub fn render_svg(title: &str, empirical: &RankSeries, model: Option<&RankSeries>, model_label: &str) -> String {
    let all = empirical.points.iter().chain(model.iter().flat_map(|m| m.points.iter()));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(g, r) in all {
        x0 = x0.min(g);
        x1 = x1.max(g);
        y0 = y0.min(r);
        y1 = y1.max(r);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    y0 = y0.min(0.0);
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pw = SVG_W - MARGIN_L - MARGIN_R;
    let ph = SVG_H - MARGIN_T - MARGIN_B;
    let px = |g: f64| MARGIN_L + (g - x0) / (x1 - x0) * pw;
    let py = |r: f64| MARGIN_T + (y1 - r) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="400" y="22" text-anchor="middle" font-size="14">{}</text>"#, escape(title));
    let (bx, by) = (MARGIN_L, SVG_H - MARGIN_B);
    let _ = writeln!(
        s,
        r#"<rect x="{bx}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in ticks(x0, x1) {
        let x = px(t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{by}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, by + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, by + 20.0, tick_label(t));
    }
    for t in ticks(y0, y1) {
        let y = py(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{bx}" y2="{y:.2}" stroke="black"/>"#, bx - 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            bx - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="590" text-anchor="middle">g</text>"#, MARGIN_L + pw / 2.0);
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">ln(rank)</text>"#,
        MARGIN_T + ph / 2.0
    );

    let mut seen = std::collections::BTreeSet::new();
    let _ = writeln!(s, r#"<g fill="{EMPIRICAL_COLOR}">"#);
    for &(g, r) in &empirical.points {
        let (x, y) = (px(g), py(r));
        if seen.insert(((x * 2.0).round() as i64, (y * 2.0).round() as i64)) {
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
        }
    }
    let _ = writeln!(s, "</g>");
    if let Some(m) = model {
        if !m.points.is_empty() {
            let coords: Vec<String> = m.points.iter().map(|&(g, r)| format!("{:.2},{:.2}", px(g), py(r))).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{MODEL_COLOR}" stroke-width="2" points="{}"/>"#,
                coords.join(" ")
            );
        }
    }
    let lx = SVG_W - MARGIN_R - 170.0;
    let ly = MARGIN_T + 15.0;
    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{ly:.2}" r="3" fill="{EMPIRICAL_COLOR}"/>"#, lx + 10.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">empirical</text>"#, lx + 22.0, ly + 4.0);
    if model.is_some() {
        let ly = ly + 18.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{MODEL_COLOR}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 22.0, ly + 4.0, escape(model_label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
