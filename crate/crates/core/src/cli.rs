//! The `growthfit` command line: argument parsing, the batch runner and
//! artifact writing.
//!
//! Every command writes into `--out DIR` and finishes by writing
//! `manifest.json`, which lists the artifacts that were completed and
//! whether the run succeeded. Machine-readable records are JSON lines with
//! flat keys (`family`, `params.mu`, `se.mu`, `log_lik`, `aic`, ...) and
//! numbers in shortest round-trip form; text tables use 6 significant digits.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::diagnostics::{
    empirical_log_corank, empirical_log_rank, fit_exponential_tails, model_log_corank, model_log_rank, render_svg,
    sample_grid, tent_profile, write_series_csv, DEFAULT_LOWER_Q, DEFAULT_UPPER_Q,
};
use crate::distributions::{ModelParams, ModelSpec};
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, FitOptions, FitResult};
use crate::fmt::sig6;
use crate::samples::{describe, read_panel, read_rates, write_rates, GrowthSample, IngestionReport};
use crate::selection::{rank_models, Criterion, CriteriaRow};

/// Stream offset for per-family fit seeds, keeping them apart from the
/// simulation stream 0.
const FIT_STREAM_BASE: u64 = 1 << 32;
const DEFAULT_GRID_POINTS: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "growthfit", version, about = "Fit heavy-tailed laws to log-growth rates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Descriptive statistics of the sample.
    Stats(InputArgs),
    /// Maximum-likelihood fits, one record per family.
    Fit(FitArgs),
    /// Fits plus an AIC/BIC/HQC ranking.
    Compare(FitArgs),
    /// Draws a synthetic sample from a parameterized family.
    Simulate(SimulateArgs),
    /// Log-rank and log-corank series, tail fits and plots.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputMode {
    /// Columns `id,pop_start,pop_end`.
    Panel,
    /// Column `g`.
    Rates,
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input layout; detected from the header when omitted.
    #[arg(long, value_enum)]
    mode: Option<InputMode>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FitFlags {
    /// Comma-separated families: normal, student_t, adln, asub, 2st12, 2st39, 3st.
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    starts: usize,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-10)]
    f_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    x_tol: f64,
    #[arg(long, default_value_t = 1e-4)]
    se_step: f64,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitFlags,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fit: FitFlags,
    #[arg(long, default_value_t = DEFAULT_UPPER_Q)]
    upper_q: f64,
    #[arg(long, default_value_t = DEFAULT_LOWER_Q)]
    lower_q: f64,
    /// Number of grid points for the model series.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    a_l: Option<f64>,
    #[arg(long)]
    a_r: Option<f64>,
    #[arg(long)]
    b_l: Option<f64>,
    #[arg(long)]
    b_r: Option<f64>,
    /// Any parameter as `name=value`, e.g. `mu_1=0.17` or `p_1=0.34`.
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    params: Vec<String>,
    /// JSON-lines file of fit records; the first record of `--family` supplies the parameters.
    #[arg(long)]
    params_file: Option<PathBuf>,
}

/// Where the sample comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub path: PathBuf,
    pub mode: Option<InputMode>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnoseConfig {
    pub upper_q: f64,
    pub lower_q: f64,
    pub grid_points: usize,
}

#[derive(Debug, Clone)]
pub enum Command {
    Stats { input: InputSpec },
    Fit { input: InputSpec, families: Vec<ModelSpec>, fit: FitOptions },
    Compare { input: InputSpec, families: Vec<ModelSpec>, fit: FitOptions },
    Simulate { params: ModelParams, n: usize, seed: u64 },
    Diagnose { input: InputSpec, families: Vec<ModelSpec>, fit: FitOptions, diagnose: DiagnoseConfig },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stats { .. } => "stats",
            Command::Fit { .. } => "fit",
            Command::Compare { .. } => "compare",
            Command::Simulate { .. } => "simulate",
            Command::Diagnose { .. } => "diagnose",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Parses command-line arguments (including the program name).
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        Self::from_cli(cli).map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, e.to_string()))
    }

    fn from_cli(cli: Cli) -> Result<Self> {
        let input = |a: InputArgs| (InputSpec { path: a.input, mode: a.mode }, a.out);
        Ok(match cli.command {
            Cmd::Stats(a) => {
                let (input, out) = input(a);
                RunConfig { command: Command::Stats { input }, output_dir: out }
            }
            Cmd::Fit(a) => {
                let families = parse_families(&a.fit.families, true)?;
                let fit = fit_options(&a.fit)?;
                let (input, out) = input(a.input);
                RunConfig { command: Command::Fit { input, families, fit }, output_dir: out }
            }
            Cmd::Compare(a) => {
                let families = parse_families(&a.fit.families, true)?;
                let fit = fit_options(&a.fit)?;
                let (input, out) = input(a.input);
                RunConfig { command: Command::Compare { input, families, fit }, output_dir: out }
            }
            Cmd::Diagnose(a) => {
                let families = parse_families(&a.fit.families, false)?;
                let fit = fit_options(&a.fit)?;
                if !(0.0 < a.lower_q && a.lower_q < a.upper_q && a.upper_q < 1.0) {
                    return Err(Error::Usage("tail quantiles must satisfy 0 < lower-q < upper-q < 1".into()));
                }
                if a.grid < 2 {
                    return Err(Error::Usage("--grid must be at least 2".into()));
                }
                let diagnose = DiagnoseConfig { upper_q: a.upper_q, lower_q: a.lower_q, grid_points: a.grid };
                let (input, out) = input(a.input);
                RunConfig { command: Command::Diagnose { input, families, fit, diagnose }, output_dir: out }
            }
            Cmd::Simulate(a) => {
                let spec = ModelSpec::from_label(&a.family)?;
                if a.n == 0 {
                    return Err(Error::Usage("--n must be at least 1".into()));
                }
                let params = simulate_params(&spec, &a)?;
                RunConfig { command: Command::Simulate { params, n: a.n, seed: a.seed }, output_dir: a.out }
            }
        })
    }
}

fn parse_families(labels: &[String], required: bool) -> Result<Vec<ModelSpec>> {
    let labels: Vec<&str> = labels.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    if required && labels.is_empty() {
        return Err(Error::Usage("--families needs at least one family".into()));
    }
    let mut specs: Vec<ModelSpec> = Vec::new();
    for l in labels {
        let spec = ModelSpec::from_label(l)?;
        if specs.contains(&spec) {
            return Err(Error::Usage(format!("family `{l}` listed twice")));
        }
        specs.push(spec);
    }
    Ok(specs)
}

fn fit_options(f: &FitFlags) -> Result<FitOptions> {
    let opts = FitOptions {
        n_starts: f.starts,
        max_iters: f.max_iters,
        f_tol: f.f_tol,
        x_tol: f.x_tol,
        se_step: f.se_step,
        seed: f.seed,
    };
    opts.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(opts)
}

fn simulate_params(spec: &ModelSpec, a: &SimulateArgs) -> Result<ModelParams> {
    let mut named: BTreeMap<String, f64> = BTreeMap::new();
    if let Some(path) = &a.params_file {
        let text = fs::read_to_string(path)?;
        let record = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str::<Map<String, Value>>)
            .collect::<std::result::Result<Vec<_>, _>>()?
            .into_iter()
            .find(|r| r.get("family").and_then(Value::as_str) == Some(spec.label().as_str()))
            .ok_or_else(|| Error::Parse(format!("no `{spec}` record in the parameter file")))?;
        for (k, v) in record {
            if let (Some(name), Some(x)) = (k.strip_prefix("params."), v.as_f64()) {
                named.insert(name.to_string(), x);
            }
        }
    }
    let flags = [
        ("mu", a.mu),
        ("sigma", a.sigma),
        ("nu", a.nu),
        ("alpha", a.alpha),
        ("beta", a.beta),
        ("a_l", a.a_l),
        ("a_r", a.a_r),
        ("b_l", a.b_l),
        ("b_r", a.b_r),
    ];
    let mut explicit: BTreeMap<String, f64> = BTreeMap::new();
    for (name, v) in flags {
        if let Some(v) = v {
            explicit.insert(name.to_string(), v);
        }
    }
    for p in &a.params {
        let (name, value) =
            p.split_once('=').ok_or_else(|| Error::Usage(format!("--param expects NAME=VALUE, got `{p}`")))?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Parse(format!("bad value in --param `{p}`")))?;
        if explicit.insert(name.trim().to_string(), value).is_some() {
            return Err(Error::Usage(format!("parameter `{}` given twice", name.trim())));
        }
    }
    let known: Vec<String> = spec.param_names();
    let pinned = |n: &str| matches!(spec, ModelSpec::TMix(_)) && n.starts_with("nu_");
    if let Some(unknown) = explicit.keys().find(|k| !known.contains(k) && !pinned(k)) {
        return Err(Error::Usage(format!("{spec} has no parameter `{unknown}`")));
    }
    named.extend(explicit);
    ModelParams::from_named(spec, |n| named.get(n).copied())
}

/// Seed for an independent subtask, derived from the run seed by
/// selecting a ChaCha stream.
pub fn subtask_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Stable per-family stream index (FNV-1a of the label), so a family's fit
/// does not depend on which other families are requested.
fn family_stream(spec: &ModelSpec) -> u64 {
    let hash = spec.label().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    FIT_STREAM_BASE + (hash >> 32)
}

/// Collects artifacts and writes them under the output directory.
struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn write_with(&mut self, name: &str, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let file = fs::File::create(self.dir.join(name))?;
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        self.write_with(name, |w| Ok(w.write_all(text.as_bytes())?))
    }

    fn write_jsonl(&mut self, name: &str, records: &[Map<String, Value>]) -> Result<()> {
        let mut text = String::new();
        for r in records {
            text.push_str(&serde_json::to_string(r)?);
            text.push('\n');
        }
        self.write_text(name, &text)
    }

    fn manifest(&self, command: &str, error: Option<&Error>) -> Result<()> {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        m.insert("status".into(), json!(if error.is_some() { "failed" } else { "complete" }));
        m.insert("artifacts".into(), json!(self.written));
        if let Some(e) = error {
            m.insert("error".into(), json!({ "class": e.class(), "message": e.to_string() }));
        }
        let text = serde_json::to_string_pretty(&Value::Object(m))? + "\n";
        fs::write(self.dir.join("manifest.json"), text)?;
        Ok(())
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub artifacts: Vec<String>,
    /// Human-readable summary, also printed by the binary.
    pub summary: String,
}

/// Runs one command. The manifest is written last, also on failure when the
/// output directory could be created.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let mut art = Artifacts::new(&config.output_dir)?;
    let result = execute(config, &mut art);
    match result {
        Ok(summary) => {
            art.manifest(config.command.name(), None)?;
            Ok(RunOutcome { artifacts: art.written, summary })
        }
        Err(e) => {
            // the original error matters more than a failed manifest write
            let _ = art.manifest(config.command.name(), Some(&e));
            Err(e)
        }
    }
}

fn execute(config: &RunConfig, art: &mut Artifacts) -> Result<String> {
    match &config.command {
        Command::Stats { input } => {
            let (sample, report) = load(input)?;
            run_stats(&sample, &report, art)
        }
        Command::Fit { input, families, fit } => {
            let (sample, _) = load(input)?;
            let fits = fit_all(&sample, families, fit)?;
            art.write_jsonl("fits.jsonl", &fit_records(&sample, &fits, fit)?)?;
            let text = fits_text(&fits);
            art.write_text("fits.txt", &text)?;
            Ok(text)
        }
        Command::Compare { input, families, fit } => {
            let (sample, _) = load(input)?;
            let fits = fit_all(&sample, families, fit)?;
            art.write_jsonl("fits.jsonl", &fit_records(&sample, &fits, fit)?)?;
            let table = rank_models(&fits)?;
            let records: Vec<Map<String, Value>> = table
                .rows
                .iter()
                .map(|r| {
                    let mut m = criteria_record(r);
                    m.insert("sample".into(), json!(sample.label));
                    for c in Criterion::ALL {
                        m.insert(format!("best.{}", c.label()), json!(table.wins(r, c)));
                        m.insert(format!("tie.{}", c.label()), json!(table.wins(r, c) && table.winner(c).is_tie()));
                    }
                    m
                })
                .collect();
            art.write_jsonl("ranking.jsonl", &records)?;
            let text = format!("sample {} (n = {})\n{table}", sample.label, sample.len());
            art.write_text("ranking.txt", &text)?;
            Ok(text)
        }
        Command::Simulate { params, n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(0);
            let sample = params.draw(*n, &mut rng)?;
            art.write_with("sample.csv", |w| write_rates(&sample, w))?;
            let mut m = Map::new();
            m.insert("record".into(), json!("simulate"));
            m.insert("family".into(), json!(params.spec().label()));
            m.insert("n".into(), json!(n));
            m.insert("seed".into(), json!(seed));
            for (name, v) in params.named_values() {
                m.insert(format!("params.{name}"), json!(v));
            }
            art.write_jsonl("simulate.jsonl", &[m])?;
            Ok(format!("simulated {n} draws from {} with seed {seed}\n", params.spec()))
        }
        Command::Diagnose { input, families, fit, diagnose } => {
            let (sample, _) = load(input)?;
            run_diagnose(&sample, families, fit, diagnose, art)
        }
    }
}

/// Reads the input file, choosing the layout from the header when the mode
/// is not given.
pub fn load(input: &InputSpec) -> Result<(GrowthSample, IngestionReport)> {
    let mut text = String::new();
    fs::File::open(&input.path)
        .map_err(|e| Error::Ingestion(format!("cannot open input: {e}")))?
        .read_to_string(&mut text)?;
    let label = input.path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
    let mode = match input.mode {
        Some(m) => m,
        None => {
            let header = text.lines().next().unwrap_or("");
            let cols: Vec<&str> = header.split(',').map(str::trim).collect();
            if cols.contains(&"pop_start") && cols.contains(&"pop_end") {
                InputMode::Panel
            } else if cols.contains(&"g") {
                InputMode::Rates
            } else {
                return Err(Error::Ingestion(
                    "cannot detect input layout: expected columns `id,pop_start,pop_end` or `g`".into(),
                ));
            }
        }
    };
    let ingested = match mode {
        InputMode::Panel => read_panel(text.as_bytes(), &label)?,
        InputMode::Rates => read_rates(text.as_bytes(), &label)?,
    };
    Ok((ingested.sample, ingested.report))
}

fn run_stats(sample: &GrowthSample, report: &IngestionReport, art: &mut Artifacts) -> Result<String> {
    let d = describe(sample)?;
    let mut m = Map::new();
    m.insert("record".into(), json!("stats"));
    m.insert("sample".into(), json!(sample.label));
    m.insert("n_obs".into(), json!(d.n_obs));
    m.insert("mean".into(), json!(d.mean));
    m.insert("sd".into(), json!(d.sd));
    m.insert("min".into(), json!(d.min));
    m.insert("max".into(), json!(d.max));
    m.insert("rows_rejected".into(), json!(report.rejected.len()));
    art.write_jsonl("stats.jsonl", &[m])?;
    if !report.rejected.is_empty() {
        let records: Vec<Map<String, Value>> = report
            .rejected
            .iter()
            .map(|r| match serde_json::to_value(r) {
                Ok(Value::Object(m)) => m,
                _ => Map::new(),
            })
            .collect();
        art.write_jsonl("rejected.jsonl", &records)?;
    }
    let h = crate::samples::DescriptiveStats::HEADER;
    let text = format!(
        "{:>10} {:>12} {:>12} {:>12} {:>12}\n{d}\nrejected rows: {}\n",
        h[0],
        h[1],
        h[2],
        h[3],
        h[4],
        report.rejected.len()
    );
    art.write_text("stats.txt", &text)?;
    Ok(text)
}

/// Fits every family; families run concurrently, results keep input order.
pub fn fit_all(sample: &GrowthSample, families: &[ModelSpec], opts: &FitOptions) -> Result<Vec<FitResult>> {
    families
        .par_iter()
        .map(|spec| {
            let o = FitOptions { seed: subtask_seed(opts.seed, family_stream(spec)), ..*opts };
            fit_mle(spec, sample, &o)
        })
        .collect()
}

fn criteria_record(r: &CriteriaRow) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("record".into(), json!("criteria"));
    m.insert("family".into(), json!(r.model_label));
    m.insert("k".into(), json!(r.k));
    m.insert("n".into(), json!(r.n));
    m.insert("log_lik".into(), json!(r.log_lik));
    m.insert("aic".into(), json!(r.aic));
    m.insert("bic".into(), json!(r.bic));
    m.insert("hqc".into(), json!(r.hqc));
    m.insert("converged".into(), json!(r.converged));
    m
}

/// One flat record per fit.
pub fn fit_records(sample: &GrowthSample, fits: &[FitResult], opts: &FitOptions) -> Result<Vec<Map<String, Value>>> {
    fits.iter()
        .map(|f| {
            let row = CriteriaRow::from_fit(f)?;
            let mut m = Map::new();
            m.insert("record".into(), json!("fit"));
            m.insert("sample".into(), json!(sample.label));
            m.insert("family".into(), json!(f.spec.label()));
            m.insert("k".into(), json!(f.k()));
            m.insert("n".into(), json!(f.n_obs));
            for (name, v) in f.params.named_values() {
                m.insert(format!("params.{name}"), json!(v));
            }
            for (i, name) in f.spec.param_names().iter().enumerate() {
                let se = f.std_errors.as_ref().map(|s| s[i]);
                m.insert(format!("se.{name}"), json!(se));
            }
            m.insert("se_status".into(), json!(f.se_status.label()));
            m.insert("log_lik".into(), json!(f.log_lik));
            m.insert("aic".into(), json!(row.aic));
            m.insert("bic".into(), json!(row.bic));
            m.insert("hqc".into(), json!(row.hqc));
            m.insert("converged".into(), json!(f.converged));
            m.insert("n_starts".into(), json!(f.n_starts_used));
            m.insert("best_start_index".into(), json!(f.best_start_index));
            m.insert("seed".into(), json!(opts.seed));
            Ok(m)
        })
        .collect()
}

fn fits_text(fits: &[FitResult]) -> String {
    let mut out = String::new();
    for f in fits {
        let status = if f.converged { "" } else { " (not converged)" };
        out.push_str(&format!("{}{status}: log_lik {} (n = {})\n", f.spec, sig6(f.log_lik), f.n_obs));
        let names = f.spec.param_names();
        let values = f.params.to_vec();
        for (i, name) in names.iter().enumerate() {
            let se = match &f.std_errors {
                Some(s) => sig6(s[i]),
                None => "-".into(),
            };
            out.push_str(&format!("  {name:<8} {:>12} ({se})\n", sig6(values[i])));
        }
        if let ModelParams::TMix(p) = &f.params {
            let dofs: Vec<String> = p.dofs().iter().map(|v| sig6(*v)).collect();
            out.push_str(&format!("  pinned nu: {}\n", dofs.join(", ")));
        }
    }
    out
}

fn file_label(spec: &ModelSpec) -> String {
    spec.label().chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect()
}

fn run_diagnose(
    sample: &GrowthSample,
    families: &[ModelSpec],
    opts: &FitOptions,
    cfg: &DiagnoseConfig,
    art: &mut Artifacts,
) -> Result<String> {
    let upper = empirical_log_rank(sample)?;
    let lower = empirical_log_corank(sample)?;
    art.write_with("empirical.csv", |w| write_series_csv(&[&upper, &lower], w))?;

    let mut summary = String::new();
    let mut tail_record = Map::new();
    tail_record.insert("record".into(), json!("tails"));
    tail_record.insert("sample".into(), json!(sample.label));
    tail_record.insert("upper_q".into(), json!(cfg.upper_q));
    tail_record.insert("lower_q".into(), json!(cfg.lower_q));
    tail_record.insert("rank_convention".into(), json!("ln(i), i = 1 at the extreme observation"));
    match fit_exponential_tails(sample, cfg.upper_q, cfg.lower_q) {
        Ok(tf) => {
            let tent = tent_profile(sample, &tf)?;
            tail_record.insert("status".into(), json!("ok"));
            tail_record.insert("c_u".into(), json!(tf.c_u));
            tail_record.insert("c_l".into(), json!(tf.c_l));
            tail_record.insert("g_m".into(), json!(tf.g_m));
            tail_record.insert("g_M".into(), json!(tf.g_M));
            tail_record.insert("n_u".into(), json!(tf.n_u));
            tail_record.insert("n_l".into(), json!(tf.n_l));
            tail_record.insert("upper_residual".into(), json!(tent.upper_residual));
            tail_record.insert("lower_residual".into(), json!(tent.lower_residual));
            art.write_with("tent.csv", |w| {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(["kind", "g", "log_rank"])?;
                for (kind, line) in [("tent_upper", &tent.upper_line), ("tent_lower", &tent.lower_line)] {
                    for &(g, r) in line.iter() {
                        c.write_record([kind, &g.to_string(), &r.to_string()])?;
                    }
                }
                c.flush()?;
                Ok(())
            })?;
            summary.push_str(&format!(
                "tails: c_u {} above {} (n_u = {}), c_l {} below {} (n_l = {}); residuals {} / {}\n",
                sig6(tf.c_u),
                sig6(tf.g_m),
                tf.n_u,
                sig6(tf.c_l),
                sig6(tf.g_M),
                tf.n_l,
                sig6(tent.upper_residual),
                sig6(tent.lower_residual)
            ));
        }
        Err(e @ (Error::InsufficientTailData { .. } | Error::DegenerateTail { .. })) => {
            tail_record.insert("status".into(), json!(e.class()));
            tail_record.insert("message".into(), json!(e.to_string()));
            summary.push_str(&format!("tails: {e}\n"));
        }
        Err(e) => return Err(e),
    }
    art.write_jsonl("tails.jsonl", &[tail_record])?;

    let title = |side: &str| format!("{} ({side})", sample.label);
    if families.is_empty() {
        art.write_text("rank.svg", &render_svg(&title("log-rank"), &upper, None, ""))?;
        art.write_text("corank.svg", &render_svg(&title("log-corank"), &lower, None, ""))?;
        return Ok(summary);
    }
    let fits = fit_all(sample, families, opts)?;
    art.write_jsonl("fits.jsonl", &fit_records(sample, &fits, opts)?)?;
    let grid = sample_grid(sample, cfg.grid_points);
    for f in &fits {
        let n = sample.len();
        let mu = model_log_rank(&f.spec, &f.params, &grid, n)?;
        let ml = model_log_corank(&f.spec, &f.params, &grid, n)?;
        let label = file_label(&f.spec);
        art.write_with(&format!("model_{label}.csv"), |w| write_series_csv(&[&mu, &ml], w))?;
        art.write_text(&format!("rank_{label}.svg"), &render_svg(&title("log-rank"), &upper, Some(&mu), &f.spec.label()))?;
        art.write_text(
            &format!("corank_{label}.svg"),
            &render_svg(&title("log-corank"), &lower, Some(&ml), &f.spec.label()),
        )?;
        summary.push_str(&format!("{}: log_lik {}, plots rank_{label}.svg and corank_{label}.svg\n", f.spec, sig6(f.log_lik)));
    }
    Ok(summary)
}

/// Entry point for the binary: parses, runs and reports. Failures print a
/// single `error: <class>: <message>` line on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match Cli::try_parse_from(args) {
        Ok(cli) => match RunConfig::from_cli(cli) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {}: {}", e.class(), one_line(&e.to_string()));
                return 2;
            }
        },
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", one_line(first.trim_start_matches("error: ")));
            return 2;
        }
    };
    match run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            0
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.class(), one_line(&e.to_string()));
            1
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
