//! The `triclock` command line.
//!
//! Every subcommand reads its options from flags, falling back to a flat
//! TOML file given with `--config` (keys are the long flag names with `-`
//! replaced by `_`). Relative output paths are resolved against
//! `$TRICLOCK_OUT_DIR` when it is set.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or validation failure
//! (including a `verify` run whose checks do not all pass).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use thiserror::Error;

use crate::analysis::{
    classify, heteroclinic_census, invariant_segments, known_fixed_points, AnalysisError,
};
use crate::basin::{
    default_max_iter, orbit, rasterize, rasterize_with_workers, BasinError, BasinLabel,
};
use crate::event::{run_cycle, write_trace_csv, write_trace_jsonl, ClockEnsemble, SimError};
use crate::io::{
    andronov_table, andronov_text_table, fixed_point_report, fixed_point_text_table, random_starts,
    render_portrait, segment_text_table, simulation_report, simulation_text_table, to_json,
    verify_report, Layer, PortraitData, PortraitError, PortraitSpec,
};
use crate::map::three_clock_step;
use crate::params::{CouplingParams, ParamError};
use crate::phase::PhasePoint;

/// Environment variable naming the base directory for relative output paths.
pub const OUT_DIR_ENV: &str = "TRICLOCK_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Usage(_) | CliError::Validation(_) => EXIT_USAGE,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Params(p) => p.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PortraitError> for CliError {
    fn from(e: PortraitError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<BasinError> for CliError {
    fn from(e: BasinError) -> Self {
        match e {
            BasinError::Io(e) => CliError::Io(e.to_string()),
            BasinError::Csv(e) => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(
    name = "triclock",
    version,
    about = "Phase-difference dynamics of three impact-coupled clocks"
)]
pub struct Cli {
    /// Flat TOML file supplying defaults for any option.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the three-clock map from (x, y).
    Step(StepArgs),
    /// Locate and classify the fixed points.
    FixedPoints(FixedPointArgs),
    /// Rasterize the basins of attraction.
    Basins(BasinArgs),
    /// Event-driven simulation of N clocks until they phase lock.
    Simulate(SimulateArgs),
    /// Check invariant segments, heteroclinics and Lyapunov scans.
    Verify(VerifyArgs),
    /// Iterate the isolated-clock return map.
    Andronov(AndronovArgs),
    /// Draw an SVG phase portrait.
    Portrait(PortraitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Svg,
    Bin,
}

impl Format {
    fn parse(s: &str) -> Result<Self, CliError> {
        <Format as ValueEnum>::from_str(s, true)
            .map_err(|_| CliError::Usage(format!("unknown format {s:?}")))
    }
}

#[derive(Debug, Args)]
pub struct StepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Number of iterates to print.
    #[arg(short = 'n', long)]
    pub n: Option<usize>,
    /// Angles are given in degrees.
    #[arg(long)]
    pub deg: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FixedPointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub seed_grid: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BasinArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Number of clocks N.
    #[arg(long)]
    pub clocks: Option<usize>,
    /// Explicit starting phases, comma separated (N values).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phases: Option<Vec<f64>>,
    /// Number of random starts when no phases are given.
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_cycles: Option<usize>,
    /// Write the kick events of the first run here (.csv or .jsonl).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Cycles recorded in the trace.
    #[arg(long)]
    pub trace_cycles: Option<usize>,
    #[arg(long)]
    pub deg: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Samples per invariant segment.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Lyapunov grid points per side.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AndronovArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PortraitArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Comma separated subset of basin_background, invariant_segments,
    /// heteroclinics, sample_orbits, fixed_points.
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<String>>,
    /// Basin resolution for the background layer.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Number of sample orbits.
    #[arg(long)]
    pub orbits: Option<usize>,
    /// Plot side in pixels.
    #[arg(long)]
    pub size: Option<u32>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Values from `--config`.
#[derive(Debug, Default)]
struct Config(toml::Table);

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if let Some((k, _)) = table.iter().find(|(_, v)| v.is_table()) {
            return Err(CliError::Usage(format!(
                "{}: config must be flat, but {k:?} is a table",
                path.display()
            )));
        }
        Ok(Config(table))
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => {
                // integers are accepted where floats are expected
                let v = match v {
                    toml::Value::Integer(i) if self.wants_float(key) => {
                        toml::Value::Float(*i as f64)
                    }
                    toml::Value::Array(a) if self.wants_float(key) => toml::Value::Array(
                        a.iter()
                            .map(|x| match x {
                                toml::Value::Integer(i) => toml::Value::Float(*i as f64),
                                o => o.clone(),
                            })
                            .collect(),
                    ),
                    other => other.clone(),
                };
                v.try_into()
                    .map(Some)
                    .map_err(|e| CliError::Usage(format!("config key {key:?}: {e}")))
            }
        }
    }

    fn wants_float(&self, key: &str) -> bool {
        matches!(
            key,
            "eps" | "x" | "y" | "tol" | "phases" | "mu" | "h" | "v0"
        )
    }

    fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    fn require<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        self.pick(flag, key)?.ok_or_else(|| {
            CliError::Usage(format!(
                "missing required option --{}",
                key.replace('_', "-")
            ))
        })
    }

    fn or<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }

    fn format(
        &self,
        flag: Option<Format>,
        default: Format,
        allowed: &[Format],
    ) -> Result<Format, CliError> {
        let f = match flag {
            Some(f) => f,
            None => match self.get::<String>("format")? {
                Some(s) => Format::parse(&s)?,
                None => default,
            },
        };
        if !allowed.contains(&f) {
            return Err(CliError::Usage(format!(
                "format {f:?} is not supported by this command"
            )));
        }
        Ok(f)
    }

    fn output(&self, flag: Option<PathBuf>) -> Result<Option<PathBuf>, CliError> {
        Ok(self.pick(flag, "output")?.map(|p| resolve_output(&p)))
    }
}

/// Relative paths are placed under `$TRICLOCK_OUT_DIR` when it is set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(io_err(dir))?;
            }
            fs::write(p, bytes).map_err(io_err(p))
        }
        None => out
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    to_json(v).map_err(|e| CliError::Io(e.to_string()))
}

/// Parse `args` (including the program name), run the command and return
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Run a parsed command; `Ok` carries the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Step(a) => cmd_step(a, &cfg, out),
        Command::FixedPoints(a) => cmd_fixed_points(a, &cfg, out),
        Command::Basins(a) => cmd_basins(a, &cfg, out),
        Command::Simulate(a) => cmd_simulate(a, &cfg, out),
        Command::Verify(a) => cmd_verify(a, &cfg, out),
        Command::Andronov(a) => cmd_andronov(a, &cfg, out),
        Command::Portrait(a) => cmd_portrait(a, &cfg, out),
    }
}

fn analysis_params(eps: f64) -> Result<CouplingParams, CliError> {
    let p = CouplingParams::new(eps);
    p.validate_for_analysis()?;
    Ok(p)
}

fn cmd_step(a: &StepArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    let deg = cfg.flag(a.deg, "deg")?;
    let conv = |v: f64| if deg { v.to_radians() } else { v };
    let x = conv(cfg.require(a.x, "x")?);
    let y = conv(cfg.require(a.y, "y")?);
    let eps: f64 = cfg.require(a.eps, "eps")?;
    let n: usize = cfg.require(a.n, "n")?;
    let format = cfg.format(
        a.format,
        Format::Csv,
        &[Format::Csv, Format::Json, Format::Text],
    )?;
    let output = cfg.output(a.output.clone())?;

    // iterating the map is pure arithmetic, so only basic sanity is enforced
    let params = CouplingParams::new(eps);
    params.validate()?;
    let p = PhasePoint::new(x, y);
    if !p.in_square(0.0) {
        return Err(CliError::Validation(format!(
            "{p} lies outside S = [0, 2π]²"
        )));
    }
    let mut pts = Vec::with_capacity(n);
    let mut q = p;
    for _ in 0..n {
        q = three_clock_step(q, &params);
        pts.push(q);
    }
    let text = match format {
        Format::Json => json(&pts)?,
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["x", "y"]).map_err(io)?;
            for q in &pts {
                w.write_record([q.x.to_string(), q.y.to_string()])
                    .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
                .expect("csv output is utf-8")
        }
    };
    emit(out, output.as_deref(), text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_fixed_points(
    a: &FixedPointArgs,
    cfg: &Config,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let params = analysis_params(cfg.require(a.eps, "eps")?)?;
    let grid = cfg.or(a.seed_grid, "seed_grid", 50)?;
    let format = cfg.format(
        a.format,
        Format::Text,
        &[Format::Text, Format::Json, Format::Csv],
    )?;
    let output = cfg.output(a.output.clone())?;
    let report = fixed_point_report(&params, grid)?;
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["x", "y", "lambda_1", "lambda_2", "class", "residual"])
                .map_err(io)?;
            for r in &report.fixed_points {
                let class = serde_json::to_value(r.class)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                w.write_record([
                    r.location.x.to_string(),
                    r.location.y.to_string(),
                    r.eigenvalues[0].to_string(),
                    r.eigenvalues[1].to_string(),
                    class,
                    r.residual.to_string(),
                ])
                .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
                .expect("csv output is utf-8")
        }
        _ => fixed_point_text_table(&report),
    };
    emit(out, output.as_deref(), text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_basins(a: &BasinArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = analysis_params(cfg.require(a.eps, "eps")?)?;
    let resolution = cfg.or(a.resolution, "resolution", 200)?;
    let tol = cfg.or(a.tol, "tol", crate::basin::DEFAULT_TOL)?;
    let max_iter = cfg.or(a.max_iter, "max_iter", default_max_iter(params.epsilon))?;
    let workers: Option<usize> = cfg.pick(a.workers, "workers")?;
    let format = cfg.format(
        a.format,
        Format::Csv,
        &[Format::Csv, Format::Json, Format::Bin, Format::Svg],
    )?;
    let output = cfg.output(a.output.clone())?;

    let grid = match workers {
        Some(w) => rasterize_with_workers(resolution, &params, tol, max_iter, w)?,
        None => rasterize(resolution, &params, tol, max_iter)?,
    };
    let bytes = match format {
        Format::Json => json(&grid)?.into_bytes(),
        Format::Bin => {
            let mut b = Vec::new();
            grid.write_binary(&mut b)?;
            b
        }
        Format::Svg => {
            let fixed_points = known_fixed_points()
                .into_iter()
                .map(|p| classify(p, &params))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .filter(|r| r.class == crate::analysis::StabilityClass::Attractor)
                .collect();
            let spec = PortraitSpec {
                layers: vec![Layer::BasinBackground, Layer::FixedPoints],
                ..Default::default()
            };
            let data = PortraitData {
                fixed_points,
                basin: Some(grid.clone()),
                ..Default::default()
            };
            render_portrait(&spec, &data)?.into_bytes()
        }
        _ => {
            let mut b = Vec::new();
            grid.write_labels_csv(&mut b)?;
            b
        }
    };
    emit(out, output.as_deref(), &bytes)?;
    if output.is_some() {
        let _ = writeln!(
            out,
            "upper {} lower {} boundary {} unresolved {}",
            grid.count(BasinLabel::Upper),
            grid.count(BasinLabel::Lower),
            grid.count(BasinLabel::Boundary),
            grid.count(BasinLabel::Unresolved)
        );
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(a: &SimulateArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    // the exact simulator needs no homeomorphism bound, only ε ≥ 0
    let eps: f64 = cfg.require(a.eps, "eps")?;
    let params = CouplingParams::new(eps);
    params.validate()?;
    let deg = cfg.flag(a.deg, "deg")?;
    let phases: Option<Vec<f64>> = cfg.pick(a.phases.clone(), "phases")?.map(|v: Vec<f64>| {
        v.into_iter()
            .map(|p| if deg { p.to_radians() } else { p })
            .collect()
    });
    let clocks: Option<usize> = cfg.pick(a.clocks, "clocks")?;
    let n = match (&phases, clocks) {
        (Some(p), Some(n)) if p.len() != n => {
            return Err(CliError::Usage(format!(
                "--phases has {} values but --clocks is {n}",
                p.len()
            )))
        }
        (Some(p), _) => p.len(),
        (None, Some(n)) => n,
        (None, None) => 3,
    };
    if n < 2 {
        return Err(SimError::TooFewClocks(n).into());
    }
    let tol = cfg.or(a.tol, "tol", 1e-6)?;
    let max_cycles = cfg.or(a.max_cycles, "max_cycles", 2000)?;
    let format = cfg.format(a.format, Format::Text, &[Format::Text, Format::Json])?;
    let output = cfg.output(a.output.clone())?;
    let trace: Option<PathBuf> = cfg
        .pick(a.trace.clone(), "trace")?
        .map(|p| resolve_output(&p));
    let trace_cycles = cfg.or(a.trace_cycles, "trace_cycles", 20)?;

    let starts = match phases {
        Some(p) => vec![p],
        None => {
            let count = cfg.or(a.starts, "starts", 100)?;
            let seed = cfg.or(a.seed, "seed", 1)?;
            random_starts(n, count, seed)
        }
    };
    let report = simulation_report(&starts, &params, tol, max_cycles)?;

    if let (Some(path), Some(first)) = (trace, starts.first()) {
        let mut state = ClockEnsemble::new(first.clone(), params)?.rotated_to_reference();
        let mut traces = Vec::with_capacity(trace_cycles);
        for k in 0..trace_cycles {
            let t = run_cycle(&state, k)?;
            state = t.end_state.clone();
            traces.push(t);
        }
        let mut buf = Vec::new();
        let jsonl = path
            .extension()
            .is_some_and(|e| e == "jsonl" || e == "json");
        if jsonl {
            write_trace_jsonl(&mut buf, &traces)
        } else {
            write_trace_csv(&mut buf, &traces)
        }
        .map_err(|e| CliError::Io(e.to_string()))?;
        emit(out, Some(&path), &buf)?;
    }

    let text = match format {
        Format::Json => json(&report)?,
        _ => simulation_text_table(&report),
    };
    emit(out, output.as_deref(), text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = analysis_params(cfg.require(a.eps, "eps")?)?;
    let samples = cfg.or(a.samples, "samples", 1000)?;
    let grid = cfg.or(a.grid, "grid", 300)?;
    let max_iter = cfg.or(
        a.max_iter,
        "max_iter",
        20 * default_max_iter(params.epsilon),
    )?;
    let format = cfg.format(a.format, Format::Text, &[Format::Text, Format::Json])?;
    let output = cfg.output(a.output.clone())?;
    let r = verify_report(&params, samples, grid, max_iter)?;
    let text = match format {
        Format::Json => json(&r)?,
        _ => {
            let mut s = segment_text_table(&r.segments);
            s.push_str(&format!(
                "heteroclinics: sa {} rs {} ra {} ({} seeds outside S discarded)\n",
                r.sa, r.rs, r.ra, r.discarded_seeds
            ));
            for l in &r.lyapunov {
                s.push_str(&format!(
                    "lyapunov {:?}: grid {} max DF {:.3e}, far max {:.3e}, {} near-zero points  {}\n",
                    l.region,
                    l.grid_resolution,
                    l.max_df,
                    l.max_df_far,
                    l.zero_set.len(),
                    if l.passed { "pass" } else { "FAIL" }
                ));
            }
            s.push_str(if r.passed {
                "all checks pass\n"
            } else {
                "some checks FAILED\n"
            });
            s
        }
    };
    emit(out, output.as_deref(), text.as_bytes())?;
    Ok(if r.passed { EXIT_OK } else { EXIT_USAGE })
}

fn cmd_andronov(a: &AndronovArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    let mu: f64 = cfg.require(a.mu, "mu")?;
    let h: f64 = cfg.require(a.h, "h")?;
    let v0: f64 = cfg.require(a.v0, "v0")?;
    let steps = cfg.or(a.steps, "steps", 200)?;
    let format = cfg.format(
        a.format,
        Format::Text,
        &[Format::Text, Format::Csv, Format::Json],
    )?;
    let output = cfg.output(a.output.clone())?;
    let params = CouplingParams::default().with_clock(mu, h);
    let rows =
        andronov_table(v0, &params, steps).map_err(|e| CliError::Validation(e.to_string()))?;
    let text = match format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut s = String::from("n,v,deviation\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", r.n, r.v, r.deviation));
            }
            s
        }
        _ => andronov_text_table(&rows),
    };
    emit(out, output.as_deref(), text.as_bytes())?;
    Ok(EXIT_OK)
}

/// Starting points of the sample orbits: evenly spread on a ring around the
/// centre of `S`, skipping the diagonal.
fn orbit_seeds(count: usize) -> Vec<PhasePoint> {
    let c = std::f64::consts::PI;
    (0..count)
        .map(|k| {
            let a = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64 + 0.1;
            PhasePoint::new(c + 2.6 * a.cos(), c + 2.6 * a.sin())
        })
        .collect()
}

fn cmd_portrait(a: &PortraitArgs, cfg: &Config, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = analysis_params(cfg.require(a.eps, "eps")?)?;
    let layers: Vec<Layer> = match cfg.pick(a.layers.clone(), "layers")? {
        Some(names) => names
            .iter()
            .map(|n| n.parse::<Layer>())
            .collect::<Result<_, _>>()?,
        None => vec![
            Layer::InvariantSegments,
            Layer::Heteroclinics,
            Layer::SampleOrbits,
            Layer::FixedPoints,
        ],
    };
    let resolution = cfg.or(a.resolution, "resolution", 200)?;
    let n_orbits = cfg.or(a.orbits, "orbits", 12)?;
    let size = cfg.or(a.size, "size", 600)?;
    let output = cfg.output(a.output.clone())?;

    let mut data = PortraitData::default();
    let max_iter = 20 * default_max_iter(params.epsilon);
    for l in &layers {
        match l {
            Layer::FixedPoints => {
                data.fixed_points = known_fixed_points()
                    .into_iter()
                    .map(|p| classify(p, &params))
                    .collect::<Result<_, _>>()?
            }
            Layer::Heteroclinics => {
                data.heteroclinics = heteroclinic_census(&params, max_iter)?.orbits
            }
            Layer::InvariantSegments => data.segments = invariant_segments(),
            Layer::BasinBackground => {
                data.basin = Some(rasterize(
                    resolution,
                    &params,
                    crate::basin::DEFAULT_TOL,
                    default_max_iter(params.epsilon),
                )?)
            }
            Layer::SampleOrbits => {
                data.orbits = orbit_seeds(n_orbits)
                    .into_iter()
                    .filter(|p| p.in_square(0.0))
                    .map(|p| orbit(p, &params, default_max_iter(params.epsilon)))
                    .collect()
            }
        }
    }
    let spec = PortraitSpec {
        layers,
        size,
        ..Default::default()
    };
    let svg = render_portrait(&spec, &data)?;
    emit(out, output.as_deref(), svg.as_bytes())?;
    Ok(EXIT_OK)
}
