//! Command-line front end. The `tugwar` binary is a thin wrapper around
//! [`run`].
//!
//! Exit codes: 0 on success, 1 for usage, configuration and I/O errors, 2
//! when two independent stability criteria disagree.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{load_config, ConfigFile};
use crate::dynamics::{basin_sample, integrate, IntegrateOptions, DEFAULT_DT, DEFAULT_T_END};
use crate::error::Error;
use crate::model::TugOfWarConfig;
use crate::reduction::{h_eval, Compactification, Curve};
use crate::steady::{
    analyze, find_roots, scan_parameter, RootOptions, ScanParameter, ScanResult, StationaryState,
    DEFAULT_GRID_POINTS,
};
use crate::stochastic::{ensemble_stats, gillespie_run, MotorState, SimOptions};

#[derive(Debug, Parser)]
#[command(
    name = "tugwar",
    version,
    about = "Stationary states and stability of the tug-of-war cargo model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of all stationary states with their stability.
    Roots(RootsArgs),
    /// Samples h, w or ŵ on a grid (plot data).
    Curve(CurveArgs),
    /// Sweeps one parameter and reports changes in the number of stable states.
    Scan(ScanArgs),
    /// Integrates the mean-field equations from one starting point.
    Trace(TraceArgs),
    /// Tallies where trajectories from quasi-random starts end up.
    Basins(BasinArgs),
    /// Stochastic simulation of the finite-N motor numbers.
    Gillespie(GillespieArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichCurve {
    W,
    What,
    H,
}

impl From<WhichCurve> for Curve {
    fn from(w: WhichCurve) -> Self {
        match w {
            WhichCurve::W => Curve::W,
            WhichCurve::What => Curve::WHat,
            WhichCurve::H => Curve::H,
        }
    }
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid points for the sign-change search.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "what")]
    pub which: WhichCurve,
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    /// Upper end of the θ axis for `--which h`.
    #[arg(long, default_value_t = 10.0)]
    pub theta_max: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub config: PathBuf,
    /// `nu`, a config key such as `V_F_plus`, or a bare field (`V_F`) for
    /// both species.
    #[arg(long)]
    pub param: ScanParameter,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid: usize,
    /// Prefix for `<out>.csv` and `<out>.json`; without it the CSV goes to
    /// stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub y0: f64,
    #[arg(long)]
    pub z0: f64,
    #[arg(long, default_value_t = DEFAULT_T_END)]
    pub t_end: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    /// Write every n-th step.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    /// Keep integrating after the flow has converged.
    #[arg(long)]
    pub no_stop: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BasinArgs {
    pub config: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_T_END)]
    pub t_end: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GillespieArgs {
    pub config: PathBuf,
    #[arg(long, default_value_t = 1000.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub n_plus0: u32,
    #[arg(long, default_value_t = 0)]
    pub n_minus0: u32,
    /// Independent runs; more than one writes ensemble statistics instead
    /// of a single run summary.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Event log CSV (single runs only).
    #[arg(long)]
    pub events: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Provenance record written next to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub args: Vec<String>,
    pub config_path: PathBuf,
    pub config: ConfigFile,
    pub seeds: Vec<u64>,
    pub outputs: Vec<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bifurcations: Option<Vec<f64>>,
    /// Seconds since the Unix epoch.
    pub created: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Model(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Model(e) if e.is_consistency() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Io(m) => write!(f, "{m}"),
            Failure::Model(e) => write!(f, "{e}"),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = match &cli.command {
        Command::Roots(a) => cmd_roots(a, &echo),
        Command::Curve(a) => cmd_curve(a, &echo),
        Command::Scan(a) => cmd_scan(a, &echo),
        Command::Trace(a) => cmd_trace(a, &echo),
        Command::Basins(a) => cmd_basins(a, &echo),
        Command::Gillespie(a) => cmd_gillespie(a, &echo),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("tugwar: {f}");
            f.exit_code()
        }
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_or_print(out: Option<&Path>, content: &str) -> CmdResult {
    match out {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

struct Context<'a> {
    command: &'static str,
    args: &'a [String],
    config_path: &'a Path,
    cfg: TugOfWarConfig,
}

fn context<'a>(
    command: &'static str,
    args: &'a [String],
    config_path: &'a Path,
) -> std::result::Result<Context<'a>, Failure> {
    Ok(Context {
        command,
        args,
        config_path,
        cfg: load_config(config_path)?,
    })
}

impl Context<'_> {
    /// Writes the manifest to `<anchor>.manifest.json`, or to stderr when
    /// the output went to stdout.
    fn manifest(
        &self,
        anchor: Option<&Path>,
        outputs: Vec<PathBuf>,
        seeds: Vec<u64>,
        bifurcations: Option<Vec<f64>>,
    ) -> CmdResult {
        let created = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.into(),
            args: self.args.to_vec(),
            config_path: self.config_path.to_path_buf(),
            config: ConfigFile::from(&self.cfg),
            seeds,
            outputs,
            bifurcations,
            created,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        match anchor {
            Some(a) => write_or_print(Some(&with_suffix(a, ".manifest.json")), &text),
            None => {
                eprint!("{text}");
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

pub const STATE_COLUMNS: &str = "theta,y,z,velocity,force,h_prime,stability";

fn state_row(s: &StationaryState) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_f64(s.theta),
        fmt_f64(s.y),
        fmt_f64(s.z),
        fmt_f64(s.velocity),
        fmt_f64(s.force),
        fmt_f64(s.h_prime),
        s.stability
    )
}

/// Stationary-state table as CSV.
pub fn states_csv(states: &[StationaryState]) -> String {
    let mut out = format!("{STATE_COLUMNS}\n");
    for s in states {
        out.push_str(&state_row(s));
        out.push('\n');
    }
    out
}

/// One row per stationary state at each scanned value.
pub fn scan_csv(scan: &ScanResult) -> String {
    let mut out = format!("{},stable_count,{STATE_COLUMNS}\n", scan.parameter);
    for p in &scan.points {
        for s in &p.states {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f64(p.value),
                p.stable_count,
                state_row(s)
            );
        }
    }
    out
}

fn root_options(grid: usize) -> std::result::Result<RootOptions, Failure> {
    if grid < 2 {
        return Err(Failure::Usage("--grid must be at least 2".into()));
    }
    Ok(RootOptions {
        grid_points: grid,
        ..RootOptions::default()
    })
}

fn cmd_roots(a: &RootsArgs, args: &[String]) -> CmdResult {
    let ctx = context("roots", args, &a.config)?;
    let analysis = analyze(&ctx.cfg, &root_options(a.grid)?)?;
    for w in &analysis.roots.warnings {
        eprintln!("tugwar: warning: {w}");
    }
    let text = match a.format {
        Format::Csv => states_csv(&analysis.states),
        Format::Json => to_json(&analysis.states),
    };
    write_or_print(a.out.as_deref(), &text)?;
    ctx.manifest(
        a.out.as_deref(),
        a.out.iter().cloned().collect(),
        vec![],
        None,
    )
}

/// Abscissae for a curve: a uniform grid plus one point between each pair of
/// neighbouring roots, so every simple root shows up as a sign change.
fn curve_abscissae(lo: f64, hi: f64, grid: usize, roots: &[f64]) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64)
        .collect();
    let inside: Vec<f64> = roots
        .iter()
        .copied()
        .filter(|r| *r > lo && *r < hi)
        .collect();
    xs.extend(inside.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn cmd_curve(a: &CurveArgs, args: &[String]) -> CmdResult {
    if a.grid < 2 {
        return Err(Failure::Usage("--grid must be at least 2".into()));
    }
    let ctx = context("curve", args, &a.config)?;
    let cfg = &ctx.cfg;
    let curve = Curve::from(a.which);
    let roots = find_roots(cfg, &RootOptions::default())?.roots;

    let mut text = String::from("vartheta_or_theta,value\n");
    match Compactification::for_curve(curve, cfg) {
        Some(map) => {
            let mapped: Vec<f64> = roots.iter().map(|&t| map.to_vartheta(t)).collect();
            for v in curve_abscissae(0.0, 2.0 - 1e-9, a.grid, &mapped) {
                let _ = writeln!(text, "{},{}", fmt_f64(v), fmt_f64(map.value(v, cfg)?));
            }
        }
        None => {
            if !(a.theta_max > 0.0 && a.theta_max.is_finite()) {
                return Err(Failure::Usage("--theta-max must be positive".into()));
            }
            for t in curve_abscissae(0.0, a.theta_max, a.grid, &roots) {
                let _ = writeln!(text, "{},{}", fmt_f64(t), fmt_f64(h_eval(t, cfg)?));
            }
        }
    }
    write_or_print(a.out.as_deref(), &text)?;
    ctx.manifest(
        a.out.as_deref(),
        a.out.iter().cloned().collect(),
        vec![],
        None,
    )
}

fn cmd_scan(a: &ScanArgs, args: &[String]) -> CmdResult {
    if !(a.from.is_finite() && a.to.is_finite() && a.from < a.to) || a.steps < 2 {
        return Err(Failure::Usage(format!(
            "empty scan range: need --from < --to and --steps >= 2 (got {} .. {}, {} steps)",
            a.from, a.to, a.steps
        )));
    }
    let ctx = context("scan", args, &a.config)?;
    let values: Vec<f64> = (0..a.steps)
        .map(|i| a.from + (a.to - a.from) * i as f64 / (a.steps - 1) as f64)
        .collect();
    let scan = scan_parameter(&ctx.cfg, a.param, &values, &root_options(a.grid)?)?;
    let refined = Some(scan.bifurcations.iter().map(|b| b.refined_value).collect());
    match &a.out {
        Some(prefix) => {
            let csv = with_suffix(prefix, ".csv");
            let json = with_suffix(prefix, ".json");
            write_or_print(Some(&csv), &scan_csv(&scan))?;
            write_or_print(Some(&json), &to_json(&scan))?;
            ctx.manifest(Some(prefix), vec![csv, json], vec![], refined)
        }
        None => {
            write_or_print(None, &scan_csv(&scan))?;
            ctx.manifest(None, vec![], vec![], refined)
        }
    }
}

fn cmd_trace(a: &TraceArgs, args: &[String]) -> CmdResult {
    let ctx = context("trace", args, &a.config)?;
    let opts = IntegrateOptions {
        t_end: a.t_end,
        dt: a.dt,
        stride: a.stride,
        stop_on_convergence: !a.no_stop,
    };
    let traj = integrate(a.y0, a.z0, &ctx.cfg, &opts)?;
    let mut text = String::from("t,y,z\n");
    for (t, p) in traj.times.iter().zip(&traj.states) {
        let _ = writeln!(text, "{},{},{}", fmt_f64(*t), fmt_f64(p.y), fmt_f64(p.z));
    }
    write_or_print(a.out.as_deref(), &text)?;
    ctx.manifest(
        a.out.as_deref(),
        a.out.iter().cloned().collect(),
        vec![],
        None,
    )
}

fn cmd_basins(a: &BasinArgs, args: &[String]) -> CmdResult {
    let ctx = context("basins", args, &a.config)?;
    let opts = IntegrateOptions {
        t_end: a.t_end,
        dt: a.dt,
        ..IntegrateOptions::default()
    };
    let hist = basin_sample(&ctx.cfg, a.starts, a.seed, &opts)?;
    write_or_print(a.out.as_deref(), &to_json(&hist))?;
    ctx.manifest(
        a.out.as_deref(),
        a.out.iter().cloned().collect(),
        vec![a.seed],
        None,
    )
}

fn cmd_gillespie(a: &GillespieArgs, args: &[String]) -> CmdResult {
    if a.runs == 0 {
        return Err(Failure::Usage("--runs must be at least 1".into()));
    }
    if a.runs > 1 && a.events.is_some() {
        return Err(Failure::Usage("--events needs a single run".into()));
    }
    let ctx = context("gillespie", args, &a.config)?;
    let initial = MotorState::new(a.n_plus0, a.n_minus0);
    let mut outputs: Vec<PathBuf> = a.out.iter().cloned().collect();
    let summary = if a.runs == 1 {
        let rec = gillespie_run(
            &ctx.cfg,
            &SimOptions {
                t_end: a.t_end,
                seed: a.seed,
                initial,
                record_events: a.events.is_some(),
            },
        )?;
        if let (Some(path), Some(events)) = (&a.events, &rec.events) {
            let mut text = String::from("t,n_plus,n_minus\n");
            for e in events {
                let _ = writeln!(text, "{},{},{}", fmt_f64(e.t), e.n_plus, e.n_minus);
            }
            write_or_print(Some(path), &text)?;
            outputs.push(path.clone());
        }
        to_json(&rec)
    } else {
        to_json(&ensemble_stats(&ctx.cfg, a.t_end, a.runs, a.seed, initial)?)
    };
    write_or_print(a.out.as_deref(), &summary)?;
    ctx.manifest(a.out.as_deref(), outputs, vec![a.seed], None)
}
