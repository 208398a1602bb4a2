//! `robertson` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use robertson_core::analysis::{comparison_settings, compare, grid_axis, timeseries_export, DEFAULT_PER_DECADE};
use robertson_core::model::{reduce, FullSystem, ReducedSystem};
use robertson_core::orbits::{singular_orbit, DEFAULT_POINTS};
use robertson_core::{
    classify, integrate, FullState, RateConstants, Regime, RegimeConfig, ScaledParams, SolverSettings,
};

use crate::format::fmt_f64;
use crate::parallel;
use crate::report::{ComparisonJson, ErrorJson};
use crate::tables;

#[derive(Debug, Parser)]
#[command(name = "robertson", version, about = "Multi-parameter singular perturbation analysis of Robertson kinetics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the full or the planar system and write a log-time series.
    Simulate(SimulateArgs),
    /// Print the regime of (eps1, eps2).
    Classify(ClassifyArgs),
    /// Write the singular orbit of a regime.
    Orbit(OrbitArgs),
    /// Compare the orbit through (0, 0) with the singular orbit.
    Compare(CompareArgs),
    /// Convergence study along a path with one fixed chart coordinate.
    Study(StudyArgs),
    /// Regime sweep over a grid of (eps1, eps2).
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RegimeOpts {
    #[arg(long, default_value_t = 1.0)]
    pub beta1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta2: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub beta3: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
}

impl RegimeOpts {
    fn config(&self) -> robertson_core::Result<RegimeConfig> {
        RegimeConfig::new(self.beta1, self.beta2, self.beta3, self.delta)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverOpts {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
}

impl SolverOpts {
    fn settings(&self, base: SolverSettings) -> SolverSettings {
        let rel = self.rel_tol.unwrap_or(base.rel_tol);
        let abs = self.abs_tol.unwrap_or(base.abs_tol[0]);
        let mut s = SolverSettings::with_tolerances(rel, abs);
        s.max_steps = self.max_steps.unwrap_or(base.max_steps);
        s
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["classic", "rates", "eps"])))]
pub struct SimulateArgs {
    /// Classical rates (k1, k2, k3) = (4e-2, 3e7, 1e4) from (1, 0, 0).
    #[arg(long)]
    pub classic: bool,
    /// Full system with these rates from (1, 0, 0).
    #[arg(long, num_args = 3, value_names = ["K1", "K2", "K3"], allow_negative_numbers = true)]
    pub rates: Option<Vec<f64>>,
    /// Planar system in fast time from (y, z) = (0, 0).
    #[arg(long, num_args = 2, value_names = ["EPS1", "EPS2"], allow_negative_numbers = true)]
    pub eps: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0, requires = "eps")]
    pub c: f64,
    #[arg(long, default_value_t = 1e6)]
    pub t_end: f64,
    #[arg(long, default_value_t = DEFAULT_PER_DECADE)]
    pub per_decade: usize,
    #[command(flatten)]
    pub solver: SolverOpts,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub eps2: f64,
    #[command(flatten)]
    pub regime: RegimeOpts,
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    match Regime::parse(s) {
        Some(r) if r.is_region() => Ok(r),
        _ => Err(format!("expected one of b2, b11, b12, b3, got '{s}'")),
    }
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, value_parser = parse_regime)]
    pub regime: Regime,
    /// eps2~ for b2 and b12, eps21 for b11, eps1~ for b3.
    #[arg(long)]
    pub chart_param: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("params").required(true).args(["eps1", "rates"])))]
pub struct CompareArgs {
    #[arg(long, requires = "eps2", allow_negative_numbers = true)]
    pub eps1: Option<f64>,
    #[arg(long, requires = "eps1", allow_negative_numbers = true)]
    pub eps2: Option<f64>,
    #[arg(long, default_value_t = 1.0, conflicts_with = "rates")]
    pub c: f64,
    /// Rates instead of scaled parameters, initial state (1, 0, 0).
    #[arg(long, num_args = 3, value_names = ["K1", "K2", "K3"], conflicts_with = "eps1")]
    pub rates: Option<Vec<f64>>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[command(flatten)]
    pub regime: RegimeOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long, value_parser = parse_regime)]
    pub regime: Regime,
    #[arg(long)]
    pub fixed_coord: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub r_seq: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[command(flatten)]
    pub regime_opts: RegimeOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
    #[arg(long)]
    pub out: PathBuf,
}

/// `A:B:N`, geometric when both ends are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub n: usize,
}

impl std::str::FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected A:B:N, got '{s}'"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let n: usize = n.trim().parse().map_err(|e| format!("'{n}': {e}"))?;
        if n == 0 {
            return Err("N must be at least 1".into());
        }
        Ok(Range { from: num(a)?, to: num(b)?, n })
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub eps1_range: Range,
    #[arg(long)]
    pub eps2_range: Range,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub regime: RegimeOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runtime failure: kind and message for the error body.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl From<robertson_core::Error> for Failure {
    fn from(e: robertson_core::Error) -> Self {
        Self { kind: e.kind().into(), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { kind: "Io".into(), message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self { kind: "Io".into(), message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self { kind: "Io".into(), message: e.to_string() }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure { kind: "Io".into(), message: format!("{}: {e}", path.display()) })
}

fn rates_from(v: &[f64]) -> robertson_core::Result<RateConstants> {
    RateConstants::new(v[0], v[1], v[2])
}

fn simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let settings = a.solver.settings(SolverSettings::default());
    let traj = if let Some(eps) = &a.eps {
        let p = ScaledParams::new(eps[0], eps[1], a.c)?;
        integrate(&ReducedSystem { params: p }, &[0.0, 0.0], (0.0, a.t_end), &settings, &[])?
    } else {
        let rates = match &a.rates {
            Some(v) => rates_from(v)?,
            None => RateConstants::CLASSICAL,
        };
        let y0 = FullState::CLASSICAL_INITIAL.to_array();
        integrate(&FullSystem { rates }, &y0, (0.0, a.t_end), &settings, &[])?
    };
    let rows = timeseries_export(&traj, a.per_decade);
    tables::write_timeseries(create(&a.out)?, &rows)?;
    Ok(())
}

fn classify_cmd(a: &ClassifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = a.regime.config()?;
    if !(a.eps1 >= 0.0 && a.eps2 >= 0.0) {
        return Err(robertson_core::Error::InvalidArgument(format!(
            "eps1, eps2 must be non-negative, got ({}, {})",
            a.eps1, a.eps2
        ))
        .into());
    }
    writeln!(out, "{}", classify(a.eps1, a.eps2, &cfg))?;
    Ok(())
}

fn orbit_cmd(a: &OrbitArgs) -> Result<(), Failure> {
    let orbit = singular_orbit(a.regime, a.chart_param, a.c, a.points)?;
    tables::write_orbit(create(&a.out)?, &orbit)?;
    Ok(())
}

fn compare_cmd(a: &CompareArgs) -> Result<(), Failure> {
    let cfg = a.regime.config()?;
    let settings = a.solver.settings(comparison_settings());
    let (p, rates) = match &a.rates {
        Some(v) => {
            let k = rates_from(v)?;
            (reduce(k, FullState::CLASSICAL_INITIAL).0, Some(k))
        }
        None => (ScaledParams::new(a.eps1.unwrap_or(0.0), a.eps2.unwrap_or(0.0), a.c)?, None),
    };
    let report = compare(&p, rates, &cfg, &settings, a.points)?;
    let mut f = create(&a.out)?;
    if a.json {
        serde_json::to_writer_pretty(&mut f, &ComparisonJson::from(&report))?;
        writeln!(f)?;
    } else {
        tables::write_comparison(&mut f, &report)?;
    }
    f.flush()?;
    Ok(())
}

fn study_cmd(a: &StudyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = a.regime_opts.config()?;
    let settings = a.solver.settings(comparison_settings());
    let study = parallel::convergence_study(a.regime, a.fixed_coord, &a.r_seq, a.c, &cfg, &settings, a.points)?;
    tables::write_study(create(&a.out)?, &study)?;
    let (slope, band) = study.fit.map_or((f64::NAN, f64::NAN), |f| (f.slope, f.half_width));
    writeln!(
        out,
        "{} fixed={} slope={} band={} monotone={} {}",
        study.regime,
        fmt_f64(study.fixed),
        fmt_f64(slope),
        fmt_f64(band),
        study.monotone,
        if study.pass { "PASS" } else { "FAIL" }
    )?;
    Ok(())
}

fn sweep_cmd(a: &SweepArgs) -> Result<(), Failure> {
    let cfg = a.regime.config()?;
    let settings = a.solver.settings(SolverSettings::default());
    let e1 = grid_axis(a.eps1_range.from, a.eps1_range.to, a.eps1_range.n);
    let e2 = grid_axis(a.eps2_range.from, a.eps2_range.to, a.eps2_range.n);
    let rows = parallel::sweep(&e1, &e2, a.c, &cfg, &settings);
    tables::write_sweep(create(&a.out)?, &rows)?;
    Ok(())
}

/// Runs the command line with explicit output streams; returns the exit code
/// (0 success, 1 runtime failure, 2 usage error).
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Classify(a) => classify_cmd(a, out),
        Command::Orbit(a) => orbit_cmd(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Study(a) => study_cmd(a, out),
        Command::Sweep(a) => sweep_cmd(a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let body = ErrorJson::new(&f.kind, f.message);
            let _ = writeln!(err, "{}", serde_json::to_string(&body).unwrap_or_default());
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
