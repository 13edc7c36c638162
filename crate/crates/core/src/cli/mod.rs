//! The `dicke` command line: grid sweeps, witness scans, oracle comparisons, scaling fits
//! and the critical line, all written as CSV.
//!
//! Rows are computed in parallel and written in grid order, so the output depends only on
//! the configuration.

pub mod config;
pub mod output;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{critical_temperature, critical_temperature_standard, ModelParams, PhaseLabel};
use crate::numerics::QuadratureSpec;
use crate::oracle::{exact_ground_state, exact_moments, exact_overlap, exact_thermal_state, split_log_trace, suggested_cutoff};
use crate::separable::SeparableState;
use crate::thermal::{log_partition, overlap_finite_t, thermal_jz, thermal_moments, OverlapFactor, ThermalPoint};
use crate::witness::{self, MomentSet, WitnessReport};
use crate::zerotemp::{closed_form_overlap_normal, evaluate_point, scaling_fit, Cutoffs, ZeroTPoint};

pub use config::{Axis, Config};
pub use output::{format_float, Table};

#[derive(Debug, Parser)]
#[command(name = "dicke", version, about = "Overlap with the separable reference state for the Dicke model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override one key, e.g. `--set model.n_atoms=40`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    /// CSV destination (overrides output.csv). Standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (overrides numerics.threads; 0 = all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Ground-state Δ, ⟨J_z⟩/N, purity and a over the λ grid for each N.
    SweepZeroT,
    /// Thermal Δ, a and ⟨J_z⟩/N over the (λ, T) grid with the T_c(λ) line.
    SweepFiniteT,
    /// Spin-squeezing inequality values over a zero- or finite-temperature grid.
    Witness,
    /// Pipeline values next to exact diagonalization.
    OracleCompare,
    /// Fit of −ln Δ against −ln(1 − λ/λ_c) below λ_c.
    ScalingFit,
    /// λ_c and the T_c(λ) table.
    Critical,
}

/// What a command produced: a table and, for some commands, a text report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub report: Option<String>,
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: Config,
    pub omega: f64,
    pub omega0: f64,
    pub n_atoms: Vec<usize>,
    pub cutoffs: Cutoffs,
    pub quad: QuadratureSpec,
    pub threads: usize,
    pub precision: usize,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn from_args(common: &CommonArgs) -> Result<Self> {
        let mut config = match &common.config {
            Some(path) => Config::from_file(path)?,
            None => Config::default(),
        };
        for s in &common.set {
            config.apply_override(s)?;
        }
        let mut settings = Self::from_config(config)?;
        if let Some(t) = common.threads {
            settings.threads = t;
        }
        if common.out.is_some() {
            settings.out = common.out.clone();
        }
        Ok(settings)
    }

    pub fn from_config(config: Config) -> Result<Self> {
        let omega = config.f64("model.omega")?;
        let omega0 = config.f64("model.omega0")?;
        let n_atoms: Vec<usize> = config.list("model.n_atoms")?;
        if n_atoms.is_empty() {
            return Err(config.error("model.n_atoms", "at least one atom number is required"));
        }
        for &n in &n_atoms {
            ModelParams::new(omega, omega0, 0.0, n).map_err(|e| config.error("model.n_atoms", e.to_string()))?;
        }
        let cutoffs = Cutoffs::new(config.usize("numerics.cutoff_photon")?, config.usize("numerics.cutoff_atom")?)
            .map_err(|e| config.error("numerics.cutoff_photon", e.to_string()))?;
        let quad = QuadratureSpec {
            max_nodes: config.usize("numerics.max_nodes")?,
            rel_tol: config.f64("numerics.rel_tol")?,
            window_halfwidth_sigmas: config.f64("numerics.window_sigmas")?,
        };
        quad.validate().map_err(|e| config.error("numerics.rel_tol", e.to_string()))?;
        let precision = config.usize("output.precision")?;
        if !(1..=17).contains(&precision) {
            return Err(config.error("output.precision", "must lie in 1..=17"));
        }
        let out = match config.raw("output.csv") {
            "" => None,
            p => Some(PathBuf::from(p)),
        };
        Ok(Self {
            omega,
            omega0,
            n_atoms,
            cutoffs,
            quad,
            threads: config.usize("numerics.threads")?,
            precision,
            out,
            config,
        })
    }

    fn params(&self, lambda: f64, n_atoms: usize) -> Result<ModelParams> {
        ModelParams::new(self.omega, self.omega0, lambda, n_atoms)
    }

    fn f(&self, v: f64) -> String {
        format_float(v, self.precision)
    }

    fn opt(&self, v: Option<f64>) -> String {
        v.map(|v| self.f(v)).unwrap_or_default()
    }

    /// The λ axis of a grid whose other axes (N and, where used, T) hold `others` points
    /// in total. A grid of a single point is rejected.
    fn lambda_axis(&self, others: usize) -> Result<Vec<f64>> {
        let axis = Axis::from_config(&self.config, "grid.lambda")?;
        if !axis.is_swept() && others < 2 {
            return Err(self.config.error("grid.lambda_steps", "grid has a single point; nothing to sweep"));
        }
        if axis.min < 0.0 {
            return Err(self.config.error("grid.lambda_min", "couplings must be non-negative"));
        }
        Ok(axis.points())
    }

    /// Temperatures from `grid.beta` when given, else from the T axis.
    fn temperatures(&self) -> Result<Vec<f64>> {
        let betas: Vec<f64> = self.config.list("grid.beta")?;
        if !betas.is_empty() {
            if let Some(b) = betas.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
                return Err(self.config.error("grid.beta", format!("beta must be positive, got {b}")));
            }
            return Ok(betas.iter().map(|b| 1.0 / b).collect());
        }
        let axis = Axis::from_config(&self.config, "grid.t")?;
        if !(axis.min > 0.0) {
            return Err(self.config.error("grid.t_min", "temperatures must be positive"));
        }
        Ok(axis.points())
    }

    fn overlap_factor(&self) -> Result<OverlapFactor> {
        Ok(match self.config.choice("thermal.factor", &["corrected", "doubled"])?.as_str() {
            "doubled" => OverlapFactor::Doubled,
            _ => OverlapFactor::Corrected,
        })
    }

    /// Maps `f` over `items` on the configured pool, keeping input order.
    fn par_map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start thread pool: {e}")))?;
        pool.install(|| items.par_iter().map(&f).collect())
    }
}

/// Parses, runs and writes. The binary only adds error reporting.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let settings = Settings::from_args(&cli.common)?;
    let outcome = execute(cli.command, &settings)?;
    match &settings.out {
        Some(path) => outcome.table.write_file(path)?,
        None if cli.command != Command::Critical && cli.command != Command::ScalingFit => {
            outcome.table.write_to(std::io::stdout().lock())?
        }
        None => {}
    }
    if let Some(report) = &outcome.report {
        let mut out = std::io::stdout().lock();
        out.write_all(report.as_bytes())?;
    }
    Ok(outcome)
}

pub fn execute(command: Command, s: &Settings) -> Result<Outcome> {
    let table = |t: Table| Ok(Outcome { table: t, report: None });
    match command {
        Command::SweepZeroT => table(sweep_zero_t(s)?),
        Command::SweepFiniteT => table(sweep_finite_t(s)?),
        Command::Witness => table(witness_scan(s)?),
        Command::OracleCompare => table(oracle_compare(s)?),
        Command::ScalingFit => scaling(s),
        Command::Critical => critical(s),
    }
}

fn grid2<A: Copy, B: Copy>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

/// `Ok(None)` exactly at λ_c, where the zero-temperature pipeline is undefined.
fn zero_t_point(params: &ModelParams, cutoffs: Cutoffs) -> Result<Option<ZeroTPoint>> {
    match evaluate_point(params, cutoffs) {
        Ok(p) => Ok(Some(p)),
        Err(Error::CriticalPoint(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn sweep_zero_t(s: &Settings) -> Result<Table> {
    let points = grid2(&s.n_atoms, &s.lambda_axis(s.n_atoms.len())?);
    let mut t = Table::new([
        "n_atoms", "lambda", "temperature", "phase", "route", "delta", "jz_per_atom", "purity", "a", "ground_energy",
    ]);
    t.rows = s.par_map(&points, |&(n, l)| {
        let params = s.params(l, n)?;
        let head = vec![n.to_string(), s.f(l), "0".to_string()];
        Ok(match zero_t_point(&params, s.cutoffs)? {
            Some(p) => [
                head,
                vec![
                    p.phase.as_str().into(),
                    p.route.as_str().into(),
                    s.f(p.delta),
                    s.f(p.jz_per_atom),
                    s.f(p.purity),
                    s.f(p.a),
                    s.f(p.ground_energy),
                ],
            ]
            .concat(),
            None => [head, vec!["critical".into()], vec![String::new(); 6]].concat(),
        })
    })?;
    Ok(t)
}

pub fn sweep_finite_t(s: &Settings) -> Result<Table> {
    let factor = s.overlap_factor()?;
    let temps = s.temperatures()?;
    let lambdas = s.lambda_axis(s.n_atoms.len() * temps.len())?;
    let points: Vec<(usize, f64, f64)> =
        s.n_atoms.iter().flat_map(|&n| grid2(&lambdas, &temps).into_iter().map(move |(l, t)| (n, l, t))).collect();
    let mut t = Table::new([
        "n_atoms", "lambda", "temperature", "beta", "phase", "t_c", "delta", "a", "jz_per_atom", "outside_validity",
    ]);
    t.rows = s.par_map(&points, |&(n, l, temp)| {
        let params = s.params(l, n)?;
        let point = ThermalPoint::from_temperature(params, temp)?;
        let jz = thermal_jz(&point, &s.quad)?;
        let a = (0.5 + jz).clamp(0.0, 1.0);
        let delta = overlap_finite_t(&point, a, &s.quad, factor)?;
        Ok(vec![
            n.to_string(),
            s.f(l),
            s.f(temp),
            s.f(point.beta),
            PhaseLabel::classify(&params, temp)?.as_str().into(),
            s.opt(critical_temperature(&params)?),
            s.f(delta),
            s.f(a),
            s.f(jz),
            u8::from(point.outside_validity()).to_string(),
        ])
    })?;
    Ok(t)
}

fn witness_columns() -> Vec<String> {
    let mut cols: Vec<String> =
        ["n_atoms", "lambda", "temperature", "phase", "sum_bound", "b"].iter().map(|c| c.to_string()).collect();
    for kind in ["c", "d"] {
        for (a, b, g) in witness::permutations() {
            cols.push(format!("{kind}_{}-{}-{}", a.as_char(), b.as_char(), g.as_char()));
        }
    }
    cols.push("violations".into());
    cols.push("any_violation".into());
    cols
}

fn witness_cells(s: &Settings, r: &WitnessReport) -> Vec<String> {
    let mut cells = vec![s.f(r.sum_bound), s.f(r.b.lhs)];
    cells.extend(r.c.iter().chain(&r.d).map(|e| s.f(e.lhs)));
    cells.push(r.violations().to_string());
    cells.push(u8::from(r.any_violation).to_string());
    cells
}

pub fn witness_scan(s: &Settings) -> Result<Table> {
    let mode = s.config.choice("witness.mode", &["zero_t", "finite_t"])?;
    let finite_n = s.config.choice("witness.form", &["large_n", "finite_n"])? == "finite_n";
    let evaluate = |m: &MomentSet| if finite_n { witness::evaluate_finite_n(m) } else { witness::evaluate(m) };
    let temps = if mode == "zero_t" { vec![0.0] } else { s.temperatures()? };
    let lambdas = s.lambda_axis(s.n_atoms.len() * temps.len())?;
    let points: Vec<(usize, f64, f64)> =
        s.n_atoms.iter().flat_map(|&n| grid2(&lambdas, &temps).into_iter().map(move |(l, t)| (n, l, t))).collect();
    let mut t = Table::new(witness_columns());
    let blanks = t.header.len() - 4;
    t.rows = s.par_map(&points, |&(n, l, temp)| {
        let params = s.params(l, n)?;
        let head = vec![n.to_string(), s.f(l), s.f(temp)];
        let (phase, moments) = if temp == 0.0 {
            match zero_t_point(&params, s.cutoffs)? {
                Some(p) => (p.phase.as_str(), p.moments),
                None => ("critical", None),
            }
        } else {
            let point = ThermalPoint::from_temperature(params, temp)?;
            (PhaseLabel::classify(&params, temp)?.as_str(), Some(thermal_moments(&point, &s.quad)?))
        };
        // Moments are unavailable on the Gaussian route next to λ_c.
        let body = match moments {
            Some(m) => witness_cells(s, &evaluate(&m)?),
            None => vec![String::new(); blanks],
        };
        Ok([head, vec![phase.to_string()], body].concat())
    })?;
    Ok(t)
}

fn max_moment_error(a: &MomentSet, b: &MomentSet) -> f64 {
    (0..3).map(|i| (a.first[i] - b.first[i]).abs().max((a.second[i] - b.second[i]).abs())).fold(0.0, f64::max)
}

fn rel(a: f64, reference: f64) -> f64 {
    (a - reference).abs() / reference.abs()
}

pub fn oracle_compare(s: &Settings) -> Result<Table> {
    let cutoff = s.config.usize("oracle.cutoff")?;
    let thermal = s.config.choice("oracle.mode", &["ground", "thermal"])? == "thermal";
    let others = if thermal { s.temperatures()?.len() } else { 1 };
    let lambdas = s.lambda_axis(s.n_atoms.len() * others)?;
    if !thermal {
        let points = grid2(&s.n_atoms, &lambdas);
        let mut t = Table::new([
            "n_atoms",
            "lambda",
            "cutoff",
            "delta_effective",
            "delta_oracle",
            "delta_abs_err",
            "delta_rel_err",
            "jz_effective",
            "jz_oracle",
            "jz_abs_err",
            "moments_max_abs_err",
            "overlap_path_gap",
            "cutoff_shift",
        ]);
        t.rows = s.par_map(&points, |&(n, l)| {
            let params = s.params(l, n)?;
            let c = if cutoff == 0 { suggested_cutoff(&params) } else { cutoff };
            let exact = exact_ground_state(&params, c)?;
            let Some(eff) = zero_t_point(&params, s.cutoffs)? else {
                return Ok([vec![n.to_string(), s.f(l), c.to_string()], vec![String::new(); 10]].concat());
            };
            let o = exact_overlap(&exact, &SeparableState::new(eff.a, n)?)?;
            let m = exact_moments(&exact)?;
            Ok(vec![
                n.to_string(),
                s.f(l),
                c.to_string(),
                s.f(eff.delta),
                s.f(o.value()),
                s.f((eff.delta - o.value()).abs()),
                s.f(rel(eff.delta, o.value())),
                s.f(eff.jz_per_atom),
                s.f(m.first[2]),
                s.f((eff.jz_per_atom - m.first[2]).abs()),
                s.opt(eff.moments.map(|e| max_moment_error(&e, &m))),
                s.f(o.discrepancy()),
                s.opt(exact.cutoff_shift),
            ])
        })?;
        return Ok(t);
    }

    let factor = s.overlap_factor()?;
    let cutoff = if cutoff == 0 { 40 } else { cutoff };
    let betas: Vec<f64> = s.temperatures()?.iter().map(|t| 1.0 / t).collect();
    let points: Vec<(usize, f64, f64)> =
        s.n_atoms.iter().flat_map(|&n| grid2(&lambdas, &betas).into_iter().map(move |(l, b)| (n, l, b))).collect();
    let mut t = Table::new([
        "n_atoms",
        "lambda",
        "beta",
        "cutoff",
        "a",
        "delta_quadrature",
        "delta_oracle",
        "delta_abs_err",
        "delta_rel_err",
        "jz_quadrature",
        "jz_oracle",
        "moments_max_abs_err",
        "ln_z_quadrature",
        "ln_z_split_oracle",
        "ln_z_abs_err",
        "overlap_path_gap",
    ]);
    t.rows = s.par_map(&points, |&(n, l, beta)| {
        let params = s.params(l, n)?;
        let exact = exact_thermal_state(&params, cutoff, beta)?;
        let point = ThermalPoint::new(params, beta)?;
        let jz = thermal_jz(&point, &s.quad)?;
        let a = (0.5 + jz).clamp(0.0, 1.0);
        let delta = overlap_finite_t(&point, a, &s.quad, factor)?;
        let o = exact_overlap(&exact, &SeparableState::new(a, n)?)?;
        let m = exact_moments(&exact)?;
        let lnz = log_partition(&point, &s.quad)?;
        let split = split_log_trace(&params, cutoff, beta)?;
        Ok(vec![
            n.to_string(),
            s.f(l),
            s.f(beta),
            cutoff.to_string(),
            s.f(a),
            s.f(delta),
            s.f(o.value()),
            s.f((delta - o.value()).abs()),
            s.f(rel(delta, o.value())),
            s.f(jz),
            s.f(m.first[2]),
            s.f(max_moment_error(&thermal_moments(&point, &s.quad)?, &m)),
            s.f(lnz),
            s.f(split),
            s.f((lnz - split).abs()),
            s.f(o.discrepancy()),
        ])
    })?;
    Ok(t)
}

fn scaling(s: &Settings) -> Result<Outcome> {
    let c = &s.config;
    let source = c.choice("fit.source", &["numerical", "closed_form", "synthetic"])?;
    let log_spacing = c.choice("fit.spacing", &["linear", "log"])? == "log";
    let axis = Axis::from_config(c, "fit.lambda")?;
    let params = s.params(0.0, s.n_atoms[0])?;
    let lc = params.critical_coupling();
    if !(axis.max < lc) {
        return Err(c.error("fit.lambda_max", format!("must lie below lambda_c = {lc}")));
    }
    if source == "closed_form" && (s.omega != 1.0 || s.omega0 != 1.0) {
        return Err(c.error("fit.source", "the closed form assumes omega = omega0 = 1"));
    }
    let lambdas: Vec<f64> = if log_spacing && axis.is_swept() {
        // Even steps in ln(1 − λ/λ_c).
        let (u0, u1) = ((1.0 - axis.min / lc).ln(), (1.0 - axis.max / lc).ln());
        let h = (u1 - u0) / (axis.steps - 1) as f64;
        (0..axis.steps)
            .map(|i| if i + 1 == axis.steps { axis.max } else { lc * (1.0 - (u0 + h * i as f64).exp()) })
            .collect()
    } else {
        axis.points()
    };
    let deltas = s.par_map(&lambdas, |&l| match source.as_str() {
        "closed_form" => closed_form_overlap_normal(l),
        "synthetic" => Ok((1.0 - l / lc).powf(0.25)),
        _ => Ok(evaluate_point(&params.with_lambda(l)?, s.cutoffs)?.delta),
    })?;
    let fit = scaling_fit(&lambdas, &deltas, lc)?;
    let mut t = Table::new(["lambda", "minus_ln_distance", "delta", "minus_ln_delta", "residual"]);
    for ((l, d), r) in lambdas.iter().zip(&deltas).zip(&fit.residuals) {
        t.rows.push(vec![s.f(*l), s.f(-(1.0 - l / lc).ln()), s.f(*d), s.f(-d.ln()), s.f(*r)]);
    }
    let report = format!(
        "source = {source}\npoints = {}\nslope = {}\nslope_std_error = {}\nintercept = {}\n",
        lambdas.len(),
        s.f(fit.slope),
        s.f(fit.slope_std_error),
        s.f(fit.intercept)
    );
    Ok(Outcome { table: t, report: Some(report) })
}

fn critical(s: &Settings) -> Result<Outcome> {
    let lambdas = Axis::from_config(&s.config, "grid.lambda")?.points();
    let params = s.params(0.0, s.n_atoms[0])?;
    let mut t = Table::new(["lambda", "phase_t0", "t_c", "t_c_standard"]);
    let mut report = format!("lambda_c = {}\n", s.f(params.critical_coupling()));
    report.push_str("lambda t_c t_c_standard\n");
    for &l in &lambdas {
        let p = params.with_lambda(l)?;
        let (tc, tcs) = (critical_temperature(&p)?, critical_temperature_standard(&p)?);
        t.rows.push(vec![s.f(l), p.phase().as_str().into(), s.opt(tc), s.opt(tcs)]);
        report.push_str(&format!(
            "{} {} {}\n",
            s.f(l),
            tc.map(|v| s.f(v)).unwrap_or_else(|| "-".into()),
            tcs.map(|v| s.f(v)).unwrap_or_else(|| "-".into())
        ));
    }
    Ok(Outcome { table: t, report: Some(report) })
}

/// Short machine-readable name for an error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::Domain(_) => "domain",
        Error::RootNotConverged { .. } | Error::Bracket { .. } => "root",
        Error::Quadrature { .. } => "quadrature",
        Error::Eigensolver(_) => "eigensolver",
        Error::CutoffTooSmall { .. } | Error::CutoffNotConverged { .. } => "cutoff",
        Error::CriticalPoint(_) => "critical-point",
        Error::InsufficientData { .. } => "insufficient-data",
        Error::InvalidDistribution(_) | Error::InvalidInput(_) => "invalid-input",
        Error::IndexOutOfRange { .. } => "index",
        Error::Capacity(_) => "capacity",
        Error::InternalConsistency(_) => "internal",
        Error::Config { .. } => "config",
        Error::Io(_) => "io",
        Error::Csv(_) => "csv",
    }
}

/// `error kind=<kind>: <message>` on one line, with "error" in red on a terminal unless
/// NO_COLOR is set.
pub fn error_line(e: &Error, color: bool) -> String {
    let message = e.to_string().replace('\n', " ");
    let tag = if color { "\x1b[31merror\x1b[0m" } else { "error" };
    format!("{tag} kind={}: {message}", error_kind(e))
}

/// Whether stderr diagnostics may use color.
pub fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stderr().is_terminal()
}

/// Entry point for the binary: returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", error_line(&e, use_color()));
            if matches!(e, Error::Config { .. }) {
                2
            } else {
                1
            }
        }
    }
}

/// Default config text listing every key, for `--config` templates and the README.
pub fn default_config_text() -> String {
    config::KEYS.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

