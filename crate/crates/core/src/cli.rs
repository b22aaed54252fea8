//! Command line front end: argument parsing, grid evaluation and CSV output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::beyond::{f1_dd_closed, f1_series, F1Constants, Mode};
use crate::models::{Geometry, ModelPair, PlasmaParams};
use crate::modesum::{energy_oracle, TruncationSpec};
use crate::pfa::{f0, hard_energy, EnergyBreakdown};
use crate::specfun::{QuadResult, QuadSpec};
use crate::verify::{run_suite, Suite};
use crate::VERSION;

#[derive(Debug, Parser)]
#[command(name = "cylplane", version = VERSION, about = "Casimir energy of a cylindrical plasma sheet facing a plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leading (proximity force) function f0 over a grid of Omega_L.
    F0(Opts),
    /// First curvature correction f1, relative to its hard-boundary value.
    F1(Opts),
    /// Energy per unit length from f0 and f1.
    Energy(Opts),
    /// Exact mode-sum energy per unit length.
    Oracle(Opts),
    /// Run a property suite.
    Verify(VerifyOpts),
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    #[arg(long, default_value = "dd-te")]
    pub model: ModelPair,
    /// Omega_L = Omega L: one value or a log grid start:stop:count.
    #[arg(long = "omega-l")]
    pub omega_l: Option<String>,
    /// Sets the plasma frequency through omega_L = sqrt(lambda Omega_L).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub gap: Option<f64>,
    /// Sheet coupling Omega in inverse length units.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Plasma frequency of the half-space in inverse length units.
    #[arg(long = "plasma-freq")]
    pub plasma_freq: Option<f64>,
    /// Fixed mode truncation for the oracle; automatic growth when absent.
    #[arg(long = "max-m")]
    pub max_m: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyOpts {
    /// One of specfun, tau, chain, asympt, beyond, oracle; all when absent.
    #[arg(long)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Parses `v` or `start:stop:count` into log-spaced values.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| config(format!("bad number '{x}' in grid '{s}'")));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [v] => vec![num(v)?],
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|_| config(format!("bad count in grid '{s}'")))?;
            if n == 0 {
                return Err(config("grid count must be positive"));
            }
            if !(a > 0.0 && b > 0.0) {
                return Err(config("log grid needs positive endpoints"));
            }
            if n == 1 {
                vec![a]
            } else {
                let (la, lb) = (a.log10(), b.log10());
                (0..n).map(|i| 10f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64)).collect()
            }
        }
        _ => return Err(config(format!("grid '{s}' is neither a value nor start:stop:count"))),
    };
    if grid.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(config(format!("grid '{s}' has a negative or non-finite value")));
    }
    Ok(grid)
}

/// One grid point, in gap units and (when a geometry is known) dimensional.
#[derive(Debug, Clone, Copy)]
struct Point {
    geom: Option<Geometry>,
    params: PlasmaParams,
}

struct Plan {
    points: Vec<Point>,
    spec: QuadSpec,
    trunc: TruncationSpec,
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(config(format!("--{name} must be positive, got {x}"))),
        _ => Ok(v),
    }
}

fn plan(opts: &Opts, needs_geometry: bool, default_tol: f64) -> Result<Plan, CliError> {
    let radius = positive("radius", opts.radius)?;
    let gap = positive("gap", opts.gap)?;
    let tol = positive("tol", opts.tol)?.unwrap_or(default_tol);
    if opts.lambda.is_some() && opts.plasma_freq.is_some() {
        return Err(config("give at most one of --lambda and --plasma-freq"));
    }
    if let Some(l) = opts.lambda {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(config(format!("--lambda must be nonnegative, got {l}")));
        }
    }
    if let Some(w) = opts.plasma_freq {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(config(format!("--plasma-freq must be nonnegative, got {w}")));
        }
    }
    let geom = match (radius, gap) {
        (Some(r), Some(l)) => Some(Geometry::new(r, l).map_err(|e| config(e.to_string()))?),
        _ if needs_geometry => return Err(config("this command needs --radius and --gap")),
        (None, None) => None,
        _ => return Err(config("give --radius and --gap together")),
    };
    let length = geom.map_or(gap.unwrap_or(1.0), |g| g.gap);
    let omegas_l = match (&opts.omega_l, opts.omega) {
        (Some(_), Some(_)) => return Err(config("give at most one of --omega-l and --omega")),
        (Some(g), None) => parse_grid(g)?,
        (None, Some(w)) if w >= 0.0 && w.is_finite() => vec![w * length],
        (None, Some(w)) => return Err(config(format!("--omega must be nonnegative, got {w}"))),
        (None, None) => return Err(config("give --omega-l or --omega")),
    };
    if opts.model.has_dielectric() && opts.lambda.is_none() && opts.plasma_freq.is_none() {
        return Err(config(format!("model {} needs --lambda or --plasma-freq", opts.model.label())));
    }
    let points = omegas_l
        .into_iter()
        .map(|ol| {
            let wl = match (opts.lambda, opts.plasma_freq) {
                (Some(l), _) => (l * ol).sqrt(),
                (None, Some(w)) => w * length,
                (None, None) => 0.0,
            };
            let params = PlasmaParams::dimensionless(ol, wl).map_err(|e| config(e.to_string()))?;
            let params = PlasmaParams { omega: ol / length, omega_p: wl / length, ..params };
            Ok(Point { geom, params })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let spec = QuadSpec::default().with_rel_tol(tol);
    spec.validate().map_err(|e| config(e.to_string()))?;
    let trunc = match opts.max_m {
        Some(0) => return Err(config("--max-m must be positive")),
        Some(m) => TruncationSpec { m_max: m, auto_grow: false, ..TruncationSpec::default() },
        None => TruncationSpec::default(),
    };
    Ok(Plan { points, spec, trunc })
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn header(command: &str, opts: &Opts, plan: &Plan, threads: usize) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "# cylplane {VERSION}");
    let _ = writeln!(h, "# command = {command}");
    let _ = writeln!(h, "# model = {}", opts.model.label());
    let _ = writeln!(h, "# omega_l = {}", fmt_opt(&opts.omega_l));
    let _ = writeln!(h, "# lambda = {}", fmt_opt(&opts.lambda));
    let _ = writeln!(h, "# radius = {}", fmt_opt(&opts.radius));
    let _ = writeln!(h, "# gap = {}", fmt_opt(&opts.gap));
    let _ = writeln!(h, "# omega = {}", fmt_opt(&opts.omega));
    let _ = writeln!(h, "# plasma_freq = {}", fmt_opt(&opts.plasma_freq));
    let _ = writeln!(h, "# max_m = {}", fmt_opt(&opts.max_m));
    let _ = writeln!(h, "# tol = {:e}", plan.spec.rel_tol);
    let _ = writeln!(h, "# truncation_tol = {:e}", plan.trunc.convergence_tol);
    let _ = writeln!(h, "# threads = {threads}");
    h
}

fn row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:e}")).collect();
    cells.join(",")
}

fn checked(r: QuadResult, what: &str) -> Result<QuadResult, CliError> {
    Ok(r.into_result(what)?)
}

fn f1_value(pair: ModelPair, params: &PlasmaParams, spec: &QuadSpec) -> crate::Result<QuadResult> {
    match pair {
        ModelPair::DdTe => f1_dd_closed(Mode::Te, params.omega_l, spec),
        ModelPair::DdTm => f1_dd_closed(Mode::Tm, params.omega_l, spec),
        _ => f1_series(pair, params, spec),
    }
}

fn evaluate(command: &Command, opts: &Opts, plan: &Plan) -> Result<(Vec<&'static str>, Vec<Vec<f64>>), CliError> {
    let pair = opts.model;
    let spec = plan.spec;
    let trunc = plan.trunc;
    let cols: Vec<&'static str> = match command {
        Command::F0(_) => vec!["omega_l", "omega_pl", "f0", "f0_err"],
        Command::F1(_) => vec!["omega_l", "omega_pl", "f1", "f1_err"],
        Command::Energy(_) => vec![
            "radius", "gap", "omega_l", "omega_pl", "f0", "f0_err", "f1", "f1_err", "e_pfa", "e_pfa_err", "e_total",
            "e_total_err",
        ],
        Command::Oracle(_) => vec![
            "radius", "gap", "omega_l", "omega_pl", "e_oracle", "e_oracle_err", "e_pfa", "e_pfa_err", "ratio",
            "ratio_err", "max_m",
        ],
        Command::Verify(_) => unreachable!("verify has its own output"),
    };
    let eval = |p: &Point| -> Result<Vec<f64>, CliError> {
        let pr = &p.params;
        match command {
            Command::F0(_) => {
                let r = checked(f0(pair, pr, &spec)?, "f0")?;
                Ok(vec![pr.omega_l, pr.omega_pl, r.value, r.error_estimate])
            }
            Command::F1(_) => {
                let r = checked(f1_value(pair, pr, &spec)?, "f1")?;
                Ok(vec![pr.omega_l, pr.omega_pl, r.value, r.error_estimate])
            }
            Command::Energy(_) => {
                let g = p.geom.expect("geometry checked");
                let a = checked(f0(pair, pr, &spec)?, "f0")?;
                let b = checked(f1_value(pair, pr, &spec)?, "f1")?;
                let e = EnergyBreakdown::new(pair, &g, a, b);
                let h = hard_energy(&g).abs();
                let f1h = F1Constants::hard(pair.is_te());
                let e_pfa_err = h * e.err_f0;
                let e_total_err = e_pfa_err + h * g.epsilon() * f1h.abs() * e.err_f1;
                Ok(vec![g.radius, g.gap, pr.omega_l, pr.omega_pl, e.f0, e.err_f0, e.f1, e.err_f1, e.e_pfa, e_pfa_err, e.e_total, e_total_err])
            }
            Command::Oracle(_) => {
                let g = p.geom.expect("geometry checked");
                let (e, d) = energy_oracle(pair, &g, pr, &trunc, &spec)?;
                if !d.converged {
                    return Err(crate::Error::no_convergence(format!("oracle at Omega_L = {}", pr.omega_l)).into());
                }
                let a = checked(f0(pair, pr, &spec)?, "f0")?;
                let h = hard_energy(&g);
                let e_pfa = h * a.value;
                let e_pfa_err = h.abs() * a.error_estimate;
                let e_err = d.quad_error + d.truncation_error;
                let (ratio, ratio_err) = if e_pfa == 0.0 {
                    (f64::NAN, f64::NAN)
                } else {
                    let r = e / e_pfa;
                    (r, r.abs() * (e_err / e.abs().max(f64::MIN_POSITIVE) + e_pfa_err / e_pfa.abs()))
                };
                Ok(vec![g.radius, g.gap, pr.omega_l, pr.omega_pl, e, e_err, e_pfa, e_pfa_err, ratio, ratio_err, d.max_m as f64])
            }
            Command::Verify(_) => unreachable!(),
        }
    };
    let rows = plan.points.par_iter().map(eval).collect::<Result<Vec<_>, CliError>>()?;
    Ok((cols, rows))
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if threads == Some(0) {
        return Err(config("--threads must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| config(format!("thread pool: {e}")))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run_verify(v: &VerifyOpts) -> Result<(), CliError> {
    let pool = pool(v.threads)?;
    let suites: Vec<Suite> = v.suite.map_or(Suite::ALL.to_vec(), |s| vec![s]);
    let reports = pool.install(|| suites.iter().map(|&s| run_suite(s)).collect::<crate::Result<Vec<_>>>())?;
    let mut text = format!("# cylplane {VERSION}\n# command = verify\n# suite = {}\n# threads = {}\n", fmt_opt(&v.suite), pool.current_num_threads());
    text.push_str("suite,check,passed,detail\n");
    let mut failed = Vec::new();
    for r in &reports {
        for c in &r.checks {
            let _ = writeln!(text, "{},{},{},{}", r.suite, csv_quote(&c.name), c.passed, csv_quote(&c.detail));
            if !c.passed {
                failed.push(format!("{}: {}", r.suite, c.name));
            }
        }
    }
    emit(&text, &v.out)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("failed checks: {}", failed.join("; "))))
    }
}

/// Runs a parsed command, writing the CSV only once every row is computed.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (name, opts, needs_geometry, default_tol) = match &cli.command {
        Command::F0(o) => ("f0", o, false, 1e-8),
        Command::F1(o) => ("f1", o, false, 1e-8),
        Command::Energy(o) => ("energy", o, true, 1e-8),
        Command::Oracle(o) => ("oracle", o, true, 1e-7),
        Command::Verify(v) => return run_verify(v),
    };
    let plan = plan(opts, needs_geometry, default_tol)?;
    let pool = pool(opts.threads)?;
    let (cols, rows) = pool.install(|| evaluate(&cli.command, opts, &plan))?;
    let mut text = header(name, opts, &plan, pool.current_num_threads());
    text.push_str(&cols.join(","));
    text.push('\n');
    for r in rows {
        text.push_str(&row(&r));
        text.push('\n');
    }
    emit(&text, &opts.out)
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cylplane: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1e-4").unwrap(), vec![1e-4]);
        let g = parse_grid("1e-3:1e3:61").unwrap();
        assert_eq!(g.len(), 61);
        assert!((g[30] - 1.0).abs() < 1e-14 && (g[60] - 1e3).abs() < 1e-9);
        for bad in ["", "a", "1:2", "0:1:3", "1:2:0", "-1"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Config(_))), "{bad}");
        }
    }

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("cylplane").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn config_errors_exit_two() {
        for args in [
            &["energy", "--omega-l", "1"][..],
            &["f0", "--model", "ed-te", "--omega-l", "1"],
            &["f0", "--omega-l", "1", "--omega", "2"],
            &["f0", "--omega-l", "1", "--tol=-1"],
            &["f0", "--omega-l", "1", "--threads", "0"],
            &["oracle", "--radius", "1", "--gap", "0.5", "--omega", "1", "--max-m", "0"],
        ] {
            let err = run(&parse(args)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}: {err}");
        }
        assert!(Cli::try_parse_from(["cylplane", "f0", "--model", "xx"]).is_err());
    }

    #[test]
    fn lambda_sets_plasma_frequency() {
        let o = match parse(&["f0", "--model", "ed-te", "--omega-l", "4", "--lambda", "9"]).command {
            Command::F0(o) => o,
            _ => unreachable!(),
        };
        let p = plan(&o, false, 1e-8).unwrap();
        assert_eq!(p.points[0].params.omega_pl, 6.0);
    }
}
