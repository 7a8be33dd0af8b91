//! The `qes` command-line interface.
//!
//! Every option can come from a flag, a `--config` file or a built-in
//! default, in that order of precedence. Exit codes: 0 success, 1 numeric
//! or I/O failure, 2 usage or validation error.

pub mod config;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, SweepParams, SweepTable};
use crate::error::Error;
use crate::frobenius;
use crate::model::{
    delta_from_physical, energy_from_w, omega_from_charge, DimensionlessModel, PhysicalParameters,
};
use crate::variational::{self, DEFAULT_LEVELS, DEFAULT_TOL};

pub use config::Config;
pub use output::{format_number, Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_HF_STEP: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(
    name = "qes",
    version,
    about = "Truncated Frobenius solutions and variational spectra of the radial Coulomb-plus-oscillator problem"
)]
pub struct Cli {
    /// Output format for tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; for `figure`, the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Flat `key = value` file supplying defaults for any option.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All polynomial solutions of degree n.
    Truncate(TruncateArgs),
    /// Lowest variational eigenvalues W_j at one (gamma, delta).
    Spectrum(SpectrumArgs),
    /// Curves and truncation points over a delta range (curves.csv, points.csv, figure.svg).
    Figure(FigureArgs),
    /// Hellmann-Feynman check dW_j/d delta = <x>_j.
    Hft(HftArgs),
    /// Energies from physical parameters.
    Physical(PhysicalArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TruncateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Delta range as MIN:MAX.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<DeltaRange>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Largest truncation degree whose roots are overlaid.
    #[arg(long)]
    pub n_trunc_max: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write figure.svg.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct HftArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub level: Option<usize>,
    /// Central-difference step.
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PhysicalArgs {
    #[arg(long)]
    pub m: Option<f64>,
    /// Charge; only |q| enters.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub l: Option<i64>,
    #[arg(long)]
    pub s: Option<i64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRange {
    pub min: f64,
    pub max: f64,
}

impl FromStr for DeltaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("range '{s}' is not MIN:MAX"))?;
        let min = a
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("range minimum '{a}': {e}"))?;
        let max = b
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("range maximum '{b}': {e}"))?;
        Ok(Self { min, max })
    }
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub task: Task,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Truncate {
        n: usize,
        gamma: f64,
    },
    Spectrum {
        model: DimensionlessModel,
        levels: usize,
        tol: f64,
    },
    Figure {
        sweep: SweepParams,
        svg: bool,
    },
    Hft {
        gamma: f64,
        delta: f64,
        level: usize,
        h: f64,
    },
    Physical {
        params: PhysicalParameters,
        levels: usize,
        tol: f64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Run(Error::Domain(_)) => EXIT_USAGE,
            CliError::Run(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

struct Resolver<'a> {
    config: &'a Config,
}

impl Resolver<'_> {
    fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.config.get(key).map_err(CliError::Usage),
        }
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(flag, key)?.ok_or_else(|| {
            CliError::Usage(format!(
                "missing required option --{}",
                key.replace('_', "-")
            ))
        })
    }
}

fn positive_tol(tol: f64) -> Result<f64, CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("tol must be > 0, got {tol}")))
    }
}

fn nonzero_levels(levels: usize) -> Result<usize, CliError> {
    if levels == 0 {
        Err(CliError::Usage("levels must be >= 1".into()))
    } else {
        Ok(levels)
    }
}

impl RunConfig {
    /// Merges flags over the config file over defaults, then validates.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let config = match &cli.config {
            Some(path) => Config::load(path).map_err(CliError::Usage)?,
            None => Config::default(),
        };
        let r = Resolver { config: &config };
        let format = r.or(cli.format, "format", Format::Csv)?;
        let out = r.opt(cli.out, "out")?;
        let jobs = r.opt(cli.jobs, "jobs")?;
        if jobs == Some(0) {
            return Err(CliError::Usage("jobs must be >= 1".into()));
        }

        let task = match cli.command {
            Command::Truncate(a) => {
                let n = r.required(a.n, "n")?;
                let gamma = r.required(a.gamma, "gamma")?;
                DimensionlessModel::new(gamma, 0.0)?;
                Task::Truncate { n, gamma }
            }
            Command::Spectrum(a) => {
                let model = DimensionlessModel::new(
                    r.required(a.gamma, "gamma")?,
                    r.required(a.delta, "delta")?,
                )?;
                let levels = nonzero_levels(r.or(a.levels, "levels", DEFAULT_LEVELS)?)?;
                let tol = positive_tol(r.or(a.tol, "tol", DEFAULT_TOL)?)?;
                Task::Spectrum { model, levels, tol }
            }
            Command::Figure(a) => {
                let range = r.or(
                    a.range,
                    "range",
                    DeltaRange {
                        min: analysis::DEFAULT_DELTA_MIN,
                        max: analysis::DEFAULT_DELTA_MAX,
                    },
                )?;
                let sweep = SweepParams {
                    gamma: r.required(a.gamma, "gamma")?,
                    delta_min: range.min,
                    delta_max: range.max,
                    n_grid: r.or(a.grid, "grid", analysis::DEFAULT_GRID)?,
                    n_levels: nonzero_levels(r.or(a.levels, "levels", DEFAULT_LEVELS)?)?,
                    n_trunc_max: r.or(
                        a.n_trunc_max,
                        "n_trunc_max",
                        analysis::DEFAULT_TRUNCATION_DEGREE,
                    )?,
                    tol: positive_tol(r.or(a.tol, "tol", DEFAULT_TOL)?)?,
                };
                sweep.validate()?;
                let svg = a.svg || r.or(None, "svg", false)?;
                Task::Figure { sweep, svg }
            }
            Command::Hft(a) => {
                let model = DimensionlessModel::new(
                    r.required(a.gamma, "gamma")?,
                    r.required(a.delta, "delta")?,
                )?;
                let h = r.or(a.h, "h", DEFAULT_HF_STEP)?;
                if !(h > 0.0 && h.is_finite()) {
                    return Err(CliError::Usage(format!("h must be > 0, got {h}")));
                }
                Task::Hft {
                    gamma: model.gamma(),
                    delta: model.delta(),
                    level: r.or(a.level, "level", 0)?,
                    h,
                }
            }
            Command::Physical(a) => {
                let params = PhysicalParameters {
                    m: r.required(a.m, "m")?,
                    q_abs: r.required(a.q, "q")?.abs(),
                    g: r.required(a.g, "g")?,
                    b: r.required(a.b, "b")?,
                    rho: r.required(a.rho, "rho")?,
                    k: r.or(a.k, "k", 0.0)?,
                    l: r.required(a.l, "l")?,
                    s: r.required(a.s, "s")?,
                };
                params.validate()?;
                let levels = nonzero_levels(r.or(a.levels, "levels", DEFAULT_LEVELS)?)?;
                let tol = positive_tol(r.or(a.tol, "tol", DEFAULT_TOL)?)?;
                Task::Physical {
                    params,
                    levels,
                    tol,
                }
            }
        };
        Ok(Self {
            format,
            out,
            jobs,
            task,
        })
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let outcome = RunConfig::resolve(cli).and_then(|cfg| execute(&cfg, stdout, stderr));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Run(Error::Numeric(format!("cannot start worker pool: {e}"))))?;

    match &cfg.task {
        Task::Truncate { n, gamma } => {
            emit(cfg, &truncate_table(*n, *gamma)?, stdout)?;
            Ok(EXIT_OK)
        }
        Task::Spectrum { model, levels, tol } => {
            let result = variational::spectrum(model, *levels, *tol)?;
            let mut table = Table::new(vec![
                "j",
                "W",
                "converged",
                "est_error",
                "mean_x",
                "basis_size",
            ]);
            for level in &result.levels {
                table.push(vec![
                    level.j.into(),
                    level.w.into(),
                    level.converged.into(),
                    level.est_error.into(),
                    level.mean_x.into(),
                    result.basis_size_used.into(),
                ]);
            }
            emit(cfg, &table, stdout)?;
            Ok(report_convergence(
                result.converged(),
                result.basis_size_used,
                stderr,
            ))
        }
        Task::Figure { sweep, svg } => {
            let table = pool.install(|| analysis::sweep(sweep))?;
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            write_figure(&dir, &table, *svg)?;
            emit_to(cfg.format, None, &points_table(&table), stdout)?;
            for f in &table.failures {
                let _ = writeln!(
                    stderr,
                    "warning: delta = {}: {}",
                    format_number(f.delta),
                    f.message
                );
            }
            Ok(if table.failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Task::Hft {
            gamma,
            delta,
            level,
            h,
        } => {
            let r = analysis::hellmann_feynman_check(*gamma, *delta, *level, *h)?;
            let mut table = Table::new(vec![
                "gamma", "delta", "level", "h", "lhs", "rhs", "abs_diff",
            ]);
            table.push(vec![
                r.gamma.into(),
                r.delta.into(),
                r.level.into(),
                r.h.into(),
                r.lhs.into(),
                r.rhs.into(),
                r.abs_diff.into(),
            ]);
            emit(cfg, &table, stdout)?;
            Ok(EXIT_OK)
        }
        Task::Physical {
            params,
            levels,
            tol,
        } => {
            let gamma = params.gamma()?;
            let nu = params.nu()?;
            let omega = omega_from_charge(params);
            let delta = delta_from_physical(params, omega)?;
            let result =
                variational::spectrum(&DimensionlessModel::new(gamma, delta)?, *levels, *tol)?;
            let mut table = Table::new(vec![
                "j",
                "omega",
                "nu",
                "gamma",
                "delta",
                "W",
                "energy",
                "converged",
            ]);
            for level in &result.levels {
                table.push(vec![
                    level.j.into(),
                    omega.into(),
                    nu.into(),
                    gamma.into(),
                    delta.into(),
                    level.w.into(),
                    energy_from_w(level.w, omega, params.k, params.m).into(),
                    level.converged.into(),
                ]);
            }
            emit(cfg, &table, stdout)?;
            Ok(report_convergence(
                result.converged(),
                result.basis_size_used,
                stderr,
            ))
        }
    }
}

fn report_convergence(converged: bool, size: usize, stderr: &mut dyn Write) -> i32 {
    if converged {
        EXIT_OK
    } else {
        let _ = writeln!(
            stderr,
            "error: not all levels converged (largest basis size {size})"
        );
        EXIT_FAILURE
    }
}

pub fn truncate_table(n: usize, gamma: f64) -> Result<Table, CliError> {
    let mut table = Table::new(vec!["n", "i", "delta", "W", "nodes", "coefficients"]);
    for sol in frobenius::all_solutions(n as i64, gamma)? {
        let nodes = frobenius::count_nodes(&sol);
        table.push(vec![
            sol.n.into(),
            sol.i.into(),
            sol.delta_root.into(),
            sol.w.into(),
            nodes.into(),
            Cell::List(sol.coeffs.clone()),
        ]);
    }
    Ok(table)
}

pub fn curves_table(table: &SweepTable) -> Table {
    let header = std::iter::once("delta".to_string())
        .chain((0..table.levels.len()).map(|j| format!("W_{j}")));
    let mut out = Table::new(header);
    for (k, delta) in table.delta_grid.iter().enumerate() {
        let mut row = vec![Cell::Num(*delta)];
        row.extend(table.levels.iter().map(|r| Cell::Num(r[k])));
        out.push(row);
    }
    out
}

pub fn points_table(table: &SweepTable) -> Table {
    let mut out = Table::new(vec![
        "n",
        "i",
        "delta_root",
        "W",
        "matched_level",
        "residual",
    ]);
    for p in &table.truncation_points {
        out.push(vec![
            p.n.into(),
            p.i.into(),
            p.delta_root.into(),
            p.w.into(),
            p.matched_level.into(),
            p.residual.into(),
        ]);
    }
    out
}

fn write_figure(dir: &Path, table: &SweepTable, svg: bool) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("curves.csv"), curves_table(table).to_csv())?;
    std::fs::write(dir.join("points.csv"), points_table(table).to_csv())?;
    if svg {
        std::fs::write(dir.join("figure.svg"), svg::render(table))?;
    }
    Ok(())
}

fn emit(cfg: &RunConfig, table: &Table, stdout: &mut dyn Write) -> Result<(), CliError> {
    emit_to(cfg.format, cfg.out.as_deref(), table, stdout)
}

fn emit_to(
    format: Format,
    out: Option<&Path>,
    table: &Table,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let text = table.render(format);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
