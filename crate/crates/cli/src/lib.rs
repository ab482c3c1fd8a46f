//! Command-line front end: coefficient tables, transform curves, error
//! studies and timing comparisons, all written as CSV.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use haar_hankel::csv_io::{
    format_value, read_coefficients, read_samples, write_coefficients, write_table,
    write_text_table,
};
use haar_hankel::{
    decompose, direct_hankel, gaussian_coefficients, transform_grid, CoefficientQuadrature,
    Gaussian, HaarApproximation, QuadratureConfig, RadialFunction, SampledFunction,
    TransformOrder, WaveletCoefficients,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    /// 2 for bad arguments, 3 for bad input data, 4 for numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Argument(_) => 2,
            CliError::Input(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }
}

impl From<haar_hankel::Error> for CliError {
    fn from(e: haar_hankel::Error) -> Self {
        use haar_hankel::Error as E;
        match e {
            E::Input { .. } => CliError::Input(e.to_string()),
            E::Integration { .. } | E::Convergence { .. } => CliError::Convergence(e.to_string()),
            E::Domain { .. } | E::Capacity { .. } | E::InvalidArgument(_) => {
                CliError::Argument(e.to_string())
            }
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "haar-hankel", version, about = "Hankel transforms via Haar wavelet series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the `j,k,value` coefficient table.
    Coeffs(CoeffsArgs),
    /// Write the transform curve `p,value`.
    Transform(TransformArgs),
    /// Write absolute errors per level, `p,err_J2,err_J3,...`.
    ErrorStudy(StudyArgs),
    /// Time series evaluation against direct quadrature.
    Bench(StudyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    Gaussian,
    Samples,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    /// Input profile f(r).
    #[arg(long, value_enum)]
    pub function: Option<FunctionKind>,
    /// Gaussian width: f(r) = r exp(-a² r²).
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Two-column `r,value` CSV for `--function samples`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Support length; defaults to 6/a for the Gaussian and the last sample radius otherwise.
    #[arg(long)]
    pub h: Option<f64>,
    /// Hankel order.
    #[arg(long, default_value = "1", value_parser = parse_order)]
    pub order: TransformOrder,
    /// Drop details with |d| <= eps.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Absolute tolerance for numeric coefficient integrals.
    #[arg(long, default_value_t = 1e-12)]
    pub coeff_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub pmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub pmax: f64,
    #[arg(long, default_value_t = 200)]
    pub pcount: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1e-11)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_panels: usize,
    #[arg(long, default_value_t = 32)]
    pub nodes_per_panel: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Finest detail level J.
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    /// Read the coefficient table from a `j,k,value` file instead (needs --h).
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Add `exact` and `abs_err` columns.
    #[arg(long)]
    pub compare_analytic: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct StudyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Single level (alternative to --levels).
    #[arg(long, conflicts_with = "levels")]
    pub level: Option<u32>,
    /// Comma-separated levels, e.g. 2,3,4.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<u32>,
    #[arg(long)]
    pub output: PathBuf,
}

fn parse_order(s: &str) -> std::result::Result<TransformOrder, String> {
    s.parse().map_err(|e: haar_hankel::Error| e.to_string())
}

fn argument(msg: impl Into<String>) -> CliError {
    CliError::Argument(msg.into())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Transform(args) => cmd_transform(args),
        Command::ErrorStudy(args) => cmd_error_study(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

/// The resolved input profile.
enum Profile {
    Gaussian(Gaussian),
    Samples(SampledFunction),
}

impl Profile {
    fn radial(&self) -> &dyn RadialFunction {
        match self {
            Profile::Gaussian(g) => g,
            Profile::Samples(s) => s,
        }
    }
}

struct Resolved {
    profile: Profile,
    h: f64,
}

fn resolve(args: &FunctionArgs) -> Result<Resolved> {
    if !(args.eps.is_finite() && args.eps >= 0.0) {
        return Err(argument(format!("--eps must be >= 0, got {}", args.eps)));
    }
    let profile = match args.function {
        None => return Err(argument("--function is required")),
        Some(FunctionKind::Gaussian) => Profile::Gaussian(Gaussian::new(args.a)?),
        Some(FunctionKind::Samples) => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| argument("--function samples needs --input <path>"))?;
            let file = File::open(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let samples = read_samples(BufReader::new(file)).map_err(|e| match e {
                haar_hankel::Error::Input { .. } => {
                    CliError::Input(format!("{}: {e}", path.display()))
                }
                other => other.into(),
            })?;
            Profile::Samples(samples)
        }
    };
    let h = match (args.h, &profile) {
        (Some(h), _) => h,
        (None, Profile::Gaussian(g)) => 6.0 / g.a(),
        (None, Profile::Samples(s)) => s.support_end(),
    };
    if !(h.is_finite() && h > 0.0) {
        return Err(argument(format!("--h must be positive, got {h}")));
    }
    Ok(Resolved { profile, h })
}

fn check_level(level: u32) -> Result<()> {
    if level > haar_hankel::haar::MAX_LEVEL {
        return Err(argument(format!(
            "level {level} exceeds the maximum of {}",
            haar_hankel::haar::MAX_LEVEL
        )));
    }
    Ok(())
}

fn coefficients(
    resolved: &Resolved,
    args: &FunctionArgs,
    level: u32,
) -> Result<WaveletCoefficients> {
    check_level(level)?;
    let table = match &resolved.profile {
        Profile::Gaussian(g) => gaussian_coefficients(g.a(), resolved.h, level)?.sparsify(args.eps)?,
        Profile::Samples(s) => {
            let quad = CoefficientQuadrature {
                abs_tol: args.coeff_tol,
                ..CoefficientQuadrature::default()
            };
            decompose(s, resolved.h, level, args.eps, &quad)?
        }
    };
    Ok(table)
}

fn grid(args: &GridArgs) -> Result<Vec<f64>> {
    let GridArgs { pmin, pmax, pcount } = *args;
    if !(pmin.is_finite() && pmax.is_finite()) || pmin < 0.0 {
        return Err(argument("grid bounds must be finite with --pmin >= 0"));
    }
    match pcount {
        0 => Err(argument("--pcount must be at least 1")),
        1 if pmin <= pmax => Ok(vec![pmin]),
        _ if pmin < pmax => Ok((0..pcount)
            .map(|i| pmin + (pmax - pmin) * i as f64 / (pcount - 1) as f64)
            .collect()),
        _ => Err(argument("--pmin must be less than --pmax")),
    }
}

fn oracle_config(args: &OracleArgs, r_max: f64) -> Result<QuadratureConfig> {
    let cfg = QuadratureConfig {
        abs_tol: args.abs_tol,
        rel_tol: args.rel_tol,
        max_panels: args.max_panels,
        nodes_per_panel: args.nodes_per_panel,
        r_max,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Closed form for the Gaussian at order 1; direct quadrature otherwise.
fn reference_values(
    resolved: &Resolved,
    order: TransformOrder,
    grid: &[f64],
    oracle: &OracleArgs,
) -> Result<Vec<f64>> {
    match (&resolved.profile, order) {
        (Profile::Gaussian(g), TransformOrder::Order1) => {
            Ok(grid.iter().map(|&p| g.order1_transform(p)).collect())
        }
        (profile, order) => {
            let cfg = oracle_config(oracle, resolved.h)?;
            grid.iter()
                .map(|&p| Ok(direct_hankel(profile.radial(), order, p, &cfg)?))
                .collect()
        }
    }
}

fn levels(level: Option<u32>, levels: &[u32]) -> Vec<u32> {
    match level {
        Some(l) => vec![l],
        None => levels.to_vec(),
    }
}

/// Writes through a temporary file in the destination directory, then renames.
fn write_atomically(path: &Path, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    fill(&mut buf)?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let unwritable = |e: std::io::Error| argument(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(unwritable)?;
    tmp.write_all(&buf).map_err(unwritable)?;
    tmp.persist(path).map_err(|e| unwritable(e.error))?;
    Ok(())
}

pub fn cmd_coeffs(args: &CoeffsArgs) -> Result<()> {
    let resolved = resolve(&args.function)?;
    let table = coefficients(&resolved, &args.function, args.level)?;
    write_atomically(&args.output, |buf| Ok(write_coefficients(buf, &table)?))
}

pub fn cmd_transform(args: &TransformArgs) -> Result<()> {
    let p = grid(&args.grid)?;
    let order = args.function.order;
    let (table, resolved) = match &args.coeffs {
        Some(path) => {
            let h = args
                .function
                .h
                .ok_or_else(|| argument("--coeffs needs --h"))?;
            let file = File::open(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let table = read_coefficients(BufReader::new(file), h, None).map_err(|e| match e {
                haar_hankel::Error::Input { .. } => {
                    CliError::Input(format!("{}: {e}", path.display()))
                }
                other => other.into(),
            })?;
            let resolved = match args.function.function {
                Some(_) => Some(resolve(&args.function)?),
                None => None,
            };
            (table, resolved)
        }
        None => {
            let resolved = resolve(&args.function)?;
            (coefficients(&resolved, &args.function, args.level)?, Some(resolved))
        }
    };
    let curve = transform_grid(&table, order, &p)?;
    if args.compare_analytic {
        let resolved = resolved
            .as_ref()
            .ok_or_else(|| argument("--compare-analytic needs --function"))?;
        let exact = reference_values(resolved, order, &p, &args.oracle)?;
        let rows: Vec<Vec<f64>> = curve
            .points()
            .iter()
            .zip(&exact)
            .map(|(&(p, v), &e)| vec![p, v, e, (v - e).abs()])
            .collect();
        write_atomically(&args.output, |buf| {
            Ok(write_table(buf, &["p", "value", "exact", "abs_err"], &rows)?)
        })
    } else {
        let rows: Vec<Vec<f64>> = curve.points().iter().map(|&(p, v)| vec![p, v]).collect();
        write_atomically(&args.output, |buf| Ok(write_table(buf, &["p", "value"], &rows)?))
    }
}

pub fn cmd_error_study(args: &StudyArgs) -> Result<()> {
    let levels = levels(args.level, &args.levels);
    if levels.len() < 2 {
        return Err(argument("error-study needs at least two levels (--levels 2,3,4)"));
    }
    let resolved = resolve(&args.function)?;
    let p = grid(&args.grid)?;
    let order = args.function.order;
    let exact = reference_values(&resolved, order, &p, &args.oracle)?;
    let mut columns = Vec::with_capacity(levels.len());
    for &level in &levels {
        let table = coefficients(&resolved, &args.function, level)?;
        let curve = transform_grid(&table, order, &p)?;
        columns.push(
            curve
                .values()
                .zip(&exact)
                .map(|(v, e)| (v - e).abs())
                .collect::<Vec<f64>>(),
        );
    }
    let names: Vec<String> = levels.iter().map(|l| format!("err_J{l}")).collect();
    let mut header = vec!["p"];
    header.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<f64>> = p
        .iter()
        .enumerate()
        .map(|(i, &pi)| std::iter::once(pi).chain(columns.iter().map(|c| c[i])).collect())
        .collect();
    write_atomically(&args.output, |buf| Ok(write_table(buf, &header, &rows)?))
}

/// One timing row: the series on the table against direct quadrature of the
/// same level-J approximation.
pub struct BenchRow {
    pub p_count: usize,
    pub level: u32,
    pub series_ms: f64,
    pub oracle_ms: f64,
    pub max_abs_diff: f64,
}

pub fn bench_rows(args: &StudyArgs) -> Result<Vec<BenchRow>> {
    let levels = levels(args.level, &args.levels);
    if levels.is_empty() {
        return Err(argument("bench needs --level or --levels"));
    }
    let resolved = resolve(&args.function)?;
    let order = args.function.order;
    let cfg = oracle_config(&args.oracle, resolved.h)?;
    let base = grid(&args.grid)?;
    let mut rows = Vec::new();
    for &level in &levels {
        let table = coefficients(&resolved, &args.function, level)?;
        let approx = HaarApproximation::new(&table);
        for count in [base.len(), 2 * base.len()] {
            let p = if count == base.len() {
                base.clone()
            } else {
                grid(&GridArgs {
                    pcount: count,
                    ..args.grid.clone()
                })?
            };
            let start = Instant::now();
            let curve = transform_grid(&table, order, &p)?;
            let series_ms = start.elapsed().as_secs_f64() * 1e3;
            let start = Instant::now();
            let direct: Vec<f64> = p
                .iter()
                .map(|&pi| direct_hankel(&approx, order, pi, &cfg))
                .collect::<haar_hankel::Result<_>>()?;
            let oracle_ms = start.elapsed().as_secs_f64() * 1e3;
            let max_abs_diff = curve
                .values()
                .zip(&direct)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            rows.push(BenchRow {
                p_count: count,
                level,
                series_ms,
                oracle_ms,
                max_abs_diff,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_bench(args: &StudyArgs) -> Result<()> {
    let rows: Vec<Vec<String>> = bench_rows(args)?
        .into_iter()
        .map(|r| {
            vec![
                r.p_count.to_string(),
                r.level.to_string(),
                format!("{:.3}", r.series_ms),
                format!("{:.3}", r.oracle_ms),
                format_value(r.max_abs_diff),
            ]
        })
        .collect();
    write_atomically(&args.output, |buf| {
        Ok(write_text_table(
            buf,
            &["p_count", "J", "series_ms", "oracle_ms", "max_abs_diff"],
            &rows,
        )?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_of(pmin: f64, pmax: f64, pcount: usize) -> Result<Vec<f64>> {
        grid(&GridArgs { pmin, pmax, pcount })
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = grid_of(0.0, 10.0, 201).unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!((g[0], g[200]), (0.0, 10.0));
        assert_eq!(grid_of(2.0, 2.0, 1).unwrap(), [2.0]);
    }

    #[test]
    fn bad_grids_are_argument_errors() {
        for (lo, hi, n) in [(1.0, 0.0, 5), (0.0, 1.0, 0), (-1.0, 1.0, 3), (1.0, 1.0, 2)] {
            assert_eq!(grid_of(lo, hi, n).unwrap_err().exit_code(), 2);
        }
        assert_eq!(grid_of(0.0, f64::NAN, 3).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        use haar_hankel::Error as E;
        let code = |e: E| CliError::from(e).exit_code();
        assert_eq!(code(E::Input { line: 3, message: "x".into() }), 3);
        assert_eq!(code(E::Capacity { level: 31, max: 30 }), 2);
        assert_eq!(code(E::InvalidArgument("x".into())), 2);
        let conv = E::Convergence { estimate: 0.0, error_bound: 1.0, panels: 9 };
        assert_eq!(code(conv), 4);
    }

    #[test]
    fn single_level_overrides_list() {
        assert_eq!(levels(Some(4), &[]), [4]);
        assert_eq!(levels(None, &[2, 3]), [2, 3]);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
