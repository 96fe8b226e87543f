//! Command-line front end.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or
//! configuration error, 3 numerical failure (non-finite values).

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::conditions::{verify_all, VerifyConfig};
use crate::expr::Params;
use crate::goursat::{compare, solve, Boundary, GoursatError};
use crate::kernels::{self, Coefficient, TransmutationCase};
use crate::operators::linspace;
use crate::quadrature::{apply_table, identity_xs, QuadError};

use self::report::{to_json, ApplyDoc, RowDoc, SolveDoc, VerifyDoc, TOOL_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Largest abscissa accepted without `--unsafe-range`.
pub const SAFE_X_MAX: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(name = "transmutation", version, about = "Verify, apply and compute transmutation kernels")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or describe the built-in cases.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check the existence conditions for a kernel.
    Verify(RunArgs),
    /// Evaluate the transmutation integral against the closed-form image.
    Apply(RunArgs),
    /// March the characteristic problem for a kernel given by a problem file.
    Solve(SolveArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Show {
        name: String,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["case", "custom"])))]
pub struct RunArgs {
    /// Built-in case name (see `catalog list`).
    #[arg(long)]
    pub case: Option<String>,
    /// Case definition file with [case], [params], [operatorA], [operatorB].
    #[arg(long, value_name = "FILE")]
    pub custom: Option<PathBuf>,
    /// Parameter overrides, `k=v[,k=v...]`.
    #[arg(long)]
    pub params: Option<String>,
    /// Explicit sample abscissae.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["x_min", "x_max", "x_count"])]
    pub x: Option<Vec<f64>>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub x_count: Option<usize>,
    /// Gauss–Jacobi order.
    #[arg(long, default_value_t = 64)]
    pub quad_order: usize,
    /// Points per side of the triangle grid for the hyperbolic residual.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_residual: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_identity: f64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub no_timestamp: bool,
    /// Allow abscissae beyond 3.
    #[arg(long)]
    pub unsafe_range: bool,
    /// Perturb one coefficient, e.g. `c1:+0.1` (testing aid).
    #[arg(long, hide = true, value_name = "SPEC")]
    pub corrupt: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem file with a [solver] section.
    #[arg(long, value_name = "FILE")]
    pub custom: PathBuf,
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub solver_h: Option<f64>,
    #[arg(long = "solver-X", value_name = "X")]
    pub solver_x: Option<f64>,
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub tol_solver: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Also write the lattice as CSV (json/text formats).
    #[arg(long, value_name = "FILE")]
    pub grid_out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Why a command stopped before producing a verdict.
#[derive(Debug, Clone, PartialEq)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_PASS
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Catalog { action } => cmd_catalog(action, stdout),
        Command::Verify(args) => cmd_verify(&args, stdout),
        Command::Apply(args) => cmd_apply(&args, stdout),
        Command::Solve(args) => cmd_solve(&args, stdout, stderr),
    };
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn timestamp(disabled: bool) -> Option<u64> {
    if disabled {
        return None;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn parse_params(text: Option<&str>) -> Result<Params, Failure> {
    match text {
        None => Ok(Params::new()),
        Some(t) => Params::parse_assignments(t).map_err(|e| usage(format!("--params: {e}"))),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_case(args: &RunArgs) -> Result<TransmutationCase, Failure> {
    let overrides = parse_params(args.params.as_deref())?;
    let mut case = match (&args.case, &args.custom) {
        (Some(name), _) => kernels::get_case(name, &overrides).map_err(usage)?,
        (None, Some(path)) => {
            let text = read_file(path)?;
            config::load_case(&text, &overrides).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(usage("one of --case or --custom is required")),
    };
    if let Some(corruption) = &args.corrupt {
        let (name, delta) = corruption
            .split_once(':')
            .ok_or_else(|| usage(format!("--corrupt expects COEFF:DELTA, got `{corruption}`")))?;
        let which = Coefficient::from_name(name.trim())
            .ok_or_else(|| usage(format!("--corrupt: unknown coefficient `{name}`")))?;
        let delta: f64 = delta
            .trim()
            .parse()
            .map_err(|_| usage(format!("--corrupt: bad offset `{delta}`")))?;
        case = case.corrupted(which, delta);
    }
    Ok(case)
}

fn check_tolerance(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{name} must be positive, got {v}")))
    }
}

/// Requested abscissae, or `None` to use the case defaults.
fn sample_points(args: &RunArgs, case: &TransmutationCase) -> Result<Option<Vec<f64>>, Failure> {
    let xs = if let Some(xs) = &args.x {
        if xs.is_empty() {
            return Err(usage("--x needs at least one value"));
        }
        xs.clone()
    } else if args.x_min.is_some() || args.x_max.is_some() || args.x_count.is_some() {
        let lo = args.x_min.unwrap_or(case.x_range.0);
        let hi = args.x_max.unwrap_or(case.x_range.1);
        let n = args.x_count.unwrap_or(20);
        if n == 0 {
            return Err(usage("--x-count must be at least 1"));
        }
        if !(hi >= lo) {
            return Err(usage(format!("--x-max ({hi}) is below --x-min ({lo})")));
        }
        linspace(lo, hi, n)
    } else {
        return Ok(None);
    };
    for &x in &xs {
        if !(x > 0.0 && x.is_finite()) {
            return Err(usage(format!("x must be positive, got {x}")));
        }
        if x > SAFE_X_MAX && !args.unsafe_range {
            return Err(usage(format!("x = {x} exceeds {SAFE_X_MAX}; pass --unsafe-range to allow it")));
        }
    }
    Ok(Some(xs))
}

#[derive(Serialize)]
struct CaseDoc<'a> {
    name: &'a str,
    identity: &'a str,
    params: &'a std::collections::BTreeMap<String, f64>,
    constraints: &'a [String],
    kernel: String,
    f0: String,
    f1: String,
    operator_a: String,
    operator_b: String,
    lambda: Option<f64>,
    p_diag: f64,
    p_zero: f64,
    x_range: (f64, f64),
    notes: &'a [String],
}

fn cmd_catalog(action: CatalogAction, stdout: &mut dyn Write) -> Result<bool, Failure> {
    match action {
        CatalogAction::List { format } => {
            let names = kernels::list_cases();
            let text = match format {
                Format::Json => to_json(&names),
                Format::Text | Format::Csv => names.iter().map(|n| format!("{n}\n")).collect(),
            };
            emit(None, &text, stdout)?;
        }
        CatalogAction::Show { name, params, format } => {
            let overrides = parse_params(params.as_deref())?;
            let case = kernels::get_case(&name, &overrides).map_err(usage)?;
            let text = match format {
                Format::Json => to_json(&CaseDoc {
                    name: &case.name,
                    identity: &case.provenance,
                    params: case.params.as_map(),
                    constraints: &case.constraints,
                    kernel: case.kernel.to_string(),
                    f0: case.f0.to_string(),
                    f1: case.f1.to_string(),
                    operator_a: case.op_a.describe(),
                    operator_b: case.op_b.describe(),
                    lambda: case.lambda,
                    p_diag: case.p_diag,
                    p_zero: case.p_zero,
                    x_range: case.x_range,
                    notes: &case.notes,
                }),
                Format::Text | Format::Csv => kernels::describe(&case),
            };
            emit(None, &text, stdout)?;
        }
    }
    Ok(true)
}

fn cmd_verify(args: &RunArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let case = load_case(args)?;
    check_tolerance("--tol-residual", args.tol_residual)?;
    if args.grid == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    let xs = sample_points(args, &case)?;
    let cfg = VerifyConfig {
        triangle_n: args.grid,
        xs: xs.clone(),
        eigen_grid: xs,
        tol_residual: args.tol_residual,
        tol_eigen: args.tol_residual,
        ..VerifyConfig::default()
    };
    let report = verify_all(&case, &cfg).map_err(usage)?;
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&VerifyDoc::new(&report, timestamp(args.no_timestamp))),
        Format::Csv => report::verify_csv(&report),
        Format::Text => report::verify_text(&report),
    };
    emit(args.out.as_deref(), &text, stdout)?;
    if report.has_non_finite() {
        return Err(Failure::Numerical("non-finite residual encountered".into()));
    }
    Ok(report.overall_pass)
}

fn quad_failure(e: QuadError) -> Failure {
    match e {
        QuadError::NonConvergence { .. } | QuadError::Eval { .. } => Failure::Numerical(e.to_string()),
        _ => usage(e),
    }
}

fn cmd_apply(args: &RunArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let case = load_case(args)?;
    check_tolerance("--tol-identity", args.tol_identity)?;
    let xs = sample_points(args, &case)?.unwrap_or_else(|| identity_xs(&case));
    let rows = apply_table(&case, &xs, args.quad_order).map_err(quad_failure)?;
    let max = rows.iter().fold(0.0f64, |m, r| m.max(r.rel_error));
    let finite = rows.iter().all(|r| r.transformed.is_finite() && r.expected.is_finite());
    let pass = finite && max <= args.tol_identity;
    let text = match args.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&ApplyDoc {
            case: &case.name,
            params: case.params.as_map(),
            quad_order: args.quad_order,
            rows: rows.iter().map(RowDoc::from).collect(),
            max_rel_error: max,
            tolerance: args.tol_identity,
            pass,
            tool_version: TOOL_VERSION,
            timestamp: timestamp(args.no_timestamp),
        }),
        Format::Csv => report::apply_csv(&rows),
        Format::Text => format!(
            "{}max rel error {max:.3e} (tolerance {:.1e}): {}\n",
            report::apply_text(&rows),
            args.tol_identity,
            if pass { "pass" } else { "FAIL" }
        ),
    };
    emit(args.out.as_deref(), &text, stdout)?;
    if !finite {
        return Err(Failure::Numerical("non-finite value in the transmutation table".into()));
    }
    Ok(pass)
}

fn goursat_failure(e: GoursatError) -> Failure {
    match e {
        GoursatError::NonFinite { .. } | GoursatError::DiagonalBlowUp { .. } | GoursatError::Coefficient { .. } => {
            Failure::Numerical(e.to_string())
        }
        _ => usage(e),
    }
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool, Failure> {
    let overrides = parse_params(args.params.as_deref())?;
    let text = read_file(&args.custom)?;
    let loaded =
        config::load_problem(&text, &overrides).map_err(|e| usage(format!("{}: {e}", args.custom.display())))?;
    let mut problem = loaded.problem;
    if let Some(h) = args.solver_h {
        problem.h = h;
    }
    if let Some(x) = args.solver_x {
        problem.x_max = x;
    }
    if let Some(b) = &args.boundary {
        problem.boundary = Boundary::from_name(b).ok_or_else(|| usage(format!("unknown boundary `{b}`")))?;
    }
    let tolerance = args.tol_solver.or(loaded.tolerance).unwrap_or(1e-3);
    check_tolerance("solver tolerance", tolerance)?;

    let grid = solve(&problem).map_err(goursat_failure)?;
    let stats = loaded.reference.as_ref().map(|r| compare(&grid, r, &problem.params));
    let numerical = stats.as_ref().is_some_and(|s| s.failures > 0 || !s.max.is_finite());
    let pass = !numerical && stats.as_ref().is_none_or(|s| s.max <= tolerance);

    let summary = match &stats {
        Some(s) => format!(
            "points {} max error {:.6e} l2 error {:.6e} (tolerance {:.1e}): {}\n",
            s.count,
            s.max,
            s.l2,
            tolerance,
            if pass { "pass" } else { "FAIL" }
        ),
        None => format!("points {} (no reference kernel)\n", grid.points().count()),
    };
    let mut csv = Vec::new();
    grid.write_csv(&mut csv).map_err(|e| usage(e.to_string()))?;
    let csv = String::from_utf8(csv).expect("CSV is ASCII");
    match args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            emit(args.out.as_deref(), &csv, stdout)?;
            let _ = stderr.write_all(summary.as_bytes());
        }
        format => {
            if let Some(path) = &args.grid_out {
                emit(Some(path), &csv, stdout)?;
            }
            let body = if format == Format::Json {
                to_json(&SolveDoc {
                    params: problem.params.as_map(),
                    x_max: problem.x_max,
                    h: problem.h,
                    boundary: problem.boundary.name(),
                    points: grid.points().count(),
                    max_error: stats.as_ref().map(|s| s.max),
                    l2_error: stats.as_ref().map(|s| s.l2),
                    tolerance,
                    pass,
                    tool_version: TOOL_VERSION,
                    timestamp: timestamp(args.no_timestamp),
                })
            } else {
                summary
            };
            emit(args.out.as_deref(), &body, stdout)?;
        }
    }
    if numerical {
        return Err(Failure::Numerical("reference comparison produced non-finite values".into()));
    }
    Ok(pass)
}
