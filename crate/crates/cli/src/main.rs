//! `staticgeo`: verify, classify and tabulate warped-product static spaces
//! described by JSON spec files.
//!
//! Exit codes: 0 success, 1 residual or validation failure, 2 parse error,
//! 3 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use staticgeo_core::catalog::{self, CatalogParams};
use staticgeo_core::geometry::{LapseFunction, WarpedProductSpec, DEFAULT_GRID_POINTS};
use staticgeo_core::ode::{
    find_periodic, integrate_warping, PeriodicSearch, WarpingOde, WarpingOdeParams, DEFAULT_STEPS,
};
use staticgeo_core::report::profile_table;
use staticgeo_core::verifier::{verify_and_classify, ClassifyOptions, Label, Tier};
use staticgeo_core::{schema, Error};

const GRID_ENV: &str = "STATICGEO_GRID";

#[derive(Parser)]
#[command(name = "staticgeo", version, about = "Vacuum static warped products with harmonic curvature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the residual report; exit 1 if any channel exceeds the tolerance.
    Verify {
        spec: PathBuf,
        /// Tolerance; defaults to the tier of the spec's warping kinds.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the type label with its diagnostics.
    Classify {
        spec: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Integrate h'' + c1 h = c0 h^(-p), or search for a periodic orbit.
    SolveOde(OdeArgs),
    /// List or build the closed-form and ODE-backed catalog entries.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Write the per-grid-point profile table.
    Report {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct OdeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c0: f64,
    #[arg(long, default_value_t = 1.0)]
    h0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    dh0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    end: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Search for the periodic orbit with this first-integral value instead.
    #[arg(long, allow_hyphen_values = true)]
    periodic: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List entry names.
    List,
    /// Write the spec file of an entry.
    Build {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        /// Scalar curvature.
        #[arg(long = "R", allow_hyphen_values = true)]
        scalar: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        c0: Option<f64>,
        /// Alias for --c0.
        #[arg(long, conflicts_with = "c0", allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<f64>,
        /// Lapse scale.
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(3, format!("{}: {e}", path.display()))
    }

    fn compute(e: Error) -> Self {
        Self::new(1, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn default_grid() -> Result<usize, Failure> {
    match std::env::var(GRID_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&g| g > 0)
            .ok_or_else(|| Failure::new(2, format!("{GRID_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_GRID_POINTS),
    }
}

fn load(path: &Path) -> Result<(WarpedProductSpec, LapseFunction), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    schema::parse_spec(&text, default_grid()?)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(3, e.to_string())),
    }
}

fn tolerance(spec: &WarpedProductSpec, lapse: &LapseFunction, tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(|| Tier::for_pair(spec, lapse).tolerance())
}

fn run_verify(path: &Path, tol: Option<f64>) -> Outcome {
    let (spec, lapse) = load(path)?;
    let tol = tolerance(&spec, &lapse, tol);
    let options = ClassifyOptions {
        tolerance: Some(tol),
        ..Default::default()
    };
    let (mut report, _) = verify_and_classify(&spec, &lapse, &options).map_err(Failure::compute)?;
    report.tolerance = tol;
    emit(&json(&report), None)?;
    Ok(if report.passes(tol) { 0 } else { 1 })
}

fn run_classify(path: &Path, tol: Option<f64>) -> Outcome {
    let (spec, lapse) = load(path)?;
    let options = ClassifyOptions {
        tolerance: Some(tolerance(&spec, &lapse, tol)),
        ..Default::default()
    };
    let (_, label) = verify_and_classify(&spec, &lapse, &options).map_err(Failure::compute)?;
    emit(&json(&label), None)?;
    Ok(if label.label == Label::Invalid { 1 } else { 0 })
}

#[derive(Serialize)]
struct Trajectory {
    exponent: u32,
    linear_coeff: f64,
    forcing: f64,
    first_integral_drift: f64,
    /// `(s, h, h')` per node.
    nodes: Vec<(f64, f64, f64)>,
}

fn run_solve_ode(a: &OdeArgs) -> Outcome {
    let ode = WarpingOde::new(a.p, a.c1, a.c0).map_err(Failure::compute)?;
    let text = match a.periodic {
        Some(energy) => {
            let found = find_periodic(&PeriodicSearch::new(ode, energy)).map_err(Failure::compute)?;
            json(&found)
        }
        None => {
            let params =
                WarpingOdeParams::new(ode, a.h0, a.dh0, a.start, a.end).with_steps(a.steps);
            let t = integrate_warping(&params).map_err(Failure::compute)?;
            json(&Trajectory {
                exponent: a.p,
                linear_coeff: a.c1,
                forcing: a.c0,
                first_integral_drift: t.first_integral_drift(),
                nodes: t.nodes().collect(),
            })
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(0)
}

fn run_catalog(cmd: &CatalogCommand) -> Outcome {
    match cmd {
        CatalogCommand::List => {
            let mut text = catalog::names().join("\n");
            text.push('\n');
            emit(&text, None)?;
        }
        CatalogCommand::Build {
            name,
            n,
            scalar,
            k,
            c0,
            a,
            r,
            c1,
            c2,
            scale,
            out,
        } => {
            let params = CatalogParams {
                n: *n,
                scalar: *scalar,
                k: *k,
                c0: c0.or(*a),
                r: *r,
                c1: *c1,
                c2: *c2,
                scale: *scale,
                length: None,
            };
            let mut entry = catalog::build(name, &params).map_err(Failure::compute)?;
            if std::env::var_os(GRID_ENV).is_some() {
                entry = entry.with_grid_points(default_grid()?);
            }
            let mut text = schema::to_json(&entry.spec, &entry.lapse);
            text.push('\n');
            emit(&text, out.as_deref())?;
        }
    }
    Ok(0)
}

fn run_report(path: &Path, out: &Path, format: Format) -> Outcome {
    let (spec, lapse) = load(path)?;
    let table = profile_table(&spec, &lapse);
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    };
    emit(&text, Some(out))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { spec, tol } => run_verify(spec, *tol),
        Command::Classify { spec, tol } => run_classify(spec, *tol),
        Command::SolveOde(args) => run_solve_ode(args),
        Command::Catalog(cmd) => run_catalog(cmd),
        Command::Report {
            spec,
            out,
            format,
        } => run_report(spec, out, *format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("staticgeo: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
