mod config;
mod plot;
mod report;
mod verify;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use caustics::algebra::Cx;
use caustics::billiard::{trace_orbit, CLOSURE_TOL};
use caustics::cayley::caustic_roots;
use caustics::conics::{ConfocalFamily, ProjPoint, DEFAULT_TOL};
use clap::{Args, Parser, Subcommand};

use config::{
    parse_complex, parse_point, Exit, FamilyArgs, Format, OutputArgs, RunConfig, EXIT_CLOSURE,
    EXIT_NUMERIC,
};
use report::{CausticsReport, TraceReport};

#[derive(Parser, Debug)]
#[command(name = "caustics", version, about = "Complex caustics of periodic billiard orbits in an ellipse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cayley polynomial B^n, its roots and their classification.
    Caustics {
        #[command(flatten)]
        family: FamilyArgs,
        /// Admissibility tolerance, relative to max(1, a², b²).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Trace an orbit with a given caustic and check its residuals.
    Orbit {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Closure and residual tolerance.
        #[arg(long, default_value_t = CLOSURE_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the verification suites.
    Verify(verify::VerifyArgs),
    /// Plot data for the caustics of a family or for one orbit.
    Plot {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = plot::What::Caustics)]
        what: plot::What,
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct OrbitArgs {
    /// Caustic parameter, `re` or `re,im`.
    #[arg(long, conflicts_with = "root", allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Index into the roots of B^n sorted by real part, then imaginary part.
    #[arg(long)]
    root: Option<usize>,
    /// Start vertex `x,y` on the ellipse.
    #[arg(long, conflicts_with = "theta", allow_hyphen_values = true)]
    start: Option<String>,
    /// Start vertex `(a cos θ, b sin θ)`; `θ` may be `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Which of the two tangents from the start vertex to follow.
    #[arg(long, default_value_t = 0)]
    branch: usize,
}

const DEFAULT_THETA: f64 = 0.3;

/// The caustic parameter chosen by `--lambda` or `--root`.
fn select_lambda(cfg: &RunConfig, args: &OrbitArgs) -> Result<Cx, Exit> {
    let lambda = match (&args.lambda, args.root) {
        (Some(text), _) => parse_complex(text)?,
        (None, Some(k)) => {
            let roots = caustic_roots(&cfg.fam, cfg.n, DEFAULT_TOL)?;
            let root = roots.roots.get(k).ok_or_else(|| {
                Exit::usage(format!("--root {k}: B^{} has {} roots", cfg.n, roots.roots.len()))
            })?;
            if !root.admissible {
                return Err(Exit::usage(format!("--root {k}: λ = {} is not admissible", root.lambda)));
            }
            root.lambda
        }
        (None, None) => return Err(Exit::usage("one of --lambda or --root is required")),
    };
    if cfg.fam.is_forbidden(lambda, DEFAULT_TOL) {
        return Err(Exit::usage(format!("λ = {lambda} is a forbidden value (-a² or -b²)")));
    }
    if lambda.norm() <= DEFAULT_TOL {
        return Err(Exit::usage("λ = 0 is the ellipse itself"));
    }
    Ok(lambda)
}

fn select_start(fam: &ConfocalFamily, args: &OrbitArgs) -> Result<ProjPoint, Exit> {
    match (&args.start, &args.theta) {
        (Some(p), _) => {
            let (x, y) = parse_point(p)?;
            Ok(ProjPoint::real(x, y))
        }
        (None, Some(t)) => Ok(fam.ellipse_point(parse_complex(t)?)),
        (None, None) => Ok(fam.ellipse_point(Cx::new(DEFAULT_THETA, 0.0))),
    }
}

/// Rendered output plus the exit code it should be reported with.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn cmd_caustics(cfg: &RunConfig) -> Result<Outcome, Exit> {
    let roots = caustic_roots(&cfg.fam, cfg.n, cfg.tol).map_err(|e| match e {
        caustics::Error::RootsNotConverged { .. } => Exit::numeric(e.to_string()),
        e => e.into(),
    })?;
    let report = CausticsReport::of(&roots);
    match cfg.format {
        Format::Json => Ok(Outcome::ok(json(&report))),
        Format::Csv => Ok(Outcome::ok(report.to_csv())),
        Format::Svg => Err(Exit::usage("caustics supports --format json or csv; use plot for svg")),
    }
}

fn cmd_orbit(cfg: &RunConfig, args: &OrbitArgs) -> Result<Outcome, Exit> {
    let lambda = select_lambda(cfg, args)?;
    let start = select_start(&cfg.fam, args)?;
    let trace = trace_orbit(&cfg.fam, lambda, &start, args.branch, cfg.n)?;
    let report = TraceReport::of(&trace, cfg.n, args.branch, cfg.tol);
    let text = match cfg.format {
        Format::Json => json(&report),
        Format::Csv => report.to_csv(),
        Format::Svg => return Err(Exit::usage("orbit supports --format json or csv; use plot for svg")),
    };
    let code = if report.max_step_residual() > cfg.tol {
        EXIT_NUMERIC
    } else if !report.closed {
        EXIT_CLOSURE
    } else {
        0
    };
    Ok(Outcome { text, code })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Exit> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Exit> {
    let (outcome, out) = match cli.command {
        Command::Caustics { family, tol, output } => {
            let cfg = RunConfig::new(&family, tol, output.format)?;
            (cmd_caustics(&cfg)?, output.out)
        }
        Command::Orbit { family, orbit, tol, output } => {
            let cfg = RunConfig::new(&family, tol, output.format)?;
            (cmd_orbit(&cfg, &orbit)?, output.out)
        }
        Command::Verify(args) => {
            let (text, code) = verify::cmd_verify(&args)?;
            (Outcome { text, code }, args.out.clone())
        }
        Command::Plot { family, what, orbit, format, out } => {
            let cfg = RunConfig::new(&family, CLOSURE_TOL, format)?;
            let text = match what {
                plot::What::Caustics => plot::caustics(&cfg)?,
                plot::What::Orbit => {
                    let lambda = select_lambda(&cfg, &orbit)?;
                    let start = select_start(&cfg.fam, &orbit)?;
                    plot::orbit(&cfg, lambda, &start, orbit.branch)?
                }
            };
            (Outcome::ok(text), out)
        }
    };
    emit(&outcome.text, out.as_deref())?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
