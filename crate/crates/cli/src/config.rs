use std::fmt;
use std::path::PathBuf;

use caustics::algebra::{parse_rational, to_f64, Cx, Rational};
use caustics::conics::ConfocalFamily;
use clap::{Args, ValueEnum};
use num_traits::Signed;

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

pub const EXIT_SUITE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_CLOSURE: i32 = 4;
pub const EXIT_ISOTROPIC: i32 = 5;

impl Exit {
    pub fn usage(message: impl Into<String>) -> Self {
        Exit { code: EXIT_USAGE, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Exit { code: EXIT_NUMERIC, message: message.into() }
    }
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<caustics::Error> for Exit {
    fn from(e: caustics::Error) -> Self {
        use caustics::Error::*;
        let code = match e {
            InvalidInput(_) | PeriodTooSmall(_) | DegenerateFamily { .. } | NotOnConic { .. }
            | IdenticalConics | Circle => EXIT_USAGE,
            IsotropicDegeneration { .. } | IsotropicLine | IsotropicMirror => EXIT_ISOTROPIC,
            _ => EXIT_NUMERIC,
        };
        Exit { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit::usage(format!("cannot write output: {e}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Semi-major axis, as a decimal or a fraction such as 3/2.
    #[arg(long)]
    pub a: String,
    /// Semi-minor axis.
    #[arg(long)]
    pub b: String,
    /// Period of the orbits.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated run parameters shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub fam: ConfocalFamily,
    pub n: usize,
    pub tol: f64,
    pub format: Format,
}

fn positive(name: &str, text: &str) -> Result<Rational, Exit> {
    let v = parse_rational(text).map_err(|e| Exit::usage(format!("--{name}: {e}")))?;
    if !v.is_positive() {
        return Err(Exit::usage(format!("--{name} must be positive")));
    }
    Ok(v)
}

/// Family with `a ≥ b > 0` from decimal or fraction literals.
pub fn family(a: &str, b: &str) -> Result<ConfocalFamily, Exit> {
    let a = positive("a", a)?;
    let b = positive("b", b)?;
    if a < b {
        return Err(Exit::usage("--a must not be smaller than --b"));
    }
    Ok(ConfocalFamily::from_semi_axes(&a, &b)?)
}

impl RunConfig {
    pub fn new(fam: &FamilyArgs, tol: f64, format: Format) -> Result<Self, Exit> {
        if fam.n < 3 {
            return Err(Exit::usage(format!("--n must be at least 3, got {}", fam.n)));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Exit::usage("--tol must be positive"));
        }
        Ok(RunConfig { fam: family(&fam.a, &fam.b)?, n: fam.n, tol, format })
    }
}

/// One number: decimal, fraction or float syntax.
fn parse_real(text: &str) -> Result<f64, Exit> {
    let t = text.trim();
    if let Ok(r) = parse_rational(t) {
        return Ok(to_f64(&r));
    }
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Exit::usage(format!("not a number: {text:?}")))
}

/// `"re"` or `"re,im"`.
pub fn parse_complex(text: &str) -> Result<Cx, Exit> {
    match text.split_once(',') {
        Some((re, im)) => Ok(Cx::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(Cx::new(parse_real(text)?, 0.0)),
    }
}

/// `"x,y"` with real coordinates.
pub fn parse_point(text: &str) -> Result<(f64, f64), Exit> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| Exit::usage(format!("expected x,y, got {text:?}")))?;
    Ok((parse_real(x)?, parse_real(y)?))
}
