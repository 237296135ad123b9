use thiserror::Error;

use crate::algebra::Cx;

/// Errors raised by the algebra, geometry and billiard routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("power series constant term must be 1")]
    SeriesConstantTerm,

    #[error("sequence of length {got} cannot fill a {m}x{m} Hankel matrix at offset {offset}")]
    HankelTooShort { m: usize, offset: usize, got: usize },

    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        best: Vec<Cx>,
        residuals: Vec<f64>,
        max_residual: f64,
    },

    #[error("homogeneous coordinates are all zero")]
    ZeroVector,

    #[error("lambda = {lambda} is a forbidden value of the confocal family")]
    DegenerateFamily { lambda: Cx },

    #[error("the ellipse is a circle: foci and isotropic tangency points are undefined")]
    Circle,

    #[error("conic is singular")]
    SingularConic,

    #[error("lambda = 0 gives the ellipse itself; common points are undefined")]
    IdenticalConics,

    #[error("line is isotropic")]
    IsotropicLine,

    #[error("line passes through a focus: tangent to no admissible confocal conic")]
    FocalLine,

    #[error("point is not on the conic (residual {residual:e})")]
    NotOnConic { residual: f64 },

    #[error("point is at infinity")]
    PointAtInfinity,

    #[error("mirror direction is isotropic")]
    IsotropicMirror,

    #[error("line does not pass through the point (residual {residual:e})")]
    Incidence { residual: f64 },

    #[error("isotropic degeneration at vertex {vertex}")]
    IsotropicDegeneration { vertex: usize },

    #[error("consecutive vertices {vertex} and {next} coincide", next = vertex + 1)]
    DegenerateVertex { vertex: usize },

    #[error("invariant value {value} is focal (1/a^2 or 1/b^2)")]
    ForbiddenInvariant { value: Cx },

    #[error("n must be at least 3, got {0}")]
    PeriodTooSmall(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
