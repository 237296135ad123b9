//! Exact rational and polynomial arithmetic.
//!
//! Everything symbolic in the crate lives over [`Rational`]: polynomials in
//! the caustic parameter, truncated power series, Hankel determinants. The
//! only floating-point routine here is [`poly_roots`], which consumes an
//! exact polynomial once it has been fully assembled.

mod hankel;
mod poly;
mod roots;
mod series;

pub use hankel::hankel_det;
pub use poly::PolyQ;
pub use roots::{
    cauchy_bound, cluster_roots, poly_roots, polish_roots, rational_roots, RootCluster,
};
pub use series::{series_sqrt, SeriesQ};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms.
pub type Rational = BigRational;

/// Double-precision complex number used for all numeric geometry.
pub type Cx = Complex64;

/// Commutative algebra over the rationals, as needed by the series and
/// determinant routines.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, factor: &Rational) -> Self;
    /// Division that is known to be exact; `None` if it is not.
    fn div_exact(&self, divisor: &Self) -> Option<Self>;
}

impl Ring for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rational as Zero>::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, factor: &Rational) -> Self {
        self * factor
    }
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if <Rational as Zero>::is_zero(divisor) {
            None
        } else {
            Some(self / divisor)
        }
    }
}

/// `num / den` as a [`Rational`]. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"3"`, `"-3/4"` or a plain decimal such as `"1.4142"`; decimals are
/// converted literally (`"1.5"` is `3/2`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational literal: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(num, den);
    Ok(if neg { -value } else { value })
}

/// Lossy conversion used when handing exact data to numeric code.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Extremely large numerators/denominators: fall back to a ratio of
        // scaled integers.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn to_cx(r: &Rational) -> Cx {
    Cx::new(to_f64(r), 0.0)
}

/// Render as `"p/q"` or `"p"`.
pub fn fraction_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The k-th Catalan number `binom(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> Rational {
    Rational::new(binomial(2 * k, k), BigInt::from(k + 1))
}

/// Taylor coefficient of `sqrt(1 + t)` at `t^k`:
/// `(-1)^(k+1) binom(2k, k) / (4^k (2k - 1))`.
pub fn taylor_c(k: u64) -> Rational {
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let den = num_traits::pow(BigInt::from(4), k as usize) * (BigInt::from(2 * k) - 1);
    Rational::new(BigInt::from(sign) * binomial(2 * k, k), den)
}

/// Principal square root: branch cut on the negative real axis, result with
/// nonnegative real part.
pub fn principal_sqrt(z: Cx) -> Cx {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

pub(crate) fn is_finite(z: Cx) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
