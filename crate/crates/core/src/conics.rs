//! Complex projective geometry of the confocal family
//! `x^2/(a^2+λ) + y^2/(b^2+λ) = 1`.
//!
//! Points and lines are homogeneous complex triples stored in canonical form
//! (the coordinate of largest modulus is scaled to 1), so every residual
//! below is scale-free.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::algebra::{principal_sqrt, to_f64, Cx, Rational};
use crate::error::{Error, Result};

/// Relative tolerance used when a call does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Distance to `-a^2`, `-b^2` below which a parameter is refused.
pub const FORBIDDEN_LAMBDA_TOL: f64 = 1e-12;
/// Tolerance for construction steps (doubled roots, exact incidences).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

type Triple = [Cx; 3];

const ZERO: Cx = Cx { re: 0.0, im: 0.0 };
const ONE: Cx = Cx { re: 1.0, im: 0.0 };
const I: Cx = Cx { re: 0.0, im: 1.0 };

pub(crate) fn cross(u: &Triple, v: &Triple) -> Triple {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Complex bilinear pairing (no conjugation).
pub(crate) fn dot(u: &Triple, v: &Triple) -> Cx {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub(crate) fn hnorm(u: &Triple) -> f64 {
    (u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()).sqrt()
}

fn canonical(v: Triple) -> Option<Triple> {
    if v.iter().any(|c| !crate::algebra::is_finite(*c)) {
        return None;
    }
    let max = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    // First coordinate that is maximal up to rounding, so near-ties pick a
    // stable representative.
    let idx = v.iter().position(|c| c.norm() >= max * (1.0 - 1e-9))?;
    let pivot = v[idx];
    let mut out = v.map(|c| c / pivot);
    out[idx] = ONE;
    Some(out)
}

/// Sine of the Hermitian angle between two homogeneous triples: 0 iff they
/// represent the same projective element.
pub(crate) fn triple_distance(u: &Triple, v: &Triple) -> f64 {
    let nu = hnorm(u);
    let nv = hnorm(v);
    if nu == 0.0 || nv == 0.0 {
        return 1.0;
    }
    (hnorm(&cross(u, v)) / (nu * nv)).min(1.0)
}

fn lex_cmp(u: &Triple, v: &Triple) -> Ordering {
    for k in 0..3 {
        let o = u[k].re.total_cmp(&v[k].re).then(u[k].im.total_cmp(&v[k].im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// A point of the complex projective plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    coords: Triple,
}

impl ProjPoint {
    pub fn new(x: Cx, y: Cx, z: Cx) -> Result<Self> {
        Self::from_triple([x, y, z])
    }

    pub fn from_triple(v: Triple) -> Result<Self> {
        canonical(v)
            .map(|coords| ProjPoint { coords })
            .ok_or(Error::ZeroVector)
    }

    /// The finite point `(x, y)`.
    pub fn affine(x: Cx, y: Cx) -> Self {
        Self::from_triple([x, y, ONE]).expect("affine point has z = 1")
    }

    pub fn real(x: f64, y: f64) -> Self {
        Self::affine(Cx::new(x, 0.0), Cx::new(y, 0.0))
    }

    pub fn coords(&self) -> &Triple {
        &self.coords
    }

    /// True unless the point lies on the infinity line (within `tol`).
    pub fn is_finite(&self, tol: f64) -> bool {
        self.coords[2].norm() > tol
    }

    /// Affine coordinates, or `None` on the infinity line.
    pub fn to_affine(&self) -> Option<(Cx, Cx)> {
        if !self.is_finite(CONSTRUCTION_TOL) {
            return None;
        }
        let z = self.coords[2];
        Some((self.coords[0] / z, self.coords[1] / z))
    }

    /// Point reflection through the origin, `(x:y:z) -> (-x:-y:z)`.
    pub fn opposite(&self) -> ProjPoint {
        let [x, y, z] = self.coords;
        ProjPoint::from_triple([-x, -y, z]).expect("nonzero")
    }

    pub fn distance(&self, other: &ProjPoint) -> f64 {
        triple_distance(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// The cyclic point `I = (1 : i : 0)`.
pub fn cyclic_i() -> ProjPoint {
    ProjPoint { coords: [ONE, I, ZERO] }
}

/// The cyclic point `J = (1 : -i : 0)`.
pub fn cyclic_j() -> ProjPoint {
    ProjPoint { coords: [ONE, -I, ZERO] }
}

/// A line `w1 x + w2 y + w3 z = 0` of the complex projective plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjLine {
    coords: Triple,
}

impl ProjLine {
    pub fn new(w1: Cx, w2: Cx, w3: Cx) -> Result<Self> {
        Self::from_triple([w1, w2, w3])
    }

    pub fn from_triple(w: Triple) -> Result<Self> {
        canonical(w)
            .map(|coords| ProjLine { coords })
            .ok_or(Error::ZeroVector)
    }

    pub fn infinity() -> Self {
        ProjLine { coords: [ZERO, ZERO, ONE] }
    }

    /// The line through two distinct points.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self> {
        let w = cross(&p.coords, &q.coords);
        if hnorm(&w) <= CONSTRUCTION_TOL * hnorm(&p.coords) * hnorm(&q.coords) {
            return Err(Error::ZeroVector);
        }
        Self::from_triple(w)
    }

    /// The line through the finite point `p` directed by `(vx, vy)`:
    /// `w = (vy, -vx, vx y0 - vy x0)`.
    pub fn through_with_direction(p: &ProjPoint, vx: Cx, vy: Cx) -> Result<Self> {
        let (x0, y0) = p.to_affine().ok_or(Error::PointAtInfinity)?;
        Self::new(vy, -vx, vx * y0 - vy * x0)
    }

    pub fn coords(&self) -> &Triple {
        &self.coords
    }

    /// A direction vector `(vx, vy)` of the line (defined up to scale).
    pub fn direction(&self) -> (Cx, Cx) {
        (-self.coords[1], self.coords[0])
    }

    /// Scale-free incidence residual `|w . P| / (|w| |P|)`.
    pub fn incidence(&self, p: &ProjPoint) -> f64 {
        dot(&self.coords, &p.coords).norm() / (hnorm(&self.coords) * hnorm(&p.coords))
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.incidence(p) <= tol
    }

    /// Intersection point of two distinct lines.
    pub fn meet(&self, other: &ProjLine) -> Result<ProjPoint> {
        let p = cross(&self.coords, &other.coords);
        if hnorm(&p) <= CONSTRUCTION_TOL * hnorm(&self.coords) * hnorm(&other.coords) {
            return Err(Error::ZeroVector);
        }
        ProjPoint::from_triple(p)
    }

    pub fn distance(&self, other: &ProjLine) -> f64 {
        triple_distance(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &ProjLine, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// A line is isotropic when it contains a cyclic point. The infinity line
/// contains both.
pub fn is_isotropic(line: &ProjLine, tol: f64) -> bool {
    line.contains(&cyclic_i(), tol) || line.contains(&cyclic_j(), tol)
}

/// Conic `X^T A X = 0` given by a symmetric complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conic {
    m: [[Cx; 3]; 3],
}

impl Conic {
    pub fn new(m: [[Cx; 3]; 3]) -> Result<Self> {
        let scale = m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        for i in 0..3 {
            for j in 0..i {
                if (m[i][j] - m[j][i]).norm() > CONSTRUCTION_TOL * scale {
                    return Err(Error::InvalidInput("conic matrix is not symmetric".into()));
                }
            }
        }
        Ok(Conic { m })
    }

    pub fn diagonal(d: Triple) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for k in 0..3 {
            m[k][k] = d[k];
        }
        Conic { m }
    }

    pub fn matrix(&self) -> &[[Cx; 3]; 3] {
        &self.m
    }

    fn scale(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn det(&self) -> Cx {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `|det A|` against the product of the row norms, so that diagonal
    /// conics with very different axes still count as regular.
    pub fn is_regular(&self) -> bool {
        let rows: f64 = self
            .m
            .iter()
            .map(|r| r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .product();
        rows > 0.0 && self.det().norm() > CONSTRUCTION_TOL * rows
    }

    /// Matrix of the dual conic (on lines), `A^{-1}`.
    pub fn dual(&self) -> Result<Conic> {
        if !self.is_regular() {
            return Err(Error::SingularConic);
        }
        let m = &self.m;
        let det = self.det();
        let mut inv = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
            }
        }
        Ok(Conic { m: inv })
    }

    /// Quadratic form `u^T A v`.
    pub fn bilinear(&self, u: &Triple, v: &Triple) -> Cx {
        let mut acc = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] * self.m[i][j] * v[j];
            }
        }
        acc
    }

    /// `|P^T A P|` with `A` scaled to unit max entry and `P` canonical.
    pub fn residual(&self, p: &ProjPoint) -> f64 {
        self.bilinear(&p.coords, &p.coords).norm() / self.scale()
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.residual(p) <= tol
    }

    /// Polar line `A P`; the tangent line at `P` when `P` is on the conic.
    pub fn polar(&self, p: &ProjPoint) -> Result<ProjLine> {
        let c = &p.coords;
        let w = [0, 1, 2].map(|i| self.m[i][0] * c[0] + self.m[i][1] * c[1] + self.m[i][2] * c[2]);
        ProjLine::from_triple(w)
    }
}

/// Roots `(s : t)` of `a s^2 + 2 b s t + c t^2 = 0`.
struct BinaryRoots {
    roots: [(Cx, Cx); 2],
    doubled: bool,
}

fn solve_binary_quadratic(a: Cx, b: Cx, c: Cx, tol: f64) -> Result<BinaryRoots> {
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale == 0.0 {
        return Err(Error::SingularConic);
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    let disc = b * b - a * c;
    let doubled = disc.norm() <= tol;
    if doubled {
        let r = if a.norm() >= c.norm() { (-b, a) } else { (c, -b) };
        return Ok(BinaryRoots {
            roots: [r, r],
            doubled,
        });
    }
    let sq = disc.sqrt();
    // Pick the sign that avoids cancellation in b + sq.
    let sq = if (b.conj() * sq).re >= 0.0 { sq } else { -sq };
    let q = -(b + sq);
    Ok(BinaryRoots {
        roots: [(q, a), (c, q)],
        doubled,
    })
}

/// Indices of the two basis vectors to pair with `v` when spanning the
/// pencil through it (the ones other than its largest coordinate).
fn complementary_axes(v: &Triple) -> [usize; 2] {
    let big = (0..3)
        .max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()))
        .unwrap();
    match big {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

fn basis(k: usize) -> Triple {
    let mut e = [ZERO; 3];
    e[k] = ONE;
    e
}

fn combine(s: Cx, u: &Triple, t: Cx, v: &Triple) -> Triple {
    [s * u[0] + t * v[0], s * u[1] + t * v[1], s * u[2] + t * v[2]]
}

/// Tangent lines to a regular conic through a point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentLines {
    /// Two lines in lexicographic order of their canonical coordinates, or a
    /// single line when the point lies on the conic.
    pub lines: Vec<ProjLine>,
    pub doubled: bool,
}

/// Both tangents from `p` to `conic`: the dual conic intersected with the
/// pencil of lines through `p`.
pub fn tangent_lines_through(p: &ProjPoint, conic: &Conic) -> Result<TangentLines> {
    let dual = conic.dual()?;
    let [i, j] = complementary_axes(&p.coords);
    let l1 = cross(&p.coords, &basis(i));
    let l2 = cross(&p.coords, &basis(j));
    let a = dual.bilinear(&l1, &l1);
    let b = dual.bilinear(&l1, &l2);
    let c = dual.bilinear(&l2, &l2);
    let roots = solve_binary_quadratic(a, b, c, CONSTRUCTION_TOL)?;
    let mut lines = Vec::with_capacity(2);
    for (s, t) in roots.roots.iter().take(if roots.doubled { 1 } else { 2 }) {
        lines.push(ProjLine::from_triple(combine(*s, &l1, *t, &l2))?);
    }
    lines.sort_by(|u, v| lex_cmp(&u.coords, &v.coords));
    Ok(TangentLines {
        lines,
        doubled: roots.doubled,
    })
}

/// Intersection of a conic with a line.
#[derive(Clone, Debug, PartialEq)]
pub struct LineIntersection {
    /// Two points, or one when the line is tangent.
    pub points: Vec<ProjPoint>,
    pub doubled: bool,
}

pub fn conic_line_intersection(conic: &Conic, line: &ProjLine) -> Result<LineIntersection> {
    if !conic.is_regular() {
        return Err(Error::SingularConic);
    }
    let [i, j] = complementary_axes(&line.coords);
    let q1 = cross(&line.coords, &basis(i));
    let q2 = cross(&line.coords, &basis(j));
    let a = conic.bilinear(&q1, &q1);
    let b = conic.bilinear(&q1, &q2);
    let c = conic.bilinear(&q2, &q2);
    let roots = solve_binary_quadratic(a, b, c, CONSTRUCTION_TOL)?;
    let mut points = Vec::with_capacity(2);
    for (s, t) in roots.roots.iter().take(if roots.doubled { 1 } else { 2 }) {
        points.push(ProjPoint::from_triple(combine(*s, &q1, *t, &q2))?);
    }
    points.sort_by(|u, v| lex_cmp(&u.coords, &v.coords));
    Ok(LineIntersection {
        points,
        doubled: roots.doubled,
    })
}

/// `|w^T A^{-1} w|` after scaling `w` and `A^{-1}` to unit size; zero iff the
/// line is tangent.
pub fn tangency_residual(line: &ProjLine, conic: &Conic) -> Result<f64> {
    let dual = conic.dual()?;
    Ok(dual.bilinear(&line.coords, &line.coords).norm() / dual.scale())
}

/// Vieta step on a conic: the second intersection of `line` with `conic`,
/// given that `p` is one intersection. Returns `p` itself for a tangent line.
pub(crate) fn second_intersection(conic: &Conic, p: &ProjPoint, line: &ProjLine) -> Result<ProjPoint> {
    // Another point of the line, as far from p as the basis allows.
    let q = (0..3)
        .map(|k| cross(&line.coords, &basis(k)))
        .max_by(|u, v| {
            triple_distance(u, &p.coords).total_cmp(&triple_distance(v, &p.coords))
        })
        .unwrap();
    let q = canonical(q).ok_or(Error::ZeroVector)?;
    let pq = conic.bilinear(&p.coords, &q);
    let qq = conic.bilinear(&q, &q);
    let scale = conic.scale();
    if pq.norm() <= CONSTRUCTION_TOL * scale && qq.norm() <= CONSTRUCTION_TOL * scale {
        return Err(Error::SingularConic);
    }
    ProjPoint::from_triple(combine(-qq, &p.coords, pq * 2.0, &q))
}

/// Vieta step on the dual conic: the second tangent to `conic` through `p`,
/// given that `line` is one tangent through `p`. Returns `line` itself when
/// `p` lies on the conic.
pub(crate) fn other_tangent(dual: &Conic, p: &ProjPoint, line: &ProjLine) -> Result<ProjLine> {
    let l2 = (0..3)
        .map(|k| cross(&p.coords, &basis(k)))
        .max_by(|u, v| {
            triple_distance(u, &line.coords).total_cmp(&triple_distance(v, &line.coords))
        })
        .unwrap();
    let l2 = canonical(l2).ok_or(Error::ZeroVector)?;
    let d12 = dual.bilinear(&line.coords, &l2);
    let d22 = dual.bilinear(&l2, &l2);
    ProjLine::from_triple(combine(-d22, &line.coords, d12 * 2.0, &l2))
}

/// The four foci: real `(±c, 0)` and complex `(0, ±ic)`, `c = sqrt(a^2 - b^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Foci {
    pub real: [ProjPoint; 2],
    pub complex: [ProjPoint; 2],
}

impl Foci {
    pub fn all(&self) -> [ProjPoint; 4] {
        [self.real[0], self.real[1], self.complex[0], self.complex[1]]
    }
}

/// The confocal family generated by the ellipse `x^2/a^2 + y^2/b^2 = 1`,
/// with exact squared semi-axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConfocalFamily {
    a2: Rational,
    b2: Rational,
}

impl ConfocalFamily {
    pub fn new(a2: Rational, b2: Rational) -> Result<Self> {
        if a2 <= Rational::zero() || b2 <= Rational::zero() {
            return Err(Error::InvalidInput("a^2 and b^2 must be positive".into()));
        }
        Ok(ConfocalFamily { a2, b2 })
    }

    /// Family from the semi-axes `a`, `b` themselves.
    pub fn from_semi_axes(a: &Rational, b: &Rational) -> Result<Self> {
        if *a <= Rational::zero() || *b <= Rational::zero() {
            return Err(Error::InvalidInput("a and b must be positive".into()));
        }
        Self::new(a * a, b * b)
    }

    pub fn a2(&self) -> &Rational {
        &self.a2
    }

    pub fn b2(&self) -> &Rational {
        &self.b2
    }

    pub fn c2(&self) -> Rational {
        &self.a2 - &self.b2
    }

    pub fn is_circle(&self) -> bool {
        self.a2 == self.b2
    }

    pub fn a2_f64(&self) -> f64 {
        to_f64(&self.a2)
    }

    pub fn b2_f64(&self) -> f64 {
        to_f64(&self.b2)
    }

    /// Semi-axis `a`.
    pub fn a(&self) -> f64 {
        self.a2_f64().sqrt()
    }

    pub fn b(&self) -> f64 {
        self.b2_f64().sqrt()
    }

    /// Natural magnitude of parameters, `max(1, a^2, b^2)`.
    pub fn scale(&self) -> f64 {
        1f64.max(self.a2_f64()).max(self.b2_f64())
    }

    /// True when `lambda` is within `tol * scale` of `-a^2` or `-b^2`.
    pub fn is_forbidden(&self, lambda: Cx, tol: f64) -> bool {
        let s = tol * self.scale();
        (lambda + self.a2_f64()).norm() <= s || (lambda + self.b2_f64()).norm() <= s
    }

    /// `diag(1/(a^2+λ), 1/(b^2+λ), -1)`.
    pub fn conic_of(&self, lambda: Cx) -> Result<Conic> {
        if self.is_forbidden(lambda, FORBIDDEN_LAMBDA_TOL) {
            return Err(Error::DegenerateFamily { lambda });
        }
        Ok(Conic::diagonal([
            (lambda + self.a2_f64()).inv(),
            (lambda + self.b2_f64()).inv(),
            -ONE,
        ]))
    }

    /// Exact diagonal of the conic matrix for a rational parameter.
    pub fn conic_of_exact(&self, lambda: &Rational) -> Result<[Rational; 3]> {
        let u = &self.a2 + lambda;
        let v = &self.b2 + lambda;
        if u.is_zero() || v.is_zero() {
            return Err(Error::DegenerateFamily {
                lambda: Cx::new(to_f64(lambda), 0.0),
            });
        }
        Ok([u.recip(), v.recip(), -Rational::from_integer(1.into())])
    }

    /// The ellipse itself (`λ = 0`).
    pub fn ellipse(&self) -> Conic {
        self.conic_of(ZERO).expect("λ = 0 is admissible")
    }

    /// `(a cos θ, b sin θ)` for complex `θ`.
    pub fn ellipse_point(&self, theta: Cx) -> ProjPoint {
        ProjPoint::affine(theta.cos() * self.a(), theta.sin() * self.b())
    }

    fn c(&self) -> Result<Cx> {
        if self.is_circle() {
            return Err(Error::Circle);
        }
        Ok(principal_sqrt(Cx::new(to_f64(&self.c2()), 0.0)))
    }

    pub fn foci(&self) -> Result<Foci> {
        let c = self.c()?;
        Ok(Foci {
            real: [ProjPoint::affine(c, ZERO), ProjPoint::affine(-c, ZERO)],
            complex: [ProjPoint::affine(ZERO, I * c), ProjPoint::affine(ZERO, -I * c)],
        })
    }

    /// Points of the ellipse whose tangent is isotropic:
    /// `(±a^2/c, ±i b^2/c)` with independent signs.
    pub fn isotropic_tangency_points(&self) -> Result<[ProjPoint; 4]> {
        let c = self.c()?;
        let x = Cx::new(self.a2_f64(), 0.0) / c;
        let y = I * self.b2_f64() / c;
        Ok([
            ProjPoint::affine(x, y),
            ProjPoint::affine(x, -y),
            ProjPoint::affine(-x, y),
            ProjPoint::affine(-x, -y),
        ])
    }

    /// The four common points of the ellipse and `C_λ`:
    /// `x^2 = a^2(a^2+λ)/(a^2-b^2)`, `y^2 = b^2(b^2+λ)/(b^2-a^2)`.
    pub fn common_points(&self, lambda: Cx) -> Result<[ProjPoint; 4]> {
        if self.is_circle() {
            return Err(Error::Circle);
        }
        if lambda.norm() <= FORBIDDEN_LAMBDA_TOL * self.scale() {
            return Err(Error::IdenticalConics);
        }
        self.conic_of(lambda)?;
        let (a2, b2) = (self.a2_f64(), self.b2_f64());
        let x = principal_sqrt((lambda + a2) * a2 / (a2 - b2));
        let y = principal_sqrt((lambda + b2) * b2 / (b2 - a2));
        Ok([
            ProjPoint::affine(x, y),
            ProjPoint::affine(x, -y),
            ProjPoint::affine(-x, y),
            ProjPoint::affine(-x, -y),
        ])
    }

    /// The unique `λ` whose conic is tangent to `line`:
    /// `λ = (w3^2 - a^2 w1^2 - b^2 w2^2) / (w1^2 + w2^2)`.
    pub fn caustic_parameter_of_line(&self, line: &ProjLine) -> Result<Cx> {
        let [w1, w2, w3] = line.coords;
        let den = w1 * w1 + w2 * w2;
        if den.norm() <= DEFAULT_TOL * (w1.norm_sqr() + w2.norm_sqr()) {
            return Err(Error::IsotropicLine);
        }
        let lambda = (w3 * w3 - w1 * w1 * self.a2_f64() - w2 * w2 * self.b2_f64()) / den;
        if self.is_forbidden(lambda, DEFAULT_TOL) {
            return Err(Error::FocalLine);
        }
        Ok(lambda)
    }
}
