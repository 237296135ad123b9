//! Complex billiard in the ellipse `E = C_0`: the reflection law for the
//! quadratic form `q(v) = v_x² + v_y²`, the invariant `P(M, v)`, orbit
//! tracing by tangent switching, and the special orbit catalogs for
//! `n = 3, 4`.

use crate::algebra::{principal_sqrt, Cx};
use crate::cayley::caustic_roots;
use crate::conics::{
    self, is_isotropic, tangency_residual, tangent_lines_through, ConfocalFamily, Conic, ProjLine,
    ProjPoint, CONSTRUCTION_TOL, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Per-step residual threshold.
pub const STEP_TOL: f64 = 1e-9;
/// Closure threshold after at most a dozen steps.
pub const CLOSURE_TOL: f64 = 1e-7;

/// A direction `(v_x, v_y)`, meaningful up to a nonzero complex factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    pub vx: Cx,
    pub vy: Cx,
}

impl Direction {
    pub fn new(vx: Cx, vy: Cx) -> Result<Self> {
        if vx.norm() == 0.0 && vy.norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Direction { vx, vy })
    }

    pub fn real(vx: f64, vy: f64) -> Result<Self> {
        Self::new(Cx::new(vx, 0.0), Cx::new(vy, 0.0))
    }

    pub fn of_line(line: &ProjLine) -> Self {
        let (vx, vy) = line.direction();
        Direction { vx, vy }
    }

    /// Direction from `p` to `q` (both finite).
    pub fn between(p: &ProjPoint, q: &ProjPoint) -> Result<Self> {
        let (x0, y0) = p.to_affine().ok_or(Error::PointAtInfinity)?;
        let (x1, y1) = q.to_affine().ok_or(Error::PointAtInfinity)?;
        Self::new(x1 - x0, y1 - y0)
    }

    /// `q(v) = v_x² + v_y²`.
    pub fn q(&self) -> Cx {
        self.vx * self.vx + self.vy * self.vy
    }

    fn norm_sqr(&self) -> f64 {
        self.vx.norm_sqr() + self.vy.norm_sqr()
    }

    pub fn is_isotropic(&self, tol: f64) -> bool {
        self.q().norm() <= tol * self.norm_sqr()
    }

    /// Rescaled so that `q(v) = 1` (principal square root).
    pub fn unit(&self) -> Result<Self> {
        if self.is_isotropic(CONSTRUCTION_TOL) {
            return Err(Error::IsotropicLine);
        }
        let s = principal_sqrt(self.q());
        Ok(Direction {
            vx: self.vx / s,
            vy: self.vy / s,
        })
    }

    /// `|v × w| / (|v| |w|)`: zero iff the directions agree up to scale.
    pub fn distance(&self, other: &Direction) -> f64 {
        (self.vx * other.vy - self.vy * other.vx).norm()
            / (self.norm_sqr() * other.norm_sqr()).sqrt()
    }
}

/// Bilinear form of `q`.
fn bq(v: &Direction, t: &Direction) -> Cx {
    v.vx * t.vx + v.vy * t.vy
}

/// Reflection of `v` across the mirror direction `t`:
/// `v' = 2 b(v, t)/q(t) t - v`.
pub fn reflect_direction(v: &Direction, t: &Direction) -> Result<Direction> {
    if t.is_isotropic(CONSTRUCTION_TOL) {
        return Err(Error::IsotropicMirror);
    }
    let k = bq(v, t) * 2.0 / t.q();
    Ok(Direction {
        vx: k * t.vx - v.vx,
        vy: k * t.vy - v.vy,
    })
}

/// Outcome of reflecting a line in an isotropic mirror line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsotropicReflection {
    /// Every other line reflects onto the mirror itself.
    Unique(ProjLine),
    /// The incoming line is the mirror: any line through the point is a
    /// reflection.
    Indeterminate,
}

/// Reflection of `ell` in the isotropic line `mirror`, both through `x`.
pub fn reflect_line_isotropic(
    ell: &ProjLine,
    mirror: &ProjLine,
    x: &ProjPoint,
) -> Result<IsotropicReflection> {
    if !x.is_finite(CONSTRUCTION_TOL) {
        return Err(Error::PointAtInfinity);
    }
    if !is_isotropic(mirror, DEFAULT_TOL) {
        return Err(Error::InvalidInput("mirror line is not isotropic".into()));
    }
    for line in [ell, mirror] {
        let residual = line.incidence(x);
        if residual > DEFAULT_TOL {
            return Err(Error::Incidence { residual });
        }
    }
    if ell.approx_eq(mirror, DEFAULT_TOL) {
        Ok(IsotropicReflection::Indeterminate)
    } else {
        Ok(IsotropicReflection::Unique(*mirror))
    }
}

fn p_value(fam: &ConfocalFamily, x: Cx, y: Cx, v: &Direction) -> Cx {
    let s = x * v.vx / fam.a2_f64() + y * v.vy / fam.b2_f64();
    s * s / v.q()
}

/// `P(M, v) = (x v_x/a² + y v_y/b²)² / q(v)` for `M = (x, y)` on the ellipse.
pub fn joachimsthal(fam: &ConfocalFamily, m: &ProjPoint, v: &Direction) -> Result<Cx> {
    let (x, y) = m.to_affine().ok_or(Error::PointAtInfinity)?;
    let residual = fam.ellipse().residual(m);
    if residual > DEFAULT_TOL {
        return Err(Error::NotOnConic { residual });
    }
    if v.is_isotropic(CONSTRUCTION_TOL) {
        return Err(Error::IsotropicLine);
    }
    Ok(p_value(fam, x, y, v))
}

/// Caustic parameter `λ = -a²b² P`. The focal values `P = 1/a²`, `1/b²`
/// would give `λ = -b²`, `-a²` and are refused.
pub fn lambda_from_trace(fam: &ConfocalFamily, p: Cx) -> Result<Cx> {
    let (a2, b2) = (fam.a2_f64(), fam.b2_f64());
    let tol = DEFAULT_TOL * (1.0 / a2).max(1.0 / b2);
    if (p - 1.0 / a2).norm() <= tol || (p - 1.0 / b2).norm() <= tol {
        return Err(Error::ForbiddenInvariant { value: p });
    }
    Ok(-p * (a2 * b2))
}

/// A traced billiard trajectory inscribed in the ellipse and circumscribed
/// about `C_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace {
    pub fam: ConfocalFamily,
    pub lambda: Cx,
    /// `M_0, …, M_n`; closure means `M_n = M_0`.
    pub vertices: Vec<ProjPoint>,
    /// Side `k` joins `M_k` and `M_{k+1}`.
    pub sides: Vec<ProjLine>,
    /// `P` at every finite vertex for each adjacent side.
    pub invariants_p: Vec<Cx>,
    pub closure_residual: f64,
    /// One entry per interior vertex `M_1 … M_{n-1}`. At infinite vertices
    /// this is the distance between `M_{k+1}` and `-M_{k-1}`.
    pub reflection_residuals: Vec<f64>,
    /// Tangency of each side to `C_λ`.
    pub tangency_residuals: Vec<f64>,
    /// Vertices where the side reflects into itself (vertex on `C_λ`).
    pub self_reflections: Vec<usize>,
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().cloned().fold(0.0, f64::max)
}

impl OrbitTrace {
    pub fn steps(&self) -> usize {
        self.sides.len()
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.closure_residual <= tol
    }

    /// Largest pairwise difference between the recorded `P` values.
    pub fn p_spread(&self) -> f64 {
        let mut spread = 0.0f64;
        for (i, p) in self.invariants_p.iter().enumerate() {
            for q in &self.invariants_p[i + 1..] {
                spread = spread.max((p - q).norm());
            }
        }
        spread
    }

    /// `max |λ + a²b² P|` over the recorded `P` values.
    pub fn lambda_consistency(&self) -> f64 {
        let ab = self.fam.a2_f64() * self.fam.b2_f64();
        self.invariants_p
            .iter()
            .map(|p| (self.lambda + p * ab).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_tangency_residual(&self) -> f64 {
        max_of(&self.tangency_residuals)
    }

    pub fn max_reflection_residual(&self) -> f64 {
        max_of(&self.reflection_residuals)
    }

    /// Mean of the recorded `P` values.
    pub fn invariant(&self) -> Option<Cx> {
        if self.invariants_p.is_empty() {
            return None;
        }
        Some(self.invariants_p.iter().sum::<Cx>() / self.invariants_p.len() as f64)
    }

    pub fn has_isotropic_side(&self, tol: f64) -> bool {
        self.sides.iter().any(|s| is_isotropic(s, tol))
    }
}

fn check_on_ellipse(fam: &ConfocalFamily, start: &ProjPoint) -> Result<Conic> {
    let ellipse = fam.ellipse();
    let residual = ellipse.residual(start);
    if residual > STEP_TOL {
        return Err(Error::NotOnConic { residual });
    }
    Ok(ellipse)
}

/// Trace `steps` sides from `start`, beginning with tangent number `branch`
/// (0 or 1, in the order of [`tangent_lines_through`]) from `start` to `C_λ`.
pub fn trace_orbit(
    fam: &ConfocalFamily,
    lambda: Cx,
    start: &ProjPoint,
    branch: usize,
    steps: usize,
) -> Result<OrbitTrace> {
    if branch > 1 {
        return Err(Error::InvalidInput(format!("branch must be 0 or 1, got {branch}")));
    }
    let caustic = fam.conic_of(lambda)?;
    check_on_ellipse(fam, start)?;
    let tangents = tangent_lines_through(start, &caustic)?;
    let side = tangents.lines[branch.min(tangents.lines.len() - 1)];
    trace_from_side(fam, lambda, start, &side, steps)
}

/// Trace `steps` sides from `start` along the given first side, which must
/// pass through `start` and be tangent to `C_λ`.
pub fn trace_from_side(
    fam: &ConfocalFamily,
    lambda: Cx,
    start: &ProjPoint,
    first_side: &ProjLine,
    steps: usize,
) -> Result<OrbitTrace> {
    if steps == 0 {
        return Err(Error::InvalidInput("at least one step is required".into()));
    }
    let caustic = fam.conic_of(lambda)?;
    let dual = caustic.dual()?;
    let ellipse = check_on_ellipse(fam, start)?;
    let residual = first_side.incidence(start);
    if residual > STEP_TOL {
        return Err(Error::Incidence { residual });
    }

    let mut vertices = vec![*start];
    let mut sides = vec![*first_side];
    let mut self_reflections = Vec::new();
    for k in 0..steps {
        let side = sides[k];
        if is_isotropic(&side, STEP_TOL) {
            return Err(Error::IsotropicDegeneration { vertex: k });
        }
        let next = conics::second_intersection(&ellipse, &vertices[k], &side)?;
        if next.approx_eq(&vertices[k], STEP_TOL) {
            return Err(Error::DegenerateVertex { vertex: k });
        }
        if next.is_finite(CONSTRUCTION_TOL) {
            let tangent = ellipse.polar(&next)?;
            if is_isotropic(&tangent, STEP_TOL) {
                return Err(Error::IsotropicDegeneration { vertex: k + 1 });
            }
        }
        vertices.push(next);
        if k + 1 < steps {
            let out = conics::other_tangent(&dual, &next, &side)?;
            if out.approx_eq(&side, STEP_TOL) {
                self_reflections.push(k + 1);
            }
            sides.push(out);
        }
    }

    let mut reflection_residuals = Vec::with_capacity(steps.saturating_sub(1));
    for j in 1..steps {
        let m = &vertices[j];
        let residual = if m.is_finite(CONSTRUCTION_TOL) {
            let mirror = Direction::of_line(&ellipse.polar(m)?);
            let reflected = reflect_direction(&Direction::of_line(&sides[j - 1]), &mirror)?;
            reflected.distance(&Direction::of_line(&sides[j]))
        } else {
            vertices[j + 1].distance(&vertices[j - 1].opposite())
        };
        reflection_residuals.push(residual);
    }

    let mut invariants_p = Vec::new();
    for (k, m) in vertices.iter().enumerate() {
        let Some((x, y)) = m.to_affine() else {
            continue;
        };
        let adjacent = [k.checked_sub(1), (k < steps).then_some(k)];
        for s in adjacent.into_iter().flatten() {
            invariants_p.push(p_value(fam, x, y, &Direction::of_line(&sides[s])));
        }
    }

    let tangency_residuals = sides
        .iter()
        .map(|s| tangency_residual(s, &caustic))
        .collect::<Result<Vec<_>>>()?;

    Ok(OrbitTrace {
        fam: fam.clone(),
        lambda,
        closure_residual: vertices[steps].distance(&vertices[0]),
        vertices,
        sides,
        invariants_p,
        reflection_residuals,
        tangency_residuals,
        self_reflections,
    })
}

/// One orbit-tracing job for [`trace_batch`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceJob {
    pub lambda: Cx,
    pub start: ProjPoint,
    pub branch: usize,
    pub steps: usize,
}

pub fn trace_batch(
    fam: &ConfocalFamily,
    jobs: &[TraceJob],
    exec: Execution,
) -> Vec<Result<OrbitTrace>> {
    exec.map(jobs, |j| trace_orbit(fam, j.lambda, &j.start, j.branch, j.steps))
}

/// Jobs for every admissible root of `B^n` and every start parameter `θ`
/// (points `(a cos θ, b sin θ)`), branch 0.
pub fn closure_grid_jobs(fam: &ConfocalFamily, n: usize, thetas: &[Cx]) -> Result<Vec<TraceJob>> {
    let roots = caustic_roots(fam, n, DEFAULT_TOL)?;
    let mut jobs = Vec::new();
    for root in roots.roots.iter().filter(|r| r.admissible) {
        for &theta in thetas {
            jobs.push(TraceJob {
                lambda: root.lambda,
                start: fam.ellipse_point(theta),
                branch: 0,
                steps: n,
            });
        }
    }
    Ok(jobs)
}

/// One of the quadrilateral orbits through `S = (-a, 0)` whose first side
/// has direction `v_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialQuad {
    /// 1, 2 or 3.
    pub index: usize,
    /// First side direction, scaled to `q(v) = 1`.
    pub direction: Direction,
    /// `λ_i = -b² v_x²`.
    pub lambda: Cx,
    pub trace: OrbitTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialQuads {
    pub orbits: Vec<SpecialQuad>,
    /// Set when `λ_1` is within tolerance of `-a²` (`a ≈ √2 b`), in which
    /// case the first orbit is omitted.
    pub degeneration: Option<QuadDegeneration>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadDegeneration {
    pub index: usize,
    pub lambda: Cx,
    /// `|λ_1 + a²|`.
    pub gap: f64,
}

/// Relative distance of `λ_1` to `-a²` below which the first orbit is
/// reported as degenerate instead of traced.
pub const QUAD_DEGENERATION_TOL: f64 = 1e-9;

/// The three quadrilateral orbits through `(-a, 0)`:
/// `v_1 ∝ (a, ib)` (vertices at infinity), `v_2 ∝ (a, b)` (the real rhombus)
/// and `v_3 ∝ (a, i sqrt(2a² - b²))` (self-reflecting at two vertices).
pub fn special_quad_orbits(fam: &ConfocalFamily) -> Result<SpecialQuads> {
    if fam.is_circle() {
        return Err(Error::Circle);
    }
    let a = Cx::new(fam.a(), 0.0);
    let b = Cx::new(fam.b(), 0.0);
    let (a2, b2) = (fam.a2_f64(), fam.b2_f64());
    let i = Cx::new(0.0, 1.0);
    let raw = [
        Direction::new(a, i * b)?,
        Direction::new(a, b)?,
        Direction::new(a, i * principal_sqrt(Cx::new(2.0 * a2 - b2, 0.0)))?,
    ];
    let start = ProjPoint::affine(-a, Cx::new(0.0, 0.0));
    let mut orbits = Vec::new();
    let mut degeneration = None;
    for (k, v) in raw.iter().enumerate() {
        let v = v.unit()?;
        let lambda = -v.vx * v.vx * b2;
        let gap = (lambda + a2).norm();
        if gap <= QUAD_DEGENERATION_TOL * fam.scale() {
            degeneration = Some(QuadDegeneration {
                index: k + 1,
                lambda,
                gap,
            });
            continue;
        }
        let side = ProjLine::through_with_direction(&start, v.vx, v.vy)?;
        let trace = trace_from_side(fam, lambda, &start, &side, 4)?;
        orbits.push(SpecialQuad {
            index: k + 1,
            direction: v,
            lambda,
            trace,
        });
    }
    Ok(SpecialQuads {
        orbits,
        degeneration,
    })
}

/// A limit of triangular orbits: an isotropic side `A` tangent to the
/// ellipse at `α`, and a doubled non-isotropic side `B = αβ` tangent to the
/// caustic `γ_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegenerateTriangle {
    pub alpha: ProjPoint,
    pub beta: ProjPoint,
    pub side_a: ProjLine,
    pub side_b: ProjLine,
    /// 1 or 2: which root of `B^3` (in ascending order).
    pub caustic_index: usize,
    pub lambda: Cx,
}

/// Residuals of the shape conditions of a degenerate triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleShape {
    /// `α`, `β` on the ellipse.
    pub on_ellipse: f64,
    /// `α ∈ A`, `α ∈ B`, `β ∈ B`.
    pub incidence: f64,
    /// `A` tangent to the ellipse, and at `α`.
    pub a_tangent: f64,
    /// `B` tangent to `γ_j`.
    pub b_tangent: f64,
    /// Cyclic points on `A` (must be 1).
    pub a_cyclic_points: usize,
    pub b_isotropic: bool,
}

impl TriangleShape {
    pub fn max_residual(&self) -> f64 {
        self.on_ellipse
            .max(self.incidence)
            .max(self.a_tangent)
            .max(self.b_tangent)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.a_cyclic_points == 1 && !self.b_isotropic
    }
}

impl DegenerateTriangle {
    pub fn shape(&self, fam: &ConfocalFamily) -> Result<TriangleShape> {
        let ellipse = fam.ellipse();
        let caustic = fam.conic_of(self.lambda)?;
        let tangent_at_alpha = ellipse.polar(&self.alpha)?;
        let a_cyclic_points = [conics::cyclic_i(), conics::cyclic_j()]
            .iter()
            .filter(|c| self.side_a.contains(c, STEP_TOL))
            .count();
        Ok(TriangleShape {
            on_ellipse: ellipse.residual(&self.alpha).max(ellipse.residual(&self.beta)),
            incidence: self
                .side_a
                .incidence(&self.alpha)
                .max(self.side_b.incidence(&self.alpha))
                .max(self.side_b.incidence(&self.beta)),
            a_tangent: tangency_residual(&self.side_a, &ellipse)?
                .max(self.side_a.distance(&tangent_at_alpha)),
            b_tangent: tangency_residual(&self.side_b, &caustic)?,
            a_cyclic_points,
            b_isotropic: is_isotropic(&self.side_b, STEP_TOL),
        })
    }
}

/// The eight degenerate triangular orbits: for each isotropic tangency point
/// `α` and each root of `B^3`, the non-isotropic tangent from `α` to that
/// caustic and its second intersection `β` with the ellipse.
pub fn degenerate_triangles(fam: &ConfocalFamily) -> Result<Vec<DegenerateTriangle>> {
    let ellipse = fam.ellipse();
    let roots = caustic_roots(fam, 3, DEFAULT_TOL)?;
    let alphas = fam.isotropic_tangency_points()?;
    let mut out = Vec::new();
    for alpha in &alphas {
        let side_a = ellipse.polar(alpha)?;
        for (j, root) in roots.roots.iter().enumerate() {
            let caustic = fam.conic_of(root.lambda)?;
            let tangents = tangent_lines_through(alpha, &caustic)?;
            // The isotropic tangent of the ellipse at α touches every confocal
            // conic; keep the other one.
            let side_b = *tangents
                .lines
                .iter()
                .max_by(|u, v| u.distance(&side_a).total_cmp(&v.distance(&side_a)))
                .expect("at least one tangent");
            if is_isotropic(&side_b, STEP_TOL) {
                continue;
            }
            let beta = conics::second_intersection(&ellipse, alpha, &side_b)?;
            out.push(DegenerateTriangle {
                alpha: *alpha,
                beta,
                side_a,
                side_b,
                caustic_index: j + 1,
                lambda: root.lambda,
            });
        }
    }
    Ok(out)
}

/// Incidence residuals of the focal reflection property at `M`: the line
/// from `M` to one focus reflects into a line through the other focus of the
/// same pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FocalResiduals {
    pub real: f64,
    pub complex: f64,
}

pub fn focal_reflection_check(fam: &ConfocalFamily, m: &ProjPoint) -> Result<FocalResiduals> {
    let ellipse = check_on_ellipse(fam, m)?;
    if !m.is_finite(CONSTRUCTION_TOL) {
        return Err(Error::PointAtInfinity);
    }
    let mirror = Direction::of_line(&ellipse.polar(m)?);
    if mirror.is_isotropic(STEP_TOL) {
        return Err(Error::IsotropicMirror);
    }
    let foci = fam.foci()?;
    let residual = |from: &ProjPoint, to: &ProjPoint| -> Result<f64> {
        let v = Direction::between(m, from)?;
        let r = reflect_direction(&v, &mirror)?;
        let line = ProjLine::through_with_direction(m, r.vx, r.vy)?;
        Ok(line.incidence(to))
    };
    Ok(FocalResiduals {
        real: residual(&foci.real[0], &foci.real[1])?,
        complex: residual(&foci.complex[0], &foci.complex[1])?,
    })
}
