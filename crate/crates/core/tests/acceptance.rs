//! Acceptance suite: one line per criterion.
//!
//! A criterion whose stated expectation is mathematically unattainable is
//! still reported as FAIL, tagged `[known]`, when the check confirms the
//! correct value instead. The process exits non-zero on any other failure.
//!
//! Run with `cargo test -p caustics-core --test acceptance`.

use std::time::{Duration, Instant};

use caustics::algebra::{catalan, hankel_det, int, rat, rational_roots, Cx, PolyQ, Rational};
use caustics::billiard::{
    degenerate_triangles, focal_reflection_check, joachimsthal, special_quad_orbits, trace_batch,
    trace_orbit, Direction, TraceJob,
};
use caustics::cayley::{
    caustic_roots, cayley_polynomial, circle_degree, degree_bound, generic_degree, CausticRoots,
};
use caustics::conics::{ConfocalFamily, ProjPoint};
use caustics::exec::Execution;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_ca57;

const ROOT_MATCH_TOL: f64 = 1e-10;
const PRINTED_DIGITS_TOL: f64 = 5e-5;
const CLOSURE_TOL: f64 = 1e-7;
const TANGENCY_TOL: f64 = 1e-9;
const P_SPREAD_TOL: f64 = 1e-9;
const LAMBDA_TOL: f64 = 1e-8;
const NEGATIVE_CLOSURE_MIN: f64 = 1e-3;
const NEGATIVE_ROOT_GAP: f64 = 0.1;
const SHAPE_TOL: f64 = 1e-9;
const SPECIAL_TOL: f64 = 1e-10;
const FOCAL_TOL: f64 = 1e-10;
const ADMISSIBLE_TOL: f64 = 1e-9;

/// A failed criterion. `known` marks a criterion whose literal statement is
/// unattainable and whose check verified the mathematically correct
/// replacement instead; anything else is a hard failure.
struct Failure {
    detail: String,
    known: bool,
}

impl From<String> for Failure {
    fn from(detail: String) -> Self {
        Failure { detail, known: false }
    }
}

impl From<&str> for Failure {
    fn from(detail: &str) -> Self {
        detail.to_string().into()
    }
}

impl From<caustics::Error> for Failure {
    fn from(e: caustics::Error) -> Self {
        e.to_string().into()
    }
}

fn known(detail: String) -> Failure {
    Failure { detail, known: true }
}

type Check = std::result::Result<String, Failure>;

fn fam(a2: i64, b2: i64) -> ConfocalFamily {
    ConfocalFamily::new(int(a2), int(b2)).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=60), rng.gen_range(1..=25))
}

fn random_family(rng: &mut ChaCha8Rng) -> ConfocalFamily {
    ConfocalFamily::new(random_rational(rng), random_rational(rng)).unwrap()
}

/// Family from random rational semi-axes with `a > b`.
fn random_semi_axes(rng: &mut ChaCha8Rng) -> (Rational, Rational, ConfocalFamily) {
    let b = random_rational(rng);
    let a = &b + random_rational(rng);
    let f = ConfocalFamily::from_semi_axes(&a, &b).unwrap();
    (a, b, f)
}

fn p(cs: Vec<Rational>) -> PolyQ {
    PolyQ::new(cs)
}

/// `-(1/(8a⁴b⁴)) ((a²-b²)² λ² - 2(a⁴b² + a²b⁴) λ - 3a⁴b⁴)`.
fn closed_form_b3(f: &ConfocalFamily) -> PolyQ {
    let (a2, b2) = (f.a2().clone(), f.b2().clone());
    let a4 = &a2 * &a2;
    let b4 = &b2 * &b2;
    let d = &a2 - &b2;
    let body = p(vec![
        -int(3) * &a4 * &b4,
        -int(2) * (&a4 * &b2 + &a2 * &b4),
        &d * &d,
    ]);
    body.scale(&(-(int(8) * &a4 * &b4).recip()))
}

/// `(1/(16a⁶b⁶)) ((a²-b²)²(a²+b²) λ³ + a²b²(a²-b²)² λ² - (a⁶b⁴ + a⁴b⁶) λ - a⁶b⁶)`.
fn closed_form_b4(f: &ConfocalFamily) -> PolyQ {
    let (a2, b2) = (f.a2().clone(), f.b2().clone());
    let a4 = &a2 * &a2;
    let b4 = &b2 * &b2;
    let a6 = &a4 * &a2;
    let b6 = &b4 * &b2;
    let d2 = (&a2 - &b2) * (&a2 - &b2);
    let body = p(vec![
        -(&a6 * &b6),
        -(&a6 * &b4 + &a4 * &b6),
        &a2 * &b2 * &d2,
        &d2 * (&a2 + &b2),
    ]);
    body.scale(&(int(16) * &a6 * &b6).recip())
}

fn closed_form_identity(
    n: usize,
    closed: fn(&ConfocalFamily) -> PolyQ,
) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + n as u64);
    let mut exact = 0;
    for _ in 0..20 {
        let f = random_family(&mut rng);
        let bn = cayley_polynomial(&f, n)?.bn;
        let expected = closed(&f);
        if bn.monic() != expected.monic() {
            return Err(format!(
                "mismatch at a²={}, b²={}: {} vs {}",
                f.a2(),
                f.b2(),
                bn.monic(),
                expected.monic()
            ).into());
        }
        if bn == expected {
            exact += 1;
        }
    }
    Ok(format!(
        "20/20 families agree after monic normalization ({exact}/20 also without normalization)"
    ))
}

fn criterion_1() -> Check {
    closed_form_identity(3, closed_form_b3)
}

fn criterion_2() -> Check {
    closed_form_identity(4, closed_form_b4)
}

fn criterion_3() -> Check {
    let roots = caustic_roots(&fam(4, 1), 3, ADMISSIBLE_TOL)?;
    let s13 = 13f64.sqrt();
    let expected = [(20.0 - 8.0 * s13) / 9.0, (20.0 + 8.0 * s13) / 9.0];
    let printed = [-0.9827, 5.4272];
    if roots.roots.len() != 2 {
        return Err(format!("expected 2 roots, got {}", roots.roots.len()).into());
    }
    let mut worst = 0.0f64;
    for ((r, e), pr) in roots.roots.iter().zip(expected).zip(printed) {
        let d = (r.lambda - Cx::new(e, 0.0)).norm();
        worst = worst.max(d);
        if d > ROOT_MATCH_TOL {
            return Err(format!("root {} differs from {e} by {d:e}", r.lambda).into());
        }
        if (r.lambda.re - pr).abs() > PRINTED_DIGITS_TOL {
            return Err(format!("root {} does not round to {pr}", r.lambda.re).into());
        }
    }
    Ok(format!(
        "λ = {:.4}, {:.4}; max |Δλ| = {worst:.1e}",
        roots.roots[0].lambda.re, roots.roots[1].lambda.re
    ))
}

fn criterion_4() -> Check {
    let t = cayley_polynomial(&fam(4, 1), 4)?;
    let roots = rational_roots(&t.bn)?;
    let stated = vec![rat(-4, 3), rat(4, 5), rat(4, 3)];
    if roots == stated {
        return Ok("exact roots {-4/3, 4/5, 4/3}".into());
    }
    // The stated middle root has the wrong sign: the closed form
    // -a²b²/(a²+b²) gives -4/5, and B⁴(+4/5) ≠ 0.
    let corrected = vec![rat(-4, 3), rat(-4, 5), rat(4, 3)];
    let at_plus = t.bn.eval(&rat(4, 5));
    if roots == corrected && !at_plus.is_zero() {
        return Err(known(format!(
            "stated set {{-4/3, 4/5, 4/3}} unattainable: exact rational roots of {} are {{-4/3, -4/5, 4/3}}, and B⁴(4/5) = {} ≠ 0",
            t.bn.primitive_integer(),
            at_plus
        )));
    }
    Err(format!("rational roots {roots:?}").into())
}

fn criterion_5() -> Check {
    let generic = fam(4, 1);
    let circle = fam(1, 1);
    let ns: Vec<usize> = (3..=9).collect();
    let exec = Execution::default();
    let gen_tables = exec.map(&ns, |&n| cayley_polynomial(&generic, n));
    let circ_tables = exec.map(&ns, |&n| cayley_polynomial(&circle, n));
    let mut row = Vec::new();
    let mut even_short = Vec::new();
    for ((&n, g), c) in ns.iter().zip(gen_tables).zip(circ_tables) {
        let (dg, dc) = (g?.bn.degree(), c?.bn.degree());
        if dc != Some(circle_degree(n)) {
            return Err(format!("n={n}: circle degree {dc:?} ≠ {}", circle_degree(n)).into());
        }
        let stated = degree_bound(n);
        match dg {
            Some(d) if d == stated => {}
            // Even n: the (m-1)x(m-1) determinant has top degree m²-1.
            Some(d) if n % 2 == 0 && d == generic_degree(n) && d + 1 == stated => {
                even_short.push(n)
            }
            _ => return Err(format!("n={n}: generic degree {dg:?}, stated {stated}").into()),
        }
        row.push(format!("{n}:{}/{}", dg.unwrap(), dc.unwrap()));
    }
    // admissible roots ≤ degree ≤ bound
    for n in 3..=6 {
        let r = caustic_roots(&generic, n, ADMISSIBLE_TOL)?;
        let deg = r.table.bn.degree().unwrap();
        if r.admissible_count() > deg || deg > degree_bound(n) {
            return Err(format!("n={n}: N={} deg={deg}", r.admissible_count()).into());
        }
    }
    let detail = format!("degrees n:generic/circle {}", row.join(" "));
    if even_short.is_empty() {
        Ok(detail)
    } else {
        Err(known(format!(
            "{detail}; odd n and circle match exactly, N ≤ deg ≤ bound holds, but even n {even_short:?} have degree n²/4 - 1, not the stated n²/4 (the even determinant is (m-1)x(m-1))"
        )))
    }
}

fn criterion_6() -> Check {
    let seq: Vec<Rational> = (0..20).map(catalan).collect();
    for m in 1..=8 {
        let d = hankel_det(&seq, m, 1)?;
        if d != int(1) {
            return Err(format!("m={m}: det = {d}").into());
        }
    }
    Ok("det(Cat_{i+j-1}) = 1 for m = 1..8".into())
}

fn start_thetas(rng: &mut ChaCha8Rng) -> Vec<Cx> {
    let tau = std::f64::consts::TAU;
    let mut out: Vec<Cx> = (0..5).map(|_| Cx::new(rng.gen_range(0.0..tau), 0.0)).collect();
    out.extend((0..5).map(|_| Cx::new(rng.gen_range(0.0..tau), rng.gen_range(-1.0..1.0))));
    out
}

fn criterion_7() -> Check {
    let f = fam(4, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let thetas = start_thetas(&mut rng);
    let mut jobs = Vec::new();
    for n in 3..=6 {
        let roots = caustic_roots(&f, n, ADMISSIBLE_TOL)?;
        for root in roots.roots.iter().filter(|r| r.admissible) {
            for &th in &thetas {
                jobs.push(TraceJob {
                    lambda: root.lambda,
                    start: f.ellipse_point(th),
                    branch: 0,
                    steps: n,
                });
            }
        }
    }
    let traces = trace_batch(&f, &jobs, Execution::default());
    let (mut closure, mut tangency, mut spread, mut lam) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (job, t) in jobs.iter().zip(&traces) {
        let t = t
            .as_ref()
            .map_err(|e| format!("n={} λ={}: {e}", job.steps, job.lambda))?;
        closure = closure.max(t.closure_residual);
        tangency = tangency.max(t.max_tangency_residual());
        spread = spread.max(t.p_spread());
        lam = lam.max(t.lambda_consistency());
    }
    let detail = format!(
        "{} traces; max closure {closure:.1e}, tangency {tangency:.1e}, P spread {spread:.1e}, |λ+a²b²P| {lam:.1e}",
        jobs.len()
    );
    if closure <= CLOSURE_TOL && tangency <= TANGENCY_TOL && spread <= P_SPREAD_TOL && lam <= LAMBDA_TOL
    {
        Ok(detail)
    } else {
        Err(detail.into())
    }
}

fn criterion_8() -> Check {
    let f = fam(4, 1);
    let roots: CausticRoots = caustic_roots(&f, 3, ADMISSIBLE_TOL)?;
    let mut avoid: Vec<Cx> = roots.roots.iter().map(|r| r.lambda).collect();
    avoid.extend([Cx::new(-4.0, 0.0), Cx::new(-1.0, 0.0), Cx::new(0.0, 0.0)]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let start = ProjPoint::real(-2.0, 0.0);
    let mut min_closure = f64::INFINITY;
    let mut count = 0;
    while count < 10 {
        let lambda = Cx::new(rng.gen_range(-6.0..8.0), 0.0);
        if avoid.iter().any(|r| (r - lambda).norm() < NEGATIVE_ROOT_GAP) {
            continue;
        }
        let t = trace_orbit(&f, lambda, &start, 0, 3).map_err(|e| format!("λ={lambda}: {e}"))?;
        min_closure = min_closure.min(t.closure_residual);
        count += 1;
    }
    let detail = format!("10 non-root λ; min closure residual {min_closure:.2e}");
    if min_closure >= NEGATIVE_CLOSURE_MIN {
        Ok(detail)
    } else {
        Err(detail.into())
    }
}

fn criterion_9() -> Check {
    let f = fam(4, 1);
    let tris = degenerate_triangles(&f)?;
    if tris.len() != 8 {
        return Err(format!("{} configurations", tris.len()).into());
    }
    let mut worst = 0.0f64;
    for t in &tris {
        let shape = t.shape(&f)?;
        if !shape.is_valid(SHAPE_TOL) {
            return Err(format!("invalid shape {shape:?}").into());
        }
        worst = worst.max(shape.max_residual());
    }
    Ok(format!("8 configurations, max shape residual {worst:.1e}"))
}

fn criterion_10() -> Check {
    let f = fam(4, 1);
    let quads = special_quad_orbits(&f)?;
    let roots = caustic_roots(&f, 4, ADMISSIBLE_TOL)?;
    if quads.orbits.len() != 3 || roots.roots.len() != 3 {
        return Err(format!("{} orbits, {} roots", quads.orbits.len(), roots.roots.len()).into());
    }
    let mut worst = 0.0f64;
    for (q, r) in quads.orbits.iter().zip(&roots.roots) {
        let d = (q.lambda - r.lambda).norm();
        worst = worst.max(d);
        if d > SPECIAL_TOL {
            return Err(format!("T{} λ = {} vs root {}", q.index, q.lambda, r.lambda).into());
        }
    }
    let t3 = &quads.orbits[2].trace;
    let s7 = 7f64.sqrt();
    let n_plus = ProjPoint::affine(Cx::new(-8.0 / 3.0, 0.0), Cx::new(0.0, s7 / 3.0));
    let n_minus = ProjPoint::affine(Cx::new(-8.0 / 3.0, 0.0), Cx::new(0.0, -s7 / 3.0));
    let vertex_err = |m: &ProjPoint| -> f64 {
        let (x, y) = m.to_affine().unwrap_or((Cx::new(f64::INFINITY, 0.0), Cx::new(0.0, 0.0)));
        let (x1, y1) = n_plus.to_affine().unwrap();
        let (x2, y2) = n_minus.to_affine().unwrap();
        ((x - x1).norm().max((y - y1).norm())).min((x - x2).norm().max((y - y2).norm()))
    };
    let e1 = vertex_err(&t3.vertices[1]);
    let e3 = vertex_err(&t3.vertices[3]);
    let distinct = !t3.vertices[1].approx_eq(&t3.vertices[3], 1e-6);
    if e1 > SPECIAL_TOL || e3 > SPECIAL_TOL || !distinct {
        return Err(format!("T3 vertices off by {e1:.1e}, {e3:.1e}").into());
    }

    let a = rat(665857, 470832);
    let near = ConfocalFamily::from_semi_axes(&a, &int(1))?;
    let near_quads = special_quad_orbits(&near)?;
    let Some(deg) = near_quads.degeneration else {
        return Err("near-degeneration of λ1 at a ≈ √2 b not reported".into());
    };
    if deg.index != 1 || near_quads.orbits.len() != 2 {
        return Err(format!("unexpected degeneration report {deg:?}").into());
    }
    Ok(format!(
        "λ_i match B⁴ roots to {worst:.1e}; T3 vertices (-8/3, ±i√7/3) to {:.1e}; a=665857/470832: λ1 within {:.1e} of -a², reported",
        e1.max(e3),
        deg.gap
    ))
}

fn criterion_11() -> Check {
    let f = fam(4, 1);
    let foci = f.foci()?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let thetas = {
        let mut t = start_thetas(&mut rng);
        t.extend(start_thetas(&mut rng));
        t
    };
    let (ia2, ib2) = (1.0 / f.a2_f64(), 1.0 / f.b2_f64());
    let (mut p_err, mut refl) = (0.0f64, 0.0f64);
    for th in thetas {
        let m = f.ellipse_point(th);
        let pf = Direction::between(&m, &foci.real[0])
            .and_then(|v| joachimsthal(&f, &m, &v))
            ?;
        let pg = Direction::between(&m, &foci.complex[0])
            .and_then(|v| joachimsthal(&f, &m, &v))
            ?;
        p_err = p_err.max((pf - ia2).norm()).max((pg - ib2).norm());
        let r = focal_reflection_check(&f, &m)?;
        refl = refl.max(r.real).max(r.complex);
    }
    let detail = format!("20 points: max |P - a⁻²|,|P - b⁻²| {p_err:.1e}; max reflection residual {refl:.1e}");
    if p_err <= FOCAL_TOL && refl <= FOCAL_TOL {
        Ok(detail)
    } else {
        Err(detail.into())
    }
}

/// Sign of `p` at `-∞`.
fn sign_at_minus_infinity(p: &PolyQ) -> i32 {
    let lead = p.leading().signum();
    let s = if lead.is_positive() { 1 } else { -1 };
    if p.degree().unwrap() % 2 == 0 {
        s
    } else {
        -s
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn criterion_12() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 12);
    let (mut below, mut above) = (0, 0);
    for _ in 0..20 {
        let (a, b, f) = random_semi_axes(&mut rng);
        let zero = int(0);
        let ma2 = -f.a2().clone();
        let mb2 = -f.b2().clone();

        // B³: one root in (-b², 0), one in (0, ∞).
        let b3 = cayley_polynomial(&f, 3)?.bn;
        let (s_b, s_0) = (sign(&b3.eval(&mb2)), sign(&b3.eval(&zero)));
        let s_inf = sign(&b3.leading());
        if b3.degree() != Some(2) || s_b * s_0 != -1 || s_0 * s_inf != -1 {
            return Err(format!("B³ root location fails at a={a}, b={b}").into());
        }

        // B⁴: λ1 < -b² < λ2 < 0 < λ3, each interval holding exactly one root.
        let b4 = cayley_polynomial(&f, 4)?.bn;
        let s_minf = sign_at_minus_infinity(&b4);
        let (s_b, s_0, s_inf) = (
            sign(&b4.eval(&mb2)),
            sign(&b4.eval(&zero)),
            sign(&b4.leading()),
        );
        if b4.degree() != Some(3) || s_minf * s_b != -1 || s_b * s_0 != -1 || s_0 * s_inf != -1 {
            return Err(format!("B⁴ chain fails at a={a}, b={b}").into());
        }

        // λ1 vs -a² against sign(a - √2 b), i.e. sign(a² - 2b²).
        let s_a = sign(&b4.eval(&ma2));
        let ratio = sign(&(f.a2() - int(2) * f.b2()));
        // λ1 is the only root below -b², so it lies below -a² iff the sign
        // changes on (-∞, -a²).
        let lambda1_below = s_a * s_minf == -1;
        let lambda1_above = s_a * s_minf == 1;
        let consistent = match ratio {
            -1 => lambda1_below,
            1 => lambda1_above,
            _ => s_a == 0,
        };
        if !consistent {
            return Err(format!("λ1 vs -a² trichotomy fails at a={a}, b={b}").into());
        }
        if ratio < 0 {
            below += 1;
        } else {
            above += 1;
        }

        // numeric cross-check
        let r4 = caustic_roots(&f, 4, ADMISSIBLE_TOL)?;
        let l: Vec<f64> = r4.roots.iter().map(|r| r.lambda.re).collect();
        let (a2, b2) = (f.a2_f64(), f.b2_f64());
        let tol = ROOT_MATCH_TOL * f.scale();
        if !(l.len() == 3 && l[0] < -b2 - tol && -b2 + tol < l[1] && l[1] < -tol && l[2] > tol) {
            return Err(format!("numeric roots {l:?} at a={a}, b={b}").into());
        }
        if (ratio < 0) != (l[0] < -a2) {
            return Err(format!("numeric λ1 = {} vs -a² = {} at a={a}, b={b}", l[0], -a2).into());
        }
    }
    Ok(format!(
        "20 families certified by exact sign changes ({below} with a<√2b, {above} with a>√2b)"
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "exact B3 identity", budget: Duration::from_secs(1), run: criterion_1 },
        Criterion { id: 2, name: "exact B4 identity", budget: Duration::from_secs(1), run: criterion_2 },
        Criterion { id: 3, name: "n=3 roots at a=2, b=1", budget: Duration::from_millis(100), run: criterion_3 },
        Criterion { id: 4, name: "n=4 exact rational roots at a=2, b=1", budget: Duration::from_millis(100), run: criterion_4 },
        Criterion { id: 5, name: "degree table n=3..9", budget: Duration::from_secs(60), run: criterion_5 },
        Criterion { id: 6, name: "Catalan-Hankel determinants", budget: Duration::from_millis(100), run: criterion_6 },
        Criterion { id: 7, name: "Poncelet closure grid", budget: Duration::from_secs(10), run: criterion_7 },
        Criterion { id: 8, name: "negative control", budget: Duration::from_secs(1), run: criterion_8 },
        Criterion { id: 9, name: "degenerate triangles", budget: Duration::from_secs(1), run: criterion_9 },
        Criterion { id: 10, name: "special quadrilateral orbits", budget: Duration::from_secs(1), run: criterion_10 },
        Criterion { id: 11, name: "focal properties", budget: Duration::from_secs(1), run: criterion_11 },
        Criterion { id: 12, name: "root-location inequalities", budget: Duration::from_secs(2), run: criterion_12 },
    ];
    let (mut passed, mut known_failures, mut hard_failures) = (0, 0, 0);
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => {
                passed += 1;
                ("PASS", d)
            }
            Ok(d) => {
                hard_failures += 1;
                ("FAIL", format!("{d}; over time budget"))
            }
            Err(f) if f.known => {
                known_failures += 1;
                ("FAIL", format!("{} [known]", f.detail))
            }
            Err(f) => {
                hard_failures += 1;
                ("FAIL", f.detail)
            }
        };
        println!(
            "[{tag}] {:>2} {}: {} ({:.3} s, budget {:.1} s)",
            c.id,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            c.budget.as_secs_f64()
        );
    }
    println!(
        "acceptance: {passed} passed, {} failed ({known_failures} known: stated expectation unattainable, correct value verified)",
        known_failures + hard_failures
    );
    if hard_failures > 0 {
        std::process::exit(1);
    }
}
