//! Deterministic SVG and CSV renderings of real slices.
//!
//! Only real points are drawn. Complex vertices are shown by their real parts
//! and annotated; vertices at infinity and non-real caustics are listed as
//! notes.

use std::fmt::Write;

use caustics::algebra::Cx;
use caustics::billiard::trace_orbit;
use caustics::cayley::{caustic_roots, classify, ConicKind};
use caustics::conics::{ProjPoint, DEFAULT_TOL};
use clap::ValueEnum;

use crate::config::{Exit, Format, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Caustics,
    Orbit,
}

const ELLIPSE_SAMPLES: usize = 360;
const BRANCH_SAMPLES: usize = 200;
const MARGIN: f64 = 1.25;
/// Imaginary parts below this are treated as real.
const REAL_TOL: f64 = 1e-9;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
    closed: bool,
}

struct Figure {
    title: String,
    curves: Vec<Curve>,
    markers: Vec<(f64, f64, String)>,
    notes: Vec<String>,
}

fn ellipse_curve(label: String, a: f64, b: f64) -> Curve {
    let points = (0..ELLIPSE_SAMPLES)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / ELLIPSE_SAMPLES as f64;
            (a * t.cos(), b * t.sin())
        })
        .collect();
    Curve { label, points, closed: true }
}

/// Both branches of `x²/A² - y²/B² = 1`, clipped to the square of half-width `half`.
fn hyperbola_curves(label: &str, a: f64, b: f64, half: f64) -> Vec<Curve> {
    let s_max = (half / a).max(1.0).acosh().min((half / b).asinh());
    [1.0, -1.0]
        .into_iter()
        .map(|side| {
            let points = (0..=BRANCH_SAMPLES)
                .map(|k| {
                    let s = -s_max + 2.0 * s_max * k as f64 / BRANCH_SAMPLES as f64;
                    (side * a * s.cosh(), b * s.sinh())
                })
                .collect();
            let branch = if side > 0.0 { "right" } else { "left" };
            Curve { label: format!("{label} ({branch} branch)"), points, closed: false }
        })
        .collect()
}

/// Curves of the real conic `C_λ` if it has real points.
fn caustic_curves(cfg: &RunConfig, label: &str, lambda: Cx, half: f64) -> Option<Vec<Curve>> {
    let (a2, b2) = (cfg.fam.a2_f64(), cfg.fam.b2_f64());
    match classify(&cfg.fam, lambda, DEFAULT_TOL) {
        ConicKind::Ellipse => Some(vec![ellipse_curve(
            label.to_string(),
            (a2 + lambda.re).sqrt(),
            (b2 + lambda.re).sqrt(),
        )]),
        ConicKind::Hyperbola => Some(hyperbola_curves(
            label,
            (a2 + lambda.re).sqrt(),
            (-(b2 + lambda.re)).sqrt(),
            half,
        )),
        _ => None,
    }
}

fn lambda_label(lambda: Cx) -> String {
    if lambda.im == 0.0 {
        format!("{:.6}", lambda.re)
    } else {
        format!("{:.6}{:+.6}i", lambda.re, lambda.im)
    }
}

fn half_width(cfg: &RunConfig, real_lambdas: &[f64], extra: &[(f64, f64)]) -> f64 {
    let mut r = cfg.fam.a();
    for &l in real_lambdas {
        if l > -cfg.fam.b2_f64() {
            r = r.max((cfg.fam.a2_f64() + l).sqrt());
        }
    }
    for &(x, y) in extra {
        r = r.max(x.abs()).max(y.abs());
    }
    (MARGIN * r * 1e6).ceil() / 1e6
}

pub fn caustics(cfg: &RunConfig) -> Result<String, Exit> {
    let roots = caustic_roots(&cfg.fam, cfg.n, DEFAULT_TOL)?;
    let admissible: Vec<Cx> = roots.roots.iter().filter(|r| r.admissible).map(|r| r.lambda).collect();
    let real: Vec<f64> = admissible.iter().filter(|l| l.im == 0.0).map(|l| l.re).collect();
    let half = half_width(cfg, &real, &[]);
    let mut fig = Figure {
        title: format!("n = {}: ellipse and {} admissible caustics", cfg.n, admissible.len()),
        curves: vec![ellipse_curve("E".into(), cfg.fam.a(), cfg.fam.b())],
        markers: Vec::new(),
        notes: Vec::new(),
    };
    for (i, &lambda) in admissible.iter().enumerate() {
        let label = format!("C{} λ={}", i + 1, lambda_label(lambda));
        match caustic_curves(cfg, &label, lambda, half) {
            Some(curves) => fig.curves.extend(curves),
            None => fig.notes.push(format!(
                "{label}: {} conic, no real points",
                classify(&cfg.fam, lambda, DEFAULT_TOL).as_str()
            )),
        }
    }
    render(cfg.format, fig, half)
}

pub fn orbit(cfg: &RunConfig, lambda: Cx, start: &ProjPoint, branch: usize) -> Result<String, Exit> {
    let trace = trace_orbit(&cfg.fam, lambda, start, branch, cfg.n)?;
    let mut notes = Vec::new();
    let mut markers = Vec::new();
    let mut polygon = Vec::new();
    // The last vertex repeats the first when the orbit closes.
    for (k, v) in trace.vertices.iter().enumerate() {
        match v.is_finite(DEFAULT_TOL).then(|| v.to_affine()).flatten() {
            Some((x, y)) => {
                polygon.push((x.re, y.re));
                let complex = x.im.abs() > REAL_TOL || y.im.abs() > REAL_TOL;
                let label = if complex {
                    notes.push(format!(
                        "M{k} = ({:.6}{:+.6}i, {:.6}{:+.6}i) is complex: real part drawn",
                        x.re, x.im, y.re, y.im
                    ));
                    format!("M{k}*")
                } else {
                    format!("M{k}")
                };
                markers.push((x.re, y.re, label));
            }
            None => notes.push(format!("M{k} is at infinity: omitted")),
        }
    }
    if !trace.is_closed(cfg.tol) {
        notes.push(format!("orbit does not close: residual {:.3e}", trace.closure_residual));
    }
    let real = if lambda.im.abs() <= REAL_TOL { vec![lambda.re] } else { Vec::new() };
    let half = half_width(cfg, &real, &polygon);
    let mut curves = vec![ellipse_curve("E".into(), cfg.fam.a(), cfg.fam.b())];
    let label = format!("C λ={}", lambda_label(lambda));
    match caustic_curves(cfg, &label, lambda, half) {
        Some(cs) => curves.extend(cs),
        None => notes.push(format!(
            "{label}: {} conic, no real points",
            classify(&cfg.fam, lambda, DEFAULT_TOL).as_str()
        )),
    }
    curves.push(Curve { label: "orbit".into(), points: polygon, closed: false });
    let fig = Figure {
        title: format!("n = {} orbit, λ = {}", cfg.n, lambda_label(lambda)),
        curves,
        markers,
        notes,
    };
    render(cfg.format, fig, half)
}

/// Values that print as zero at 6 decimals are written as `0.000000`, never `-0.000000`.
fn clean(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

fn render(format: Format, mut fig: Figure, half: f64) -> Result<String, Exit> {
    for c in &mut fig.curves {
        for p in &mut c.points {
            *p = (clean(p.0), clean(p.1));
        }
    }
    for m in &mut fig.markers {
        m.0 = clean(m.0);
        m.1 = clean(m.1);
    }
    let fig = &fig;
    match format {
        Format::Svg => Ok(svg(fig, half)),
        Format::Csv => Ok(csv(fig)),
        Format::Json => Err(Exit::usage("plot supports --format svg or csv")),
    }
}

fn csv(fig: &Figure) -> String {
    let mut out = String::new();
    writeln!(out, "# {}", fig.title).unwrap();
    for note in &fig.notes {
        writeln!(out, "# {note}").unwrap();
    }
    out.push_str("curve,x,y\n");
    for c in &fig.curves {
        for &(x, y) in &c.points {
            writeln!(out, "\"{}\",{x:.6},{y:.6}", c.label).unwrap();
        }
    }
    for (x, y, label) in &fig.markers {
        writeln!(out, "\"vertex {label}\",{x:.6},{y:.6}").unwrap();
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn svg(fig: &Figure, half: f64) -> String {
    let stroke = half / 250.0;
    let font = half / 18.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="800" height="800">"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(&fig.title)).unwrap();
    writeln!(
        out,
        r##"<g fill="none" stroke-width="{stroke:.6}"><line x1="{:.6}" y1="0" x2="{:.6}" y2="0" stroke="#bbbbbb"/><line x1="0" y1="{:.6}" x2="0" y2="{:.6}" stroke="#bbbbbb"/>"##,
        -half, half, -half, half
    )
    .unwrap();
    for (i, c) in fig.curves.iter().enumerate() {
        let tag = if c.closed { "polygon" } else { "polyline" };
        let pts: Vec<String> = c.points.iter().map(|&(x, y)| format!("{x:.6},{:.6}", clean(-y))).collect();
        writeln!(
            out,
            r#"<{tag} stroke="{}" points="{}"><title>{}</title></{tag}>"#,
            PALETTE[i % PALETTE.len()],
            pts.join(" "),
            escape(&c.label)
        )
        .unwrap();
    }
    out.push_str("</g>\n");
    for (x, y, label) in &fig.markers {
        writeln!(
            out,
            r#"<circle cx="{x:.6}" cy="{:.6}" r="{:.6}" fill="black"/><text x="{x:.6}" y="{:.6}" font-size="{font:.6}">{}</text>"#,
            clean(-y),
            2.0 * stroke,
            -y - font / 2.0,
            escape(label)
        )
        .unwrap();
    }
    let mut y = -half + font * 1.2;
    let mut legend = |text: &str, color: &str| {
        writeln!(
            out,
            r#"<text x="{:.6}" y="{y:.6}" font-size="{font:.6}" fill="{color}">{}</text>"#,
            -half + font / 2.0,
            escape(text)
        )
        .unwrap();
        y += font * 1.2;
    };
    for (i, c) in fig.curves.iter().enumerate() {
        legend(&c.label, PALETTE[i % PALETTE.len()]);
    }
    for note in &fig.notes {
        legend(note, "#555555");
    }
    out.push_str("</svg>\n");
    out
}
