//! Serializable views of caustic roots and orbit traces.

use caustics::algebra::{fraction_string, Cx};
use caustics::billiard::OrbitTrace;
use caustics::cayley::{classify, CausticRoots};
use caustics::conics::{ConfocalFamily, ProjPoint, DEFAULT_TOL};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FamilyOut {
    pub a2: String,
    pub b2: String,
}

impl FamilyOut {
    pub fn of(fam: &ConfocalFamily) -> Self {
        FamilyOut { a2: fraction_string(fam.a2()), b2: fraction_string(fam.b2()) }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RootOut {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub admissible: bool,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ForbiddenOut {
    pub at_minus_a2: String,
    pub at_minus_b2: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CausticsReport {
    pub family: FamilyOut,
    pub n: usize,
    /// Exact coefficients of `B^n`, constant term first.
    pub polynomial: Vec<String>,
    /// The same polynomial scaled to coprime integer coefficients.
    pub primitive: String,
    pub degree: Option<usize>,
    pub degree_bound: usize,
    pub generic_degree: usize,
    pub circle: bool,
    pub squarefree: bool,
    pub forbidden: ForbiddenOut,
    pub roots: Vec<RootOut>,
    #[serde(rename = "N")]
    pub admissible: usize,
}

impl CausticsReport {
    pub fn of(roots: &CausticRoots) -> Self {
        let t = &roots.table;
        let deg = t.degree_report();
        let forbidden = t.forbidden_values();
        CausticsReport {
            family: FamilyOut::of(&t.fam),
            n: t.n,
            polynomial: t.bn.coeffs().iter().map(fraction_string).collect(),
            primitive: t.bn.primitive_integer().to_string(),
            degree: deg.degree,
            degree_bound: deg.bound,
            generic_degree: deg.expected_generic,
            circle: t.fam.is_circle(),
            squarefree: roots.squarefree,
            forbidden: ForbiddenOut {
                at_minus_a2: fraction_string(&forbidden.at_minus_a2),
                at_minus_b2: fraction_string(&forbidden.at_minus_b2),
            },
            roots: roots
                .roots
                .iter()
                .map(|r| RootOut {
                    re: r.lambda.re,
                    im: r.lambda.im,
                    multiplicity: r.multiplicity,
                    admissible: r.admissible,
                    kind: r.kind.as_str().to_string(),
                    exact: r.exact.as_ref().map(fraction_string),
                })
                .collect(),
            admissible: roots.admissible_count(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im,multiplicity,admissible,kind,exact\n");
        for (i, r) in self.roots.iter().enumerate() {
            out.push_str(&format!(
                "{i},{:.12},{:.12},{},{},{},{}\n",
                r.re,
                r.im,
                r.multiplicity,
                r.admissible,
                r.kind,
                r.exact.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

/// Complex number as `[re, im]`.
pub type Pair = [f64; 2];

fn pair(z: Cx) -> Pair {
    [z.re, z.im]
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VertexOut {
    /// Homogeneous coordinates.
    pub coords: [Pair; 3],
    /// `(x, y)`, absent for points at infinity.
    pub affine: Option<[Pair; 2]>,
}

impl VertexOut {
    fn of(p: &ProjPoint) -> Self {
        let c = p.coords();
        VertexOut {
            coords: [pair(c[0]), pair(c[1]), pair(c[2])],
            affine: p
                .is_finite(DEFAULT_TOL)
                .then(|| p.to_affine())
                .flatten()
                .map(|(x, y)| [pair(x), pair(y)]),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ResidualsOut {
    /// Per side: distance of the side from tangency to the caustic.
    pub tangency: Vec<f64>,
    /// Per interior vertex: deviation from the reflection law.
    pub reflection: Vec<f64>,
    pub p_spread: f64,
    pub lambda_consistency: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub family: FamilyOut,
    pub n: usize,
    pub lambda: Pair,
    pub kind: String,
    pub branch: usize,
    pub tol: f64,
    pub closed: bool,
    pub vertices: Vec<VertexOut>,
    #[serde(rename = "P_values")]
    pub p_values: Vec<Pair>,
    pub closure_residual: f64,
    pub residuals: ResidualsOut,
    pub self_reflections: Vec<usize>,
}

impl TraceReport {
    pub fn of(t: &OrbitTrace, n: usize, branch: usize, tol: f64) -> Self {
        TraceReport {
            family: FamilyOut::of(&t.fam),
            n,
            lambda: pair(t.lambda),
            kind: classify(&t.fam, t.lambda, DEFAULT_TOL).as_str().to_string(),
            branch,
            tol,
            closed: t.is_closed(tol),
            vertices: t.vertices.iter().map(VertexOut::of).collect(),
            p_values: t.invariants_p.iter().copied().map(pair).collect(),
            closure_residual: t.closure_residual,
            residuals: ResidualsOut {
                tangency: t.tangency_residuals.clone(),
                reflection: t.reflection_residuals.clone(),
                p_spread: t.p_spread(),
                lambda_consistency: t.lambda_consistency(),
            },
            self_reflections: t.self_reflections.clone(),
        }
    }

    pub fn max_step_residual(&self) -> f64 {
        self.residuals
            .tangency
            .iter()
            .chain(&self.residuals.reflection)
            .fold(0.0, |m, &r| m.max(r))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,x_re,x_im,y_re,y_im,P_re,P_im\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let (x, y) = match v.affine {
                Some([x, y]) => (
                    format!("{:.12},{:.12}", x[0], x[1]),
                    format!("{:.12},{:.12}", y[0], y[1]),
                ),
                None => ("inf,inf".into(), "inf,inf".into()),
            };
            let p = self
                .p_values
                .get(k)
                .map(|p| format!("{:.12},{:.12}", p[0], p[1]))
                .unwrap_or_else(|| ",".into());
            out.push_str(&format!("{k},{x},{y},{p}\n"));
        }
        out
    }
}
