//! The Cayley polynomial `B^n(λ)` of the confocal family: its zeros are the
//! caustic parameters of `n`-periodic billiard trajectories in the ellipse.
//!
//! Everything up to root finding is exact. With `α = (a²+λ)/a²` and
//! `β = (b²+λ)/b²`, `B_k(λ)` is the `t^k` coefficient of
//! `sqrt((αt+1)(βt+1)(t+1))`, and `B^n` is a Hankel determinant in the `B_k`:
//! `det(B_{i+j})` for `n = 2m+1`, `det(B_{i+j+1})` for `n = 2m` (indices from 1).

use num_traits::{One, Zero};

use crate::algebra::{
    hankel_det, poly_roots, polish_roots, rational_roots, series_sqrt, taylor_c, to_f64, Cx, PolyQ, Rational,
    SeriesQ,
};
use crate::conics::ConfocalFamily;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Relative residual accepted from the root finder.
pub const ROOT_TOL: f64 = 1e-12;
/// Distance within which a numeric root is identified with an exact rational root.
const RATIONAL_SNAP: f64 = 1e-9;

fn alpha_beta(fam: &ConfocalFamily) -> (PolyQ, PolyQ) {
    let one = Rational::one();
    (
        PolyQ::linear(one.clone(), fam.a2().recip()),
        PolyQ::linear(one, fam.b2().recip()),
    )
}

/// `B_k(λ) = Σ_{u+v+w=k} c_u c_v c_w α^u β^v` from the closed triple sum.
pub fn cayley_b(fam: &ConfocalFamily, k: usize) -> PolyQ {
    let (alpha, beta) = alpha_beta(fam);
    let c: Vec<Rational> = (0..=k as u64).map(taylor_c).collect();
    let alpha_pow: Vec<PolyQ> = (0..=k).map(|u| alpha.pow(u)).collect();
    let beta_pow: Vec<PolyQ> = (0..=k).map(|v| beta.pow(v)).collect();
    let mut acc = PolyQ::zero();
    for u in 0..=k {
        for v in 0..=k - u {
            let w = k - u - v;
            let coef = &c[u] * &c[v] * &c[w];
            acc = &acc + &(&alpha_pow[u] * &beta_pow[v]).scale(&coef);
        }
    }
    acc
}

/// `B_0, …, B_order` from one series square root of the cubic.
pub fn cayley_b_series(fam: &ConfocalFamily, order: usize) -> Vec<PolyQ> {
    let (alpha, beta) = alpha_beta(fam);
    let one = PolyQ::constant(Rational::one());
    let cubic = SeriesQ::new(
        vec![
            one.clone(),
            &(&alpha + &beta) + &one,
            &(&(&alpha * &beta) + &alpha) + &beta,
            &alpha * &beta,
        ],
        order,
    );
    series_sqrt(&cubic, order)
        .expect("cubic has constant term 1")
        .into_coeffs()
}

/// Exact Cayley data for one `(family, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyTable {
    pub fam: ConfocalFamily,
    pub n: usize,
    /// Hankel size: `(n-1)/2` for odd `n`, `n/2 - 1` for even `n`.
    pub m: usize,
    /// `B_0, …, B_top`, where `top` is the largest index the determinant uses.
    pub b: Vec<PolyQ>,
    /// `B^n`.
    pub bn: PolyQ,
}

/// Hankel size and offset (0-based) for period `n`.
fn hankel_shape(n: usize) -> (usize, usize) {
    if n % 2 == 1 {
        ((n - 1) / 2, 2)
    } else {
        (n / 2 - 1, 3)
    }
}

pub fn cayley_polynomial(fam: &ConfocalFamily, n: usize) -> Result<CayleyTable> {
    if n < 3 {
        return Err(Error::PeriodTooSmall(n));
    }
    let (m, offset) = hankel_shape(n);
    let top = offset + 2 * m - 2;
    let b = cayley_b_series(fam, top);
    let bn = hankel_det(&b, m, offset)?;
    Ok(CayleyTable {
        fam: fam.clone(),
        n,
        m,
        b,
        bn,
    })
}

/// `B^n` for several periods, one independent job per `n`.
pub fn cayley_batch(
    fam: &ConfocalFamily,
    ns: &[usize],
    exec: Execution,
) -> Result<Vec<CayleyTable>> {
    exec.map(ns, |&n| cayley_polynomial(fam, n))
        .into_iter()
        .collect()
}

/// Upper bound on `deg B^n`: `(n²-1)/4` for odd `n`, `n²/4` for even `n`.
pub fn degree_bound(n: usize) -> usize {
    if n % 2 == 1 {
        (n * n - 1) / 4
    } else {
        n * n / 4
    }
}

/// Degree of `B^n` for generic axes: `(n²-1)/4` for odd `n`, `n²/4 - 1` for
/// even `n`.
///
/// For even `n` the determinant has size `m - 1` (with `n = 2m`) and entries
/// `B_{i+j+1}` of degree `i+j+1`, so its top degree is `(m-1)(m+1)`, one less
/// than the bound. The top coefficient reduces to a Catalan Hankel
/// determinant, which is nonzero.
pub fn generic_degree(n: usize) -> usize {
    if n % 2 == 1 {
        (n * n - 1) / 4
    } else {
        n * n / 4 - 1
    }
}

/// Degree for the circle: `(n-1)/2` for odd `n`, `n/2 - 1` for even `n`.
pub fn circle_degree(n: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else {
        n / 2 - 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    /// `None` when `B^n` vanishes identically.
    pub degree: Option<usize>,
    /// See [`degree_bound`].
    pub bound: usize,
    /// See [`generic_degree`].
    pub expected_generic: usize,
    /// Set only for a circle.
    pub expected_circle: Option<usize>,
    pub leading: Rational,
}

impl DegreeReport {
    /// True when the degree is below the generic one (an exceptional axis ratio
    /// or the circle).
    pub fn is_drop(&self) -> bool {
        self.degree.map_or(true, |d| d < self.expected_generic)
    }
}

pub fn degree_report(fam: &ConfocalFamily, n: usize) -> Result<DegreeReport> {
    let table = cayley_polynomial(fam, n)?;
    Ok(table.degree_report())
}

impl CayleyTable {
    pub fn degree_report(&self) -> DegreeReport {
        DegreeReport {
            degree: self.bn.degree(),
            bound: degree_bound(self.n),
            expected_generic: generic_degree(self.n),
            expected_circle: self.fam.is_circle().then(|| circle_degree(self.n)),
            leading: self.bn.leading(),
        }
    }

    pub fn forbidden_values(&self) -> ForbiddenValues {
        ForbiddenValues {
            at_minus_a2: self.bn.eval(&-self.fam.a2().clone()),
            at_minus_b2: self.bn.eval(&-self.fam.b2().clone()),
        }
    }
}

/// Exact values of `B^n` at the forbidden parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ForbiddenValues {
    pub at_minus_a2: Rational,
    pub at_minus_b2: Rational,
}

pub fn forbidden_values(fam: &ConfocalFamily, n: usize) -> Result<ForbiddenValues> {
    Ok(cayley_polynomial(fam, n)?.forbidden_values())
}

/// Real type of the confocal conic `C_λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicKind {
    /// `λ > -b²`
    Ellipse,
    /// `-a² < λ < -b²`
    Hyperbola,
    /// `λ < -a²`: no real points.
    Imaginary,
    /// Nonreal `λ`.
    Complex,
    /// `λ` at (or within tolerance of) `-a²` or `-b²`.
    Degenerate,
}

impl ConicKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConicKind::Ellipse => "ellipse",
            ConicKind::Hyperbola => "hyperbola",
            ConicKind::Imaginary => "imaginary",
            ConicKind::Complex => "complex",
            ConicKind::Degenerate => "degenerate",
        }
    }
}

pub fn classify(fam: &ConfocalFamily, lambda: Cx, tol: f64) -> ConicKind {
    let scale = fam.scale();
    if fam.is_forbidden(lambda, tol) {
        return ConicKind::Degenerate;
    }
    if lambda.im.abs() > tol * scale {
        return ConicKind::Complex;
    }
    if lambda.re > -fam.b2_f64() {
        ConicKind::Ellipse
    } else if lambda.re > -fam.a2_f64() {
        ConicKind::Hyperbola
    } else {
        ConicKind::Imaginary
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticRoot {
    pub lambda: Cx,
    /// Exact value when the root is rational.
    pub exact: Option<Rational>,
    pub multiplicity: usize,
    pub admissible: bool,
    pub kind: ConicKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticRoots {
    pub table: CayleyTable,
    /// Sorted by real part, then imaginary part.
    pub roots: Vec<CausticRoot>,
    /// Exact verdict: `gcd(B^n, B^n')` is constant.
    pub squarefree: bool,
}

impl CausticRoots {
    /// Number of admissible roots.
    pub fn admissible_count(&self) -> usize {
        self.roots.iter().filter(|r| r.admissible).count()
    }
}

/// Squarefree decomposition `p = c Π f_i^i` (Yun); returns `(i, f_i)` for
/// nonconstant `f_i`.
fn squarefree_factors(p: &PolyQ) -> Vec<(usize, PolyQ)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).0;
    let mut c = dp.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let f = b.gcd(&d);
        b = b.div_rem(&f).0;
        c = d.div_rem(&f).0;
        d = &c - &b.derivative();
        if f.degree().unwrap_or(0) > 0 {
            out.push((i, f));
        }
        i += 1;
    }
    out
}

/// Numeric roots of `B^n` with exact multiplicities and admissibility.
///
/// A root is admissible when it is simple and lies farther than
/// `tol * max(1, a², b²)` from both `-a²` and `-b²`; an exact rational root
/// equal to either value is never admissible.
pub fn caustic_roots(fam: &ConfocalFamily, n: usize, tol: f64) -> Result<CausticRoots> {
    let table = cayley_polynomial(fam, n)?;
    caustic_roots_of(table, tol)
}

pub fn caustic_roots_of(table: CayleyTable, tol: f64) -> Result<CausticRoots> {
    let fam = &table.fam;
    let bn = &table.bn;
    if bn.degree().unwrap_or(0) == 0 {
        return Ok(CausticRoots {
            squarefree: !bn.is_zero(),
            roots: Vec::new(),
            table,
        });
    }
    let squarefree = bn.is_squarefree();
    let exact_roots = rational_roots(bn)?;
    let forbidden = [-fam.a2().clone(), -fam.b2().clone()];

    let mut roots = Vec::new();
    for (mult, factor) in squarefree_factors(bn) {
        let prim = factor.primitive_integer();
        let numeric = polish_roots(&prim, &poly_roots(&prim.to_complex_coeffs(), ROOT_TOL)?);
        for z in numeric {
            let exact = exact_roots
                .iter()
                .find(|r| (Cx::new(to_f64(r), 0.0) - z).norm() <= RATIONAL_SNAP * (1.0 + z.norm()))
                .filter(|r| prim.eval(r).is_zero())
                .cloned();
            let lambda = match &exact {
                Some(r) => Cx::new(to_f64(r), 0.0),
                None => z,
            };
            let on_forbidden = exact.as_ref().is_some_and(|r| forbidden.contains(r));
            let kind = if on_forbidden {
                ConicKind::Degenerate
            } else {
                classify(fam, lambda, tol)
            };
            roots.push(CausticRoot {
                lambda,
                exact,
                multiplicity: mult,
                admissible: mult == 1 && !on_forbidden && !fam.is_forbidden(lambda, tol),
                kind,
            });
        }
    }
    roots.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
    Ok(CausticRoots {
        table,
        roots,
        squarefree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn fam(a2: i64, b2: i64) -> ConfocalFamily {
        ConfocalFamily::new(int(a2), int(b2)).unwrap()
    }

    fn poly(cs: &[Rational]) -> PolyQ {
        PolyQ::new(cs.to_vec())
    }

    #[test]
    fn b0_is_one() {
        assert_eq!(cayley_b(&fam(4, 1), 0), PolyQ::constant(int(1)));
    }

    #[test]
    fn triple_sum_matches_series() {
        for f in [fam(4, 1), fam(3, 2), ConfocalFamily::new(rat(7, 3), rat(2, 5)).unwrap()] {
            let series = cayley_b_series(&f, 10);
            for (k, bk) in series.iter().enumerate() {
                assert_eq!(&cayley_b(&f, k), bk, "k = {k}");
                assert!(bk.degree().unwrap_or(0) <= k);
            }
        }
    }

    #[test]
    fn circle_b_k() {
        let f = fam(1, 1);
        let x = PolyQ::linear(int(1), int(1));
        for k in 2..8u64 {
            let expected = &PolyQ::constant(taylor_c(k)) + &x.scale(&taylor_c(k - 1));
            assert_eq!(cayley_b(&f, k as usize), expected);
        }
    }

    #[test]
    fn n3_at_4_1() {
        let t = cayley_polynomial(&fam(4, 1), 3).unwrap();
        let expected = poly(&[int(-48), int(-40), int(9)]).scale(&rat(-1, 128));
        assert_eq!(t.bn, expected);
        assert_eq!(t.bn, t.b[2]);
        assert_eq!(t.m, 1);
    }

    #[test]
    fn n4_at_4_1() {
        let t = cayley_polynomial(&fam(4, 1), 4).unwrap();
        assert_eq!(t.bn, t.b[3]);
        let expected = poly(&[int(-64), int(-80), int(36), int(45)]);
        assert_eq!(t.bn.primitive_integer(), expected);
    }

    #[test]
    fn rejects_small_n() {
        assert_eq!(cayley_polynomial(&fam(4, 1), 2), Err(Error::PeriodTooSmall(2)));
    }

    #[test]
    fn degrees() {
        let r = degree_report(&fam(4, 1), 5).unwrap();
        assert_eq!(r.degree, Some(6));
        assert_eq!(r.expected_generic, 6);
        assert!(!r.is_drop());
        let r4 = degree_report(&fam(4, 1), 4).unwrap();
        assert_eq!((r4.degree, r4.expected_generic, r4.bound), (Some(3), 3, 4));
        let r6 = degree_report(&fam(4, 1), 6).unwrap();
        assert_eq!((r6.degree, r6.expected_generic, r6.bound), (Some(8), 8, 9));
        let c5 = degree_report(&fam(1, 1), 5).unwrap();
        assert_eq!(c5.degree, Some(2));
        assert_eq!(c5.expected_circle, Some(2));
        let c6 = degree_report(&fam(1, 1), 6).unwrap();
        assert_eq!(c6.degree, Some(2));
    }

    #[test]
    fn forbidden_at_4_1() {
        let v = forbidden_values(&fam(4, 1), 3).unwrap();
        assert_eq!(v.at_minus_a2, int(-2));
        assert!(!v.at_minus_b2.is_zero());
        let w = forbidden_values(&fam(2, 1), 4).unwrap();
        assert!(w.at_minus_a2.is_zero());
    }

    #[test]
    fn roots_n3() {
        let r = caustic_roots(&fam(4, 1), 3, 1e-9).unwrap();
        assert!(r.squarefree);
        assert_eq!(r.roots.len(), 2);
        let s13 = 13f64.sqrt();
        assert!((r.roots[0].lambda.re - (20.0 - 8.0 * s13) / 9.0).abs() < 1e-12);
        assert!((r.roots[1].lambda.re - (20.0 + 8.0 * s13) / 9.0).abs() < 1e-12);
        assert!(r.roots.iter().all(|x| x.admissible && x.exact.is_none()));
        assert_eq!(r.roots[0].kind, ConicKind::Ellipse);
    }

    #[test]
    fn roots_n4() {
        let r = caustic_roots(&fam(4, 1), 4, 1e-9).unwrap();
        let exact: Vec<Rational> = r.roots.iter().map(|x| x.exact.clone().unwrap()).collect();
        assert_eq!(exact, vec![rat(-4, 3), rat(-4, 5), rat(4, 3)]);
        assert_eq!(r.admissible_count(), 3);
        assert_eq!(r.roots[0].kind, ConicKind::Hyperbola);
        assert_eq!(r.roots[1].kind, ConicKind::Ellipse);
    }

    #[test]
    fn roots_n4_exceptional_ratio() {
        let r = caustic_roots(&fam(2, 1), 4, 1e-9).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert_eq!(r.roots[0].exact, Some(int(-2)));
        assert!(!r.roots[0].admissible);
        assert_eq!(r.roots[0].kind, ConicKind::Degenerate);
        assert_eq!(r.admissible_count(), 2);
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)^2 (x+2)^3 (x^2+1)
        let a = PolyQ::linear(int(-1), int(1));
        let b = PolyQ::linear(int(2), int(1));
        let c = poly(&[int(1), int(0), int(1)]);
        let p = &(&a.pow(2) * &b.pow(3)) * &c;
        let f = squarefree_factors(&p);
        assert_eq!(f, vec![(1, c), (2, a), (3, b)]);
    }

    #[test]
    fn batch_modes_agree() {
        let ns = [3, 4, 5, 6];
        let s = cayley_batch(&fam(4, 1), &ns, Execution::Sequential).unwrap();
        let p = cayley_batch(&fam(4, 1), &ns, Execution::Parallel).unwrap();
        assert_eq!(s, p);
    }
}
