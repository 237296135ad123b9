//! Simultaneous polynomial root finding (Aberth–Ehrlich) and exact rational
//! root recovery.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::{Cx, PolyQ, Rational};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 2000;
const POLISH_ITERATIONS: usize = 60;
// Angular offset of the initial circle; keeps the start off the real axis.
const START_PHASE: f64 = 0.4;

/// Cauchy bound `1 + max |a_i / a_n|` on the moduli of the roots.
pub fn cauchy_bound(coeffs: &[Cx]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    1.0 + coeffs[..n]
        .iter()
        .map(|c| c.norm() / lead)
        .fold(0.0, f64::max)
}

/// Fujiwara bound `2 max |a_{n-k} / a_n|^{1/k}` (last term halved); much
/// tighter than [`cauchy_bound`] when the coefficients are large.
fn fujiwara_bound(coeffs: &[Cx]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let mut m = 0.0f64;
    for k in 1..=n {
        let mut c = coeffs[n - k].norm() / lead;
        if k == n {
            c /= 2.0;
        }
        m = m.max(c.powf(1.0 / k as f64));
    }
    2.0 * m
}

/// `a / b` without overflowing `|b|²`.
fn div(a: Cx, b: Cx) -> Cx {
    let s = b.norm();
    (a / s) * (b.conj() / s)
}

fn horner(coeffs: &[Cx], z: Cx) -> (Cx, Cx) {
    let mut p = Cx::new(0.0, 0.0);
    let mut dp = Cx::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn residual_scale(coeffs: &[Cx], z: Cx) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn relative_residual(coeffs: &[Cx], z: Cx) -> f64 {
    let (p, _) = horner(coeffs, z);
    let scale = residual_scale(coeffs, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All `deg p` complex roots of `sum coeffs[i] z^i`, with multiplicity.
///
/// Roots are accepted when `|p(z)| <= tol * sum |a_i| |z|^i`. Deterministic:
/// the start points are the Cauchy-bound circle at fixed phases.
pub fn poly_roots(coeffs: &[Cx], tol: f64) -> Result<Vec<Cx>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidInput(
            "polynomial must have degree at least 1".into(),
        ));
    }
    if coeffs.iter().any(|c| !super::is_finite(*c)) {
        return Err(Error::InvalidInput("non-finite coefficient".into()));
    }
    // Exact zero roots: the relative residual is meaningless near 0.
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    if zeros > 0 {
        let mut roots = vec![Cx::new(0.0, 0.0); zeros];
        if coeffs.len() - zeros > 1 {
            roots.extend(poly_roots(&coeffs[zeros..], tol)?);
        }
        return Ok(roots);
    }
    let n = coeffs.len() - 1;
    if n == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }

    let radius = fujiwara_bound(&coeffs).max(f64::MIN_POSITIVE);
    let mut z: Vec<Cx> = (0..n)
        .map(|k| Cx::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + START_PHASE))
        .collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = div(p, dp);
            let repulsion: Cx = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Cx::new(0.0, 0.0)
                    } else {
                        div(Cx::new(1.0, 0.0), d)
                    }
                })
                .sum();
            let step = div(ratio, Cx::new(1.0, 0.0) - ratio * repulsion);
            if super::is_finite(step) {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    let residuals: Vec<f64> = z.iter().map(|&r| relative_residual(&coeffs, r)).collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    if max_residual <= tol && z.iter().all(|r| super::is_finite(*r)) {
        Ok(z)
    } else {
        Err(Error::RootsNotConverged {
            iterations,
            best: z,
            residuals,
            max_residual,
        })
    }
}

/// A root together with the number of computed roots merged into it.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub value: Cx,
    pub multiplicity: usize,
}

/// Merge roots lying within `radius` of each other (single linkage) and
/// return the cluster centroids, sorted by real then imaginary part.
pub fn cluster_roots(roots: &[Cx], radius: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Cx, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut label, i);
        match clusters.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                c.1 += roots[i];
                c.2 += 1;
            }
            None => clusters.push((root, roots[i], 1)),
        }
    }
    let mut out: Vec<RootCluster> = clusters
        .into_iter()
        .map(|(_, sum, m)| RootCluster {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        let Some(ai) = BigInt::from_f64(a) else {
            break;
        };
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let rem = frac - a;
        if rem.abs() < 1e-300 {
            break;
        }
        frac = 1.0 / rem;
        if !frac.is_finite() {
            break;
        }
    }
    out
}

type CxInt = num_complex::Complex<BigInt>;

/// `z = w / 2^k` with Gaussian-integer `w`.
fn dyadic(z: Cx) -> (CxInt, u32) {
    let parts = [z.re, z.im].map(|x| {
        if x == 0.0 {
            (BigInt::zero(), 0i32)
        } else {
            let (m, e, sign) = num_traits::Float::integer_decode(x);
            (BigInt::from(m) * i64::from(sign), i32::from(e))
        }
    });
    let low = parts.iter().filter(|(m, _)| !m.is_zero()).map(|p| p.1).min().unwrap_or(0);
    let k = (-low).max(0);
    let lift = |(m, e): &(BigInt, i32)| -> BigInt { m << ((e + k) as usize) };
    (CxInt::new(lift(&parts[0]), lift(&parts[1])), k as u32)
}

fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        0.0
    } else {
        Rational::new(num.clone(), den.clone()).to_f64().unwrap_or(f64::NAN)
    }
}

/// Newton step `p(z) / p'(z)` with `p` evaluated exactly.
fn exact_newton_step(coeffs: &[BigInt], z: Cx) -> Option<Cx> {
    let (w, k) = dyadic(z);
    let d = coeffs.len() - 1;
    // Horner in w on c_j 2^{k(d-j)}: h = 2^{kd} p(z), dh = 2^{k(d-1)} p'(z).
    let mut h = CxInt::new(coeffs[d].clone(), BigInt::zero());
    let mut dh = CxInt::new(BigInt::zero(), BigInt::zero());
    for j in (0..d).rev() {
        dh = &dh * &w + &h;
        h = &h * &w + CxInt::new(&coeffs[j] << (k as usize * (d - j)), BigInt::zero());
    }
    let num = &h * dh.conj();
    let den = (&dh.re * &dh.re + &dh.im * &dh.im) << (k as usize);
    if den.is_zero() {
        return None;
    }
    let step = Cx::new(ratio_f64(&num.re, &den), ratio_f64(&num.im, &den));
    super::is_finite(step).then_some(step)
}

/// Refine approximate roots of `p` by Aberth iteration with exact
/// evaluation of `p / p'`. Accuracy is then limited by the rounding of the
/// roots themselves rather than by cancellation in `p`, which separates
/// tight clusters that plain floating-point evaluation cannot resolve.
pub fn polish_roots(p: &PolyQ, roots: &[Cx]) -> Vec<Cx> {
    let prim = p.primitive_integer();
    let coeffs: Vec<BigInt> = prim.coeffs().iter().map(|c| c.numer().clone()).collect();
    let mut z = roots.to_vec();
    if coeffs.len() < 2 || z.len() != coeffs.len() - 1 {
        return z;
    }
    let n = z.len();
    let mut converged = vec![false; n];
    for _ in 0..POLISH_ITERATIONS {
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let Some(ratio) = exact_newton_step(&coeffs, z[i]) else {
                converged[i] = true;
                continue;
            };
            let repulsion: Cx = (0..n)
                .filter(|&j| j != i && z[j] != z[i])
                .map(|j| div(Cx::new(1.0, 0.0), z[i] - z[j]))
                .sum();
            let step = div(ratio, Cx::new(1.0, 0.0) - ratio * repulsion);
            if !super::is_finite(step) {
                converged[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            break;
        }
    }
    z
}

/// Every rational root of `p`, each listed once, sorted ascending.
///
/// Candidates come from the continued-fraction expansions of the real
/// numeric roots (a root `u/v` in lowest terms has `v` dividing the leading
/// coefficient of the primitive integer form); each candidate is verified by
/// exact evaluation, so the result never contains a false root.
pub fn rational_roots(p: &PolyQ) -> Result<Vec<Rational>> {
    let mut out: Vec<Rational> = Vec::new();
    let Some(deg) = p.degree() else {
        return Err(Error::InvalidInput("zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(out);
    }
    let prim = p.primitive_integer();
    let lead = prim.leading().numer().abs();
    let constant = prim.coeff(0).numer().abs();
    let numeric = poly_roots(&prim.to_complex_coeffs(), 1e-9)?;
    for z in numeric {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            continue;
        }
        for cand in convergents(z.re, &lead) {
            // u/v in lowest terms must have v | lead and u | constant term.
            let divides = |d: &BigInt, n: &BigInt| d.is_zero() || (n % d).is_zero();
            let plausible = divides(cand.denom(), &lead)
                && (constant.is_zero() || divides(cand.numer(), &constant));
            if plausible && !out.contains(&cand) && prim.eval(&cand).is_zero() {
                out.push(cand);
            }
        }
    }
    out.sort();
    debug_assert!(out.iter().all(|r| r.to_f64().is_some()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn real(cs: &[f64]) -> Vec<Cx> {
        cs.iter().map(|&c| Cx::new(c, 0.0)).collect()
    }

    #[test]
    fn quadratic_from_triangular_caustics() {
        let roots = poly_roots(&real(&[-48.0, -40.0, 9.0]), 1e-12).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
        re.sort_by(f64::total_cmp);
        let s13 = 13f64.sqrt();
        assert!((re[0] - (20.0 - 8.0 * s13) / 9.0).abs() < 1e-12);
        assert!((re[1] - (20.0 + 8.0 * s13) / 9.0).abs() < 1e-12);
    }

    #[test]
    fn monomial() {
        let roots = poly_roots(&real(&[0.0, 1.0]), 1e-12).unwrap();
        assert_eq!(roots, vec![Cx::new(0.0, 0.0)]);
    }

    #[test]
    fn cubic_from_quadrilateral_caustics() {
        // 45 l^3 + 36 l^2 - 80 l - 64 = 45 (l + 4/3)(l + 4/5)(l - 4/3)
        let roots = poly_roots(&real(&[-64.0, -80.0, 36.0, 45.0]), 1e-12).unwrap();
        let clusters = cluster_roots(&roots, 1e-6);
        let expected = [-4.0 / 3.0, -0.8, 4.0 / 3.0];
        assert_eq!(clusters.len(), 3);
        for (c, e) in clusters.iter().zip(expected) {
            assert!((c.value - Cx::new(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn double_root_is_clustered() {
        // (z - 1)^2 (z + 2)
        let roots = poly_roots(&real(&[2.0, -3.0, 0.0, 1.0]), 1e-12).unwrap();
        let clusters = cluster_roots(&roots, 1e-6 * cauchy_bound(&real(&[2.0, -3.0, 0.0, 1.0])));
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[1].multiplicity, 2);
        assert!((clusters[1].value - Cx::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn complex_roots() {
        // z^2 + 1
        let roots = poly_roots(&real(&[1.0, 0.0, 1.0]), 1e-12).unwrap();
        let clusters = cluster_roots(&roots, 1e-9);
        assert!((clusters[0].value - Cx::new(0.0, -1.0)).norm() < 1e-12);
        assert!((clusters[1].value - Cx::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_constants() {
        assert!(poly_roots(&real(&[3.0]), 1e-12).is_err());
        assert!(poly_roots(&real(&[1.0, 1.0]), 0.0).is_err());
    }

    #[test]
    fn large_coefficients_do_not_overflow() {
        // 1e150 (z - 1e8)(z - 1)(z + 2): |p'|² overflows at the start circle
        let c = 1e150;
        let cs = real(&[2e8 * c, -(2.0 + 1e8) * c, (1.0 - 1e8) * c, c]);
        let mut roots: Vec<f64> = poly_roots(&cs, 1e-9).unwrap().iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        for (z, t) in roots.iter().zip([-2.0, 1.0, 1e8]) {
            assert!((z - t).abs() <= 1e-9 * t.abs().max(1.0), "{z} vs {t}");
        }
    }

    #[test]
    fn polishing_separates_a_tight_cluster() {
        // (x - 1)(x - 1 - 1e-7)(x - 1 + 1e-7) has a cluster the f64 residual
        // cannot resolve well; exact evaluation recovers all three.
        let e = rat(1, 10_000_000);
        let one = int(1);
        let p = &(&PolyQ::linear(-one.clone(), int(1)) * &PolyQ::linear(-(&one + &e), int(1)))
            * &PolyQ::linear(-(&one - &e), int(1));
        let rough = vec![Cx::new(0.9999, 1e-5), Cx::new(1.0, -1e-5), Cx::new(1.0001, 0.0)];
        let mut polished: Vec<f64> = polish_roots(&p, &rough).iter().map(|z| z.re).collect();
        polished.sort_by(f64::total_cmp);
        for (z, t) in polished.iter().zip([1.0 - 1e-7, 1.0, 1.0 + 1e-7]) {
            assert!((z - t).abs() < 1e-15, "{z} vs {t}");
        }
    }

    #[test]
    fn rational_roots_skip_impossible_candidates() {
        // 3x^2 - 2x: roots 0 and 2/3
        let p = PolyQ::new(vec![int(0), int(-2), int(3)]);
        assert_eq!(rational_roots(&p).unwrap(), vec![int(0), rat(2, 3)]);
    }

    #[test]
    fn exact_rational_roots() {
        let p = PolyQ::new(vec![int(-64), int(-80), int(36), int(45)]);
        assert_eq!(
            rational_roots(&p).unwrap(),
            vec![rat(-4, 3), rat(-4, 5), rat(4, 3)]
        );
        let irr = PolyQ::new(vec![int(-48), int(-40), int(9)]);
        assert!(rational_roots(&irr).unwrap().is_empty());
    }
}
