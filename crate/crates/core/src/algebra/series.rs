use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Truncated power series `c_0 + c_1 t + ... + c_order t^order` over a
/// rational algebra (rationals, or polynomials in the caustic parameter).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesQ<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> SeriesQ<T> {
    /// Series truncated at `order`; missing coefficients are zero, extra ones
    /// are dropped.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        SeriesQ { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k).fold(T::zero(), |acc, i| {
                    acc.plus(&self.coeffs[i].times(&other.coeffs[k - i]))
                })
            })
            .collect();
        SeriesQ { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        SeriesQ {
            coeffs: (0..=order)
                .map(|k| self.coeffs[k].plus(&other.coeffs[k]))
                .collect(),
        }
    }
}

/// Square root of a series with constant term 1, solved coefficient by
/// coefficient from `r * r = s`:
/// `r_k = (s_k - sum_{i=1}^{k-1} r_i r_{k-i}) / 2`.
///
/// The result is truncated at `min(order, s.order())`.
pub fn series_sqrt<T: Ring>(s: &SeriesQ<T>, order: usize) -> Result<SeriesQ<T>> {
    if *s.coeff(0) != T::one() {
        return Err(Error::SeriesConstantTerm);
    }
    let order = order.min(s.order());
    let half = Rational::new(1.into(), 2.into());
    let mut r: Vec<T> = Vec::with_capacity(order + 1);
    r.push(T::one());
    for k in 1..=order {
        let cross = (1..k).fold(T::zero(), |acc, i| acc.plus(&r[i].times(&r[k - i])));
        r.push(s.coeff(k).minus(&cross).scaled(&half));
    }
    Ok(SeriesQ { coeffs: r })
}
