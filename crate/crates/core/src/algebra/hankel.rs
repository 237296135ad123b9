use super::Ring;
use crate::error::{Error, Result};

/// Determinant of the `m x m` Hankel matrix with entry `(i, j) = seq[i + j + offset]`
/// (0-based `i, j`), computed exactly by Bareiss fraction-free elimination.
///
/// Every division performed is exact in the coefficient ring, so for
/// polynomial entries no rational-function intermediates appear.
pub fn hankel_det<T: Ring>(seq: &[T], m: usize, offset: usize) -> Result<T> {
    if m == 0 {
        return Err(Error::InvalidInput("Hankel size must be positive".into()));
    }
    let needed = offset + 2 * m - 1;
    if seq.len() < needed {
        return Err(Error::HankelTooShort {
            m,
            offset,
            got: seq.len(),
        });
    }
    let matrix: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|j| seq[i + j + offset].clone()).collect())
        .collect();
    Ok(bareiss_det(matrix))
}

pub(crate) fn bareiss_det<T: Ring>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        T::zero().minus(&det)
    } else {
        det
    }
}
