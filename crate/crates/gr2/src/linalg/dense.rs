//! Small dense exact-integer matrix helpers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type DenseMat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> DenseMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &DenseMat, b: &DenseMat) -> DenseMat {
    let (m, k) = (a.len(), if a.is_empty() { 0 } else { a[0].len() });
    let n = if b.is_empty() { 0 } else { b[0].len() };
    assert!(k == b.len(), "dimension mismatch in mat_mul");
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(m: &DenseMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "det of non-square matrix");
    let mut a: DenseMat = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by Bareiss
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn is_unimodular(m: &DenseMat) -> bool {
    det_bareiss(m).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> DenseMat {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det_bareiss(&mat(&[&[2, 4], &[6, 8]])), BigInt::from(-8));
        assert_eq!(det_bareiss(&identity(5)), BigInt::one());
        assert_eq!(
            det_bareiss(&mat(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])),
            BigInt::one()
        );
        assert_eq!(det_bareiss(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
