//! Independent dense rank oracles for the acceptance suite. These share no
//! code with the sparse staircase pipeline they cross-check.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Exact rank by fraction-free (Bareiss) row echelon over ℤ.
pub fn bareiss_rank(m: &[Vec<BigInt>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = a[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < rows && col < cols {
        // find a pivot in this column at or below `rank`
        let pivot_row = (rank..rows).find(|&r| !a[r][col].is_zero());
        let pr = match pivot_row {
            None => {
                col += 1;
                continue;
            }
            Some(r) => r,
        };
        a.swap(rank, pr);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &a[r][c] * &a[rank][col] - &a[r][col] * &a[rank][c];
                a[r][c] = num / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

const P: u64 = 2_147_483_647; // 2^31 - 1

/// Rank over the prime field F_p for p = 2^31 - 1. For an integer matrix the
/// mod-p rank never exceeds the rational rank, so agreement with the
/// pipeline rank certifies it from below.
pub fn modp_rank(m: &[Vec<BigInt>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let reduce = |v: &BigInt| -> u64 {
        let r = v % BigInt::from(P);
        let r = if r.is_negative() {
            r + BigInt::from(P)
        } else {
            r
        };
        u64::try_from(r).expect("residue fits")
    };
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| row.iter().map(reduce).collect())
        .collect();
    let rows = a.len();
    let cols = a[0].len();
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < rows && col < cols {
        let pivot_row = (rank..rows).find(|&r| a[r][col] != 0);
        let pr = match pivot_row {
            None => {
                col += 1;
                continue;
            }
            Some(r) => r,
        };
        a.swap(rank, pr);
        let inv = mod_inverse(a[rank][col]);
        for r in rank + 1..rows {
            if a[r][col] == 0 {
                continue;
            }
            let factor = mul(a[r][col], inv);
            for c in col..cols {
                let sub = mul(factor, a[rank][c]);
                a[r][c] = (a[r][c] + P - sub) % P;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

fn mul(x: u64, y: u64) -> u64 {
    ((x as u128 * y as u128) % P as u128) as u64
}

fn mod_inverse(x: u64) -> u64 {
    // Fermat: x^(p-2) mod p
    let mut base = x % P;
    let mut exp = P - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn ranks_agree_on_small_matrices() {
        let m = mat(&[&[2, 4, 1], &[6, 8, 0], &[8, 12, 1]]);
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(modp_rank(&m), 2);
        let id = mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(bareiss_rank(&id), 2);
        let z = mat(&[&[0, 0], &[0, 0]]);
        assert_eq!(bareiss_rank(&z), 0);
        assert_eq!(modp_rank(&z), 0);
    }
}
