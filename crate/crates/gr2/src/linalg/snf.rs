//! Smith normal form with transformation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::dense::{identity, DenseMat};

/// `u * m * v = diag`, with `u`, `v` unimodular, `diag` the invariant factors
/// (each dividing the next). `v_inv` is the inverse of `v`, maintained so that
/// quotient coordinates can be both computed and sectioned.
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: DenseMat,
    pub v: DenseMat,
    pub v_inv: DenseMat,
}

struct Worker {
    a: DenseMat,
    u: DenseMat,
    v: DenseMat,
    v_inv: DenseMat,
    m: usize,
    n: usize,
}

impl Worker {
    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        // row dst += q * row src
        for c in 0..self.n {
            let t = &self.a[src][c] * q;
            self.a[dst][c] += t;
        }
        for c in 0..self.m {
            let t = &self.u[src][c] * q;
            self.u[dst][c] += t;
        }
    }

    fn row_negate(&mut self, i: usize) {
        for c in 0..self.n {
            let t = -std::mem::take(&mut self.a[i][c]);
            self.a[i][c] = t;
        }
        for c in 0..self.m {
            let t = -std::mem::take(&mut self.u[i][c]);
            self.u[i][c] = t;
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        for r in 0..self.m {
            self.a[r].swap(i, j);
        }
        for r in 0..self.n {
            self.v[r].swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        // col dst += q * col src;  v gets the same op, v_inv the inverse row op
        for r in 0..self.m {
            let t = &self.a[r][src] * q;
            self.a[r][dst] += t;
        }
        for r in 0..self.n {
            let t = &self.v[r][src] * q;
            self.v[r][dst] += t;
        }
        // (E^{-1} * v_inv): row src -= q * row dst
        for c in 0..self.n {
            let t = &self.v_inv[dst][c] * q;
            self.v_inv[src][c] -= t;
        }
    }

    /// Clears row and column `k` (beyond the pivot), improving the pivot by
    /// remainder swaps until it divides everything it meets.
    fn eliminate_at(&mut self, k: usize) {
        loop {
            // move a nonzero entry of minimal absolute value to (k, k)
            let mut best: Option<(usize, usize)> = None;
            for i in k..self.m {
                for j in k..self.n {
                    if !self.a[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match best {
                None => return,
                Some(p) => p,
            };
            if pi != k {
                self.row_swap(k, pi);
            }
            if pj != k {
                self.col_swap(k, pj);
            }
            if self.a[k][k].is_negative() {
                self.row_negate(k);
            }

            let mut dirty = false;
            for i in k + 1..self.m {
                if self.a[i][k].is_zero() {
                    continue;
                }
                let q = -self.a[i][k].div_floor(&self.a[k][k]);
                self.row_add(i, k, &q);
                if !self.a[i][k].is_zero() {
                    dirty = true; // remainder left; smaller pivot exists
                }
            }
            for j in k + 1..self.n {
                if self.a[k][j].is_zero() {
                    continue;
                }
                let q = -self.a[k][j].div_floor(&self.a[k][k]);
                self.col_add(j, k, &q);
                if !self.a[k][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                return;
            }
        }
    }
}

pub fn snf(rows: &[Vec<BigInt>], ncols: usize) -> Snf {
    let m = rows.len();
    let n = ncols;
    let mut w = Worker {
        a: rows.to_vec(),
        u: identity(m),
        v: identity(n),
        v_inv: identity(n),
        m,
        n,
    };
    let r_max = m.min(n);
    let mut rank = 0;
    for k in 0..r_max {
        w.eliminate_at(k);
        if w.a[k][k].is_zero() {
            break;
        }
        rank = k + 1;
    }
    // enforce the divisibility chain d1 | d2 | ... by folding offenders back in
    let mut stable = false;
    while !stable {
        stable = true;
        for i in 0..rank {
            for j in i + 1..rank {
                if (&w.a[j][j] % &w.a[i][i]).is_zero() {
                    continue;
                }
                stable = false;
                let one = BigInt::from(1);
                w.col_add(i, j, &one); // pulls d_j into column i
                w.eliminate_at(i);
            }
        }
    }
    for i in 0..rank {
        if w.a[i][i].is_negative() {
            w.row_negate(i);
        }
    }
    let diag: Vec<BigInt> = (0..rank).map(|i| w.a[i][i].clone()).collect();
    debug_assert!(diag.iter().all(|d| d.is_positive()));
    Snf {
        diag,
        u: w.u,
        v: w.v,
        v_inv: w.v_inv,
    }
}
