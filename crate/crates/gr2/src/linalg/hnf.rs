//! Row-style Hermite normal form over ℤ, built incrementally.
//!
//! The staircase keeps one row per pivot column; pivots are positive and all
//! entries above a pivot lie in `[0, pivot)` after `finish`. Insertion uses
//! gcd combinations, so the result is independent of insertion order once
//! normalized.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::sparse::SparseVec;

#[derive(Debug, Clone, Default)]
pub struct Staircase {
    rows: BTreeMap<u32, SparseVec>,
}

impl Staircase {
    pub fn new() -> Self {
        Staircase {
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Inserts a vector into the row lattice. Returns true if the lattice grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        let mut changed = false;
        loop {
            let (col, lead) = match v.leading() {
                None => return changed,
                Some((c, l)) => (c, l.clone()),
            };
            match self.rows.get(&col) {
                None => {
                    if lead.is_negative() {
                        v.negate();
                    }
                    self.rows.insert(col, v);
                    return true;
                }
                Some(row) => {
                    let pivot = row.get(col).expect("pivot entry").clone();
                    let (q, r) = lead.div_rem(&pivot);
                    if r.is_zero() {
                        v = v.add_scaled(row, &(-q));
                    } else {
                        // gcd combination: replace the pivot row, keep reducing.
                        let e = pivot.extended_gcd(&lead);
                        let (g, s, t) = (e.gcd, e.x, e.y);
                        let new_row = row.scaled(&s).add_scaled(&v, &t);
                        debug_assert_eq!(new_row.get(col), Some(&g));
                        let reduced = v.scaled(&(&pivot / &g)).add_scaled(row, &(-(&lead / &g)));
                        debug_assert!(reduced.get(col).is_none());
                        self.rows.insert(col, new_row);
                        changed = true;
                        v = reduced;
                    }
                }
            }
        }
    }

    /// True if `v` lies in the current row lattice.
    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut v = v.clone();
        loop {
            let (col, lead) = match v.leading() {
                None => return true,
                Some((c, l)) => (c, l.clone()),
            };
            match self.rows.get(&col) {
                None => return false,
                Some(row) => {
                    let pivot = row.get(col).expect("pivot entry");
                    let (q, r) = lead.div_rem(pivot);
                    if !r.is_zero() {
                        return false;
                    }
                    v = v.add_scaled(row, &(-q));
                }
            }
        }
    }

    /// Reduces `v` modulo the row lattice: every pivot-column entry is left in
    /// `[0, pivot)`. The residue is zero iff `v` is in the lattice.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut floor = 0u32;
        loop {
            // smallest pivot column >= floor appearing in v
            let next = v
                .iter()
                .map(|(c, _)| c)
                .find(|c| *c >= floor && self.rows.contains_key(c));
            let col = match next {
                None => return v,
                Some(c) => c,
            };
            let row = &self.rows[&col];
            let pivot = row.get(col).expect("pivot entry");
            let q = v.get(col).expect("entry").div_floor(pivot);
            if !q.is_zero() {
                v = v.add_scaled(row, &(-q));
            }
            floor = col + 1;
        }
    }

    /// Canonicalizes: reduces every row above each later pivot. After this the
    /// rows, read in pivot order, are the unique HNF basis of the lattice.
    pub fn finish(&mut self) {
        let pivot_cols: Vec<u32> = self.rows.keys().copied().collect();
        for &pc in pivot_cols.iter().rev() {
            let row = self.rows.remove(&pc).expect("row");
            let reduced = self.reduce(&row);
            self.rows.insert(pc, reduced);
        }
    }

    pub fn into_rows(mut self) -> Vec<SparseVec> {
        self.finish();
        self.rows.into_values().collect()
    }
}

/// Row HNF of a list of sparse rows: the unique staircase basis of their span.
pub fn hnf_rows(rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut st = Staircase::new();
    for r in rows {
        st.insert(r);
    }
    st.into_rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn sv(pairs: &[(u32, i64)]) -> SparseVec {
        SparseVec::from_terms(pairs.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
    }

    #[test]
    fn hnf_of_2x2() {
        // rows (2,4),(6,8): lattice has HNF {(2,0),(0,4)}
        let h = hnf_rows(vec![sv(&[(0, 2), (1, 4)]), sv(&[(0, 6), (1, 8)])]);
        assert_eq!(h, vec![sv(&[(0, 2)]), sv(&[(1, 4)])]);
    }

    #[test]
    fn hnf_identity_fixed() {
        let h = hnf_rows(vec![sv(&[(0, 1)]), sv(&[(1, 1)])]);
        assert_eq!(h, vec![sv(&[(0, 1)]), sv(&[(1, 1)])]);
    }

    #[test]
    fn hnf_zero_matrix() {
        let h = hnf_rows(vec![sv(&[]), sv(&[])]);
        assert!(h.is_empty());
    }

    #[test]
    fn insertion_order_irrelevant() {
        let rows = vec![
            sv(&[(0, 3), (1, 1), (2, -7)]),
            sv(&[(0, 1), (1, 4), (2, 2)]),
            sv(&[(1, 6), (2, 9)]),
        ];
        let mut perm = rows.clone();
        perm.reverse();
        assert_eq!(hnf_rows(rows), hnf_rows(perm));
    }

    #[test]
    fn hnf_idempotent() {
        let rows = vec![sv(&[(0, 2), (1, 4)]), sv(&[(0, 6), (1, 8)])];
        let h1 = hnf_rows(rows);
        let h2 = hnf_rows(h1.clone());
        assert_eq!(h1, h2);
    }

    #[test]
    fn membership_and_reduce() {
        let mut st = Staircase::new();
        st.insert(sv(&[(0, 2), (1, 1)]));
        st.insert(sv(&[(1, 3)]));
        st.finish();
        assert!(st.contains(&sv(&[(0, 2), (1, 4)])));
        assert!(!st.contains(&sv(&[(0, 1)])));
        let r = st.reduce(&sv(&[(0, 5), (1, 9)]));
        // residue has first coordinate in [0,2), second in [0,3)
        let d = r.to_dense(2);
        assert!(d[0] >= BigInt::zero() && d[0] < BigInt::from(2));
        assert!(d[1] >= BigInt::zero() && d[1] < BigInt::from(3));
        assert!(st.reduce(&sv(&[(0, 2), (1, 1)])).is_zero());
    }
}
