//! Sparse integer vectors: sorted coordinate lists with `BigInt` entries.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A sparse vector over ℤ, stored as a strictly increasing list of
/// `(column, entry)` pairs with no zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(u32, BigInt)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    /// Builds from an arbitrary (possibly unsorted, possibly repeating)
    /// list of terms, summing repeats and dropping zeros.
    pub fn from_terms(mut terms: Vec<(u32, BigInt)>) -> Self {
        terms.sort_by_key(|&(c, _)| c);
        let mut entries: Vec<(u32, BigInt)> = Vec::with_capacity(terms.len());
        for (c, v) in terms {
            match entries.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn unit(col: u32) -> Self {
        SparseVec {
            entries: vec![(col, BigInt::from(1))],
        }
    }

    pub fn from_dense(row: &[BigInt]) -> Self {
        let entries = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u32, v.clone()))
            .collect();
        SparseVec { entries }
    }

    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (c, v) in &self.entries {
            out[*c as usize] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.entries.iter().map(|(c, v)| (*c, v))
    }

    pub fn leading(&self) -> Option<(u32, &BigInt)> {
        self.entries.first().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: u32) -> Option<&BigInt> {
        self.entries
            .binary_search_by_key(&col, |&(c, _)| c)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn max_col(&self) -> Option<u32> {
        self.entries.last().map(|&(c, _)| c)
    }

    pub fn negate(&mut self) {
        for (_, v) in &mut self.entries {
            let n = -std::mem::take(v);
            *v = n;
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (*c, v * k)).collect(),
        }
    }

    /// `self + k · other`, merged.
    pub fn add_scaled(&self, other: &SparseVec, k: &BigInt) -> Self {
        if k.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ca, va) = &self.entries[i];
            let (cb, vb) = &other.entries[j];
            match ca.cmp(cb) {
                std::cmp::Ordering::Less => {
                    out.push((*ca, va.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*cb, vb * k));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = va + vb * k;
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.entries[i..].iter().cloned());
        out.extend(other.entries[j..].iter().map(|(c, v)| (*c, v * k)));
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.add_scaled(other, &BigInt::from(1))
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.add_scaled(other, &BigInt::from(-1))
    }

    pub fn dot(&self, other: &SparseVec) -> BigInt {
        let mut acc = BigInt::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ca, va) = &self.entries[i];
            let (cb, vb) = &other.entries[j];
            match ca.cmp(cb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += va * vb;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Restricts to the columns for which `keep` returns true.
    pub fn filter_cols(&self, keep: impl Fn(u32) -> bool) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(c, _)| keep(*c))
                .cloned()
                .collect(),
        }
    }

    /// Applies a column relabeling; `map(col)` returning `None` drops the entry.
    pub fn remap_cols(&self, map: impl Fn(u32) -> Option<u32>) -> Self {
        SparseVec::from_terms(
            self.entries
                .iter()
                .filter_map(|(c, v)| map(*c).map(|nc| (nc, v.clone())))
                .collect(),
        )
    }

    /// Largest absolute value of an entry (zero vector gives 0).
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(|(_, v)| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl FromIterator<(u32, BigInt)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (u32, BigInt)>>(iter: T) -> Self {
        SparseVec::from_terms(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, i64)]) -> SparseVec {
        SparseVec::from_terms(pairs.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
    }

    #[test]
    fn merge_and_cancel() {
        let v = sv(&[(3, 2), (0, 1), (3, -2)]);
        assert_eq!(v, sv(&[(0, 1)]));
        assert!(sv(&[]).is_zero());
    }

    #[test]
    fn add_scaled_merges() {
        let v = sv(&[(0, 1), (2, 3)]);
        let w = sv(&[(0, 1), (1, 5)]);
        assert_eq!(v.add_scaled(&w, &BigInt::from(-1)), sv(&[(1, -5), (2, 3)]));
    }

    #[test]
    fn dot_product() {
        let v = sv(&[(0, 2), (4, 3)]);
        let w = sv(&[(0, 5), (4, -1), (7, 9)]);
        assert_eq!(v.dot(&w), BigInt::from(7));
    }
}
