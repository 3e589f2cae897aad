//! Little dense 𝔽₂ linear algebra on bit-packed rows.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(width: usize) -> Self {
        BitVec {
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn leading_bit(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// Incremental row echelon over 𝔽₂.
#[derive(Debug, Clone, Default)]
pub struct BitEchelon {
    rows: BTreeMap<usize, BitVec>,
}

impl BitEchelon {
    pub fn new() -> Self {
        BitEchelon {
            rows: BTreeMap::new(),
        }
    }

    /// Inserts a row; returns true if the span grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        loop {
            let lead = match v.leading_bit() {
                None => return false,
                Some(l) => l,
            };
            match self.rows.get(&lead) {
                Some(row) => v.xor_assign(row),
                None => {
                    self.rows.insert(lead, v);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        loop {
            let lead = match v.leading_bit() {
                None => return true,
                Some(l) => l,
            };
            match self.rows.get(&lead) {
                Some(row) => v.xor_assign(row),
                None => return false,
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn gf2_rank(rows: impl IntoIterator<Item = BitVec>) -> usize {
    let mut e = BitEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(width: usize, bits: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(width);
        for &b in bits {
            v.set(b);
        }
        v
    }

    #[test]
    fn rank_and_span() {
        let rows = vec![bv(70, &[0, 65]), bv(70, &[0]), bv(70, &[65])];
        assert_eq!(gf2_rank(rows), 2);
        let mut e = BitEchelon::new();
        e.insert(bv(8, &[1, 3]));
        e.insert(bv(8, &[3]));
        assert!(e.contains(&bv(8, &[1])));
        assert!(!e.contains(&bv(8, &[0])));
    }
}
