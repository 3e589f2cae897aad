//! Exact integer linear algebra: sparse matrices, Hermite and Smith normal
//! forms, saturated kernels, quotient lattices with canonical coordinates,
//! and span closure under endomorphism sets.
//!
//! Everything here is over ℤ (arbitrary precision); there is no floating
//! point anywhere in the crate.

pub mod dense;
pub mod gf2;
pub mod hnf;
pub mod snf;
pub mod sparse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use dense::{det_bareiss, DenseMat};
pub use hnf::{hnf_rows, Staircase};
pub use snf::{snf, Snf};
pub use sparse::SparseVec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient rank mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("lattice is not contained in the claimed superlattice")]
    NotContained,
    #[error("quotient has torsion; no free canonical coordinates: factors {0:?}")]
    TorsionQuotient(Vec<BigInt>),
}

/// Sparse integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<SparseVec>,
}

impl IntMatrix {
    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows
            .iter()
            .all(|r| r.max_col().map_or(true, |c| (c as usize) < ncols)));
        IntMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn from_cols(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut rows: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter() {
                rows[i as usize].push((j as u32, v.clone()));
            }
        }
        IntMatrix {
            nrows,
            ncols: cols.len(),
            rows: rows.into_iter().map(SparseVec::from_terms).collect(),
        }
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut cols: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter() {
                cols[c as usize].push((i as u32, v.clone()));
            }
        }
        IntMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows: cols.into_iter().map(SparseVec::from_terms).collect(),
        }
    }

    /// Matrix–vector product `M v` (v indexed by columns).
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_terms(
            self.rows
                .iter()
                .enumerate()
                .filter_map(|(i, row)| {
                    let d = row.dot(v);
                    if d.is_zero() {
                        None
                    } else {
                        Some((i as u32, d))
                    }
                })
                .collect(),
        )
    }

    /// Row-vector–matrix product `x M` (x indexed by rows).
    pub fn vec_mul(&self, x: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, coeff) in x.iter() {
            for (c, v) in self.rows[i as usize].iter() {
                terms.push((c, coeff * v));
            }
        }
        SparseVec::from_terms(terms)
    }

    pub fn to_dense(&self) -> DenseMat {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }

    pub fn rank(&self) -> usize {
        let mut st = Staircase::new();
        for r in &self.rows {
            st.insert(r.clone());
        }
        st.rank()
    }
}

/// The unique row-HNF of the row span of `m`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    IntMatrix::from_rows(m.ncols, hnf_rows(m.rows.iter().cloned()))
}

/// An HNF-reduced basis of a sublattice of ℤⁿ. Two sublattices are equal iff
/// their `LatticeBasis` values are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    ambient: usize,
    rows: Vec<SparseVec>, // canonical HNF, sorted by pivot column
}

impl LatticeBasis {
    pub fn from_generators(ambient: usize, gens: impl IntoIterator<Item = SparseVec>) -> Self {
        LatticeBasis {
            ambient,
            rows: hnf_rows(gens),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        LatticeBasis {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        LatticeBasis {
            ambient,
            rows: (0..ambient as u32).map(SparseVec::unit).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<u32> {
        self.rows
            .iter()
            .map(|r| r.leading().expect("nonzero HNF row").0)
            .collect()
    }

    pub fn staircase(&self) -> Staircase {
        let mut st = Staircase::new();
        for r in &self.rows {
            st.insert(r.clone());
        }
        st
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.staircase().contains(v)
    }

    /// All HNF pivots equal 1. This certifies that the quotient by this
    /// lattice is torsion-free (a maximal minor is then ±1).
    pub fn has_unit_pivots(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.leading().map(|(_, v)| v.is_one()).unwrap_or(false))
    }

    /// Invariant factors of the basis matrix.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        if self.has_unit_pivots() {
            return vec![BigInt::one(); self.rank()];
        }
        let dense: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.to_dense(self.ambient)).collect();
        snf(&dense, self.ambient).diag
    }

    /// The quotient ℤⁿ / L is torsion-free.
    pub fn is_saturated(&self) -> bool {
        self.invariant_factors().iter().all(|d| d.is_one())
    }

    pub fn sum(&self, other: &LatticeBasis) -> Result<LatticeBasis, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(LatticeBasis::from_generators(
            self.ambient,
            self.rows.iter().chain(other.rows.iter()).cloned(),
        ))
    }

    pub fn equal(&self, other: &LatticeBasis) -> Result<bool, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(self.rows == other.rows)
    }

    /// Index of `sub` in `self`; `Ok(None)` means infinite (rank drop).
    pub fn index_of(&self, sub: &LatticeBasis) -> Result<Option<BigInt>, LinalgError> {
        if self.ambient != sub.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, sub.ambient));
        }
        let coeffs = self.solve_all(sub.rows())?;
        if sub.rank() < self.rank() {
            return Ok(None);
        }
        let dense: Vec<Vec<BigInt>> = coeffs.iter().map(|r| r.to_dense(self.rank())).collect();
        Ok(Some(det_bareiss(&dense).abs()))
    }

    /// Expresses each vector in the basis of `self` (erroring if not a member).
    /// Row `k` of the result gives the coefficients of `vs[k]` over `self.rows`.
    pub fn solve_all(&self, vs: &[SparseVec]) -> Result<Vec<SparseVec>, LinalgError> {
        let pivot_index: std::collections::HashMap<u32, usize> = self
            .pivots()
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut out = Vec::with_capacity(vs.len());
        for v in vs {
            let mut v = v.clone();
            let mut coeffs = Vec::new();
            while let Some((col, lead)) = v.leading().map(|(c, l)| (c, l.clone())) {
                let idx = match pivot_index.get(&col) {
                    Some(&i) => i,
                    None => return Err(LinalgError::NotContained),
                };
                let row = &self.rows[idx];
                let pivot = row.get(col).expect("pivot");
                let (q, r) = lead.div_rem(pivot);
                if !r.is_zero() {
                    return Err(LinalgError::NotContained);
                }
                v = v.add_scaled(row, &(-q.clone()));
                coeffs.push((idx as u32, q));
            }
            out.push(SparseVec::from_terms(coeffs));
        }
        Ok(out)
    }

    /// Stable hex digest of the canonical basis (ambient, rank, rows).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("ambient={};rank={};", self.ambient, self.rank()));
        for row in &self.rows {
            for (c, v) in row.iter() {
                h.update(format!("{c}:{v},"));
            }
            h.update(";");
        }
        hex_string(&h.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Saturated kernel `{ v : M v = 0 }` via row HNF of the transpose-augmented
/// system `[Mᵀ | I]`: staircase rows supported entirely in the augmented part
/// are exactly the integer solutions.
pub fn integer_kernel(m: &IntMatrix) -> LatticeBasis {
    let off = m.nrows as u32;
    let t = m.transpose();
    let mut st = Staircase::new();
    for (j, row) in t.rows().iter().enumerate() {
        let mut terms: Vec<(u32, BigInt)> = row.iter().map(|(c, v)| (c, v.clone())).collect();
        terms.push((off + j as u32, BigInt::one()));
        st.insert(SparseVec::from_terms(terms));
    }
    let rows = st.into_rows();
    let kernel_rows: Vec<SparseVec> = rows
        .into_iter()
        .filter(|r| r.leading().map(|(c, _)| c >= off).unwrap_or(false))
        .map(|r| r.remap_cols(|c| c.checked_sub(off)))
        .collect();
    LatticeBasis::from_generators(m.ncols, kernel_rows)
}

/// Solves a system of linear congruences `rows[i] · v ≡ 0 (mod moduli[i])`
/// over ℤⁿ and returns the solution lattice (always of full rank n).
pub fn congruence_kernel(n: usize, rows: &[(SparseVec, u32)]) -> LatticeBasis {
    let m = rows.len();
    let mat_rows: Vec<SparseVec> = rows
        .iter()
        .enumerate()
        .map(|(i, (row, modulus))| {
            let mut terms: Vec<(u32, BigInt)> = row.iter().map(|(c, v)| (c, v.clone())).collect();
            terms.push(((n + i) as u32, BigInt::from(*modulus)));
            SparseVec::from_terms(terms)
        })
        .collect();
    let mat = IntMatrix::from_rows(n + m, mat_rows);
    let kernel = integer_kernel(&mat);
    LatticeBasis::from_generators(
        n,
        kernel
            .rows()
            .iter()
            .map(|r| r.filter_cols(|c| (c as usize) < n)),
    )
}

/// Smallest sublattice containing `gens` and stable under every map in
/// `endos`. Returns the lattice and the number of full sweeps performed.
pub fn span_closure<F>(
    ambient: usize,
    gens: impl IntoIterator<Item = SparseVec>,
    endos: &[F],
) -> (LatticeBasis, usize)
where
    F: Fn(&SparseVec) -> SparseVec,
{
    let mut st = Staircase::new();
    for g in gens {
        st.insert(g);
    }
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let snapshot: Vec<SparseVec> = st.rows().cloned().collect();
        let mut changed = false;
        for endo in endos {
            for row in &snapshot {
                if st.insert(endo(row)) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (
        LatticeBasis::from_generators(ambient, st.into_rows()),
        sweeps,
    )
}

/// How canonical coordinates on a quotient are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientMode {
    /// Relation HNF has unit pivots: coordinates are the free-column values
    /// of the fully reduced representative.
    UnitPivot,
    /// General case, via a Smith basis of the ambient.
    SmithBasis,
}

/// An ambient free module together with a relation sublattice and canonical
/// coordinates on the (torsion-free) quotient.
pub struct QuotientLattice {
    ambient: usize,
    relations: LatticeBasis,
    relation_stair: Staircase,
    torsion: Vec<BigInt>,
    rank: usize,
    mode: QuotientMode,
    free_cols: Vec<u32>,             // UnitPivot mode
    smith: Option<Box<SmithCoords>>, // SmithBasis mode
}

struct SmithCoords {
    v: DenseMat,
    v_inv: DenseMat,
    nrel: usize,
}

impl QuotientLattice {
    pub fn new(ambient: usize, relation_gens: impl IntoIterator<Item = SparseVec>) -> Self {
        let relations = LatticeBasis::from_generators(ambient, relation_gens);
        let relation_stair = relations.staircase();
        let r = relations.rank();
        let rank = ambient - r;
        if relations.has_unit_pivots() {
            let pivots: std::collections::HashSet<u32> = relations.pivots().into_iter().collect();
            let free_cols: Vec<u32> = (0..ambient as u32)
                .filter(|c| !pivots.contains(c))
                .collect();
            QuotientLattice {
                ambient,
                relations,
                relation_stair,
                torsion: Vec::new(),
                rank,
                mode: QuotientMode::UnitPivot,
                free_cols,
                smith: None,
            }
        } else {
            let dense: Vec<Vec<BigInt>> = relations
                .rows()
                .iter()
                .map(|row| row.to_dense(ambient))
                .collect();
            let s = snf(&dense, ambient);
            let torsion: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_one()).cloned().collect();
            QuotientLattice {
                ambient,
                relations,
                relation_stair,
                torsion,
                rank,
                mode: QuotientMode::SmithBasis,
                free_cols: Vec::new(),
                smith: Some(Box::new(SmithCoords {
                    v: s.v,
                    v_inv: s.v_inv,
                    nrel: r,
                })),
            }
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &LatticeBasis {
        &self.relations
    }

    /// Nontrivial invariant factors of the relation matrix (empty iff the
    /// quotient is torsion-free).
    pub fn torsion_factors(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn mode(&self) -> QuotientMode {
        self.mode
    }

    /// Canonical coordinates (length `rank`) of the class of `v`.
    /// Zero iff `v` is a relation.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        if let Some(c) = v.max_col() {
            if c as usize >= self.ambient {
                return Err(LinalgError::AmbientMismatch(self.ambient, c as usize + 1));
            }
        }
        match self.mode {
            QuotientMode::UnitPivot => {
                let res = self.relation_stair.reduce(v);
                let pos: std::collections::HashMap<u32, u32> = self
                    .free_cols
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, i as u32))
                    .collect();
                Ok(res.remap_cols(|c| pos.get(&c).copied()))
            }
            QuotientMode::SmithBasis => {
                if !self.torsion.is_empty() {
                    return Err(LinalgError::TorsionQuotient(self.torsion.clone()));
                }
                let sm = self.smith.as_ref().expect("smith data");
                let mut out = Vec::new();
                for j in sm.nrel..self.ambient {
                    let mut acc = BigInt::zero();
                    for (i, x) in v.iter() {
                        acc += x * &sm.v[i as usize][j];
                    }
                    if !acc.is_zero() {
                        out.push(((j - sm.nrel) as u32, acc));
                    }
                }
                Ok(SparseVec::from_terms(out))
            }
        }
    }

    /// A representative in the ambient module with the given canonical
    /// coordinates; `reduce(section(y)) == y`.
    pub fn section(&self, y: &SparseVec) -> SparseVec {
        match self.mode {
            QuotientMode::UnitPivot => y.remap_cols(|c| Some(self.free_cols[c as usize])),
            QuotientMode::SmithBasis => {
                let sm = self.smith.as_ref().expect("smith data");
                let mut terms = Vec::new();
                for (k, coeff) in y.iter() {
                    let row = &sm.v_inv[sm.nrel + k as usize];
                    for (c, v) in row.iter().enumerate() {
                        if !v.is_zero() {
                            terms.push((c as u32, coeff * v));
                        }
                    }
                }
                SparseVec::from_terms(terms)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, i64)]) -> SparseVec {
        SparseVec::from_terms(pairs.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
    }

    #[test]
    fn kernel_of_row() {
        // M = [1 1]: kernel spanned by (1, -1)
        let m = IntMatrix::from_rows(2, vec![sv(&[(0, 1), (1, 1)])]);
        let k = integer_kernel(&m);
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&sv(&[(0, 1), (1, -1)])));
        assert!(m.mul_vec(k.rows().first().unwrap()).is_zero());
    }

    #[test]
    fn kernel_of_scalar() {
        // M = [2] on ℤ¹: kernel is zero
        let m = IntMatrix::from_rows(1, vec![sv(&[(0, 2)])]);
        assert_eq!(integer_kernel(&m).rank(), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // M = [2 2]: kernel must be (1,-1), not (2,-2)
        let m = IntMatrix::from_rows(2, vec![sv(&[(0, 2), (1, 2)])]);
        let k = integer_kernel(&m);
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&sv(&[(0, 1), (1, -1)])));
        assert!(k.is_saturated());
    }

    #[test]
    fn lattice_index_examples() {
        let full = LatticeBasis::full(2);
        let twice = LatticeBasis::from_generators(2, vec![sv(&[(0, 2)]), sv(&[(1, 2)])]);
        assert_eq!(full.index_of(&twice).unwrap(), Some(BigInt::from(4)));
        let line = LatticeBasis::from_generators(2, vec![sv(&[(0, 1)])]);
        assert_eq!(full.index_of(&line).unwrap(), None);
        assert!(full.equal(&full).unwrap());
    }

    #[test]
    fn span_closure_examples() {
        let swap = |v: &SparseVec| v.remap_cols(|c| Some(1 - c));
        let (l, _) = span_closure(2, vec![sv(&[(0, 1)])], &[swap]);
        assert!(l.equal(&LatticeBasis::full(2)).unwrap());

        let (l2, _) = span_closure(2, vec![sv(&[(0, 2)])], &[swap]);
        let twice = LatticeBasis::from_generators(2, vec![sv(&[(0, 2)]), sv(&[(1, 2)])]);
        assert!(l2.equal(&twice).unwrap());

        let (l3, _) =
            span_closure::<fn(&SparseVec) -> SparseVec>(2, vec![sv(&[(0, 1), (1, 1)])], &[]);
        assert_eq!(l3.rank(), 1);
        assert!(l3.contains(&sv(&[(0, 1), (1, 1)])));
    }

    #[test]
    fn quotient_reduce_canonical() {
        // ambient ℤ², relations span{(0,2)}: second coordinate lives in ℤ₂,
        // so there is torsion and no free canonical coordinates for it
        let q = QuotientLattice::new(2, vec![sv(&[(1, 2)])]);
        assert_eq!(q.torsion_factors(), &[BigInt::from(2)]);

        // relations span{(1,1)}: torsion-free quotient of rank 1
        let q = QuotientLattice::new(2, vec![sv(&[(0, 1), (1, 1)])]);
        assert_eq!(q.rank(), 1);
        assert!(q.torsion_factors().is_empty());
        let a = q.reduce(&sv(&[(0, 3), (1, 4)])).unwrap();
        let b = q.reduce(&sv(&[(0, 2), (1, 5)])).unwrap(); // differs by (1,-1)·(1,1)? no: (3,4)-(2,5)=(1,-1)∉L
        assert_ne!(a, b);
        let c = q.reduce(&sv(&[(0, 4), (1, 5)])).unwrap(); // (3,4)+(1,1)
        assert_eq!(a, c);
        assert!(q.reduce(&sv(&[(0, 7), (1, 7)])).unwrap().is_zero());
        // section round-trip
        let y = sv(&[(0, -5)]);
        assert_eq!(q.reduce(&q.section(&y)).unwrap(), y);
    }
}
