//! The diagrammatic bracket B = (B⁰, B²) on Λ²(Λ³H), its integral matrix,
//! the saturated kernel K, and the component decomposition of K.
//!
//! On a wedge of decomposable trivectors,
//!   B⁰((x₁∧x₂∧x₃)∧(y₁∧y₂∧y₃)) = Σ_{i,j∈ℤ₃} ω(x_i,y_j) (x_{i+1}∧x_{i+2})·(y_{j+1}∧y_{j+2})
//! reduced into D′₂ = S²(Λ²H)/Λ⁴H, and B² = -¼ det(ω(x_i,y_j)). The theta
//! component is stored as 4·B² so the whole pipeline stays integral; scaling
//! one row by a positive integer does not change the kernel.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{IntMatrix, LatticeBasis, QuotientLattice, SparseVec, Staircase};
use crate::spaces::{BlockKey, Component, ModuleVector, Space, Spaces};
use crate::symplectic::{omega_symbols, BasisSymbol, Genus};

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("kernel decomposition failed in block {0:?}")]
    DecompositionFailure(Component),
    #[error("rank certificate failed: {0}")]
    RankMismatch(String),
}

/// 3x3 determinant of the ω-Gram matrix of two symbol triples.
fn gram_det(t1: &[BasisSymbol; 3], t2: &[BasisSymbol; 3]) -> i64 {
    let w = |i: usize, j: usize| omega_symbols(t1[i], t2[j]);
    w(0, 0) * (w(1, 1) * w(2, 2) - w(1, 2) * w(2, 1))
        - w(0, 1) * (w(1, 0) * w(2, 2) - w(1, 2) * w(2, 0))
        + w(0, 2) * (w(1, 0) * w(2, 1) - w(1, 1) * w(2, 0))
}

/// The bracket pipeline for one genus: basis tables, the D′₂ quotient, and
/// the assembled integral matrix of B (columns indexed by the pair basis,
/// rows = canonical D′₂ coordinates plus one theta row carrying 4·B²).
pub struct Bracket {
    pub spaces: Spaces,
    pub quotient: QuotientLattice,
    columns: Vec<SparseVec>,
}

impl Bracket {
    pub fn new(genus: Genus) -> Self {
        let spaces = Spaces::new(genus);
        let quotient = spaces.build_d2prime();
        let theta_row = quotient.rank() as u32;
        let columns: Vec<SparseVec> = (0..spaces.pair_rank() as u32)
            .into_par_iter()
            .map(|p| {
                let (i, j) = spaces.pair_of_index(p);
                let t1 = spaces.trivector(i);
                let t2 = spaces.trivector(j);
                let ambient = b0_ambient_of_tuples(&spaces, &t1, &t2);
                let reduced = quotient.reduce(&ambient).expect("ambient fits");
                let mut terms: Vec<(u32, BigInt)> =
                    reduced.iter().map(|(c, v)| (c, v.clone())).collect();
                let theta = -gram_det(&t1, &t2);
                if theta != 0 {
                    terms.push((theta_row, BigInt::from(theta)));
                }
                SparseVec::from_terms(terms)
            })
            .collect();
        Bracket {
            spaces,
            quotient,
            columns,
        }
    }

    pub fn genus(&self) -> Genus {
        self.spaces.genus
    }

    /// Number of rows of the assembled matrix: rank D′₂ + 1.
    pub fn nrows(&self) -> usize {
        self.quotient.rank() + 1
    }

    pub fn theta_row(&self) -> u32 {
        self.quotient.rank() as u32
    }

    pub fn column(&self, p: u32) -> &SparseVec {
        &self.columns[p as usize]
    }

    /// B applied to a Λ²(Λ³H) vector: D′₂ coordinates plus the 4·B² row.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (p, c) in v.iter() {
            acc = acc.add_scaled(&self.columns[p as usize], c);
        }
        acc
    }

    /// B⁰ in canonical D′₂ coordinates.
    pub fn b0(&self, v: &ModuleVector) -> ModuleVector {
        assert_eq!(v.space, Space::Lambda2Lambda3);
        let theta = self.theta_row();
        let full = self.apply(&v.vec);
        ModuleVector {
            space: Space::D2Prime,
            vec: full.filter_cols(|c| c < theta),
        }
    }

    /// B⁰ as an ambient S²(Λ²H) vector (no quotient reduction).
    pub fn b0_ambient(&self, v: &ModuleVector) -> ModuleVector {
        assert_eq!(v.space, Space::Lambda2Lambda3);
        let mut acc = SparseVec::new();
        for (p, c) in v.vec.iter() {
            let (i, j) = self.spaces.pair_of_index(p);
            let t1 = self.spaces.trivector(i);
            let t2 = self.spaces.trivector(j);
            acc = acc.add_scaled(&b0_ambient_of_tuples(&self.spaces, &t1, &t2), c);
        }
        ModuleVector {
            space: Space::S2Lambda2,
            vec: acc,
        }
    }

    /// 4·B², i.e. -det(ω(x_i, y_j)) extended linearly.
    pub fn b2_x4(&self, v: &ModuleVector) -> BigInt {
        assert_eq!(v.space, Space::Lambda2Lambda3);
        let mut acc = BigInt::zero();
        let theta = self.theta_row();
        for (p, c) in v.vec.iter() {
            if let Some(t) = self.columns[p as usize].get(theta) {
                acc += c * t;
            }
        }
        acc
    }

    /// The assembled matrix in row-major sparse form.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.nrows(), &self.columns)
    }

    /// Rank of the assembled matrix (= rank of the image of B).
    pub fn image_rank(&self) -> usize {
        self.matrix().rank()
    }

    /// The saturated integral kernel K = ker(B) ∩ Λ²(Λ³H).
    ///
    /// Columns are grouped into the finest B-stable blocks (U₀ columns are
    /// zero columns; U₁ splits by leftover quadruplet, U₂ by leftover pair);
    /// each block kernel is the full integer solution set on its columns, so
    /// the direct sum is saturated. Completeness is certified against an
    /// independent rank computation of the assembled matrix, with a global
    /// kernel computation as fallback.
    pub fn compute_k(&self) -> KernelReport {
        let n = self.spaces.pair_rank();
        let mut blocks: BTreeMap<BlockKey, Vec<u32>> = BTreeMap::new();
        for p in 0..n as u32 {
            blocks.entry(self.spaces.block_key(p)).or_default().push(p);
        }

        let block_list: Vec<(BlockKey, Vec<u32>)> = blocks.into_iter().collect();
        let kernels: Vec<Vec<SparseVec>> = block_list
            .par_iter()
            .map(|(key, cols)| match key {
                BlockKey::U0 => {
                    for &p in cols {
                        assert!(
                            self.columns[p as usize].is_zero(),
                            "U0 column {p} must be zero"
                        );
                    }
                    cols.iter().map(|&p| SparseVec::unit(p)).collect()
                }
                _ => self.block_kernel(cols),
            })
            .collect();

        let mut all_rows: Vec<SparseVec> = Vec::new();
        for k in kernels {
            all_rows.extend(k);
        }
        let mut basis = LatticeBasis::from_generators(n, all_rows);

        let rank_b = self.image_rank();
        let certified = basis.rank() + rank_b == n;
        if !certified {
            // fall back to the single global kernel computation
            basis = crate::linalg::integer_kernel(&self.matrix());
        }
        debug_assert!(basis.rows().iter().all(|k| self.apply(k).is_zero()));
        KernelReport {
            basis,
            image_rank: rank_b,
            block_count: block_list.len(),
            blockwise_certified: certified,
        }
    }

    fn block_kernel(&self, cols: &[u32]) -> Vec<SparseVec> {
        let off = self.nrows() as u32;
        let mut st = Staircase::new();
        for (local, &p) in cols.iter().enumerate() {
            let mut terms: Vec<(u32, BigInt)> = self.columns[p as usize]
                .iter()
                .map(|(c, v)| (c, v.clone()))
                .collect();
            terms.push((off + local as u32, BigInt::from(1)));
            st.insert(SparseVec::from_terms(terms));
        }
        st.into_rows()
            .into_iter()
            .filter(|r| r.leading().map(|(c, _)| c >= off).unwrap_or(false))
            .map(|r| r.remap_cols(|c| c.checked_sub(off).map(|l| cols[l as usize])))
            .collect()
    }

    /// K ∩ U_i for a component: the sublattice of K supported on the
    /// component's columns, computed as the kernel of the projection of K
    /// onto the complementary columns.
    pub fn intersect_component(&self, k: &LatticeBasis, comp: Component) -> LatticeBasis {
        let n = self.spaces.pair_rank();
        let in_comp: Vec<bool> = (0..n as u32)
            .map(|p| self.spaces.classify_pair(p).component == comp)
            .collect();
        // coefficient vectors c with (c · K)|complement = 0
        let r = k.rank();
        let restricted: Vec<SparseVec> = k
            .rows()
            .iter()
            .map(|row| row.filter_cols(|c| !in_comp[c as usize]))
            .collect();
        let off = n as u32;
        let mut st = Staircase::new();
        for (idx, row) in restricted.iter().enumerate() {
            let mut terms: Vec<(u32, BigInt)> = row.iter().map(|(c, v)| (c, v.clone())).collect();
            terms.push((off + idx as u32, BigInt::from(1)));
            st.insert(SparseVec::from_terms(terms));
        }
        let coeff_rows: Vec<SparseVec> = st
            .into_rows()
            .into_iter()
            .filter(|row| row.leading().map(|(c, _)| c >= off).unwrap_or(false))
            .map(|row| row.remap_cols(|c| c.checked_sub(off)))
            .collect();
        let mut gens = Vec::with_capacity(coeff_rows.len());
        for cv in coeff_rows {
            let mut acc = SparseVec::new();
            for (i, coeff) in cv.iter() {
                debug_assert!((i as usize) < r);
                acc = acc.add_scaled(&k.rows()[i as usize], coeff);
            }
            gens.push(acc);
        }
        LatticeBasis::from_generators(n, gens)
    }

    /// Checks K = U₀ ⊕ (K∩U₁) ⊕ (K∩U₂) ⊕ (K∩U₃): rank additivity and
    /// lattice-sum equality.
    pub fn check_k_decomposition(
        &self,
        k: &LatticeBasis,
    ) -> Result<DecompositionReport, BracketError> {
        let n = self.spaces.pair_rank();
        let u0_cols: Vec<u32> = (0..n as u32)
            .filter(|&p| self.spaces.classify_pair(p).component == Component::U0)
            .collect();
        // U0 ⊆ K
        for &p in &u0_cols {
            if !k.contains(&SparseVec::unit(p)) {
                return Err(BracketError::DecompositionFailure(Component::U0));
            }
        }
        let u0 = LatticeBasis::from_generators(n, u0_cols.iter().map(|&p| SparseVec::unit(p)));
        let k_u0 = self.intersect_component(k, Component::U0);
        if !k_u0.equal(&u0).expect("same ambient") {
            return Err(BracketError::DecompositionFailure(Component::U0));
        }
        let k_u1 = self.intersect_component(k, Component::U1);
        let k_u2 = self.intersect_component(k, Component::U2);
        let k_u3 = self.intersect_component(k, Component::U3);
        let rank_sum = u0.rank() + k_u1.rank() + k_u2.rank() + k_u3.rank();
        if rank_sum != k.rank() {
            return Err(BracketError::RankMismatch(format!(
                "component ranks {} + {} + {} + {} != rank K = {}",
                u0.rank(),
                k_u1.rank(),
                k_u2.rank(),
                k_u3.rank(),
                k.rank()
            )));
        }
        let sum = u0
            .sum(&k_u1)
            .and_then(|s| s.sum(&k_u2))
            .and_then(|s| s.sum(&k_u3))
            .expect("same ambient");
        if !sum.equal(k).expect("same ambient") {
            return Err(BracketError::RankMismatch(
                "component sum differs from K as a lattice".into(),
            ));
        }
        Ok(DecompositionReport {
            rank_u0: u0.rank(),
            rank_k_u1: k_u1.rank(),
            rank_k_u2: k_u2.rank(),
            rank_k_u3: k_u3.rank(),
            components: [u0, k_u1, k_u2, k_u3],
        })
    }

    /// Rank bookkeeping: rank(im B) = rank D′₂ + 1 and
    /// rank Λ²(Λ³H) = rank K + rank im B.
    pub fn rank_certificate(&self, k: &LatticeBasis) -> Result<RankReport, BracketError> {
        let report = RankReport {
            lambda3: self.spaces.lambda3_rank(),
            lambda2_lambda3: self.spaces.pair_rank(),
            d2prime: self.quotient.rank(),
            image: self.image_rank(),
            kernel: k.rank(),
        };
        if report.image != report.d2prime + 1 {
            return Err(BracketError::RankMismatch(format!(
                "rank im B = {} but rank D'2 + 1 = {}",
                report.image,
                report.d2prime + 1
            )));
        }
        if report.lambda2_lambda3 != report.kernel + report.image {
            return Err(BracketError::RankMismatch(format!(
                "{} != {} + {}",
                report.lambda2_lambda3, report.kernel, report.image
            )));
        }
        Ok(report)
    }
}

/// B⁰ of the wedge of two sorted elementary trivectors, as an ambient
/// S²(Λ²H) vector: the 9-term contraction formula.
pub fn b0_ambient_of_tuples(
    spaces: &Spaces,
    t1: &[BasisSymbol; 3],
    t2: &[BasisSymbol; 3],
) -> SparseVec {
    let mut terms: Vec<(u32, BigInt)> = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let w = omega_symbols(t1[i], t2[j]);
            if w == 0 {
                continue;
            }
            let (e, se) = spaces.bivector_index_of(t1[(i + 1) % 3], t1[(i + 2) % 3]);
            let (f, sf) = spaces.bivector_index_of(t2[(j + 1) % 3], t2[(j + 2) % 3]);
            terms.push((spaces.s2_index(e, f), BigInt::from(w * se * sf)));
        }
    }
    SparseVec::from_terms(terms)
}

pub struct KernelReport {
    pub basis: LatticeBasis,
    pub image_rank: usize,
    pub block_count: usize,
    pub blockwise_certified: bool,
}

pub struct DecompositionReport {
    pub rank_u0: usize,
    pub rank_k_u1: usize,
    pub rank_k_u2: usize,
    pub rank_k_u3: usize,
    /// [U₀, K∩U₁, K∩U₂, K∩U₃]
    pub components: [LatticeBasis; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankReport {
    pub lambda3: usize,
    pub lambda2_lambda3: usize,
    pub d2prime: usize,
    pub image: usize,
    pub kernel: usize,
}
