//! Canonical bases and exact arithmetic for the multilinear modules over H:
//! Λ³H, Λ²(Λ³H), S²(Λ²H), the embedding of Λ⁴H, the quotient D′₂(H), the
//! doubled model of D₂(H), the mod-2 targets, induced Sp-actions, and the
//! contraction-type classification.
//!
//! Basis enumeration order is part of the certificate format (version 1):
//! symbols are ordered a_1 < b_1 < a_2 < ...; trivectors and bivectors are
//! strictly increasing tuples in lexicographic order; Λ²(Λ³H) pairs (I, J)
//! with I < J are ordered lexicographically by (I, J); S²(Λ²H) products
//! e·f with e ≤ f likewise. Sorted tuples carry sign +1.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::gf2::BitVec;
use crate::linalg::{IntMatrix, QuotientLattice, SparseVec};
use crate::symplectic::{bar, omega_symbols, BasisSymbol, Genus, SpMatrix, SymVector};

/// Space tags for integer-coefficient module vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// Λ³H on the trivector basis.
    Lambda3,
    /// Λ²(Λ³H) on the pair basis.
    Lambda2Lambda3,
    /// S²(Λ²H) on the product basis (ambient of D′₂).
    S2Lambda2,
    /// D′₂(H) = S²(Λ²H)/Λ⁴H in canonical quotient coordinates.
    D2Prime,
    /// D₂(H) in the doubled integral model: coordinates of 2T in D′₂.
    D2Doubled,
}

/// A sparse exact-integer vector in one of the tagged spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector {
    pub space: Space,
    pub vec: SparseVec,
}

impl ModuleVector {
    pub fn zero(space: Space) -> Self {
        ModuleVector {
            space,
            vec: SparseVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero()
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(
            self.space, other.space,
            "space tags never mix in arithmetic"
        );
        ModuleVector {
            space: self.space,
            vec: self.vec.add(&other.vec),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(
            self.space, other.space,
            "space tags never mix in arithmetic"
        );
        ModuleVector {
            space: self.space,
            vec: self.vec.sub(&other.vec),
        }
    }

    pub fn scaled(&self, k: i64) -> ModuleVector {
        ModuleVector {
            space: self.space,
            vec: self.vec.scaled(&BigInt::from(k)),
        }
    }
}

/// Coarse component of the contraction decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    U0,
    U1,
    U2,
    U3,
}

/// Fine label: V_m by mixed count, with V_1 split by disjoint self count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FineLabel {
    V0,
    V10,
    V11,
    V12,
    V2,
    V3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractionType {
    pub mixed_count: u8,
    /// Self-contractions disjoint from the mixed one; only meaningful when
    /// `mixed_count == 1`.
    pub self_count: Option<u8>,
    pub fine: FineLabel,
    pub component: Component,
}

/// Key identifying the finest B-stable coordinate block a pair basis element
/// belongs to. Symbols are stored as positions in the fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKey {
    U0,
    U1([u8; 4]),
    U2([u8; 2]),
    U3,
}

/// Precomputed basis tables for one genus. Built once and shared read-only.
pub struct Spaces {
    pub genus: Genus,
    trivectors: Vec<[BasisSymbol; 3]>,
    triv_pos: HashMap<[u8; 3], u32>,
    bivectors: Vec<[BasisSymbol; 2]>,
    biv_pos: HashMap<[u8; 2], u32>,
}

impl Spaces {
    pub fn new(genus: Genus) -> Self {
        let symbols: Vec<BasisSymbol> = genus.symbols().collect();
        let n = symbols.len();
        let mut trivectors = Vec::new();
        let mut triv_pos = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t = [symbols[i], symbols[j], symbols[k]];
                    triv_pos.insert([i as u8, j as u8, k as u8], trivectors.len() as u32);
                    trivectors.push(t);
                }
            }
        }
        let mut bivectors = Vec::new();
        let mut biv_pos = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                biv_pos.insert([i as u8, j as u8], bivectors.len() as u32);
                bivectors.push([symbols[i], symbols[j]]);
            }
        }
        Spaces {
            genus,
            trivectors,
            triv_pos,
            bivectors,
            biv_pos,
        }
    }

    pub fn dim_h(&self) -> usize {
        self.genus.dim()
    }

    pub fn lambda3_rank(&self) -> usize {
        self.trivectors.len()
    }

    pub fn lambda2h_rank(&self) -> usize {
        self.bivectors.len()
    }

    pub fn pair_rank(&self) -> usize {
        let t = self.trivectors.len();
        t * (t - 1) / 2
    }

    pub fn s2_rank(&self) -> usize {
        let m = self.bivectors.len();
        m * (m + 1) / 2
    }

    pub fn trivector(&self, idx: u32) -> [BasisSymbol; 3] {
        self.trivectors[idx as usize]
    }

    pub fn trivector_index(&self, sorted: [BasisSymbol; 3]) -> u32 {
        self.triv_pos[&[
            sorted[0].position() as u8,
            sorted[1].position() as u8,
            sorted[2].position() as u8,
        ]]
    }

    pub fn bivector(&self, idx: u32) -> [BasisSymbol; 2] {
        self.bivectors[idx as usize]
    }

    /// Index of the pair (i, j) with i < j in the Λ²(Λ³H) basis.
    pub fn pair_index(&self, i: u32, j: u32) -> u32 {
        debug_assert!(i < j);
        let t = self.trivectors.len() as u64;
        let (i, j) = (i as u64, j as u64);
        (i * (2 * t - i - 1) / 2 + (j - i - 1)) as u32
    }

    /// Inverse of `pair_index`.
    pub fn pair_of_index(&self, p: u32) -> (u32, u32) {
        let t = self.trivectors.len() as u64;
        let mut p = p as u64;
        let mut i = 0u64;
        loop {
            let row = t - i - 1;
            if p < row {
                return (i as u32, (i + 1 + p) as u32);
            }
            p -= row;
            i += 1;
        }
    }

    /// Index of the product e·f (e ≤ f) in the S²(Λ²H) basis.
    pub fn s2_index(&self, e: u32, f: u32) -> u32 {
        let (e, f) = if e <= f { (e, f) } else { (f, e) };
        let m = self.bivectors.len() as u64;
        let (e, f) = (e as u64, f as u64);
        (e * (2 * m - e + 1) / 2 + (f - e)) as u32
    }

    pub fn s2_of_index(&self, s: u32) -> (u32, u32) {
        let m = self.bivectors.len() as u64;
        let mut s = s as u64;
        let mut e = 0u64;
        loop {
            let row = m - e;
            if s < row {
                return (e as u32, (e + s) as u32);
            }
            s -= row;
            e += 1;
        }
    }

    /// Sorts three distinct symbols, returning the basis index and the sign
    /// of the sorting permutation; `None` if two symbols coincide.
    pub fn sort3(&self, s: [BasisSymbol; 3]) -> Option<(u32, i64)> {
        let mut v = s;
        let mut sign = 1i64;
        // three-element bubble sort, counting swaps
        for pass in 0..2 {
            for k in 0..2 - pass {
                match v[k].cmp(&v[k + 1]) {
                    std::cmp::Ordering::Greater => {
                        v.swap(k, k + 1);
                        sign = -sign;
                    }
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        if v[0] == v[1] || v[1] == v[2] {
            return None;
        }
        Some((self.trivector_index(v), sign))
    }

    /// Alternating trilinear expansion H×H×H → Λ³H.
    pub fn wedge3(&self, h1: &SymVector, h2: &SymVector, h3: &SymVector) -> ModuleVector {
        assert_eq!(h1.genus(), self.genus);
        assert_eq!(h2.genus(), self.genus);
        assert_eq!(h3.genus(), self.genus);
        let mut terms: Vec<(u32, BigInt)> = Vec::new();
        for (p1, c1) in h1.coords().iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (p2, c2) in h2.coords().iter().enumerate() {
                if p2 == p1 || c2.is_zero() {
                    continue;
                }
                for (p3, c3) in h3.coords().iter().enumerate() {
                    if p3 == p1 || p3 == p2 || c3.is_zero() {
                        continue;
                    }
                    let syms = [
                        BasisSymbol::from_position(p1),
                        BasisSymbol::from_position(p2),
                        BasisSymbol::from_position(p3),
                    ];
                    let (idx, sign) = self.sort3(syms).expect("distinct positions");
                    terms.push((idx, c1 * c2 * c3 * sign));
                }
            }
        }
        ModuleVector {
            space: Space::Lambda3,
            vec: SparseVec::from_terms(terms),
        }
    }

    pub fn wedge3_symbols(&self, s: [BasisSymbol; 3]) -> ModuleVector {
        match self.sort3(s) {
            None => ModuleVector::zero(Space::Lambda3),
            Some((idx, sign)) => ModuleVector {
                space: Space::Lambda3,
                vec: SparseVec::unit(idx).scaled(&BigInt::from(sign)),
            },
        }
    }

    /// Alternating bilinear map Λ³H × Λ³H → Λ²(Λ³H).
    pub fn wedge_pair(&self, t: &ModuleVector, u: &ModuleVector) -> ModuleVector {
        assert_eq!(t.space, Space::Lambda3);
        assert_eq!(u.space, Space::Lambda3);
        let mut terms: Vec<(u32, BigInt)> = Vec::new();
        for (i, a) in t.vec.iter() {
            for (j, b) in u.vec.iter() {
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => terms.push((self.pair_index(i, j), a * b)),
                    std::cmp::Ordering::Greater => terms.push((self.pair_index(j, i), -(a * b))),
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        ModuleVector {
            space: Space::Lambda2Lambda3,
            vec: SparseVec::from_terms(terms),
        }
    }

    /// The wedge of two elementary trivectors, as a vector in Λ²(Λ³H).
    pub fn pair_of_symbols(&self, t1: [BasisSymbol; 3], t2: [BasisSymbol; 3]) -> ModuleVector {
        self.wedge_pair(&self.wedge3_symbols(t1), &self.wedge3_symbols(t2))
    }

    /// Bilinear H×H → Λ²H on sparse coordinates.
    fn wedge2(&self, h1: &SymVector, h2: &SymVector) -> SparseVec {
        let mut terms: Vec<(u32, BigInt)> = Vec::new();
        for (p1, c1) in h1.coords().iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (p2, c2) in h2.coords().iter().enumerate() {
                if c2.is_zero() || p1 == p2 {
                    continue;
                }
                if p1 < p2 {
                    terms.push((self.biv_pos[&[p1 as u8, p2 as u8]], c1 * c2));
                } else {
                    terms.push((self.biv_pos[&[p2 as u8, p1 as u8]], -(c1 * c2)));
                }
            }
        }
        SparseVec::from_terms(terms)
    }

    /// Symmetric product Λ²H × Λ²H → S²(Λ²H) on sparse coordinates.
    fn s2_product(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut terms: Vec<(u32, BigInt)> = Vec::new();
        for (e, x) in u.iter() {
            for (f, y) in v.iter() {
                terms.push((self.s2_index(e, f), x * y));
            }
        }
        SparseVec::from_terms(terms)
    }

    /// The embedding Λ⁴H ↪ S²(Λ²H):
    /// h1∧h2∧h3∧h4 ↦ (h1∧h2)·(h3∧h4) + (h1∧h3)·(h4∧h2) + (h1∧h4)·(h2∧h3).
    pub fn embed_lambda4(
        &self,
        h1: &SymVector,
        h2: &SymVector,
        h3: &SymVector,
        h4: &SymVector,
    ) -> ModuleVector {
        let w12 = self.wedge2(h1, h2);
        let w34 = self.wedge2(h3, h4);
        let w13 = self.wedge2(h1, h3);
        let w42 = self.wedge2(h4, h2);
        let w14 = self.wedge2(h1, h4);
        let w23 = self.wedge2(h2, h3);
        let vec = self
            .s2_product(&w12, &w34)
            .add(&self.s2_product(&w13, &w42))
            .add(&self.s2_product(&w14, &w23));
        ModuleVector {
            space: Space::S2Lambda2,
            vec,
        }
    }

    /// Relation generators for D′₂: the embedded Λ⁴H over all sorted
    /// 4-subsets of the basis.
    pub fn lambda4_relations(&self) -> Vec<SparseVec> {
        let symbols: Vec<BasisSymbol> = self.genus.symbols().collect();
        let n = symbols.len();
        let mut rels = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let v = self.embed_lambda4(
                            &symbols[i].vector(self.genus),
                            &symbols[j].vector(self.genus),
                            &symbols[k].vector(self.genus),
                            &symbols[l].vector(self.genus),
                        );
                        rels.push(v.vec);
                    }
                }
            }
        }
        rels
    }

    /// D′₂(H) = S²(Λ²H)/Λ⁴H with canonical coordinates.
    pub fn build_d2prime(&self) -> QuotientLattice {
        QuotientLattice::new(self.s2_rank(), self.lambda4_relations())
    }

    /// Contraction classification of a basis pair.
    pub fn classify_pair(&self, p: u32) -> ContractionType {
        let (i, j) = self.pair_of_index(p);
        self.classify_trivectors(self.trivectors[i as usize], self.trivectors[j as usize])
    }

    pub fn classify_trivectors(
        &self,
        t1: [BasisSymbol; 3],
        t2: [BasisSymbol; 3],
    ) -> ContractionType {
        let mixed: Vec<BasisSymbol> = t1
            .iter()
            .copied()
            .filter(|&s| t2.contains(&bar(s)))
            .collect();
        let m = mixed.len() as u8;
        let self_handle = |t: &[BasisSymbol; 3]| -> Option<u32> {
            t.iter().find(|&&s| t.contains(&bar(s))).map(|s| s.index)
        };
        let (fine, component, self_count) = match m {
            0 => (FineLabel::V0, Component::U0, None),
            1 => {
                let s0 = mixed[0];
                let t0 = bar(s0);
                let mut n = 0u8;
                if let Some(h) = self_handle(&t1) {
                    if s0.index != h {
                        n += 1;
                    }
                }
                if let Some(h) = self_handle(&t2) {
                    if t0.index != h {
                        n += 1;
                    }
                }
                match n {
                    0 => (FineLabel::V10, Component::U1, Some(0)),
                    1 => (FineLabel::V11, Component::U2, Some(1)),
                    _ => (FineLabel::V12, Component::U3, Some(2)),
                }
            }
            2 => (FineLabel::V2, Component::U2, None),
            _ => (FineLabel::V3, Component::U3, None),
        };
        ContractionType {
            mixed_count: m,
            self_count,
            fine,
            component,
        }
    }

    /// The finest B-stable coordinate block containing a basis pair.
    pub fn block_key(&self, p: u32) -> BlockKey {
        let (i, j) = self.pair_of_index(p);
        let t1 = self.trivectors[i as usize];
        let t2 = self.trivectors[j as usize];
        let ct = self.classify_trivectors(t1, t2);
        match ct.fine {
            FineLabel::V0 => BlockKey::U0,
            FineLabel::V12 | FineLabel::V3 => BlockKey::U3,
            FineLabel::V10 => {
                let s0 = t1
                    .iter()
                    .copied()
                    .find(|&s| t2.contains(&bar(s)))
                    .expect("mixed contraction");
                let mut quad: Vec<u8> = t1
                    .iter()
                    .filter(|&&s| s != s0)
                    .chain(t2.iter().filter(|&&s| s != bar(s0)))
                    .map(|s| s.position() as u8)
                    .collect();
                quad.sort_unstable();
                BlockKey::U1([quad[0], quad[1], quad[2], quad[3]])
            }
            FineLabel::V11 | FineLabel::V2 => {
                // leftovers: remove occurrences used by a mixed pair, and the
                // two occurrences of any self pair disjoint from the mixed ones
                let leftover = |t: &[BasisSymbol; 3], other: &[BasisSymbol; 3]| {
                    let mixed = |s: BasisSymbol| other.contains(&bar(s));
                    t.iter()
                        .copied()
                        .filter(|&s| !mixed(s))
                        .filter(|&s| !(t.contains(&bar(s)) && !mixed(bar(s))))
                        .collect::<Vec<_>>()
                };
                let mut rest = leftover(&t1, &t2);
                rest.extend(leftover(&t2, &t1));
                debug_assert_eq!(rest.len(), 2);
                let mut key = [rest[0].position() as u8, rest[1].position() as u8];
                key.sort_unstable();
                BlockKey::U2(key)
            }
        }
    }

    /// The induced matrix of a symplectic map on a tagged space (canonical
    /// bases; functorial).
    pub fn induced_action(&self, m: &SpMatrix, space: Space) -> IntMatrix {
        assert_eq!(m.genus(), self.genus);
        match space {
            Space::Lambda3 => {
                let cols: Vec<SparseVec> = (0..self.lambda3_rank())
                    .map(|idx| {
                        let t = self.trivectors[idx];
                        self.wedge3(
                            &m.apply_symbol(t[0]),
                            &m.apply_symbol(t[1]),
                            &m.apply_symbol(t[2]),
                        )
                        .vec
                    })
                    .collect();
                IntMatrix::from_cols(self.lambda3_rank(), &cols)
            }
            Space::Lambda2Lambda3 => {
                let l3 = self.induced_action(m, Space::Lambda3);
                let l3t = l3.transpose();
                let cols: Vec<SparseVec> = (0..self.pair_rank() as u32)
                    .map(|p| {
                        let (i, j) = self.pair_of_index(p);
                        let ti = ModuleVector {
                            space: Space::Lambda3,
                            vec: l3t.row(i as usize).clone(),
                        };
                        let tj = ModuleVector {
                            space: Space::Lambda3,
                            vec: l3t.row(j as usize).clone(),
                        };
                        self.wedge_pair(&ti, &tj).vec
                    })
                    .collect();
                IntMatrix::from_cols(self.pair_rank(), &cols)
            }
            Space::S2Lambda2 => {
                let cols: Vec<SparseVec> = (0..self.s2_rank() as u32)
                    .map(|s| {
                        let (e, f) = self.s2_of_index(s);
                        let [p, q] = self.bivectors[e as usize];
                        let [r, t] = self.bivectors[f as usize];
                        let we = self.wedge2(&m.apply_symbol(p), &m.apply_symbol(q));
                        let wf = self.wedge2(&m.apply_symbol(r), &m.apply_symbol(t));
                        self.s2_product(&we, &wf)
                    })
                    .collect();
                IntMatrix::from_cols(self.s2_rank(), &cols)
            }
            Space::D2Prime | Space::D2Doubled => {
                panic!("induced action on quotient coordinates: act on S2Lambda2 and reduce")
            }
        }
    }

    /// For a map sending each basis symbol to ± a basis symbol (all of G),
    /// the induced signed permutation on trivector indices.
    pub fn signed_perm_lambda3(&self, m: &SpMatrix) -> Option<Vec<(u32, i64)>> {
        let mut symbol_perm: Vec<(usize, i64)> = Vec::with_capacity(self.dim_h());
        for s in self.genus.symbols() {
            let img = m.apply_symbol(s);
            let mut nz = img
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero());
            let (pos, coeff) = nz.next()?;
            if nz.next().is_some() {
                return None;
            }
            let sign = if coeff.is_one() {
                1
            } else if (-coeff).is_one() {
                -1
            } else {
                return None;
            };
            symbol_perm.push((pos, sign));
        }
        let mut out = Vec::with_capacity(self.lambda3_rank());
        for t in &self.trivectors {
            let mut sign = 1i64;
            let mut imgs = [t[0]; 3];
            for (k, s) in t.iter().enumerate() {
                let (pos, sg) = symbol_perm[s.position()];
                imgs[k] = BasisSymbol::from_position(pos);
                sign *= sg;
            }
            let (idx, sort_sign) = self
                .sort3(imgs)
                .expect("signed permutation keeps symbols distinct");
            out.push((idx, sign * sort_sign));
        }
        Some(out)
    }

    /// Sparse application of a signed trivector permutation to a Λ²(Λ³H)
    /// vector (the induced action of a G element).
    pub fn apply_pair_perm(&self, perm: &[(u32, i64)], v: &SparseVec) -> SparseVec {
        let mut terms = Vec::with_capacity(v.nnz());
        for (p, c) in v.iter() {
            let (i, j) = self.pair_of_index(p);
            let (ii, si) = perm[i as usize];
            let (jj, sj) = perm[j as usize];
            let sign = si * sj;
            match ii.cmp(&jj) {
                std::cmp::Ordering::Less => terms.push((self.pair_index(ii, jj), c * sign)),
                std::cmp::Ordering::Greater => terms.push((self.pair_index(jj, ii), c * (-sign))),
                std::cmp::Ordering::Equal => unreachable!("permutation is injective"),
            }
        }
        SparseVec::from_terms(terms)
    }

    // ---- mod-2 targets -------------------------------------------------

    /// Rank of S²H ⊗ ℤ₂ (products s·s′ with s ≤ s′, squares allowed).
    pub fn s2h_rank(&self) -> usize {
        let n = self.dim_h();
        n * (n + 1) / 2
    }

    /// Index of s·s′ (by positions p ≤ q) in the S²H ⊗ ℤ₂ basis.
    pub fn s2h_index(&self, p: usize, q: usize) -> usize {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let n = self.dim_h();
        p * (2 * n - p + 1) / 2 + (q - p)
    }

    /// ω̄ : S²H⊗ℤ₂ → ℤ₂, h·k ↦ ω(h,k) mod 2, as the set of basis elements
    /// on which it is 1 (exactly the a_i·b_i).
    pub fn omega_bar_s2h(&self, bits: &BitVec) -> bool {
        let mut acc = false;
        for i in 0..self.genus.get() as usize {
            if bits.get(self.s2h_index(2 * i, 2 * i + 1)) {
                acc = !acc;
            }
        }
        acc
    }

    /// ω̄ : Λ²H⊗ℤ₂ → ℤ₂ on bivector coordinates.
    pub fn omega_bar_lambda2(&self, bits: &BitVec) -> bool {
        let mut acc = false;
        for i in 0..self.genus.get() {
            let ai = BasisSymbol::a(i + 1).position() as u8;
            let bi = BasisSymbol::b(i + 1).position() as u8;
            if bits.get(self.biv_pos[&[ai, bi]] as usize) {
                acc = !acc;
            }
        }
        acc
    }

    pub fn bivector_index_of(&self, s: BasisSymbol, t: BasisSymbol) -> (u32, i64) {
        let (p, q) = (s.position() as u8, t.position() as u8);
        if p < q {
            (self.biv_pos[&[p, q]], 1)
        } else {
            (self.biv_pos[&[q, p]], -1)
        }
    }

    /// Dimensions of ker(ω̄) inside S²H⊗ℤ₂ and Λ²H⊗ℤ₂, computed from the
    /// rank of the functional (ω̄ is onto ℤ₂, so each kernel has
    /// codimension 1).
    pub fn omega_bar_kernel_dims(&self) -> (usize, usize) {
        let mut rank_s = 0usize;
        for i in 0..self.s2h_rank() {
            let mut one = BitVec::zeros(self.s2h_rank());
            one.set(i);
            if self.omega_bar_s2h(&one) {
                rank_s = 1;
                break;
            }
        }
        let mut rank_l = 0usize;
        for i in 0..self.lambda2h_rank() {
            let mut one = BitVec::zeros(self.lambda2h_rank());
            one.set(i);
            if self.omega_bar_lambda2(&one) {
                rank_l = 1;
                break;
            }
        }
        (self.s2h_rank() - rank_s, self.lambda2h_rank() - rank_l)
    }

    /// Human-readable rendering of a Λ³H vector, e.g. "-a1^a2^b3 + 2 b1^a2^a3".
    pub fn format_lambda3(&self, v: &ModuleVector) -> String {
        assert_eq!(v.space, Space::Lambda3);
        if v.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, c) in v.vec.iter() {
            let t = self.trivector(idx);
            let mono = format!("{}^{}^{}", t[0], t[1], t[2]);
            push_term(&mut out, c, &mono);
        }
        out
    }

    /// Human-readable rendering of an ambient S²(Λ²H) vector, e.g.
    /// "(a1^b1)*(a2^b2) - (a1^a2)*(b1^b2)".
    pub fn format_s2(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, c) in v.iter() {
            let (e, f) = self.s2_of_index(idx);
            let [p, q] = self.bivector(e);
            let [r, t] = self.bivector(f);
            let mono = format!("({p}^{q})*({r}^{t})");
            push_term(&mut out, c, &mono);
        }
        out
    }
}

fn push_term(out: &mut String, c: &BigInt, mono: &str) {
    use num_traits::Signed;
    let abs = c.abs();
    if out.is_empty() {
        if c.is_negative() {
            out.push('-');
        }
    } else if c.is_negative() {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    if !abs.is_one() {
        out.push_str(&format!("{abs} "));
    }
    out.push_str(mono);
}

/// ω on basis symbols, re-exported here for contraction formulas.
pub fn omega_sym(x: BasisSymbol, y: BasisSymbol) -> i64 {
    omega_symbols(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{e_generator, f_generator, Genus};

    fn spaces(g: u32) -> Spaces {
        Spaces::new(Genus::new(g).unwrap())
    }

    fn a(i: u32) -> BasisSymbol {
        BasisSymbol::a(i)
    }

    fn b(i: u32) -> BasisSymbol {
        BasisSymbol::b(i)
    }

    #[test]
    fn ranks_g3() {
        let s = spaces(3);
        assert_eq!(s.lambda3_rank(), 20);
        assert_eq!(s.pair_rank(), 190);
        assert_eq!(s.lambda2h_rank(), 15);
        assert_eq!(s.s2_rank(), 120);
        assert_eq!(s.s2h_rank(), 21);
    }

    #[test]
    fn ranks_g4() {
        let s = spaces(4);
        assert_eq!(s.lambda3_rank(), 56);
        assert_eq!(s.pair_rank(), 1540);
        assert_eq!(s.s2_rank(), 406);
    }

    #[test]
    fn index_round_trips() {
        let s = spaces(3);
        for p in 0..s.pair_rank() as u32 {
            let (i, j) = s.pair_of_index(p);
            assert!(i < j);
            assert_eq!(s.pair_index(i, j), p);
        }
        for k in 0..s.s2_rank() as u32 {
            let (e, f) = s.s2_of_index(k);
            assert!(e <= f);
            assert_eq!(s.s2_index(e, f), k);
        }
    }

    #[test]
    fn wedge3_signs() {
        let s = spaces(3);
        let g = s.genus;
        let w = s.wedge3(&a(1).vector(g), &a(2).vector(g), &a(3).vector(g));
        let idx = s.trivector_index([a(1), a(2), a(3)]);
        assert_eq!(w.vec, SparseVec::unit(idx));
        let w2 = s.wedge3(&a(2).vector(g), &a(1).vector(g), &a(3).vector(g));
        assert_eq!(w2.vec, SparseVec::unit(idx).scaled(&BigInt::from(-1)));
        let w3 = s.wedge3(&a(1).vector(g), &a(1).vector(g), &a(3).vector(g));
        assert!(w3.is_zero());
    }

    #[test]
    fn wedge_pair_disjoint_support_basis_element() {
        let s = spaces(6);
        let t = s.wedge3_symbols([a(1), a(2), a(3)]);
        let u = s.wedge3_symbols([a(4), a(5), a(6)]);
        let i = s.trivector_index([a(1), a(2), a(3)]);
        let j = s.trivector_index([a(4), a(5), a(6)]);
        assert_eq!(
            s.wedge_pair(&t, &u).vec,
            SparseVec::unit(s.pair_index(i, j))
        );
    }

    #[test]
    fn wedge_pair_alternating() {
        let s = spaces(3);
        let t = s.wedge3_symbols([a(1), a(2), a(3)]);
        let u = s.wedge3_symbols([a(1), b(1), a(2)]);
        assert!(s.wedge_pair(&t, &t).is_zero());
        let tu = s.wedge_pair(&t, &u);
        let ut = s.wedge_pair(&u, &t);
        assert!(tu.add(&ut).is_zero());
        assert!(!tu.is_zero());
    }

    #[test]
    fn embed_lambda4_alternating() {
        let s = spaces(3);
        let g = s.genus;
        let e = s.embed_lambda4(
            &a(1).vector(g),
            &a(2).vector(g),
            &a(3).vector(g),
            &b(1).vector(g),
        );
        let swapped = s.embed_lambda4(
            &a(2).vector(g),
            &a(1).vector(g),
            &a(3).vector(g),
            &b(1).vector(g),
        );
        assert_eq!(e.vec, swapped.vec.scaled(&BigInt::from(-1)));
        let rep = s.embed_lambda4(
            &a(1).vector(g),
            &a(1).vector(g),
            &a(3).vector(g),
            &b(1).vector(g),
        );
        assert!(rep.is_zero());
        // explicit 3-term value on sorted arguments
        let v = s.embed_lambda4(
            &a(1).vector(g),
            &a(2).vector(g),
            &a(3).vector(g),
            &b(3).vector(g),
        );
        assert_eq!(v.vec.nnz(), 3);
    }

    #[test]
    fn d2prime_ranks() {
        let s3 = spaces(3);
        let q = s3.build_d2prime();
        assert_eq!(q.ambient_rank(), 120);
        assert_eq!(q.relations().rank(), 15);
        assert_eq!(q.rank(), 105);
        assert!(q.torsion_factors().is_empty());
        // a relation reduces to zero
        let g = s3.genus;
        let rel = s3.embed_lambda4(
            &a(1).vector(g),
            &b(1).vector(g),
            &a(2).vector(g),
            &b(2).vector(g),
        );
        assert!(q.reduce(&rel.vec).unwrap().is_zero());
    }

    #[test]
    fn d2prime_rank_g4() {
        let s = spaces(4);
        let q = s.build_d2prime();
        assert_eq!(q.rank(), 336);
        assert!(q.torsion_factors().is_empty());
    }

    #[test]
    fn classification_examples() {
        let s = spaces(6);
        // no bars match: U0
        let c = s.classify_trivectors([a(1), a(2), a(3)], [a(4), a(5), a(6)]);
        assert_eq!(c.component, Component::U0);
        assert_eq!(c.fine, FineLabel::V0);
        // single mixed {a3, b3}: U1
        let c = s.classify_trivectors([a(1), a(2), a(3)], [b(3), a(4), a(5)]);
        assert_eq!(c.component, Component::U1);
        assert_eq!(c.self_count, Some(0));
        // mixed {a2, b2}; selfs {a1,b1}, {a3,b3}: V_{1,2} in U3
        let c = s.classify_trivectors([a(1), b(1), a(2)], [b(2), a(3), b(3)]);
        assert_eq!(c.fine, FineLabel::V12);
        assert_eq!(c.component, Component::U3);
        assert_eq!(c.self_count, Some(2));
    }

    #[test]
    fn fine_labels_partition_basis() {
        let s = spaces(3);
        let mut counts = HashMap::new();
        for p in 0..s.pair_rank() as u32 {
            *counts.entry(s.classify_pair(p).fine).or_insert(0usize) += 1;
        }
        let total: usize = counts.values().sum();
        assert_eq!(total, 190);
        // U0 ⊕ U1 ⊕ U2 ⊕ U3 rank bookkeeping
        let u0 = counts.get(&FineLabel::V0).copied().unwrap_or(0);
        assert!(u0 > 0);
    }

    #[test]
    fn induced_action_functorial_and_order() {
        let s = spaces(3);
        let g = s.genus;
        let e1 = e_generator(g, 1);
        let f12 = f_generator(g, 1, 2);
        let m_e = s.induced_action(&e1, Space::Lambda3);
        let m_f = s.induced_action(&f12, Space::Lambda3);
        let comp = s.induced_action(&e1.compose(&f12), Space::Lambda3);
        // action(MN) = action(M)·action(N): check on each basis column
        for idx in 0..s.lambda3_rank() as u32 {
            let col = SparseVec::unit(idx);
            assert_eq!(comp.mul_vec(&col), m_e.mul_vec(&m_f.mul_vec(&col)));
        }
        // E1 has order 4 on Λ³H
        let sq = |m: &IntMatrix, v: &SparseVec| m.mul_vec(v);
        for idx in 0..s.lambda3_rank() as u32 {
            let v = SparseVec::unit(idx);
            let v4 = sq(&m_e, &sq(&m_e, &sq(&m_e, &sq(&m_e, &v))));
            assert_eq!(v4, v);
        }
        // E1 sends e_{a1 a2 a3} to -e_{b1 a2 a3}
        let src = s.trivector_index([a(1), a(2), a(3)]);
        let dst = s.trivector_index([b(1), a(2), a(3)]);
        let img = m_e.mul_vec(&SparseVec::unit(src));
        assert_eq!(img, SparseVec::unit(dst).scaled(&BigInt::from(-1)));
    }

    #[test]
    fn signed_perm_matches_induced_action() {
        let s = spaces(3);
        let g = s.genus;
        for m in [e_generator(g, 2), f_generator(g, 1, 3)] {
            let perm = s.signed_perm_lambda3(&m).expect("G element");
            let full = s.induced_action(&m, Space::Lambda2Lambda3);
            for p in 0..s.pair_rank() as u32 {
                let v = SparseVec::unit(p);
                assert_eq!(s.apply_pair_perm(&perm, &v), full.mul_vec(&v));
            }
        }
    }

    #[test]
    fn mod2_targets() {
        let s = spaces(3);
        assert_eq!(s.s2h_rank(), 21);
        assert_eq!(s.omega_bar_kernel_dims(), (20, 14));
        // ω̄(a1·b1) = 1, ω̄(a1·a2) = 0
        let mut v = BitVec::zeros(s.s2h_rank());
        v.set(s.s2h_index(a(1).position(), b(1).position()));
        assert!(s.omega_bar_s2h(&v));
        let mut w = BitVec::zeros(s.s2h_rank());
        w.set(s.s2h_index(a(1).position(), a(2).position()));
        assert!(!s.omega_bar_s2h(&w));
    }

    #[test]
    fn classification_is_g_invariant() {
        let s = spaces(3);
        let g = s.genus;
        for m in [e_generator(g, 1), f_generator(g, 2, 3)] {
            let perm = s.signed_perm_lambda3(&m).unwrap();
            for p in 0..s.pair_rank() as u32 {
                let (i, j) = s.pair_of_index(p);
                let (ii, _) = perm[i as usize];
                let (jj, _) = perm[j as usize];
                let q = if ii < jj {
                    s.pair_index(ii, jj)
                } else {
                    s.pair_index(jj, ii)
                };
                assert_eq!(s.classify_pair(p).fine, s.classify_pair(q).fine);
            }
        }
    }
}
