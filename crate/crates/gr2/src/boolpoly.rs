//! The Birman–Craggs side: squarefree ℤ₂-polynomials of degree ≤ 3 in the
//! evaluation functions h̄ on the affine space of quadratic forms with polar
//! form ω mod 2, the β formulas, the Sp-action, the third differential, and
//! the fibered-product model of the abelianized Torelli group.
//!
//! A monomial is a subset of the 2g variables (one per basis symbol), stored
//! as a bitmask; the empty mask is the constant function 1̄. Squarefreeness
//! is automatic since variable sets carry no multiplicity, matching the fact
//! that the variables are ℤ₂-valued functions (x² = x).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::gf2::{BitEchelon, BitVec};
use crate::linalg::{congruence_kernel, snf, SparseVec};
use crate::spaces::Spaces;
use crate::symplectic::{
    f_generator, omega_symbols, partial_symplectic, BasisSymbol, Genus, SpMatrix, SymVector,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoolError {
    #[error("product has degree {0} > 3 after squarefree reduction")]
    DegreeOverflow(u32),
}

/// A squarefree polynomial function on quadratic forms, of degree ≤ 3,
/// with ℤ₂ coefficients. The monomial with empty variable set is 1̄.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoolPoly {
    monomials: BTreeSet<u32>,
}

impl BoolPoly {
    pub fn zero() -> Self {
        BoolPoly::default()
    }

    pub fn one() -> Self {
        BoolPoly {
            monomials: [0u32].into_iter().collect(),
        }
    }

    pub fn variable(s: BasisSymbol) -> Self {
        BoolPoly {
            monomials: [1u32 << s.position()].into_iter().collect(),
        }
    }

    pub fn from_monomial_masks(masks: impl IntoIterator<Item = u32>) -> Self {
        let mut p = BoolPoly::zero();
        for m in masks {
            p.toggle(m);
        }
        p
    }

    fn toggle(&mut self, mask: u32) {
        if !self.monomials.remove(&mask) {
            self.monomials.insert(mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(|m| m.count_ones())
            .max()
            .unwrap_or(0)
    }

    pub fn monomials(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    pub fn add(&self, other: &BoolPoly) -> BoolPoly {
        let mut out = self.clone();
        for &m in &other.monomials {
            out.toggle(m);
        }
        out
    }

    /// Product in the function algebra, with x² = x. Errors if a monomial of
    /// degree > 3 survives in the normal form.
    pub fn mul(&self, other: &BoolPoly) -> Result<BoolPoly, BoolError> {
        let mut out = BoolPoly::zero();
        for &m in &self.monomials {
            for &n in &other.monomials {
                out.toggle(m | n);
            }
        }
        let deg = out.degree();
        if deg > 3 {
            return Err(BoolError::DegreeOverflow(deg));
        }
        Ok(out)
    }

    /// Dense ℤ₂ coordinates over a monomial basis listing.
    pub fn to_bits(&self, basis: &MonomialBasis) -> BitVec {
        let mut bits = BitVec::zeros(basis.masks.len());
        for &m in &self.monomials {
            bits.set(basis.position(m));
        }
        bits
    }

    pub fn from_bits(basis: &MonomialBasis, bits: &BitVec) -> BoolPoly {
        BoolPoly::from_monomial_masks(bits.ones().map(|i| basis.masks[i]))
    }

    fn display_monomial(mask: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if mask == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for pos in 0..32 {
            if mask & (1 << pos) != 0 {
                if !first {
                    write!(f, "*")?;
                }
                write!(f, "{}", BasisSymbol::from_position(pos))?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<u32> = self.monomials.iter().copied().collect();
        sorted.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        for (k, m) in sorted.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            BoolPoly::display_monomial(*m, f)?;
        }
        Ok(())
    }
}

/// All squarefree monomials of degree ≤ max_degree over 2g variables, in a
/// fixed order (by degree, then mask).
pub struct MonomialBasis {
    pub masks: Vec<u32>,
    index: std::collections::HashMap<u32, usize>,
}

impl MonomialBasis {
    pub fn new(genus: Genus, max_degree: u32) -> Self {
        let n = genus.dim() as u32;
        let mut masks: Vec<u32> = (0u32..1 << n)
            .filter(|m| m.count_ones() <= max_degree)
            .collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        MonomialBasis { masks, index }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn position(&self, mask: u32) -> usize {
        self.index[&mask]
    }
}

/// A quadratic form with polar form ω mod 2, determined by its values on
/// the 2g basis symbols (bit i = value on the symbol at position i).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadForm(pub u32);

impl QuadForm {
    /// q on an arbitrary homology class, via
    /// q(h + k) = q(h) + q(k) + ω(h, k).
    pub fn value(&self, h: &SymVector) -> bool {
        evaluate(&hbar(h), *self)
    }
}

/// The evaluation function h̄ : 𝒬 → ℤ₂ of a homology class, expanded over
/// the symbol variables:
/// h̄ = Σ (c_i mod 2) s̄_i + (Σ_{i<j} c_i c_j ω(s_i, s_j) mod 2) 1̄.
pub fn hbar(h: &SymVector) -> BoolPoly {
    let coords = h.coords();
    let mut p = BoolPoly::zero();
    let two = BigInt::from(2);
    let odd = |x: &BigInt| !(x % &two).is_zero();
    for (i, c) in coords.iter().enumerate() {
        if odd(c) {
            p.toggle(1 << i);
        }
    }
    let mut constant = BigInt::zero();
    for i in 0..coords.len() {
        if coords[i].is_zero() {
            continue;
        }
        for j in i + 1..coords.len() {
            let w = omega_symbols(BasisSymbol::from_position(i), BasisSymbol::from_position(j));
            if w != 0 {
                constant += &coords[i] * &coords[j] * w;
            }
        }
    }
    if odd(&constant) {
        p.toggle(0);
    }
    p
}

/// Evaluation of a polynomial at a quadratic form: substitute q(s) for each
/// variable; 1̄ evaluates to 1.
pub fn evaluate(p: &BoolPoly, q: QuadForm) -> bool {
    let mut acc = false;
    for m in p.monomials() {
        if m & q.0 == m {
            acc = !acc;
        }
    }
    acc
}

/// β of a bounding simple closed curve: Σ ū_i v̄_i.
pub fn beta_bscc(data: &crate::invariants::BsccData) -> Result<BoolPoly, BoolError> {
    let mut acc = BoolPoly::zero();
    for (u, v) in &data.pairs {
        acc = acc.add(&hbar(u).mul(&hbar(v))?);
    }
    Ok(acc)
}

/// β of a bounding-pair map: Σ ū_i v̄_i (ē + 1̄).
pub fn beta_bp(data: &crate::invariants::BpData) -> Result<BoolPoly, BoolError> {
    let e_part = hbar(&data.boundary).add(&BoolPoly::one());
    let mut acc = BoolPoly::zero();
    for (u, v) in &data.pairs {
        acc = acc.add(&hbar(u).mul(&hbar(v))?.mul(&e_part)?);
    }
    Ok(acc)
}

/// The Sp-action: the algebra endomorphism with M · h̄ = (M h)‾.
/// Never overflows degree, because variables map to degree ≤ 1 polynomials.
pub fn sp_action(m: &SpMatrix, p: &BoolPoly) -> BoolPoly {
    let mut out = BoolPoly::zero();
    for mask in p.monomials() {
        let mut term = BoolPoly::one();
        for pos in 0..32u32 {
            if mask & (1 << pos) != 0 {
                let img = hbar(&m.apply_symbol(BasisSymbol::from_position(pos as usize)));
                term = term.mul(&img).expect("degree cannot overflow");
            }
        }
        out = out.add(&term);
    }
    out
}

/// The third differential of cubic functions: the degree-3 part of the
/// normal form, each monomial s̄₁s̄₂s̄₃ ↦ s₁∧s₂∧s₃ mod 2; lower degrees ↦ 0.
/// The output is a ℤ₂ vector on the trivector basis of Λ³H.
pub fn third_differential(spaces: &Spaces, p: &BoolPoly) -> BitVec {
    let mut bits = BitVec::zeros(spaces.lambda3_rank());
    for mask in p.monomials() {
        if mask.count_ones() != 3 {
            continue;
        }
        let syms: Vec<BasisSymbol> = (0..32)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| BasisSymbol::from_position(b as usize))
            .collect();
        let idx = spaces.trivector_index([syms[0], syms[1], syms[2]]);
        let mut one = BitVec::zeros(spaces.lambda3_rank());
        one.set(idx as usize);
        bits.xor_assign(&one);
    }
    bits
}

/// ℤ₂-dimension of B_{≤k}(𝒬) via the evaluation matrix over all 2^{2g}
/// quadratic forms.
pub fn dim_b(genus: Genus, k: u32) -> usize {
    assert!(k <= 3);
    let basis = MonomialBasis::new(genus, k);
    let nforms = 1u32 << genus.dim();
    let mut ech = BitEchelon::new();
    for &mask in &basis.masks {
        let mut row = BitVec::zeros(nforms as usize);
        for q in 0..nforms {
            if mask & q == mask {
                row.set(q as usize);
            }
        }
        ech.insert(row);
    }
    ech.rank()
}

/// Evaluation is faithful on the squarefree normal form: all monomials of
/// degree ≤ 3 are linearly independent as functions on 𝒬.
pub fn evaluation_faithful(genus: Genus) -> bool {
    dim_b(genus, 3) == MonomialBasis::new(genus, 3).len()
}

/// Free rank and torsion invariant factors of the fibered product
/// Λ³H ×_{Λ³H⊗ℤ₂} B_{≤3}(𝒬) = {(t, f) : t mod 2 = d³ f}.
pub fn abelianization_structure(spaces: &Spaces) -> (usize, Vec<BigInt>) {
    let genus = spaces.genus;
    let t_rank = spaces.lambda3_rank();
    let basis = MonomialBasis::new(genus, 3);
    let m3 = basis.len();
    let n = t_rank + m3;
    // integral cover L = {(t, F) : t ≡ d³F mod 2} ⊂ ℤ^{t_rank + m3}
    let mut rows: Vec<(SparseVec, u32)> = Vec::with_capacity(t_rank);
    for r in 0..t_rank {
        let mut terms: Vec<(u32, BigInt)> = vec![(r as u32, BigInt::one())];
        for (fi, &mask) in basis.masks.iter().enumerate() {
            if mask.count_ones() != 3 {
                continue;
            }
            let poly = BoolPoly::from_monomial_masks([mask]);
            if third_differential(spaces, &poly).get(r) {
                terms.push(((t_rank + fi) as u32, BigInt::one()));
            }
        }
        rows.push((SparseVec::from_terms(terms), 2));
    }
    let cover = congruence_kernel(n, &rows);
    assert_eq!(cover.rank(), n);
    // the fibered product is cover / (0 ⊕ 2ℤ^{m3})
    let sub: Vec<SparseVec> = (0..m3)
        .map(|fi| SparseVec::unit((t_rank + fi) as u32).scaled(&BigInt::from(2)))
        .collect();
    let coeffs = cover.solve_all(&sub).expect("2F lies in the cover");
    let dense: Vec<Vec<BigInt>> = coeffs.iter().map(|r| r.to_dense(cover.rank())).collect();
    let s = snf(&dense, cover.rank());
    let torsion: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_one()).cloned().collect();
    (cover.rank() - s.diag.len(), torsion)
}

/// The listed stabilizer elements used to generate B_{≤2}(𝒬): C₁, the D_i
/// (i ≠ g), the E_i (i ≠ 2), and the F_ij (3 ≤ i < j).
pub fn sp_lemma_maps(genus: Genus) -> Vec<SpMatrix> {
    let g = genus.get();
    let mut maps = Vec::new();
    let sym = |s: BasisSymbol| s.vector(genus);
    // C1: b1 ↦ b1 + a1
    maps.push(
        partial_symplectic(
            genus,
            &[(
                BasisSymbol::b(1),
                sym(BasisSymbol::b(1)).add(&sym(BasisSymbol::a(1))).unwrap(),
            )],
        )
        .expect("C1 is symplectic"),
    );
    // D_i: (b_i, b_{i+1}) ↦ (b_i + a_{i+1}, b_{i+1} + a_i), i ≠ g
    for i in 1..g {
        maps.push(
            partial_symplectic(
                genus,
                &[
                    (
                        BasisSymbol::b(i),
                        sym(BasisSymbol::b(i))
                            .add(&sym(BasisSymbol::a(i + 1)))
                            .unwrap(),
                    ),
                    (
                        BasisSymbol::b(i + 1),
                        sym(BasisSymbol::b(i + 1))
                            .add(&sym(BasisSymbol::a(i)))
                            .unwrap(),
                    ),
                ],
            )
            .expect("D_i is symplectic"),
        );
    }
    // E_i for i ≠ 2
    for i in (1..=g).filter(|&i| i != 2) {
        maps.push(crate::symplectic::e_generator(genus, i));
    }
    // F_ij for 3 ≤ i < j
    for i in 3..=g {
        for j in i + 1..=g {
            maps.push(f_generator(genus, i, j));
        }
    }
    maps
}

pub struct LemmaSpReport {
    pub closure_dim: usize,
    pub target_dim: usize,
    pub sweeps: usize,
}

/// The ℤ₂-span closure of {ā₁b̄₁, ā₂b̄₂, ā₃b̄₃, ā₁b̄₂, ā₃b̄₂} under the
/// listed stabilizer maps equals all of B_{≤2}(𝒬).
pub fn verify_lemma_sp(genus: Genus) -> Result<LemmaSpReport, BoolError> {
    let basis = MonomialBasis::new(genus, 2);
    let maps = sp_lemma_maps(genus);
    let a = |i: u32| BoolPoly::variable(BasisSymbol::a(i));
    let b = |i: u32| BoolPoly::variable(BasisSymbol::b(i));
    let gens = vec![
        a(1).mul(&b(1))?,
        a(2).mul(&b(2))?,
        a(3).mul(&b(3))?,
        a(1).mul(&b(2))?,
        a(3).mul(&b(2))?,
    ];
    let mut ech = BitEchelon::new();
    let mut polys: Vec<BoolPoly> = Vec::new();
    for gpoly in gens {
        if ech.insert(gpoly.to_bits(&basis)) {
            polys.push(gpoly);
        }
    }
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let snapshot = polys.clone();
        let mut changed = false;
        for m in &maps {
            for p in &snapshot {
                let img = sp_action(m, p);
                debug_assert!(img.degree() <= 2);
                if ech.insert(img.to_bits(&basis)) {
                    polys.push(img);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(LemmaSpReport {
        closure_dim: ech.rank(),
        target_dim: basis.len(),
        sweeps,
    })
}

pub use crate::linalg::gf2::BitVec as Mod2Vector;
