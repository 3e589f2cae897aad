//! Formula evaluators around the first and second Johnson homomorphisms and
//! the core of the Casson invariant: τ₁ on bounding-pair and pure-braid
//! data, τ₂ on bounding simple closed curves, the trace maps Tr^S and Tr^Λ,
//! Θ and d̄′, Morita's d with the identity d = 2d′ + 48d″, the congruence
//! lattices U′(H) and U(H), the central-extension cocycle, and the
//! determinant form b on Λ³H.
//!
//! Elements of D₂(H) are carried in a doubled integral model: a class T is
//! stored through the canonical D′₂ coordinates of 2T, so all arithmetic
//! stays in ℤ. Θ and Tr^Λ account for the factor two.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::bracket::{b0_ambient_of_tuples, Bracket};
use crate::linalg::gf2::BitVec;
use crate::linalg::{congruence_kernel, det_bareiss, LatticeBasis, SparseVec};
use crate::spaces::{ModuleVector, Space, Spaces};
use crate::symplectic::{
    bar, omega, random_symplectic, BasisSymbol, Genus, SpMatrix, SymVector, SymplecticError,
};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("invalid subsurface basis: {0}")]
    InvalidSubsurfaceBasis(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error("vector is not in the doubled D2 lattice")]
    NotInD2,
    #[error("cocycle value lies outside U(H)")]
    MembershipFailure,
    #[error("theta changed mod 4 under a symplectic basis change (trial {trial})")]
    InvarianceFailure { trial: u32 },
    #[error("theta discrepancy {0} is not divisible by 4")]
    DiscrepancyFailure(BigInt),
    #[error("d != 2d' + 48d'' on a random decomposable pair (trial {trial})")]
    IdentityFailure { trial: u32 },
    #[error("lattice computation failed: {0}")]
    Lattice(String),
}

// ---------------------------------------------------------------------------
// BP / PB / BSCC data
// ---------------------------------------------------------------------------

/// Homology data of a genus-h bounding pair: a symplectic basis
/// (u_i, v_i) of the cobounded subsurface and the boundary class e.
#[derive(Debug, Clone)]
pub struct BpData {
    pub pairs: Vec<(SymVector, SymVector)>,
    pub boundary: SymVector,
}

/// Homology data of a bounding simple closed curve: a symplectic basis of
/// the subsurface it bounds.
#[derive(Debug, Clone)]
pub struct BsccData {
    pub pairs: Vec<(SymVector, SymVector)>,
}

fn check_symplectic_pairs(pairs: &[(SymVector, SymVector)]) -> Result<(), InvariantError> {
    if pairs.is_empty() {
        return Err(InvariantError::InvalidSubsurfaceBasis(
            "subsurface genus must be at least 1".into(),
        ));
    }
    for (i, (ui, vi)) in pairs.iter().enumerate() {
        for (j, (uj, vj)) in pairs.iter().enumerate() {
            let w_uu = omega(ui, uj)?;
            let w_vv = omega(vi, vj)?;
            let w_uv = omega(ui, vj)?;
            if !w_uu.is_zero() || !w_vv.is_zero() {
                return Err(InvariantError::InvalidSubsurfaceBasis(format!(
                    "ω(u{i},u{j}) and ω(v{i},v{j}) must vanish"
                )));
            }
            let expected = if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            if w_uv != expected {
                return Err(InvariantError::InvalidSubsurfaceBasis(format!(
                    "ω(u{i},v{j}) = {w_uv}, expected {expected}"
                )));
            }
        }
    }
    Ok(())
}

impl BpData {
    pub fn new(
        pairs: Vec<(SymVector, SymVector)>,
        boundary: SymVector,
    ) -> Result<Self, InvariantError> {
        check_symplectic_pairs(&pairs)?;
        for (i, (u, v)) in pairs.iter().enumerate() {
            if !omega(&boundary, u)?.is_zero() || !omega(&boundary, v)?.is_zero() {
                return Err(InvariantError::InvalidSubsurfaceBasis(format!(
                    "boundary class pairs nontrivially with handle {i}"
                )));
            }
        }
        Ok(BpData { pairs, boundary })
    }
}

impl BsccData {
    pub fn new(pairs: Vec<(SymVector, SymVector)>) -> Result<Self, InvariantError> {
        check_symplectic_pairs(&pairs)?;
        Ok(BsccData { pairs })
    }

    /// The standard genus-h subsurface basis ((a_1,b_1), ..., (a_h,b_h)).
    pub fn standard(genus: Genus, h: u32) -> Self {
        assert!(h >= 1 && h <= genus.get());
        BsccData {
            pairs: (1..=h)
                .map(|i| {
                    (
                        BasisSymbol::a(i).vector(genus),
                        BasisSymbol::b(i).vector(genus),
                    )
                })
                .collect(),
        }
    }
}

/// τ₁ of a bounding-pair map: -Σ u_i ∧ v_i ∧ e.
pub fn tau1_bp(spaces: &Spaces, data: &BpData) -> ModuleVector {
    let mut acc = ModuleVector::zero(Space::Lambda3);
    for (u, v) in &data.pairs {
        acc = acc.add(&spaces.wedge3(u, v, &data.boundary).scaled(-1));
    }
    acc
}

/// τ₁ of a pure-braid commutator: -x ∧ y ∧ z.
pub fn tau1_pb(spaces: &Spaces, x: &SymVector, y: &SymVector, z: &SymVector) -> ModuleVector {
    spaces.wedge3(x, y, z).scaled(-1)
}

/// τ₂ of a bounding simple closed curve in the doubled ambient model:
/// the integral vector Σ_{i,j} (u_i∧v_i)·(u_j∧v_j) representing 2·τ₂.
pub fn tau2_bscc_ambient(spaces: &Spaces, data: &BsccData) -> ModuleVector {
    let mut acc = ModuleVector::zero(Space::S2Lambda2);
    for (ui, vi) in &data.pairs {
        for (uj, vj) in &data.pairs {
            // embed (u_i∧v_i)·(u_j∧v_j) through the Λ⁴ embedding shortcut:
            // directly as a product of bivectors
            acc = acc.add(&s2_product_of(spaces, ui, vi, uj, vj));
        }
    }
    acc
}

fn s2_product_of(
    spaces: &Spaces,
    a: &SymVector,
    b: &SymVector,
    c: &SymVector,
    d: &SymVector,
) -> ModuleVector {
    // (a∧b)·(c∧d) as an ambient S²(Λ²H) vector
    let mut terms: Vec<(u32, BigInt)> = Vec::new();
    let w1 = wedge2_sparse(spaces, a, b);
    let w2 = wedge2_sparse(spaces, c, d);
    for (e, x) in w1.iter() {
        for (f, y) in w2.iter() {
            terms.push((spaces.s2_index(e, f), x * y));
        }
    }
    ModuleVector {
        space: Space::S2Lambda2,
        vec: SparseVec::from_terms(terms),
    }
}

fn wedge2_sparse(spaces: &Spaces, a: &SymVector, b: &SymVector) -> SparseVec {
    let mut terms: Vec<(u32, BigInt)> = Vec::new();
    for (p, x) in a.coords().iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (q, y) in b.coords().iter().enumerate() {
            if y.is_zero() || p == q {
                continue;
            }
            let (idx, sign) = spaces
                .bivector_index_of(BasisSymbol::from_position(p), BasisSymbol::from_position(q));
            terms.push((idx, x * y * sign));
        }
    }
    SparseVec::from_terms(terms)
}

/// τ₂ of a BSCC in doubled canonical coordinates, with the D₂ membership
/// check.
pub fn tau2_bscc(d2: &D2Model, data: &BsccData) -> Result<ModuleVector, InvariantError> {
    let ambient = tau2_bscc_ambient(&d2.bracket.spaces, data);
    let w = d2
        .bracket
        .quotient
        .reduce(&ambient.vec)
        .map_err(|e| InvariantError::Lattice(e.to_string()))?;
    if !d2.lattice.contains(&w) {
        return Err(InvariantError::NotInD2);
    }
    Ok(ModuleVector {
        space: Space::D2Doubled,
        vec: w,
    })
}

// ---------------------------------------------------------------------------
// Trace maps, Θ, d̄′
// ---------------------------------------------------------------------------

/// Tr^S of an ambient S²(Λ²H) vector, in S²H ⊗ ℤ₂ coordinates:
/// (a∧b)·(c∧d) ↦ ω(a,c) b·d + ω(a,d) b·c + ω(b,c) a·d + ω(b,d) a·c.
pub fn trace_s_ambient(spaces: &Spaces, v: &SparseVec) -> BitVec {
    let mut bits = BitVec::zeros(spaces.s2h_rank());
    for (sidx, coeff) in v.iter() {
        if coeff.is_even() {
            continue;
        }
        let (e, f) = spaces.s2_of_index(sidx);
        let [a, b] = spaces.bivector(e);
        let [c, d] = spaces.bivector(f);
        for (x, y, p, q) in [(a, c, b, d), (a, d, b, c), (b, c, a, d), (b, d, a, c)] {
            if crate::symplectic::omega_symbols(x, y) != 0 {
                bits.set(spaces.s2h_index(p.position(), q.position()));
            }
        }
    }
    bits
}

/// Tr^S on canonical D′₂ coordinates (well-defined because Tr^S kills the
/// embedded Λ⁴H mod 2; see `verify_well_defined`).
pub fn trace_s(bracket: &Bracket, t: &ModuleVector) -> BitVec {
    assert_eq!(t.space, Space::D2Prime);
    trace_s_ambient(&bracket.spaces, &bracket.quotient.section(&t.vec))
}

/// The 4-term Λ-trace of an ambient vector, in Λ²H ⊗ ℤ₂ coordinates.
fn trace_lambda4_ambient(spaces: &Spaces, v: &SparseVec) -> BitVec {
    let mut bits = BitVec::zeros(spaces.lambda2h_rank());
    for (sidx, coeff) in v.iter() {
        if coeff.is_even() {
            continue;
        }
        let (e, f) = spaces.s2_of_index(sidx);
        let [a, b] = spaces.bivector(e);
        let [c, d] = spaces.bivector(f);
        for (x, y, p, q) in [(a, c, b, d), (a, d, b, c), (b, c, a, d), (b, d, a, c)] {
            if crate::symplectic::omega_symbols(x, y) != 0 && p != q {
                let (idx, _) = spaces.bivector_index_of(p, q);
                let mut one = BitVec::zeros(spaces.lambda2h_rank());
                one.set(idx as usize);
                bits.xor_assign(&one);
            }
        }
    }
    bits
}

/// The exact structure of D₂(H): the bracket context plus the doubled
/// lattice (canonical coordinates of 2T for T ∈ D₂).
pub struct D2Model<'a> {
    pub bracket: &'a Bracket,
    pub lattice: LatticeBasis,
}

impl<'a> D2Model<'a> {
    pub fn new(bracket: &'a Bracket) -> Self {
        let spaces = &bracket.spaces;
        let rank = bracket.quotient.rank();
        let mut gens: Vec<SparseVec> = (0..rank as u32)
            .map(|k| SparseVec::unit(k).scaled(&BigInt::from(2)))
            .collect();
        for e in 0..spaces.lambda2h_rank() as u32 {
            let square = SparseVec::unit(spaces.s2_index(e, e));
            gens.push(bracket.quotient.reduce(&square).expect("ambient"));
        }
        D2Model {
            bracket,
            lattice: LatticeBasis::from_generators(rank, gens),
        }
    }

    /// Doubled coordinates of an integral D′₂ class (T ↦ coords of 2T).
    pub fn include_d2prime(&self, t: &ModuleVector) -> ModuleVector {
        assert_eq!(t.space, Space::D2Prime);
        ModuleVector {
            space: Space::D2Doubled,
            vec: t.vec.scaled(&BigInt::from(2)),
        }
    }

    /// Tr^Λ of a doubled-model element: splits off the parity of the square
    /// coordinates (the half-square generators), halves the remaining
    /// integral part, and applies the half-square and four-term rules.
    pub fn trace_lambda(&self, w: &ModuleVector) -> Result<BitVec, InvariantError> {
        assert_eq!(w.space, Space::D2Doubled);
        let spaces = &self.bracket.spaces;
        let quotient = &self.bracket.quotient;
        let ambient = quotient.section(&w.vec);
        let mut bits = BitVec::zeros(spaces.lambda2h_rank());
        // parity of square coordinates identifies the half-square part
        let mut residual = ambient.clone();
        for e in 0..spaces.lambda2h_rank() as u32 {
            let sq = spaces.s2_index(e, e);
            let c = ambient.get(sq).cloned().unwrap_or_else(BigInt::zero);
            if c.is_odd() {
                residual = residual.add_scaled(&SparseVec::unit(sq), &BigInt::from(-1));
                // Tr^Λ(½ (s∧s')²) = (1 + ω(s,s')) s∧s'
                let [s, t] = spaces.bivector(e);
                if crate::symplectic::omega_symbols(s, t) == 0 {
                    let mut one = BitVec::zeros(spaces.lambda2h_rank());
                    one.set(e as usize);
                    bits.xor_assign(&one);
                }
            }
        }
        // the rest is 2·(an integral D′₂ class)
        let reduced = quotient
            .reduce(&residual)
            .map_err(|e| InvariantError::Lattice(e.to_string()))?;
        let mut half_terms = Vec::new();
        for (c, val) in reduced.iter() {
            if val.is_odd() {
                return Err(InvariantError::NotInD2);
            }
            half_terms.push((c, val / 2));
        }
        let half = SparseVec::from_terms(half_terms);
        bits.xor_assign(&trace_lambda4_ambient(spaces, &quotient.section(&half)));
        Ok(bits)
    }

    /// 2Θ(T) for a doubled-model element (an exact integer).
    pub fn two_theta(&self, w: &ModuleVector) -> BigInt {
        assert_eq!(w.space, Space::D2Doubled);
        theta_ambient(&self.bracket.spaces, &self.bracket.quotient.section(&w.vec))
    }

    /// Θ(T) as an exact rational.
    pub fn theta(&self, w: &ModuleVector) -> BigRational {
        BigRational::new(self.two_theta(w), BigInt::from(2))
    }

    /// d̄′(T) as an exact rational.
    pub fn dbar_prime(&self, w: &ModuleVector) -> BigRational {
        assert_eq!(w.space, Space::D2Doubled);
        let amb = self.bracket.quotient.section(&w.vec);
        BigRational::new(
            dbar_prime_ambient(&self.bracket.spaces, &amb),
            BigInt::from(2),
        )
    }
}

/// The symmetric pairing ⟨s,t⟩ = 1 iff t = s̄ on basis symbols.
fn angle(s: BasisSymbol, t: BasisSymbol) -> i64 {
    if t == bar(s) {
        1
    } else {
        0
    }
}

/// Θ of an ambient S²(Λ²H) vector:
/// (a∧b)·(c∧d) ↦ ⟨a,d⟩⟨b,c⟩ − ⟨a,c⟩⟨b,d⟩.
pub fn theta_ambient(spaces: &Spaces, v: &SparseVec) -> BigInt {
    let mut acc = BigInt::zero();
    for (sidx, coeff) in v.iter() {
        let (e, f) = spaces.s2_of_index(sidx);
        let [a, b] = spaces.bivector(e);
        let [c, d] = spaces.bivector(f);
        let val = angle(a, d) * angle(b, c) - angle(a, c) * angle(b, d);
        if val != 0 {
            acc += coeff * val;
        }
    }
    acc
}

/// Θ of a canonical D′₂ class, optionally in a transformed symplectic basis
/// S′ = M·S (computed by pulling the class back through M⁻¹).
pub fn theta(bracket: &Bracket, t: &ModuleVector, basis: Option<&SpMatrix>) -> BigInt {
    assert_eq!(t.space, Space::D2Prime);
    let ambient = bracket.quotient.section(&t.vec);
    match basis {
        None => theta_ambient(&bracket.spaces, &ambient),
        Some(m) => theta_ambient(
            &bracket.spaces,
            &apply_s2(&bracket.spaces, &m.inverse(), &ambient),
        ),
    }
}

/// Induced action of a symplectic map on an ambient S²(Λ²H) vector.
pub fn apply_s2(spaces: &Spaces, m: &SpMatrix, v: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for (sidx, coeff) in v.iter() {
        let (e, f) = spaces.s2_of_index(sidx);
        let [a, b] = spaces.bivector(e);
        let [c, d] = spaces.bivector(f);
        let img = s2_product_of(
            spaces,
            &m.apply_symbol(a),
            &m.apply_symbol(b),
            &m.apply_symbol(c),
            &m.apply_symbol(d),
        );
        acc = acc.add_scaled(&img.vec, coeff);
    }
    acc
}

/// d̄′ of an ambient S²(Λ²H) vector:
/// (a∧b)·(c∧d) ↦ -4ω(a,b)ω(c,d) - 2ω(a,c)ω(b,d) + 2ω(a,d)ω(b,c).
pub fn dbar_prime_ambient(spaces: &Spaces, v: &SparseVec) -> BigInt {
    let w = crate::symplectic::omega_symbols;
    let mut acc = BigInt::zero();
    for (sidx, coeff) in v.iter() {
        let (e, f) = spaces.s2_of_index(sidx);
        let [a, b] = spaces.bivector(e);
        let [c, d] = spaces.bivector(f);
        let val = -4 * w(a, b) * w(c, d) - 2 * w(a, c) * w(b, d) + 2 * w(a, d) * w(b, c);
        if val != 0 {
            acc += coeff * val;
        }
    }
    acc
}

/// d̄′ of a canonical D′₂ class (an exact integer there).
pub fn dbar_prime(bracket: &Bracket, t: &ModuleVector) -> BigInt {
    assert_eq!(t.space, Space::D2Prime);
    dbar_prime_ambient(&bracket.spaces, &bracket.quotient.section(&t.vec))
}

/// Θ, Tr^S and d̄′ kill every embedded Λ⁴H generator (Θ and d̄′ exactly,
/// Tr^S mod 2), so all three descend to D′₂.
pub fn verify_well_defined(spaces: &Spaces) -> bool {
    spaces.lambda4_relations().into_iter().all(|rel| {
        theta_ambient(spaces, &rel).is_zero()
            && dbar_prime_ambient(spaces, &rel).is_zero()
            && trace_s_ambient(spaces, &rel).is_zero()
            && trace_lambda4_ambient(spaces, &rel).is_zero()
    })
}

// ---------------------------------------------------------------------------
// Morita's d and the identity d = 2d' + 48d''
// ---------------------------------------------------------------------------

/// Morita's core of the Casson invariant on a commutator of decomposable
/// trivectors: 8 Σ_{i,j∈ℤ₃} ω(x_i,x_{i+1}) ω(y_j,y_{j+1}) ω(x_{i+2},y_{j+2}).
pub fn d_morita(x: &[SymVector; 3], y: &[SymVector; 3]) -> Result<BigInt, SymplecticError> {
    let mut acc = BigInt::zero();
    for i in 0..3 {
        for j in 0..3 {
            let a = omega(&x[i], &x[(i + 1) % 3])?;
            if a.is_zero() {
                continue;
            }
            let b = omega(&y[j], &y[(j + 1) % 3])?;
            if b.is_zero() {
                continue;
            }
            let c = omega(&x[(i + 2) % 3], &y[(j + 2) % 3])?;
            acc += a * b * c;
        }
    }
    Ok(acc * 8)
}

fn random_vector(genus: Genus, rng: &mut ChaCha20Rng) -> SymVector {
    let coords: Vec<i64> = (0..genus.dim()).map(|_| rng.gen_range(-2..=2)).collect();
    SymVector::from_i64(genus, &coords).expect("genus-sized")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialReport {
    pub trials: u32,
}

/// Checks d = 2d' + 48d'' on seeded random decomposable pairs, where
/// d' = -d̄′(B⁰(u∧v)) and 48·B² = 12·(4B²).
pub fn verify_d_identity(
    bracket: &Bracket,
    trials: u32,
    seed: u64,
) -> Result<TrialReport, InvariantError> {
    let spaces = &bracket.spaces;
    let genus = spaces.genus;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let x = [
            random_vector(genus, &mut rng),
            random_vector(genus, &mut rng),
            random_vector(genus, &mut rng),
        ];
        let y = [
            random_vector(genus, &mut rng),
            random_vector(genus, &mut rng),
            random_vector(genus, &mut rng),
        ];
        let d = d_morita(&x, &y)?;
        let u = spaces.wedge3(&x[0], &x[1], &x[2]);
        let v = spaces.wedge3(&y[0], &y[1], &y[2]);
        let pair = spaces.wedge_pair(&u, &v);
        let dprime = -dbar_prime_ambient(spaces, &bracket.b0_ambient(&pair).vec);
        let rhs = 2 * dprime + 12 * bracket.b2_x4(&pair);
        if d != rhs {
            return Err(InvariantError::IdentityFailure { trial });
        }
    }
    Ok(TrialReport { trials })
}

/// d(T_γ) = 4h(h-1) and d''(T_γ) = -h/8 for a genus-h BSCC twist.
pub fn bscc_values(h: u32) -> (BigInt, BigRational) {
    let h = BigInt::from(h);
    (
        BigInt::from(4) * &h * (&h - 1),
        BigRational::new(-h, BigInt::from(8)),
    )
}

/// Cross-check 4h(h-1) = 2·(-d̄′(τ₂)) + 48·(-h/8) on the standard genus-h
/// subsurface data.
pub fn verify_bscc_cross(bracket: &Bracket, h: u32) -> Result<(), InvariantError> {
    let spaces = &bracket.spaces;
    assert!(h <= spaces.genus.get());
    let data = BsccData::standard(spaces.genus, h);
    let doubled = tau2_bscc_ambient(spaces, &data); // 2·τ₂ in the ambient
    let dbar2 = dbar_prime_ambient(spaces, &doubled.vec); // 2·d̄′(τ₂)
    let (d, _) = bscc_values(h);
    // d = 2·(-d̄′(τ₂)) - 6h  ⇔  d = -(2 d̄′(τ₂)) - 6h
    let rhs = -dbar2 - BigInt::from(6) * BigInt::from(h);
    if d != rhs {
        return Err(InvariantError::IdentityFailure { trial: h });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Lemma-level theta checks
// ---------------------------------------------------------------------------

/// θ = Θ(B⁰(x∧y)) and θ̃ = -3·det(ω(x_i,y_j)); their difference is in 4ℤ.
pub fn theta_discrepancy(
    spaces: &Spaces,
    x: &[SymVector; 3],
    y: &[SymVector; 3],
) -> Result<(BigInt, BigInt), InvariantError> {
    let u = spaces.wedge3(&x[0], &x[1], &x[2]);
    let v = spaces.wedge3(&y[0], &y[1], &y[2]);
    let pair = spaces.wedge_pair(&u, &v);
    let mut ambient = SparseVec::new();
    for (p, c) in pair.vec.iter() {
        let (i, j) = spaces.pair_of_index(p);
        ambient = ambient.add_scaled(
            &b0_ambient_of_tuples(spaces, &spaces.trivector(i), &spaces.trivector(j)),
            c,
        );
    }
    let theta = theta_ambient(spaces, &ambient);
    let mut det = BigInt::zero();
    {
        let w = |i: usize, j: usize| omega(&x[i], &y[j]).expect("same genus");
        det += w(0, 0) * (w(1, 1) * w(2, 2) - w(1, 2) * w(2, 1));
        det -= w(0, 1) * (w(1, 0) * w(2, 2) - w(1, 2) * w(2, 0));
        det += w(0, 2) * (w(1, 0) * w(2, 1) - w(1, 1) * w(2, 0));
    }
    let theta_tilde = BigInt::from(-3) * det;
    let diff = &theta - &theta_tilde;
    if !(&diff % 4u32).is_zero() {
        return Err(InvariantError::DiscrepancyFailure(diff));
    }
    Ok((theta, theta_tilde))
}

/// Θ mod 4 does not depend on the symplectic basis on ker Tr^S (sampled from
/// the image of B⁰), nor does 2Θ mod 4 on ker Tr^Λ (sampled from τ₂ values
/// of randomly transported subsurface bases).
pub fn verify_theta_mod4(
    bracket: &Bracket,
    trials: u32,
    seed: u64,
) -> Result<TrialReport, InvariantError> {
    let spaces = &bracket.spaces;
    let genus = spaces.genus;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let four = BigInt::from(4);
    for trial in 0..trials {
        // random element of im B⁰ ⊆ ker Tr^S
        let mut pairvec = Vec::new();
        for _ in 0..3 {
            let p = rng.gen_range(0..spaces.pair_rank() as u32);
            let c = rng.gen_range(-2i64..=2);
            pairvec.push((p, BigInt::from(c)));
        }
        let v = ModuleVector {
            space: Space::Lambda2Lambda3,
            vec: SparseVec::from_terms(pairvec),
        };
        let ambient = bracket.b0_ambient(&v).vec;
        let theta0 = theta_ambient(spaces, &ambient);
        let m = random_symplectic(genus, seed ^ (trial as u64).wrapping_mul(0x9e37), 12);
        let transported = apply_s2(spaces, &m.inverse(), &ambient);
        let theta1 = theta_ambient(spaces, &transported);
        if !((&theta0 - &theta1) % &four).is_zero() {
            return Err(InvariantError::InvarianceFailure { trial });
        }

        // random τ₂ value (lies in ker Tr^Λ): transported standard handles
        let h = rng.gen_range(1..=genus.get());
        let t = random_symplectic(genus, seed ^ (trial as u64).wrapping_mul(0x51ed), 10);
        let data = BsccData::new(
            BsccData::standard(genus, h)
                .pairs
                .iter()
                .map(|(u, v)| (t.apply(u), t.apply(v)))
                .collect(),
        )?;
        let doubled = tau2_bscc_ambient(spaces, &data).vec; // 2·τ₂
        let two_theta0 = theta_ambient(spaces, &doubled);
        let two_theta1 = theta_ambient(spaces, &apply_s2(spaces, &m.inverse(), &doubled));
        if !((&two_theta0 - &two_theta1) % &four).is_zero() {
            return Err(InvariantError::InvarianceFailure { trial });
        }
    }
    Ok(TrialReport { trials })
}

// ---------------------------------------------------------------------------
// The congruence lattices U′(H) and U(H)
// ---------------------------------------------------------------------------

/// Tr^S on canonical D′₂ coordinates as mod-2 condition rows (one per S²H
/// basis element).
fn trace_s_rows(bracket: &Bracket) -> Vec<SparseVec> {
    let spaces = &bracket.spaces;
    let rank = bracket.quotient.rank();
    let mut rows: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); spaces.s2h_rank()];
    for k in 0..rank as u32 {
        let bits = trace_s_ambient(spaces, &bracket.quotient.section(&SparseVec::unit(k)));
        for i in bits.ones() {
            rows[i].push((k, BigInt::one()));
        }
    }
    rows.into_iter().map(SparseVec::from_terms).collect()
}

/// U′(H) = {(T, z) : Tr^S(T) = 0, 2Θ(T) ≡ -z mod 8} as an HNF lattice in
/// canonical D′₂ coordinates ⊕ ℤ.
pub fn lattice_uprime(bracket: &Bracket) -> LatticeBasis {
    let rank = bracket.quotient.rank();
    let n = rank + 1;
    let mut rows: Vec<(SparseVec, u32)> =
        trace_s_rows(bracket).into_iter().map(|r| (r, 2)).collect();
    let mut theta_terms: Vec<(u32, BigInt)> = (0..rank as u32)
        .filter_map(|k| {
            let v = theta_ambient(
                &bracket.spaces,
                &bracket.quotient.section(&SparseVec::unit(k)),
            );
            if v.is_zero() {
                None
            } else {
                Some((k, 2 * v))
            }
        })
        .collect();
    theta_terms.push((rank as u32, BigInt::one()));
    rows.push((SparseVec::from_terms(theta_terms), 8));
    congruence_kernel(n, &rows)
}

/// The image lattice of (B⁰, 8·B²) over the pair basis, in D′₂ ⊕ ℤ.
pub fn image_uprime(bracket: &Bracket) -> LatticeBasis {
    let rank = bracket.quotient.rank();
    let z_col = rank as u32;
    let theta_row = bracket.theta_row();
    let gens = (0..bracket.spaces.pair_rank() as u32).map(|p| {
        let col = bracket.column(p);
        let mut terms: Vec<(u32, BigInt)> = Vec::with_capacity(col.nnz());
        for (c, v) in col.iter() {
            if c == theta_row {
                terms.push((z_col, v * 2)); // 8B² = 2·(4B²)
            } else {
                terms.push((c, v.clone()));
            }
        }
        SparseVec::from_terms(terms)
    });
    LatticeBasis::from_generators(rank + 1, gens)
}

/// U(H) = {(T, z) : Tr^Λ(T) = 0, 2Θ(T) ≡ -z mod 4} in doubled D₂
/// coordinates ⊕ ℤ.
pub fn lattice_u(d2: &D2Model) -> Result<LatticeBasis, InvariantError> {
    let rank = d2.bracket.quotient.rank();
    let basis = d2.lattice.rows();
    let r = basis.len();
    // conditions on the coefficient vector c over the D₂ basis, plus z
    let mut tr_rows: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); d2.bracket.spaces.lambda2h_rank()];
    let mut theta_terms: Vec<(u32, BigInt)> = Vec::new();
    for (k, h) in basis.iter().enumerate() {
        let w = ModuleVector {
            space: Space::D2Doubled,
            vec: h.clone(),
        };
        let bits = d2.trace_lambda(&w)?;
        for i in bits.ones() {
            tr_rows[i].push((k as u32, BigInt::one()));
        }
        let th = d2.two_theta(&w);
        if !th.is_zero() {
            theta_terms.push((k as u32, th));
        }
    }
    theta_terms.push((r as u32, BigInt::one()));
    let mut rows: Vec<(SparseVec, u32)> = tr_rows
        .into_iter()
        .map(|r| (SparseVec::from_terms(r), 2))
        .collect();
    rows.push((SparseVec::from_terms(theta_terms), 4));
    let coeff_lattice = congruence_kernel(r + 1, &rows);
    // map (c, z) to (w, z) with w = Σ c_k h_k
    let gens = coeff_lattice.rows().iter().map(|row| {
        let mut w = SparseVec::new();
        let mut z = BigInt::zero();
        for (col, v) in row.iter() {
            if (col as usize) < r {
                w = w.add_scaled(&basis[col as usize], v);
            } else {
                z = v.clone();
            }
        }
        let mut terms: Vec<(u32, BigInt)> = w.iter().map(|(c, v)| (c, v.clone())).collect();
        if !z.is_zero() {
            terms.push((rank as u32, z));
        }
        SparseVec::from_terms(terms)
    });
    Ok(LatticeBasis::from_generators(rank + 1, gens))
}

/// The extension cocycle value on a wedge of decomposables:
/// (B⁰(v), -2·det) with -2·det = 8·B² = 2·(4B²); asserts U(H) membership.
pub fn cocycle_c(
    bracket: &Bracket,
    d2: &D2Model,
    u_lattice: &LatticeBasis,
    v: &ModuleVector,
) -> Result<(ModuleVector, BigInt), InvariantError> {
    let t = bracket.b0(v);
    let z = BigInt::from(2) * bracket.b2_x4(v);
    let w = d2.include_d2prime(&t);
    let rank = bracket.quotient.rank();
    let mut terms: Vec<(u32, BigInt)> = w.vec.iter().map(|(c, x)| (c, x.clone())).collect();
    if !z.is_zero() {
        terms.push((rank as u32, z.clone()));
    }
    if !u_lattice.contains(&SparseVec::from_terms(terms)) {
        return Err(InvariantError::MembershipFailure);
    }
    Ok((t, z))
}

// ---------------------------------------------------------------------------
// The determinant form b on Λ³H
// ---------------------------------------------------------------------------

/// b(x₁∧x₂∧x₃, y₁∧y₂∧y₃) = det(ω(x_i, y_j)).
pub fn form_b(x: &[SymVector; 3], y: &[SymVector; 3]) -> BigInt {
    let w = |i: usize, j: usize| omega(&x[i], &y[j]).expect("same genus");
    w(0, 0) * (w(1, 1) * w(2, 2) - w(1, 2) * w(2, 1))
        - w(0, 1) * (w(1, 0) * w(2, 2) - w(1, 2) * w(2, 0))
        + w(0, 2) * (w(1, 0) * w(2, 1) - w(1, 1) * w(2, 0))
}

/// |det| of the Gram matrix of b on the full trivector basis.
pub fn gram_b_det(spaces: &Spaces) -> BigInt {
    let n = spaces.lambda3_rank();
    let genus = spaces.genus;
    let to_vecs = |idx: usize| -> [SymVector; 3] {
        let t = spaces.trivector(idx as u32);
        [t[0].vector(genus), t[1].vector(genus), t[2].vector(genus)]
    };
    let gram: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let xi = to_vecs(i);
            (0..n).map(|j| form_b(&xi, &to_vecs(j))).collect()
        })
        .collect();
    det_bareiss(&gram).abs()
}

// ---------------------------------------------------------------------------
// Exact-row checks for the trace diagram
// ---------------------------------------------------------------------------

pub struct ExactRowReport {
    pub im_b0_equals_ker_trs: bool,
    pub trace_s_surjective: bool,
    pub trace_lambda_surjective: bool,
}

/// Top row: im(B⁰) = ker(Tr^S) inside D′₂ as an integral lattice equality;
/// right exactness of both rows: Tr^S and Tr^Λ surject onto the kernels of
/// ω̄ on S²H⊗ℤ₂ and Λ²H⊗ℤ₂ respectively.
pub fn verify_exact_rows(
    bracket: &Bracket,
    d2: &D2Model,
) -> Result<ExactRowReport, InvariantError> {
    let spaces = &bracket.spaces;
    let rank = bracket.quotient.rank();
    let theta_row = bracket.theta_row();
    // image of B⁰ in canonical coordinates
    let im_b0 = LatticeBasis::from_generators(
        rank,
        (0..spaces.pair_rank() as u32).map(|p| bracket.column(p).filter_cols(|c| c < theta_row)),
    );
    let ker_trs = congruence_kernel(
        rank,
        &trace_s_rows(bracket)
            .into_iter()
            .map(|r| (r, 2))
            .collect::<Vec<_>>(),
    );
    let im_b0_equals_ker_trs = im_b0.equal(&ker_trs).expect("same ambient");

    // surjectivity of Tr^S onto ker ω̄ ⊂ S²H⊗ℤ₂
    let mut ech = crate::linalg::gf2::BitEchelon::new();
    for k in 0..rank as u32 {
        let bits = trace_s_ambient(spaces, &bracket.quotient.section(&SparseVec::unit(k)));
        if spaces.omega_bar_s2h(&bits) {
            return Err(InvariantError::Lattice("Tr^S image escapes ker ω̄".into()));
        }
        ech.insert(bits);
    }
    let trace_s_surjective = ech.rank() == spaces.s2h_rank() - 1;

    // surjectivity of Tr^Λ onto ker ω̄ ⊂ Λ²H⊗ℤ₂
    let mut ech2 = crate::linalg::gf2::BitEchelon::new();
    for h in d2.lattice.rows() {
        let bits = d2.trace_lambda(&ModuleVector {
            space: Space::D2Doubled,
            vec: h.clone(),
        })?;
        if spaces.omega_bar_lambda2(&bits) {
            return Err(InvariantError::Lattice("Tr^Λ image escapes ker ω̄".into()));
        }
        ech2.insert(bits);
    }
    let trace_lambda_surjective = ech2.rank() == spaces.lambda2h_rank() - 1;

    Ok(ExactRowReport {
        im_b0_equals_ker_trs,
        trace_s_surjective,
        trace_lambda_surjective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32) -> BasisSymbol {
        BasisSymbol::a(i)
    }

    fn b(i: u32) -> BasisSymbol {
        BasisSymbol::b(i)
    }

    fn setup() -> Bracket {
        Bracket::new(Genus::new(3).unwrap())
    }

    #[test]
    fn tau1_formulas() {
        let br = setup();
        let s = &br.spaces;
        let g = s.genus;
        let data = BpData::new(vec![(a(1).vector(g), b(1).vector(g))], a(2).vector(g)).unwrap();
        let v = tau1_bp(s, &data);
        let expect = s.wedge3_symbols([a(1), b(1), a(2)]).scaled(-1);
        assert_eq!(v, expect);

        // boundary class pairing nontrivially is rejected
        assert!(BpData::new(
            vec![(a(1).vector(g), b(1).vector(g))],
            b(2).vector(g).add(&a(1).vector(g)).unwrap(),
        )
        .is_err());

        let pb = tau1_pb(s, &a(1).vector(g), &a(2).vector(g), &b(3).vector(g));
        assert_eq!(pb, s.wedge3_symbols([a(1), a(2), b(3)]).scaled(-1));
        assert!(tau1_pb(s, &a(1).vector(g), &a(1).vector(g), &b(3).vector(g)).is_zero());
    }

    #[test]
    fn tau2_and_trace_lambda() {
        let br = setup();
        let d2 = D2Model::new(&br);
        let g = br.spaces.genus;
        // h = 1: τ₂ = ½(a1∧b1)², whose doubled ambient is the square itself
        let data = BsccData::standard(g, 1);
        let w = tau2_bscc(&d2, &data).unwrap();
        let bits = d2.trace_lambda(&w).unwrap();
        assert!(bits.is_zero(), "Tr^Λ(τ₂) must vanish");
        // ½(a1∧a2)² has Tr^Λ = a1∧a2
        let (e, _) = br.spaces.bivector_index_of(a(1), a(2));
        let sq = SparseVec::unit(br.spaces.s2_index(e, e));
        let w = ModuleVector {
            space: Space::D2Doubled,
            vec: br.quotient.reduce(&sq).unwrap(),
        };
        let bits = d2.trace_lambda(&w).unwrap();
        let ones: Vec<usize> = bits.ones().collect();
        assert_eq!(ones, vec![e as usize]);
        // Tr^Λ(τ₂) = 0 for all h and transported bases
        for h in 1..=3 {
            let data = BsccData::standard(g, h);
            let w = tau2_bscc(&d2, &data).unwrap();
            assert!(d2.trace_lambda(&w).unwrap().is_zero());
        }
    }

    #[test]
    fn d2_lattice_structure() {
        let br = setup();
        let d2 = D2Model::new(&br);
        let rank = br.quotient.rank();
        let spaces = &br.spaces;
        // the doubled image of D′₂ sits inside D₂ with 2-power index, and
        // the exponent is the mod-2 rank of the half-square family
        let doubled_d2prime = LatticeBasis::from_generators(
            rank,
            (0..rank as u32).map(|k| SparseVec::unit(k).scaled(&BigInt::from(2))),
        );
        let index = d2
            .lattice
            .index_of(&doubled_d2prime)
            .unwrap()
            .expect("finite index");
        let mut ech = crate::linalg::gf2::BitEchelon::new();
        for e in 0..spaces.lambda2h_rank() as u32 {
            let sq = spaces.s2_index(e, e);
            let coords = br.quotient.reduce(&SparseVec::unit(sq)).unwrap();
            let mut bits = crate::linalg::gf2::BitVec::zeros(rank);
            for (c, v) in coords.iter() {
                if v.is_odd() {
                    bits.set(c as usize);
                }
            }
            ech.insert(bits);
        }
        assert_eq!(index, BigInt::from(2).pow(ech.rank() as u32));

        // half-squares of arbitrary decomposable bivectors stay in D₂:
        // u = a1 + a2, v = b1
        let g = br.spaces.genus;
        let u = a(1).vector(g).add(&a(2).vector(g)).unwrap();
        let v = b(1).vector(g);
        let sq = s2_product_of(spaces, &u, &v, &u, &v);
        let w = br.quotient.reduce(&sq.vec).unwrap();
        assert!(d2.lattice.contains(&w));
        // ... and so does the class of any integral D′₂ element, doubled
        assert!(d2
            .lattice
            .contains(&SparseVec::unit(3).scaled(&BigInt::from(2))));
    }

    #[test]
    fn induced_action_preserves_relations() {
        let br = setup();
        let s = &br.spaces;
        let g = s.genus;
        let m = crate::symplectic::random_symplectic(g, 5, 8);
        for rel in s.lambda4_relations().into_iter().step_by(3) {
            let moved = apply_s2(s, &m, &rel);
            assert!(br.quotient.reduce(&moved).unwrap().is_zero());
        }
        // the action commutes with the Λ⁴H embedding itself
        let quad = [
            a(1).vector(g),
            b(2).vector(g),
            a(3).vector(g),
            b(3).vector(g),
        ];
        let lhs = apply_s2(
            s,
            &m,
            &s.embed_lambda4(&quad[0], &quad[1], &quad[2], &quad[3]).vec,
        );
        let rhs = s
            .embed_lambda4(
                &m.apply(&quad[0]),
                &m.apply(&quad[1]),
                &m.apply(&quad[2]),
                &m.apply(&quad[3]),
            )
            .vec;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn theta_with_basis_change() {
        let br = setup();
        let g = br.spaces.genus;
        let v = ModuleVector {
            space: Space::Lambda2Lambda3,
            vec: SparseVec::unit(23),
        };
        let t = br.b0(&v);
        let id = crate::symplectic::SpMatrix::identity(g);
        assert_eq!(theta(&br, &t, None), theta(&br, &t, Some(&id)));
        let m = crate::symplectic::random_symplectic(g, 3, 10);
        let moved = theta(&br, &t, Some(&m));
        assert_eq!(
            moved,
            theta_ambient(
                &br.spaces,
                &apply_s2(&br.spaces, &m.inverse(), &br.quotient.section(&t.vec))
            )
        );
        assert!(((theta(&br, &t, None) - moved) % 4u32).is_zero());
    }

    #[test]
    fn trace_s_examples() {
        let br = setup();
        let s = &br.spaces;
        // (a1∧a2)·(b1∧b2) ↦ a2·b2 + a1·b1
        let (e, _) = s.bivector_index_of(a(1), a(2));
        let (f, _) = s.bivector_index_of(b(1), b(2));
        let v = SparseVec::unit(s.s2_index(e, f));
        let bits = trace_s_ambient(s, &v);
        let mut expect = BitVec::zeros(s.s2h_rank());
        expect.set(s.s2h_index(a(2).position(), b(2).position()));
        expect.set(s.s2h_index(a(1).position(), b(1).position()));
        assert_eq!(bits, expect);
        // (a1∧a2)·(a3∧b3)... all-a product vanishes
        let (e2, _) = s.bivector_index_of(a(1), a(2));
        let (f2, _) = s.bivector_index_of(a(3), b(3));
        let v2 = SparseVec::unit(s.s2_index(e2, f2));
        // only ω(a_i, b3) with a3 present: ω(a1,a3)=ω(a2,a3)=0, ω(a1,b3)=0...
        assert!(trace_s_ambient(s, &v2).is_zero());
    }

    #[test]
    fn well_definedness_sweep() {
        assert!(verify_well_defined(&Spaces::new(Genus::new(3).unwrap())));
        assert!(verify_well_defined(&Spaces::new(Genus::new(4).unwrap())));
    }

    #[test]
    fn theta_examples() {
        let br = setup();
        let s = &br.spaces;
        let idx = |p: BasisSymbol, q: BasisSymbol, r: BasisSymbol, t: BasisSymbol| {
            let (e, _) = s.bivector_index_of(p, q);
            let (f, _) = s.bivector_index_of(r, t);
            SparseVec::unit(s.s2_index(e, f))
        };
        assert_eq!(
            theta_ambient(s, &idx(a(1), b(1), a(2), b(2))),
            BigInt::zero()
        );
        assert_eq!(
            theta_ambient(s, &idx(a(1), a(2), b(1), b(2))),
            BigInt::from(-1)
        );
        let g = s.genus;
        let emb = s.embed_lambda4(
            &a(1).vector(g),
            &b(1).vector(g),
            &a(2).vector(g),
            &b(2).vector(g),
        );
        assert_eq!(theta_ambient(s, &emb.vec), BigInt::zero());
    }

    #[test]
    fn dbar_examples() {
        let br = setup();
        let s = &br.spaces;
        let prod = |p: BasisSymbol, q: BasisSymbol, r: BasisSymbol, t: BasisSymbol| {
            let (e, se) = s.bivector_index_of(p, q);
            let (f, sf) = s.bivector_index_of(r, t);
            SparseVec::unit(s.s2_index(e, f)).scaled(&BigInt::from(se * sf))
        };
        assert_eq!(
            dbar_prime_ambient(s, &prod(a(2), a(3), b(2), b(3))),
            BigInt::from(-2)
        );
        assert_eq!(
            dbar_prime_ambient(s, &prod(a(1), b(1), a(2), b(2))),
            BigInt::from(-4)
        );
    }

    #[test]
    fn d_identity_example_and_random() {
        let br = setup();
        let g = br.spaces.genus;
        let x = [a(1).vector(g), a(2).vector(g), a(3).vector(g)];
        let y = [b(1).vector(g), b(2).vector(g), b(3).vector(g)];
        assert_eq!(d_morita(&x, &y).unwrap(), BigInt::zero());
        // d' = 6 and 4B² = -1 here: 0 = 2·6 + 12·(-1)
        let u = br.spaces.wedge3(&x[0], &x[1], &x[2]);
        let v = br.spaces.wedge3(&y[0], &y[1], &y[2]);
        let pair = br.spaces.wedge_pair(&u, &v);
        let dprime = -dbar_prime_ambient(&br.spaces, &br.b0_ambient(&pair).vec);
        assert_eq!(dprime, BigInt::from(6));
        assert_eq!(br.b2_x4(&pair), BigInt::from(-1));
        verify_d_identity(&br, 200, 7).unwrap();
    }

    #[test]
    fn bscc_value_cross_checks() {
        let (d1, dpp1) = bscc_values(1);
        assert_eq!(d1, BigInt::zero());
        assert_eq!(dpp1, BigRational::new(BigInt::from(-1), BigInt::from(8)));
        let (d2v, dpp2) = bscc_values(2);
        assert_eq!(d2v, BigInt::from(8));
        assert_eq!(dpp2, BigRational::new(BigInt::from(-1), BigInt::from(4)));
        let br = Bracket::new(Genus::new(5).unwrap());
        for h in 1..=5 {
            verify_bscc_cross(&br, h).unwrap();
        }
    }

    #[test]
    fn theta_discrepancy_example() {
        let s = Spaces::new(Genus::new(3).unwrap());
        let g = s.genus;
        let x = [a(1).vector(g), a(2).vector(g), a(3).vector(g)];
        let y = [b(1).vector(g), b(2).vector(g), b(3).vector(g)];
        let (theta, tilde) = theta_discrepancy(&s, &x, &y).unwrap();
        assert_eq!(theta, BigInt::from(-3));
        assert_eq!(tilde, BigInt::from(-3));
        let allx = [a(1).vector(g), a(2).vector(g), b(3).vector(g)];
        let (t0, t1) = theta_discrepancy(&s, &allx, &allx).unwrap();
        assert_eq!(t0, BigInt::zero());
        assert_eq!(t1, BigInt::zero());
    }

    #[test]
    fn theta_mod4_short() {
        let br = setup();
        verify_theta_mod4(&br, 8, 11).unwrap();
    }

    #[test]
    fn uprime_lattice_g3() {
        let br = setup();
        let up = lattice_uprime(&br);
        assert_eq!(up.rank(), 106);
        let rank = br.quotient.rank() as u32;
        // (0, 8) ∈ U′, (0, 4) ∉ U′
        assert!(up.contains(&SparseVec::unit(rank).scaled(&BigInt::from(8))));
        assert!(!up.contains(&SparseVec::unit(rank).scaled(&BigInt::from(4))));
        // im(B⁰, 8B²) = U′(H)
        let im = image_uprime(&br);
        assert!(im.equal(&up).unwrap());
    }

    #[test]
    fn u_lattice_and_cocycle_g3() {
        let br = setup();
        let d2 = D2Model::new(&br);
        let u = lattice_u(&d2).unwrap();
        let rank = br.quotient.rank() as u32;
        // (0, 4) ∈ U(H)
        assert!(u.contains(&SparseVec::unit(rank).scaled(&BigInt::from(4))));
        assert!(!u.contains(&SparseVec::unit(rank).scaled(&BigInt::from(2))));
        // U′ ⊆ U under doubling
        let up = lattice_uprime(&br);
        for row in up.rows() {
            let doubled = SparseVec::from_terms(
                row.iter()
                    .map(|(c, v)| if c < rank { (c, v * 2) } else { (c, v.clone()) })
                    .collect(),
            );
            assert!(u.contains(&doubled));
        }
        // cocycle values on sample basis pairs lie in U(H) with z = 2·(4B²)
        for p in (0..br.spaces.pair_rank() as u32).step_by(11) {
            let v = ModuleVector {
                space: Space::Lambda2Lambda3,
                vec: SparseVec::unit(p),
            };
            let (_, z) = cocycle_c(&br, &d2, &u, &v).unwrap();
            assert_eq!(z, BigInt::from(2) * br.b2_x4(&v));
        }
    }

    #[test]
    fn exact_rows_g3() {
        let br = setup();
        let d2 = D2Model::new(&br);
        let rep = verify_exact_rows(&br, &d2).unwrap();
        assert!(rep.im_b0_equals_ker_trs);
        assert!(rep.trace_s_surjective);
        assert!(rep.trace_lambda_surjective);
    }

    #[test]
    fn form_b_values() {
        let s = Spaces::new(Genus::new(3).unwrap());
        let g = s.genus;
        let x = [a(1).vector(g), a(2).vector(g), a(3).vector(g)];
        let y = [b(1).vector(g), b(2).vector(g), b(3).vector(g)];
        assert_eq!(form_b(&x, &y), BigInt::one());
        // b(t, t̄) = ±1 for every sorted triple
        for idx in 0..s.lambda3_rank() as u32 {
            let t = s.trivector(idx);
            let xv = [t[0].vector(g), t[1].vector(g), t[2].vector(g)];
            let yv = [
                bar(t[0]).vector(g),
                bar(t[1]).vector(g),
                bar(t[2]).vector(g),
            ];
            assert!(form_b(&xv, &yv).abs().is_one());
        }
        assert!(gram_b_det(&s).is_one());
    }
}
