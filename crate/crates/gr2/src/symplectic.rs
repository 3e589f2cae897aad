//! The genus-parametric symplectic lattice H = ℤ^{2g}, its distinguished
//! basis {a_1, b_1, ..., a_g, b_g}, the intersection form ω, the bar
//! involution, and the matrix groups Sp(H) and G acting on H.
//!
//! Sign convention, fixed once for the whole crate: ω(a_i, b_j) = δ_{ij},
//! ω(a_i, a_j) = ω(b_i, b_j) = 0. The basis is totally ordered as
//! a_1 < b_1 < a_2 < b_2 < ... so that the bar involution swaps adjacent
//! symbols and the handle index N is read off contiguous blocks.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("genus must be at least 3, got {0}")]
    GenusTooSmall(u32),
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),
    #[error("map is not symplectic: ω({x}, {y}) would change from {expected} to {actual}")]
    NonSymplectic {
        x: BasisSymbol,
        y: BasisSymbol,
        expected: BigInt,
        actual: BigInt,
    },
}

/// Surface genus; the standing hypothesis g ≥ 3 is enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Genus(u32);

impl Genus {
    pub fn new(g: u32) -> Result<Self, SymplecticError> {
        if g < 3 {
            Err(SymplecticError::GenusTooSmall(g))
        } else {
            Ok(Genus(g))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Rank of H, i.e. 2g.
    pub fn dim(self) -> usize {
        2 * self.0 as usize
    }

    /// All basis symbols in the fixed total order a_1 < b_1 < a_2 < ...
    pub fn symbols(self) -> impl Iterator<Item = BasisSymbol> {
        (0..self.dim()).map(BasisSymbol::from_position)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    A,
    B,
}

/// One of the 2g distinguished basis symbols a_i, b_i (index is 1-based).
/// The derived `Ord` is the fixed total order a_1 < b_1 < a_2 < b_2 < ...
/// because `index` is compared before `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSymbol {
    pub index: u32,
    pub kind: SymbolKind,
}

impl PartialOrd for BasisSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisSymbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.position().cmp(&other.position())
    }
}

impl BasisSymbol {
    pub fn a(index: u32) -> Self {
        debug_assert!(index >= 1);
        BasisSymbol {
            index,
            kind: SymbolKind::A,
        }
    }

    pub fn b(index: u32) -> Self {
        debug_assert!(index >= 1);
        BasisSymbol {
            index,
            kind: SymbolKind::B,
        }
    }

    /// Position in the total order, from 0 to 2g-1.
    pub fn position(self) -> usize {
        2 * (self.index as usize - 1)
            + match self.kind {
                SymbolKind::A => 0,
                SymbolKind::B => 1,
            }
    }

    pub fn from_position(pos: usize) -> Self {
        let index = (pos / 2) as u32 + 1;
        if pos % 2 == 0 {
            BasisSymbol::a(index)
        } else {
            BasisSymbol::b(index)
        }
    }

    pub fn vector(self, genus: Genus) -> SymVector {
        let mut coords = vec![BigInt::zero(); genus.dim()];
        coords[self.position()] = BigInt::one();
        SymVector { genus, coords }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::A => write!(f, "a{}", self.index),
            SymbolKind::B => write!(f, "b{}", self.index),
        }
    }
}

/// The bar involution: a_i ↦ b_i, b_i ↦ a_i.
pub fn bar(s: BasisSymbol) -> BasisSymbol {
    BasisSymbol {
        index: s.index,
        kind: match s.kind {
            SymbolKind::A => SymbolKind::B,
            SymbolKind::B => SymbolKind::A,
        },
    }
}

/// ε(s) = ω(s, s̄): +1 on a-symbols, -1 on b-symbols.
pub fn epsilon(s: BasisSymbol) -> i64 {
    match s.kind {
        SymbolKind::A => 1,
        SymbolKind::B => -1,
    }
}

/// The handle index N(a_i) = N(b_i) = i.
pub fn nmap(s: BasisSymbol) -> u32 {
    s.index
}

/// ω on basis symbols, as an i64 in {-1, 0, 1}.
pub fn omega_symbols(x: BasisSymbol, y: BasisSymbol) -> i64 {
    if x.index != y.index {
        return 0;
    }
    match (x.kind, y.kind) {
        (SymbolKind::A, SymbolKind::B) => 1,
        (SymbolKind::B, SymbolKind::A) => -1,
        _ => 0,
    }
}

/// An element of H: a formal ℤ-linear combination of the basis symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymVector {
    genus: Genus,
    coords: Vec<BigInt>,
}

impl SymVector {
    pub fn zero(genus: Genus) -> Self {
        SymVector {
            genus,
            coords: vec![BigInt::zero(); genus.dim()],
        }
    }

    pub fn from_coords(genus: Genus, coords: Vec<BigInt>) -> Result<Self, SymplecticError> {
        if coords.len() != genus.dim() {
            return Err(SymplecticError::GenusMismatch(
                genus.get(),
                coords.len() as u32 / 2,
            ));
        }
        Ok(SymVector { genus, coords })
    }

    /// Convenience constructor from small integer coordinates.
    pub fn from_i64(genus: Genus, coords: &[i64]) -> Result<Self, SymplecticError> {
        Self::from_coords(genus, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coeff(&self, s: BasisSymbol) -> &BigInt {
        &self.coords[s.position()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &SymVector) -> Result<SymVector, SymplecticError> {
        self.check_genus(other)?;
        Ok(SymVector {
            genus: self.genus,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }

    pub fn scaled(&self, k: i64) -> SymVector {
        SymVector {
            genus: self.genus,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Bar involution extended linearly: swaps the a_i and b_i coefficients.
    pub fn bar(&self) -> SymVector {
        let mut coords = self.coords.clone();
        for i in 0..self.genus.get() as usize {
            coords.swap(2 * i, 2 * i + 1);
        }
        SymVector {
            genus: self.genus,
            coords,
        }
    }

    fn check_genus(&self, other: &SymVector) -> Result<(), SymplecticError> {
        if self.genus != other.genus {
            return Err(SymplecticError::GenusMismatch(
                self.genus.get(),
                other.genus.get(),
            ));
        }
        Ok(())
    }
}

/// The symplectic form ω(x, y) = Σ_i (x_{a_i} y_{b_i} - x_{b_i} y_{a_i}).
pub fn omega(x: &SymVector, y: &SymVector) -> Result<BigInt, SymplecticError> {
    x.check_genus(y)?;
    let mut acc = BigInt::zero();
    for i in 0..x.genus.get() as usize {
        acc += &x.coords[2 * i] * &y.coords[2 * i + 1];
        acc -= &x.coords[2 * i + 1] * &y.coords[2 * i];
    }
    Ok(acc)
}

/// A 2g x 2g integer matrix preserving ω (columns are the images of the
/// ordered basis).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpMatrix {
    genus: Genus,
    entries: Vec<Vec<BigInt>>, // row-major
}

impl SpMatrix {
    pub fn identity(genus: Genus) -> Self {
        let n = genus.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        SpMatrix { genus, entries }
    }

    /// Builds from images of the basis symbols and verifies symplecticity.
    pub fn from_images(
        genus: Genus,
        image: impl Fn(BasisSymbol) -> SymVector,
    ) -> Result<Self, SymplecticError> {
        let n = genus.dim();
        let cols: Vec<SymVector> = genus.symbols().map(image).collect();
        for c in &cols {
            if c.genus != genus {
                return Err(SymplecticError::GenusMismatch(genus.get(), c.genus.get()));
            }
        }
        let entries = (0..n)
            .map(|r| (0..n).map(|c| cols[c].coords[r].clone()).collect())
            .collect();
        let m = SpMatrix { genus, entries };
        m.check_symplectic()?;
        Ok(m)
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn entries(&self) -> &Vec<Vec<BigInt>> {
        &self.entries
    }

    pub fn apply(&self, x: &SymVector) -> SymVector {
        let n = self.genus.dim();
        let mut coords = vec![BigInt::zero(); n];
        for (j, xc) in x.coords.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (i, c) in coords.iter_mut().enumerate() {
                *c += &self.entries[i][j] * xc;
            }
        }
        SymVector {
            genus: self.genus,
            coords,
        }
    }

    pub fn apply_symbol(&self, s: BasisSymbol) -> SymVector {
        let n = self.genus.dim();
        let j = s.position();
        let coords = (0..n).map(|i| self.entries[i][j].clone()).collect();
        SymVector {
            genus: self.genus,
            coords,
        }
    }

    pub fn compose(&self, other: &SpMatrix) -> SpMatrix {
        // (self ∘ other)(x) = self(other(x))
        let n = self.genus.dim();
        let mut entries = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !other.entries[k][j].is_zero() {
                        entries[i][j] += &self.entries[i][k] * &other.entries[k][j];
                    }
                }
            }
        }
        SpMatrix {
            genus: self.genus,
            entries,
        }
    }

    /// For symplectic M the inverse is -Ω Mᵀ Ω.
    pub fn inverse(&self) -> SpMatrix {
        let g = self.genus.get() as usize;
        let n = self.genus.dim();
        // (Ω x)_a_i = x_{b_i}, (Ω x)_b_i = -x_{a_i}  in our basis order
        let omega_apply = |m: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            let mut out = vec![vec![BigInt::zero(); n]; n];
            for i in 0..g {
                for j in 0..n {
                    out[2 * i][j] = m[2 * i + 1][j].clone();
                    out[2 * i + 1][j] = -m[2 * i][j].clone();
                }
            }
            out
        };
        let transpose: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        // right multiplication by Ω, done columnwise on Mᵀ
        let mt_omega: Vec<Vec<BigInt>> = {
            let mut out = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for k in 0..g {
                    // column 2k of Ω is -e_{2k+1}; column 2k+1 is e_{2k}
                    out[i][2 * k] = -transpose[i][2 * k + 1].clone();
                    out[i][2 * k + 1] = transpose[i][2 * k].clone();
                }
            }
            out
        };
        let mut entries = omega_apply(&mt_omega);
        for row in &mut entries {
            for e in row.iter_mut() {
                let v = -std::mem::take(e);
                *e = v;
            }
        }
        let inv = SpMatrix {
            genus: self.genus,
            entries,
        };
        debug_assert!(inv
            .compose(self)
            .entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, e)| if i == j {
                e.is_one()
            } else {
                e.is_zero()
            })));
        inv
    }

    pub fn is_symplectic(&self) -> bool {
        self.check_symplectic().is_ok()
    }

    fn check_symplectic(&self) -> Result<(), SymplecticError> {
        for x in self.genus.symbols() {
            for y in self.genus.symbols() {
                if y.position() <= x.position() {
                    continue;
                }
                let expected = BigInt::from(omega_symbols(x, y));
                let actual =
                    omega(&self.apply_symbol(x), &self.apply_symbol(y)).expect("same genus");
                if actual != expected {
                    return Err(SymplecticError::NonSymplectic {
                        x,
                        y,
                        expected,
                        actual,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The quarter-turn E_i: (a_i, b_i) ↦ (-b_i, a_i), fixing everything else.
pub fn e_generator(genus: Genus, i: u32) -> SpMatrix {
    SpMatrix::from_images(genus, |s| {
        if s.index == i {
            match s.kind {
                SymbolKind::A => BasisSymbol::b(i).vector(genus).scaled(-1),
                SymbolKind::B => BasisSymbol::a(i).vector(genus),
            }
        } else {
            s.vector(genus)
        }
    })
    .expect("E_i is symplectic")
}

/// The handle swap F_ij: (a_i, b_i) ↔ (a_j, b_j), fixing everything else.
pub fn f_generator(genus: Genus, i: u32, j: u32) -> SpMatrix {
    debug_assert!(i != j);
    SpMatrix::from_images(genus, |s| {
        if s.index == i {
            BasisSymbol {
                index: j,
                kind: s.kind,
            }
            .vector(genus)
        } else if s.index == j {
            BasisSymbol {
                index: i,
                kind: s.kind,
            }
            .vector(genus)
        } else {
            s.vector(genus)
        }
    })
    .expect("F_ij is symplectic")
}

/// All generators E_i (1 ≤ i ≤ g) and F_ij (i < j) of the group
/// G ≅ ℤ₄^g ⋊ S_g.
pub fn g_generators(genus: Genus) -> Vec<SpMatrix> {
    let g = genus.get();
    let mut out = Vec::new();
    for i in 1..=g {
        out.push(e_generator(genus, i));
    }
    for i in 1..=g {
        for j in i + 1..=g {
            out.push(f_generator(genus, i, j));
        }
    }
    out
}

/// A sufficient generating subset of G for span closures: the E_i and the
/// adjacent transpositions F_{i,i+1}.
pub fn g_generators_small(genus: Genus) -> Vec<SpMatrix> {
    let g = genus.get();
    let mut out = Vec::new();
    for i in 1..=g {
        out.push(e_generator(genus, i));
    }
    for i in 1..g {
        out.push(f_generator(genus, i, i + 1));
    }
    out
}

/// Builds the symplectic map sending each listed symbol to its image and
/// fixing every unlisted basis symbol. Errors if the result does not
/// preserve ω.
pub fn partial_symplectic(
    genus: Genus,
    images: &[(BasisSymbol, SymVector)],
) -> Result<SpMatrix, SymplecticError> {
    SpMatrix::from_images(genus, |s| {
        images
            .iter()
            .find(|(sym, _)| *sym == s)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| s.vector(genus))
    })
}

/// The symplectic transvection x ↦ x + ω(x, v) v.
pub fn transvection(genus: Genus, v: &SymVector) -> SpMatrix {
    SpMatrix::from_images(genus, |s| {
        let w = omega(&s.vector(genus), v).expect("same genus");
        let mut img = s.vector(genus);
        if !w.is_zero() {
            let coords = img
                .coords
                .iter()
                .zip(v.coords())
                .map(|(x, vc)| x + vc * &w)
                .collect();
            img = SymVector { genus, coords };
        }
        img
    })
    .expect("transvections are symplectic")
}

/// Deterministic pseudo-random element of Sp(H): a product of `steps`
/// uniformly chosen elements of a fixed generator list (transvections about
/// a_i, b_i, a_i + b_i, a_i + a_{i+1}, plus E_i and F_{i,i+1}), driven by a
/// counter-based stream cipher so results are reproducible bit for bit.
pub fn random_symplectic(genus: Genus, seed: u64, steps: u32) -> SpMatrix {
    let g = genus.get();
    let mut gens: Vec<SpMatrix> = Vec::new();
    for i in 1..=g {
        let ai = BasisSymbol::a(i).vector(genus);
        let bi = BasisSymbol::b(i).vector(genus);
        gens.push(transvection(genus, &ai));
        gens.push(transvection(genus, &bi));
        gens.push(transvection(genus, &ai.add(&bi).expect("same genus")));
        if i < g {
            let ai1 = BasisSymbol::a(i + 1).vector(genus);
            gens.push(transvection(genus, &ai.add(&ai1).expect("same genus")));
        }
    }
    gens.extend(g_generators_small(genus));

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut m = SpMatrix::identity(genus);
    for _ in 0..steps {
        let k = rng.gen_range(0..gens.len());
        m = gens[k].compose(&m);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn g3() -> Genus {
        Genus::new(3).unwrap()
    }

    fn sym(genus: Genus, s: BasisSymbol) -> SymVector {
        s.vector(genus)
    }

    #[test]
    fn omega_convention() {
        let g = g3();
        let a1 = sym(g, BasisSymbol::a(1));
        let a2 = sym(g, BasisSymbol::a(2));
        let b1 = sym(g, BasisSymbol::b(1));
        assert_eq!(omega(&a1, &b1).unwrap(), BigInt::from(1));
        assert_eq!(omega(&a1, &a2).unwrap(), BigInt::from(0));
        assert_eq!(omega(&b1, &a1).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn genus_mismatch_rejected() {
        let x = sym(g3(), BasisSymbol::a(1));
        let y = sym(Genus::new(4).unwrap(), BasisSymbol::b(1));
        assert!(matches!(
            omega(&x, &y),
            Err(SymplecticError::GenusMismatch(3, 4))
        ));
    }

    #[test]
    fn bar_epsilon_nmap() {
        assert_eq!(bar(BasisSymbol::a(3)), BasisSymbol::b(3));
        assert_eq!(bar(BasisSymbol::b(1)), BasisSymbol::a(1));
        assert_eq!(bar(bar(BasisSymbol::a(2))), BasisSymbol::a(2));
        assert_eq!(epsilon(BasisSymbol::a(1)), 1);
        assert_eq!(epsilon(BasisSymbol::b(2)), -1);
        for s in g3().symbols() {
            assert_eq!(epsilon(s) * epsilon(bar(s)), -1);
            assert_eq!(
                BigInt::from(epsilon(s)),
                omega(&s.vector(g3()), &bar(s).vector(g3())).unwrap()
            );
        }
        assert_eq!(nmap(BasisSymbol::a(4)), 4);
        assert_eq!(nmap(BasisSymbol::b(4)), 4);
        assert_eq!(nmap(BasisSymbol::a(1)), 1);
    }

    #[test]
    fn basis_order() {
        let order: Vec<BasisSymbol> = g3().symbols().collect();
        assert_eq!(order[0], BasisSymbol::a(1));
        assert_eq!(order[1], BasisSymbol::b(1));
        assert_eq!(order[2], BasisSymbol::a(2));
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn e_and_f_generators() {
        let g = g3();
        let e1 = e_generator(g, 1);
        assert_eq!(
            e1.apply_symbol(BasisSymbol::a(1)),
            sym(g, BasisSymbol::b(1)).scaled(-1)
        );
        let f12 = f_generator(g, 1, 2);
        assert_eq!(
            f12.apply_symbol(BasisSymbol::a(1)),
            sym(g, BasisSymbol::a(2))
        );
        assert_eq!(
            f12.apply_symbol(BasisSymbol::b(1)),
            sym(g, BasisSymbol::b(2))
        );
        for m in g_generators(g) {
            assert!(m.is_symplectic());
        }
        // E_i^2 = -1 on the (a_i, b_i) plane: order 4
        let e2 = e1.compose(&e1);
        let e4 = e2.compose(&e2);
        assert_eq!(e4, SpMatrix::identity(g));
        assert_ne!(e2, SpMatrix::identity(g));
    }

    #[test]
    fn bar_commutes_with_f() {
        let g = g3();
        let f = f_generator(g, 1, 3);
        let v = SymVector::from_i64(g, &[1, -2, 3, 0, 5, 7]).unwrap();
        assert_eq!(f.apply(&v.bar()), f.apply(&v).bar());
    }

    #[test]
    fn group_closure_order_g3() {
        // |G| = 4^g g! = 384 for g = 3, by brute-force closure
        let g = g3();
        let gens = g_generators(g);
        let mut seen: HashSet<Vec<Vec<BigInt>>> = HashSet::new();
        let mut frontier = vec![SpMatrix::identity(g)];
        seen.insert(SpMatrix::identity(g).entries().clone());
        while let Some(m) = frontier.pop() {
            for gen in &gens {
                let next = gen.compose(&m);
                if seen.insert(next.entries().clone()) {
                    frontier.push(next);
                }
            }
        }
        assert_eq!(seen.len(), 384);
    }

    #[test]
    fn partial_symplectic_examples() {
        let g = g3();
        // b1 ↦ b1 + a1 (a Dehn-twist-like transvection) is symplectic
        let img = sym(g, BasisSymbol::b(1))
            .add(&sym(g, BasisSymbol::a(1)))
            .unwrap();
        let c1 = partial_symplectic(g, &[(BasisSymbol::b(1), img)]).unwrap();
        assert!(c1.is_symplectic());

        // b1 ↦ b1 + a2, b2 ↦ b2 + a1 is symplectic
        let d1 = partial_symplectic(
            g,
            &[
                (
                    BasisSymbol::b(1),
                    sym(g, BasisSymbol::b(1))
                        .add(&sym(g, BasisSymbol::a(2)))
                        .unwrap(),
                ),
                (
                    BasisSymbol::b(2),
                    sym(g, BasisSymbol::b(2))
                        .add(&sym(g, BasisSymbol::a(1)))
                        .unwrap(),
                ),
            ],
        )
        .unwrap();
        assert!(d1.is_symplectic());

        // a1 ↦ a1 + a2 alone breaks ω(a1, b2) = 0
        let bad = partial_symplectic(
            g,
            &[(
                BasisSymbol::a(1),
                sym(g, BasisSymbol::a(1))
                    .add(&sym(g, BasisSymbol::a(2)))
                    .unwrap(),
            )],
        );
        assert!(matches!(bad, Err(SymplecticError::NonSymplectic { .. })));
    }

    #[test]
    fn random_symplectic_deterministic() {
        let g = g3();
        assert_eq!(random_symplectic(g, 5, 0), SpMatrix::identity(g));
        let m1 = random_symplectic(g, 42, 25);
        let m2 = random_symplectic(g, 42, 25);
        assert_eq!(m1, m2);
        assert!(m1.is_symplectic());
        assert_ne!(random_symplectic(g, 43, 25), m1);
        // inverse really inverts
        let inv = m1.inverse();
        assert_eq!(inv.compose(&m1), SpMatrix::identity(g));
    }
}
