//! The congruence lattices U′(H) and U(H): membership spot checks, the
//! lattice equality im(B⁰, 8B²) = U′(H), inclusion of U′ in U, the
//! extension cocycle landing in U(H), and exactness of the trace rows.
//!
//! Run with: cargo run --release --example group_lattices

use num_bigint::BigInt;

use gr2::bracket::Bracket;
use gr2::invariants::{
    cocycle_c, image_uprime, lattice_u, lattice_uprime, verify_exact_rows, D2Model,
};
use gr2::linalg::SparseVec;
use gr2::spaces::{ModuleVector, Space};
use gr2::symplectic::Genus;

fn main() {
    let genus = Genus::new(3).unwrap();
    let bracket = Bracket::new(genus);
    let z_col = bracket.quotient.rank() as u32;

    let uprime = lattice_uprime(&bracket);
    let image = image_uprime(&bracket);
    println!(
        "U′(H): rank {}, digest {}…",
        uprime.rank(),
        &uprime.digest()[..12]
    );
    println!(
        "im(B⁰, 8B²) equals U′(H): {}",
        image.equal(&uprime).unwrap()
    );

    let at_z = |k: i64| SparseVec::unit(z_col).scaled(&BigInt::from(k));
    println!("(0,8) ∈ U′: {}", uprime.contains(&at_z(8)));
    println!("(0,4) ∈ U′: {}", uprime.contains(&at_z(4)));

    let d2 = D2Model::new(&bracket);
    let u = lattice_u(&d2).unwrap();
    println!("(0,4) ∈ U:  {}", u.contains(&at_z(4)));
    println!("(0,2) ∈ U:  {}", u.contains(&at_z(2)));

    // U′ ⊆ U once D′₂ classes are doubled into the D₂ model
    let included = uprime.rows().iter().all(|row| {
        let doubled = SparseVec::from_terms(
            row.iter()
                .map(|(c, v)| {
                    if c < z_col {
                        (c, v * 2)
                    } else {
                        (c, v.clone())
                    }
                })
                .collect(),
        );
        u.contains(&doubled)
    });
    println!("U′(H) ⊆ U(H) under doubling: {included}");

    // cocycle values on a few basis pairs
    println!();
    for p in [0u32, 17, 100] {
        let v = ModuleVector {
            space: Space::Lambda2Lambda3,
            vec: SparseVec::unit(p),
        };
        let (tree, z) = cocycle_c(&bracket, &d2, &u, &v).unwrap();
        println!(
            "cocycle on pair {p}: tree part has {} coordinates, z = {z} ∈ U(H)",
            tree.vec.nnz()
        );
    }

    let rows = verify_exact_rows(&bracket, &d2).unwrap();
    println!();
    println!("im B⁰ = ker Tr^S:            {}", rows.im_b0_equals_ker_trs);
    println!("Tr^S onto ker ω̄ (S²H⊗ℤ₂):   {}", rows.trace_s_surjective);
    println!(
        "Tr^Λ onto ker ω̄ (Λ²H⊗ℤ₂):   {}",
        rows.trace_lambda_surjective
    );
}
