//! The boolean polynomial algebra on quadratic forms: dimensions by degree,
//! the stabilizer closure that generates the degree-two part from five
//! monomials, and the fibered-product model of the abelianized Torelli
//! group with its order-two torsion.
//!
//! Run with: cargo run --release --example birman_craggs

use gr2::boolpoly::{
    abelianization_structure, dim_b, evaluate, evaluation_faithful, hbar, sp_action, sp_lemma_maps,
    verify_lemma_sp, BoolPoly, QuadForm,
};
use gr2::spaces::Spaces;
use gr2::symplectic::{BasisSymbol, Genus};

fn main() {
    let genus = Genus::new(3).unwrap();
    let a = |i: u32| BasisSymbol::a(i);
    let b = |i: u32| BasisSymbol::b(i);

    println!("dim B_{{≤k}}(𝒬) at genus 3:");
    for k in 0..=3 {
        println!("  k = {k}: {}", dim_b(genus, k));
    }
    println!(
        "evaluation faithful on squarefree normal forms: {}",
        evaluation_faithful(genus)
    );

    // quadraticity in action
    let g = genus;
    let h = a(1).vector(g).add(&b(1).vector(g)).unwrap();
    println!();
    println!("(a1+b1)‾ = {}", hbar(&h));
    let q = QuadForm(0b000011); // q(a1) = q(b1) = 1
    println!(
        "value at the form with q(a1)=q(b1)=1: {}",
        evaluate(&hbar(&h), q)
    );

    // the stabilizer action
    let maps = sp_lemma_maps(genus);
    let b1 = BoolPoly::variable(b(1));
    println!();
    println!("C1 · b̄1 = {}", sp_action(&maps[0], &b1));
    let ab2 = BoolPoly::variable(a(2))
        .mul(&BoolPoly::variable(b(2)))
        .unwrap();
    println!("D2 · ā2b̄2 = {}", sp_action(&maps[2], &ab2));

    let rep = verify_lemma_sp(genus).unwrap();
    println!(
        "five monomials close onto all of B_{{≤2}}: dim {} of {} in {} sweeps",
        rep.closure_dim, rep.target_dim, rep.sweeps
    );

    // exploratory: how far do the first four generators get on their own?
    {
        use gr2::boolpoly::MonomialBasis;
        use gr2::linalg::gf2::BitEchelon;
        let basis = MonomialBasis::new(genus, 2);
        let gens = [(a(1), b(1)), (a(2), b(2)), (a(3), b(3)), (a(1), b(2))];
        let mut ech = BitEchelon::new();
        let mut polys: Vec<BoolPoly> = gens
            .iter()
            .map(|&(x, y)| BoolPoly::variable(x).mul(&BoolPoly::variable(y)).unwrap())
            .collect();
        for p in &polys {
            ech.insert(p.to_bits(&basis));
        }
        loop {
            let snapshot = polys.clone();
            let mut grew = false;
            for m in &maps {
                for p in &snapshot {
                    let img = sp_action(m, p);
                    if ech.insert(img.to_bits(&basis)) {
                        polys.push(img);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        println!(
            "dropping ā3b̄2 leaves a closure of dim {} (of {})",
            ech.rank(),
            basis.len()
        );
    }

    println!();
    for gg in [3u32, 4] {
        let spaces = Spaces::new(Genus::new(gg).unwrap());
        let (free, torsion) = abelianization_structure(&spaces);
        println!(
            "abelianization model at genus {gg}: ℤ^{free} ⊕ (ℤ₂)^{} (exponent two: {})",
            torsion.len(),
            torsion.iter().all(|d| *d == 2.into())
        );
    }
}
