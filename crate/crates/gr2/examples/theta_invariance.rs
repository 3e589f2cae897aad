//! The Θ contraction and its basis independence: Θ(B⁰(x∧y)) compared to
//! -3·det(ω(x_i,y_j)) (always congruent mod 4), and Θ mod 4 stability on
//! ker Tr^S classes under random symplectic changes of basis.
//!
//! Run with: cargo run --release --example theta_invariance

use gr2::bracket::Bracket;
use gr2::invariants::{apply_s2, theta_ambient, theta_discrepancy, verify_theta_mod4};
use gr2::spaces::{ModuleVector, Space};
use gr2::symplectic::{random_symplectic, BasisSymbol, Genus};

fn main() {
    let genus = Genus::new(3).unwrap();
    let bracket = Bracket::new(genus);
    let spaces = &bracket.spaces;
    let a = |i: u32| BasisSymbol::a(i).vector(genus);
    let b = |i: u32| BasisSymbol::b(i).vector(genus);

    let x = [a(1), a(2), a(3)];
    let y = [b(1), b(2), b(3)];
    let (theta, tilde) = theta_discrepancy(spaces, &x, &y).unwrap();
    println!("x = (a1,a2,a3), y = (b1,b2,b3):");
    println!("  θ  = Θ(B⁰(x∧y))        = {theta}");
    println!("  θ̃  = -3·det ω(x_i,y_j) = {tilde}");
    println!("  difference in 4ℤ: {}", (&theta - &tilde) % 4 == 0.into());

    // follow one class through a few random symplectic basis changes
    let v = ModuleVector {
        space: Space::Lambda2Lambda3,
        vec: gr2::linalg::SparseVec::unit(17),
    };
    let ambient = bracket.b0_ambient(&v).vec;
    let theta0 = theta_ambient(spaces, &ambient);
    println!();
    println!("Θ of one im(B⁰) class under random symplectic bases:");
    println!("  standard basis: {theta0}");
    for seed in 0..5u64 {
        let m = random_symplectic(genus, seed, 15);
        let moved = apply_s2(spaces, &m.inverse(), &ambient);
        let theta1 = theta_ambient(spaces, &moved);
        println!(
            "  seed {seed}: {theta1}  (≡ {} mod 4)",
            ((&theta1 % 4) + 4) % 4
        );
        assert_eq!((&theta0 - &theta1) % 4, 0.into());
    }

    verify_theta_mod4(&bracket, 100, 0).unwrap();
    println!();
    println!("Θ mod 4 invariance verified over 100 seeded basis changes.");
}
