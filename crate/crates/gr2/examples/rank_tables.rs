//! Rank bookkeeping for the bracket pipeline across desk-scale genera:
//! Λ³H, Λ²(Λ³H), D′₂(H), the image of B, and the kernel K, together with
//! the two structural identities rank(im B) = rank D′₂ + 1 and
//! rank Λ²(Λ³H) = rank K + rank(im B).
//!
//! Run with: cargo run --release --example rank_tables

use gr2::bracket::Bracket;
use gr2::symplectic::Genus;

fn main() {
    println!("genus |  Λ³H  Λ²(Λ³H)  D′₂   im B     K   blocks");
    println!("------+--------------------------------------------");
    for g in 3..=5u32 {
        let bracket = Bracket::new(Genus::new(g).unwrap());
        let kernel = bracket.compute_k();
        let ranks = bracket.rank_certificate(&kernel.basis).unwrap();
        println!(
            "  {g}   | {:>5} {:>7} {:>5} {:>6} {:>6} {:>7}",
            ranks.lambda3,
            ranks.lambda2_lambda3,
            ranks.d2prime,
            ranks.image,
            ranks.kernel,
            kernel.block_count,
        );
        assert_eq!(ranks.image, ranks.d2prime + 1);
        assert_eq!(ranks.lambda2_lambda3, ranks.kernel + ranks.image);
    }
    println!();
    println!("Identities checked: im B = D′₂ + 1 and Λ²(Λ³H) = K + im B.");
}
