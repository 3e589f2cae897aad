//! The contraction-type decomposition of Λ²(Λ³H) and of the kernel K:
//! fine-label census of the pair basis, the component split
//! K = U₀ ⊕ (K∩U₁) ⊕ (K∩U₂) ⊕ (K∩U₃) with rank additivity, and the
//! per-component generation certificates.
//!
//! Run with: cargo run --release --example kernel_decomposition

use std::collections::BTreeMap;

use gr2::bracket::Bracket;
use gr2::relations::verify_component;
use gr2::spaces::Component;
use gr2::symplectic::Genus;

fn main() {
    let genus = Genus::new(4).unwrap();
    let bracket = Bracket::new(genus);
    let spaces = &bracket.spaces;

    let mut census: BTreeMap<String, usize> = BTreeMap::new();
    for p in 0..spaces.pair_rank() as u32 {
        let label = format!("{:?}", spaces.classify_pair(p).fine);
        *census.entry(label).or_default() += 1;
    }
    println!(
        "fine-label census of the {}-element pair basis:",
        spaces.pair_rank()
    );
    for (label, count) in &census {
        println!("  {label}: {count}");
    }
    let total: usize = census.values().sum();
    assert_eq!(total, spaces.pair_rank());

    let kernel = bracket.compute_k();
    let dec = bracket.check_k_decomposition(&kernel.basis).unwrap();
    println!();
    println!("kernel K has rank {}:", kernel.basis.rank());
    println!("  rank U0       = {}", dec.rank_u0);
    println!("  rank K ∩ U1   = {}", dec.rank_k_u1);
    println!("  rank K ∩ U2   = {}", dec.rank_k_u2);
    println!("  rank K ∩ U3   = {}", dec.rank_k_u3);
    println!(
        "  additivity: {} + {} + {} + {} = {}",
        dec.rank_u0,
        dec.rank_k_u1,
        dec.rank_k_u2,
        dec.rank_k_u3,
        kernel.basis.rank()
    );

    println!();
    for (i, comp) in [Component::U0, Component::U1, Component::U2, Component::U3]
        .iter()
        .enumerate()
    {
        let cert = verify_component(&bracket, *comp, &dec.components[i]).unwrap();
        println!(
            "  {comp:?}: {} distinguished generators close onto rank {} ({} sweeps)",
            cert.generator_count, cert.closure_rank, cert.closure_sweeps
        );
    }
}
