//! τ₁, τ₂ and the Birman–Craggs β evaluated on explicit homology data:
//! bounding-pair maps, pure-braid commutators, and bounding simple closed
//! curves, including the mod-2 interplay β ↔ τ₁ through the third
//! differential.
//!
//! Run with: cargo run --release --example johnson_images

use gr2::boolpoly::{beta_bp, beta_bscc, third_differential};
use gr2::bracket::Bracket;
use gr2::invariants::{tau1_bp, tau1_pb, tau2_bscc, tau2_bscc_ambient, BpData, BsccData, D2Model};
use gr2::symplectic::{BasisSymbol, Genus};

fn main() {
    let genus = Genus::new(3).unwrap();
    let bracket = Bracket::new(genus);
    let spaces = &bracket.spaces;
    let a = |i: u32| BasisSymbol::a(i).vector(genus);
    let b = |i: u32| BasisSymbol::b(i).vector(genus);

    // a genus-1 bounding pair with boundary class a2
    let bp = BpData::new(vec![(a(1), b(1))], a(2)).unwrap();
    let t1 = tau1_bp(spaces, &bp);
    let beta = beta_bp(&bp).unwrap();
    println!("genus-1 bounding pair (u,v;e) = (a1,b1;a2):");
    println!("  tau1 = {}", spaces.format_lambda3(&t1));
    println!("  beta = {beta}");
    // the cubic part of β matches τ₁ mod 2
    let d3 = third_differential(spaces, &beta);
    let ones: Vec<usize> = d3.ones().collect();
    println!("  third differential of beta hits trivector index {ones:?}");

    // a pure-braid commutator
    let t1 = tau1_pb(spaces, &a(1), &a(2), &b(3));
    println!("pure-braid data (x,y,z) = (a1,a2,b3):");
    println!("  tau1 = {}", spaces.format_lambda3(&t1));

    // bounding simple closed curves of genus 1 and 2
    let d2 = D2Model::new(&bracket);
    for h in [1u32, 2] {
        let data = BsccData::standard(genus, h);
        let doubled = tau2_bscc_ambient(spaces, &data);
        let coords = tau2_bscc(&d2, &data).unwrap();
        let tr = d2.trace_lambda(&coords).unwrap();
        println!("genus-{h} bounding curve, standard handles:");
        println!("  2·tau2 = {}", spaces.format_s2(&doubled.vec));
        println!("  beta   = {}", beta_bscc(&data).unwrap());
        println!("  Tr^Λ(tau2) = 0: {}", tr.is_zero());
    }

    // a curve whose subsurface basis mixes handles
    let mixed = BsccData::new(vec![(a(1), b(1).add(&b(2)).unwrap())]).unwrap();
    println!("curve with (u,v) = (a1, b1+b2):");
    println!("  beta = {}", beta_bscc(&mixed).unwrap());
}
