//! The diagrammatic bracket on explicit wedges of elementary trivectors,
//! and a look at the integral kernel K: B⁰ values, the 4·B² theta values,
//! a few kernel basis vectors in pair-string form, and the saturation
//! certificate for the quotient by K.
//!
//! Run with: cargo run --release --example bracket_kernel

use gr2::bracket::Bracket;
use gr2::spaces::{ModuleVector, Space};
use gr2::symplectic::{BasisSymbol, Genus};

fn main() {
    let genus = Genus::new(3).unwrap();
    let bracket = Bracket::new(genus);
    let spaces = &bracket.spaces;
    let a = BasisSymbol::a;
    let b = BasisSymbol::b;

    // B⁰ contracts trivector pairs through ω; a pair with no mixed
    // contraction maps to zero, a fully dual pair hits three products.
    let examples = [
        ([a(1), a(2), a(3)], [b(1), b(2), b(3)]),
        ([a(1), b(1), a(2)], [a(2), a(3), b(3)]),
        ([a(1), a(2), a(3)], [b(3), a(2), b(1)]),
    ];
    for (t1, t2) in examples {
        let v = spaces.pair_of_symbols(t1, t2);
        let ambient = bracket.b0_ambient(&v);
        let theta = bracket.b2_x4(&v);
        println!(
            "B( {}{}{} | {}{}{} ):",
            t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]
        );
        println!("  B0      = {}", spaces.format_s2(&ambient.vec));
        println!("  4*B2    = {theta}");
    }

    let kernel = bracket.compute_k();
    println!();
    println!(
        "kernel K: rank {}, digest {}",
        kernel.basis.rank(),
        &kernel.basis.digest()[..16]
    );
    println!("first kernel basis vectors:");
    for row in kernel.basis.rows().iter().take(4) {
        let terms: Vec<String> = row
            .iter()
            .map(|(p, c)| {
                let (i, j) = spaces.pair_of_index(p);
                let part =
                    |t: [BasisSymbol; 3]| t.iter().map(|s| s.to_string()).collect::<String>();
                format!(
                    "{c}·<{}|{}>",
                    part(spaces.trivector(i)),
                    part(spaces.trivector(j))
                )
            })
            .collect();
        println!("  {}", terms.join(" + "));
        let check = bracket.apply(row);
        assert!(check.is_zero());
    }
    assert!(kernel.basis.is_saturated());
    println!("every basis vector satisfies B·k = 0; the quotient by K is torsion-free.");

    // the theta row is exactly -det of the ω-Gram matrix
    let v = ModuleVector {
        space: Space::Lambda2Lambda3,
        vec: gr2::linalg::SparseVec::unit(0),
    };
    let _ = bracket.b2_x4(&v);
}
