//! Property tests for the exact-linear-algebra invariants: canonical forms,
//! saturation, quotient well-definedness, closure stability, and the
//! multilinear sign conventions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use gr2::linalg::{
    hnf, integer_kernel, snf, span_closure, IntMatrix, LatticeBasis, QuotientLattice, SparseVec,
};
use gr2::spaces::Spaces;
use gr2::symplectic::{omega, Genus, SymVector};

mod oracle;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-4i64..=4, cols), rows)
}

fn to_int_matrix(m: &[Vec<i64>]) -> IntMatrix {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    IntMatrix::from_rows(
        cols,
        m.iter()
            .map(|r| {
                SparseVec::from_terms(
                    r.iter()
                        .enumerate()
                        .map(|(i, &v)| (i as u32, BigInt::from(v)))
                        .collect(),
                )
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_idempotent_and_order_free(m in small_matrix(5, 4)) {
        let mat = to_int_matrix(&m);
        let h1 = hnf(&mat);
        let h2 = hnf(&h1);
        prop_assert_eq!(h1.rows(), h2.rows());
        let mut rev = m.clone();
        rev.reverse();
        let h3 = hnf(&to_int_matrix(&rev));
        prop_assert_eq!(h1.rows(), h3.rows());
    }

    #[test]
    fn snf_chain_and_transforms(m in small_matrix(4, 5)) {
        let dense: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let s = snf(&dense, 5);
        for w in s.diag.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(gr2::linalg::dense::is_unimodular(&s.u));
        prop_assert!(gr2::linalg::dense::is_unimodular(&s.v));
        // rank agrees with the independent dense oracle
        prop_assert_eq!(s.diag.len(), oracle::bareiss_rank(&dense));
    }

    #[test]
    fn kernel_saturated_and_complementary(m in small_matrix(6, 5)) {
        let mat = to_int_matrix(&m);
        let k = integer_kernel(&mat);
        for row in k.rows() {
            prop_assert!(mat.mul_vec(row).is_zero());
        }
        let dense: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        prop_assert_eq!(k.rank() + oracle::bareiss_rank(&dense), 5);
        prop_assert!(k.is_saturated());
    }

    #[test]
    fn quotient_reduce_well_defined(
        rel in small_matrix(2, 4),
        v in proptest::collection::vec(-6i64..=6, 4),
        coeffs in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let q = QuotientLattice::new(4, to_int_matrix(&rel).rows().to_vec());
        if !q.torsion_factors().is_empty() {
            // torsion quotients have no free canonical coordinates; skip
            return Ok(());
        }
        let vec = SparseVec::from_terms(
            v.iter().enumerate().map(|(i, &x)| (i as u32, BigInt::from(x))).collect(),
        );
        let mut shifted = vec.clone();
        for (c, row) in coeffs.iter().zip(rel.iter()) {
            let rv = SparseVec::from_terms(
                row.iter().enumerate().map(|(i, &x)| (i as u32, BigInt::from(x))).collect(),
            );
            shifted = shifted.add_scaled(&rv, &BigInt::from(*c));
        }
        prop_assert_eq!(q.reduce(&vec).unwrap(), q.reduce(&shifted).unwrap());
        // section is a right inverse of reduce
        let y = q.reduce(&vec).unwrap();
        prop_assert_eq!(q.reduce(&q.section(&y)).unwrap(), y);
    }

    #[test]
    fn closure_is_stable(gens in small_matrix(2, 4)) {
        // endos: a coordinate rotation and a doubling-free shear
        let rot = |v: &SparseVec| v.remap_cols(|c| Some((c + 1) % 4));
        let shear = |v: &SparseVec| {
            let extra = v.get(0).cloned().unwrap_or_else(BigInt::zero);
            v.add_scaled(&SparseVec::unit(2), &extra)
        };
        type Endo = Box<dyn Fn(&SparseVec) -> SparseVec>;
        let endos: Vec<Endo> = vec![Box::new(rot), Box::new(shear)];
        let gen_rows = to_int_matrix(&gens).rows().to_vec();
        let (closure, _) = span_closure(4, gen_rows, &endos);
        let st = closure.staircase();
        for row in closure.rows() {
            prop_assert!(st.contains(&endos[0](row)));
            prop_assert!(st.contains(&endos[1](row)));
        }
    }

    #[test]
    fn omega_antisymmetric(x in proptest::collection::vec(-5i64..=5, 6),
                           y in proptest::collection::vec(-5i64..=5, 6)) {
        let g = Genus::new(3).unwrap();
        let xv = SymVector::from_i64(g, &x).unwrap();
        let yv = SymVector::from_i64(g, &y).unwrap();
        prop_assert_eq!(omega(&xv, &yv).unwrap(), -omega(&yv, &xv).unwrap());
    }

    #[test]
    fn wedge3_alternating(x in proptest::collection::vec(-3i64..=3, 6),
                          y in proptest::collection::vec(-3i64..=3, 6),
                          z in proptest::collection::vec(-3i64..=3, 6)) {
        let g = Genus::new(3).unwrap();
        let s = Spaces::new(g);
        let xv = SymVector::from_i64(g, &x).unwrap();
        let yv = SymVector::from_i64(g, &y).unwrap();
        let zv = SymVector::from_i64(g, &z).unwrap();
        let a = s.wedge3(&xv, &yv, &zv);
        let b = s.wedge3(&yv, &xv, &zv);
        prop_assert!(a.add(&b).is_zero());
        prop_assert!(s.wedge3(&xv, &xv, &zv).is_zero());
        // trilinearity in the first slot
        let sum = xv.add(&yv).unwrap();
        let lhs = s.wedge3(&sum, &yv, &zv);
        let rhs = s.wedge3(&xv, &yv, &zv).add(&s.wedge3(&yv, &yv, &zv));
        prop_assert_eq!(lhs.vec, rhs.vec);
    }
}

#[test]
fn omega_gram_unimodular() {
    // the Gram matrix of ω has determinant ±1
    let g = Genus::new(4).unwrap();
    let dim = g.dim();
    let gram: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let x = gr2::symplectic::BasisSymbol::from_position(i).vector(g);
                    let y = gr2::symplectic::BasisSymbol::from_position(j).vector(g);
                    omega(&x, &y).unwrap()
                })
                .collect()
        })
        .collect();
    assert!(gr2::linalg::det_bareiss(&gram).abs() == BigInt::one());
}

#[test]
fn lattice_digest_stability() {
    // the digest depends only on the lattice, not on the generators given
    let rows1 = vec![
        SparseVec::from_terms(vec![(0, BigInt::from(2)), (1, BigInt::from(4))]),
        SparseVec::from_terms(vec![(0, BigInt::from(6)), (1, BigInt::from(8))]),
    ];
    let rows2 = vec![
        SparseVec::from_terms(vec![(0, BigInt::from(2))]),
        SparseVec::from_terms(vec![(1, BigInt::from(4))]),
        SparseVec::from_terms(vec![(0, BigInt::from(8)), (1, BigInt::from(4))]),
    ];
    let l1 = LatticeBasis::from_generators(2, rows1);
    let l2 = LatticeBasis::from_generators(2, rows2);
    assert_eq!(l1.digest(), l2.digest());
}
