//! The verification-suite driver: one runner per suite, each producing a
//! certificate with exact (integer / ℤ₂) pass-fail content and a concrete
//! witness on failure. Suites share the expensive per-genus artifacts
//! (bracket matrix, kernel, decomposition, D₂ model) through a lazy context.

use std::cell::OnceCell;
use std::time::Instant;

use num_traits::One;
use serde_json::json;

use crate::boolpoly;
use crate::bracket::{Bracket, DecompositionReport, KernelReport};
use crate::certificate::{Certificate, Outcome};
use crate::invariants::{self, D2Model};
use crate::relations;
use crate::spaces::Component;
use crate::symplectic::Genus;
use crate::GenusConfig;

pub const ALL_SUITES: &[&str] = &[
    "rank",
    "theorem-k",
    "lemma-k",
    "relations",
    "components",
    "exact-rows",
    "theta-mod4",
    "d-identity",
    "uprime",
    "cocycle",
    "b-form",
    "lemma-sp",
    "abelianization",
    "torsion-free",
];

pub struct VerifyContext {
    pub config: GenusConfig,
    bracket: OnceCell<Bracket>,
    kernel: OnceCell<KernelReport>,
    decomposition: OnceCell<Result<DecompositionReport, String>>,
}

impl VerifyContext {
    pub fn new(config: GenusConfig) -> Self {
        VerifyContext {
            config,
            bracket: OnceCell::new(),
            kernel: OnceCell::new(),
            decomposition: OnceCell::new(),
        }
    }

    pub fn genus(&self) -> Genus {
        self.config.genus
    }

    pub fn bracket(&self) -> &Bracket {
        self.bracket.get_or_init(|| Bracket::new(self.config.genus))
    }

    pub fn kernel(&self) -> &KernelReport {
        self.kernel.get_or_init(|| self.bracket().compute_k())
    }

    pub fn decomposition(&self) -> &Result<DecompositionReport, String> {
        self.decomposition.get_or_init(|| {
            self.bracket()
                .check_k_decomposition(&self.kernel().basis)
                .map_err(|e| e.to_string())
        })
    }
}

fn finish(mut cert: Certificate, started: Instant) -> Certificate {
    cert.timing_ms = started.elapsed().as_millis();
    cert
}

/// Runs one named suite. Unknown names give an `Error` certificate.
pub fn run_suite(ctx: &VerifyContext, suite: &str) -> Certificate {
    let started = Instant::now();
    let g = ctx.genus().get();
    let seed = ctx.config.seed;
    let cert = Certificate::new(format!("verify {suite}"), g, seed);
    let cert = match suite {
        "rank" => rank_suite(ctx, cert),
        "theorem-k" => theorem_k_suite(ctx, cert),
        "lemma-k" => lemma_k_suite(ctx, cert),
        "relations" => relations_suite(ctx, cert),
        "components" => components_suite(ctx, cert),
        "exact-rows" => exact_rows_suite(ctx, cert),
        "theta-mod4" => theta_mod4_suite(ctx, cert),
        "d-identity" => d_identity_suite(ctx, cert),
        "uprime" => uprime_suite(ctx, cert),
        "cocycle" => cocycle_suite(ctx, cert),
        "b-form" => b_form_suite(ctx, cert),
        "lemma-sp" => lemma_sp_suite(ctx, cert),
        "abelianization" => abelianization_suite(ctx, cert),
        "torsion-free" => torsion_free_suite(ctx, cert),
        other => {
            let mut c = cert;
            c.result = Outcome::Error;
            c.details = json!({ "error": format!("unknown suite '{other}'") });
            c
        }
    };
    finish(cert, started)
}

/// Runs every suite; the aggregate passes iff each one does.
pub fn run_all(ctx: &VerifyContext) -> Vec<Certificate> {
    ALL_SUITES.iter().map(|s| run_suite(ctx, s)).collect()
}

pub fn rank_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let br = ctx.bracket();
    let k = ctx.kernel();
    match br.rank_certificate(&k.basis) {
        Ok(r) => {
            cert.details = json!({
                "lambda3": r.lambda3,
                "lambda2_lambda3": r.lambda2_lambda3,
                "d2prime": r.d2prime,
                "image_B": r.image,
                "kernel_K": r.kernel,
                "blockwise_certified": k.blockwise_certified,
                "kernel_digest": k.basis.digest(),
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "error": e.to_string() });
        }
    }
    cert
}

fn theorem_k_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let br = ctx.bracket();
    let k = ctx.kernel();
    match relations::verify_theorem_k(br, &k.basis) {
        Ok(c) => {
            cert.details = json!({
                "theorem": "K is G-generated by the distinguished relation families",
                "generator_count": c.generator_count,
                "closure_iterations": c.closure_sweeps,
                "hnf_digest_lhs": c.digest_closure,
                "hnf_digest_rhs": c.digest_target,
                "rank": c.closure_rank,
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
        }
    }
    cert
}

fn lemma_k_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    match ctx.decomposition() {
        Ok(dec) => {
            cert.details = json!({
                "lemma": "K = U0 ⊕ (K∩U1) ⊕ (K∩U2) ⊕ (K∩U3)",
                "rank_u0": dec.rank_u0,
                "rank_k_u1": dec.rank_k_u1,
                "rank_k_u2": dec.rank_k_u2,
                "rank_k_u3": dec.rank_k_u3,
                "rank_k": ctx.kernel().basis.rank(),
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e });
        }
    }
    cert
}

fn relations_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    match relations::verify_relation_sweep(ctx.bracket()) {
        Ok(rep) => {
            let counts: serde_json::Map<String, serde_json::Value> = rep
                .counts
                .iter()
                .map(|(f, n)| (format!("{f:?}"), json!(n)))
                .collect();
            cert.details = json!({
                "claim": "every clause-valid family element has zero bracket",
                "elements_checked": rep.total(),
                "per_family": counts,
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
        }
    }
    cert
}

fn components_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let br = ctx.bracket();
    let dec = match ctx.decomposition() {
        Ok(d) => d,
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e });
            return cert;
        }
    };
    let mut parts = serde_json::Map::new();
    for (i, comp) in [Component::U0, Component::U1, Component::U2, Component::U3]
        .iter()
        .enumerate()
    {
        match relations::verify_component(br, *comp, &dec.components[i]) {
            Ok(c) => {
                parts.insert(
                    format!("{comp:?}"),
                    json!({
                        "generator_count": c.generator_count,
                        "closure_iterations": c.closure_sweeps,
                        "rank": c.closure_rank,
                        "hnf_digest_lhs": c.digest_closure,
                        "hnf_digest_rhs": c.digest_target,
                    }),
                );
            }
            Err(e) => {
                cert.result = Outcome::Fail;
                cert.details =
                    json!({ "component": format!("{comp:?}"), "witness": e.to_string() });
                return cert;
            }
        }
    }
    match relations::orbit_classification_u0(&br.spaces) {
        Ok(orbits) => {
            parts.insert(
                "u0_orbit_sizes".into(),
                json!(orbits.iter().map(|(_, n)| *n).collect::<Vec<_>>()),
            );
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
            return cert;
        }
    }
    cert.details = serde_json::Value::Object(parts);
    cert
}

fn exact_rows_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let br = ctx.bracket();
    if !invariants::verify_well_defined(&br.spaces) {
        cert.result = Outcome::Fail;
        cert.details = json!({ "witness": "Θ/Tr/d̄′ do not vanish on the embedded Λ⁴H" });
        return cert;
    }
    let d2 = D2Model::new(br);
    match invariants::verify_exact_rows(br, &d2) {
        Ok(rep) => {
            let pass =
                rep.im_b0_equals_ker_trs && rep.trace_s_surjective && rep.trace_lambda_surjective;
            if !pass {
                cert.result = Outcome::Fail;
            }
            cert.details = json!({
                "im_b0_equals_ker_trace_s": rep.im_b0_equals_ker_trs,
                "trace_s_onto_ker_omega_bar": rep.trace_s_surjective,
                "trace_lambda_onto_ker_omega_bar": rep.trace_lambda_surjective,
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
        }
    }
    cert
}

fn theta_mod4_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    use rand::Rng;
    use rand::SeedableRng;
    let br = ctx.bracket();
    let spaces = &br.spaces;
    let genus = ctx.genus();
    let trials = ctx.config.trials.max(1);
    let invariance_trials = (trials / 10).clamp(100, 1000) as u32;
    cert = cert
        .param("discrepancy_trials", trials)
        .param("invariance_trials", invariance_trials);

    // θ − θ̃ ∈ 4ℤ on random sextuples
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(ctx.config.seed);
    for _ in 0..trials {
        let mut v = Vec::with_capacity(6);
        for _ in 0..6 {
            let coords: Vec<i64> = (0..genus.dim()).map(|_| rng.gen_range(-2..=2)).collect();
            v.push(crate::symplectic::SymVector::from_i64(genus, &coords).unwrap());
        }
        let x = [v[0].clone(), v[1].clone(), v[2].clone()];
        let y = [v[3].clone(), v[4].clone(), v[5].clone()];
        if let Err(e) = invariants::theta_discrepancy(spaces, &x, &y) {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
            return cert;
        }
    }
    // Θ mod 4 invariance under random symplectic basis changes
    match invariants::verify_theta_mod4(br, invariance_trials, ctx.config.seed) {
        Ok(_) => {
            cert.details = json!({
                "discrepancy_in_4Z": true,
                "theta_mod4_invariant": true,
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
        }
    }
    cert
}

fn d_identity_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let br = ctx.bracket();
    let trials = ctx.config.trials.max(1) as u32;
    cert = cert.param("trials", trials);
    if let Err(e) = invariants::verify_d_identity(br, trials, ctx.config.seed) {
        cert.result = Outcome::Fail;
        cert.details = json!({ "witness": e.to_string() });
        return cert;
    }
    let hmax = ctx.genus().get().min(5);
    for h in 1..=hmax {
        if let Err(e) = invariants::verify_bscc_cross(br, h) {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": format!("h = {h}: {e}") });
            return cert;
        }
    }
    cert.details = json!({
        "identity": "d = 2d' + 48d''",
        "random_pairs": trials,
        "bscc_cross_checked_h": (1..=hmax).collect::<Vec<_>>(),
    });
    cert
}

fn uprime_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    use crate::linalg::SparseVec;
    use num_bigint::BigInt;
    let br = ctx.bracket();
    let up = invariants::lattice_uprime(br);
    let im = invariants::image_uprime(br);
    let equal = im.equal(&up).expect("same ambient");
    let z = br.quotient.rank() as u32;
    let in_up = |k: i64| up.contains(&SparseVec::unit(z).scaled(&BigInt::from(k)));
    let d2 = D2Model::new(br);
    let u = match invariants::lattice_u(&d2) {
        Ok(u) => u,
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
            return cert;
        }
    };
    let in_u = |k: i64| u.contains(&SparseVec::unit(z).scaled(&BigInt::from(k)));
    let spot = in_up(8) && !in_up(4) && in_u(4);
    if !(equal && spot) {
        cert.result = Outcome::Fail;
    }
    cert.details = json!({
        "image_equals_uprime": equal,
        "hnf_digest_lhs": im.digest(),
        "hnf_digest_rhs": up.digest(),
        "rank_uprime": up.rank(),
        "spot_checks": { "(0,8) in U'": in_up(8), "(0,4) in U'": in_up(4), "(0,4) in U": in_u(4) },
    });
    cert
}

fn cocycle_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    use num_bigint::BigInt;
    let br = ctx.bracket();
    let d2 = D2Model::new(br);
    let u = match invariants::lattice_u(&d2) {
        Ok(u) => u,
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
            return cert;
        }
    };
    let n = br.spaces.pair_rank() as u32;
    for p in 0..n {
        let v = crate::spaces::ModuleVector {
            space: crate::spaces::Space::Lambda2Lambda3,
            vec: crate::linalg::SparseVec::unit(p),
        };
        match invariants::cocycle_c(br, &d2, &u, &v) {
            Ok((_, zval)) => {
                if zval != BigInt::from(2) * br.b2_x4(&v) {
                    cert.result = Outcome::Fail;
                    cert.details = json!({ "witness": format!("pair {p}: z != 8·B²") });
                    return cert;
                }
            }
            Err(e) => {
                cert.result = Outcome::Fail;
                cert.details = json!({ "witness": format!("pair {p}: {e}") });
                return cert;
            }
        }
    }
    cert.details = json!({
        "claim": "every cocycle value (B⁰, -2·det) lies in U(H) with z = 8B²",
        "basis_pairs_checked": n,
    });
    cert
}

fn b_form_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let spaces = &ctx.bracket().spaces;
    let det = invariants::gram_b_det(spaces);
    if !det.is_one() {
        cert.result = Outcome::Fail;
    }
    cert.details = json!({
        "gram_rank": spaces.lambda3_rank(),
        "abs_det": det.to_string(),
    });
    cert
}

fn lemma_sp_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let genus = ctx.genus();
    match boolpoly::verify_lemma_sp(genus) {
        Ok(rep) => {
            if rep.closure_dim != rep.target_dim {
                cert.result = Outcome::Fail;
            }
            cert.details = json!({
                "closure_dim": rep.closure_dim,
                "dim_b_le2": boolpoly::dim_b(genus, 2),
                "target_dim": rep.target_dim,
                "closure_iterations": rep.sweeps,
                "evaluation_faithful": boolpoly::evaluation_faithful(genus),
            });
        }
        Err(e) => {
            cert.result = Outcome::Fail;
            cert.details = json!({ "witness": e.to_string() });
        }
    }
    cert
}

fn abelianization_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    use num_bigint::BigInt;
    let spaces = &ctx.bracket().spaces;
    let genus = ctx.genus();
    let (free, torsion) = boolpoly::abelianization_structure(spaces);
    let expect_free = spaces.lambda3_rank();
    let expect_torsion = boolpoly::dim_b(genus, 2);
    let exponent_two = torsion.iter().all(|d| *d == BigInt::from(2));
    if free != expect_free || torsion.len() != expect_torsion || !exponent_two {
        cert.result = Outcome::Fail;
    }
    cert.details = json!({
        "free_rank": free,
        "expected_free_rank": expect_free,
        "torsion_factor_count": torsion.len(),
        "expected_torsion_count": expect_torsion,
        "torsion_exponent_two": exponent_two,
    });
    cert
}

fn torsion_free_suite(ctx: &VerifyContext, mut cert: Certificate) -> Certificate {
    let br = ctx.bracket();
    let k = ctx.kernel();
    let d2prime_ok = br.quotient.torsion_factors().is_empty();
    let k_saturated = k.basis.is_saturated();
    if !(d2prime_ok && k_saturated) {
        cert.result = Outcome::Fail;
    }
    cert.details = json!({
        "d2prime_torsion_free": d2prime_ok,
        "lambda4_relation_invariant_factors_all_one": d2prime_ok,
        "quotient_by_K_torsion_free": k_saturated,
    });
    cert
}

/// Kernel basis export: sparse coordinate maps keyed by pair strings such
/// as "a1a2a3|b3a4a5".
pub fn kernel_json(ctx: &VerifyContext) -> serde_json::Value {
    let br = ctx.bracket();
    let k = ctx.kernel();
    let spaces = &br.spaces;
    let name = |p: u32| -> String {
        let (i, j) = spaces.pair_of_index(p);
        let t1 = spaces.trivector(i);
        let t2 = spaces.trivector(j);
        let part = |t: [crate::symplectic::BasisSymbol; 3]| {
            t.iter().map(|s| s.to_string()).collect::<String>()
        };
        format!("{}|{}", part(t1), part(t2))
    };
    let rows: Vec<serde_json::Value> = k
        .basis
        .rows()
        .iter()
        .map(|row| {
            let m: serde_json::Map<String, serde_json::Value> = row
                .iter()
                .map(|(c, v)| {
                    let val = match v.to_string().parse::<i64>() {
                        Ok(small) => json!(small),
                        Err(_) => json!(v.to_string()),
                    };
                    (name(c), val)
                })
                .collect();
            serde_json::Value::Object(m)
        })
        .collect();
    json!({
        "genus": ctx.genus().get(),
        "rank": k.basis.rank(),
        "digest": k.basis.digest(),
        "basis": rows,
    })
}
