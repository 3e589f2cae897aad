//! Exact computational algebra for the degree-two graded piece of the lower
//! central series of the Torelli group of a genus-g surface (g ≥ 3).
//!
//! Everything is integer or ℤ₂ arithmetic; there is no floating point. The crate
//! builds the multilinear modules Λ³H, Λ²(Λ³H), S²(Λ²H) over the symplectic
//! lattice H = ℤ^{2g}, the diagrammatic bracket B = (B⁰, B²) with its
//! integral kernel K, the seven relation families with their G-span
//! certificates, the Johnson homomorphism and Casson-core evaluators
//! (τ₁, τ₂, d, d′, d″, trace maps, Θ), the congruence lattices U′(H), U(H),
//! and the Birman–Craggs algebra of boolean polynomials on quadratic forms.
//!
//! Start with [`symplectic::Genus`] and the runnable examples in
//! `examples/`; the `gr2` binary drives the verification suites and emits
//! JSON certificates.

pub mod boolpoly;
pub mod bracket;
pub mod certificate;
pub mod invariants;
pub mod linalg;
pub mod relations;
pub mod spaces;
pub mod symplectic;
pub mod verify;

pub use symplectic::Genus;

/// Per-run configuration shared by sweeps, suites and the CLI.
#[derive(Debug, Clone, Copy)]
pub struct GenusConfig {
    pub genus: Genus,
    pub seed: u64,
    pub trials: u64,
    pub threads: usize,
}

impl GenusConfig {
    pub fn new(genus: Genus, seed: u64, trials: u64, threads: usize) -> Self {
        GenusConfig {
            genus,
            seed,
            trials,
            threads: threads.max(1),
        }
    }

    /// Defaults used by published certificates: seed 0, 1000 trials.
    pub fn with_defaults(genus: Genus) -> Self {
        GenusConfig {
            genus,
            seed: 0,
            trials: 1000,
            threads: default_threads(),
        }
    }
}

/// Thread count: `GR2_THREADS` if set, else the available parallelism.
pub fn default_threads() -> usize {
    std::env::var("GR2_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}
