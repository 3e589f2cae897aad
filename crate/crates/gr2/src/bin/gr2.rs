//! Command-line driver: rank tables, kernel export, verification suites,
//! invariant evaluation, and the abelianization model, all emitting JSON
//! certificates.
//!
//! Exit codes: 0 = all assertions hold; 1 = a mathematical assertion failed
//! (the certificate carries a witness); 2 = usage or parse error.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gr2::boolpoly;
use gr2::certificate::{Certificate, Outcome};
use gr2::invariants::{self, BpData, BsccData, D2Model};
use gr2::spaces::Spaces;
use gr2::symplectic::{BasisSymbol, Genus, SymVector};
use gr2::verify::{self, VerifyContext};
use gr2::GenusConfig;

#[derive(Parser)]
#[command(
    name = "gr2",
    version,
    about = "Exact verification of the degree-two graded piece of the Torelli group: bracket kernel, relation families, and invariant formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Surface genus (at least 3)
    #[arg(long, short, default_value_t = 3)]
    genus: u32,
    /// Seed for all randomized checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of randomized trials where applicable
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Worker threads (falls back to GR2_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the JSON certificate(s) to this path
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Rank table: Λ³H, Λ²(Λ³H), D′₂, im B, K
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Export an HNF basis of K = ker(B) as sparse coordinate maps
    Kernel {
        #[command(flatten)]
        common: Common,
    },
    /// Run a named verification suite (or `all`)
    Verify {
        /// One of: all, rank, theorem-k, lemma-k, relations, components,
        /// exact-rows, theta-mod4, d-identity, uprime, cocycle, b-form,
        /// lemma-sp, abelianization, torsion-free
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate an invariant formula on explicit homology data
    Invariants {
        /// One of: tau1-pb, tau1-bp, tau2-bscc, beta-bp, beta-bscc, cocycle
        kind: String,
        /// Formula arguments; see README for the small expression grammar
        args: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Invariant factors of the fibered-product abelianization model
    Abelianization {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn config_of(common: &Common) -> Result<GenusConfig, String> {
    let genus = Genus::new(common.genus).map_err(|e| e.to_string())?;
    let threads = common.threads.unwrap_or_else(gr2::default_threads);
    let config = GenusConfig::new(genus, common.seed, common.trials, threads);
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build_global()
        .ok(); // a second initialization in-process is harmless
    Ok(config)
}

fn emit(common: &Common, certs: &[Certificate]) -> ExitCode {
    for cert in certs {
        match common.format {
            Format::Text => print!("{}", cert.render_text()),
            Format::Json => println!("{}", cert.to_json()),
        }
    }
    if let Some(path) = &common.out {
        let body = if certs.len() == 1 {
            certs[0].to_json()
        } else {
            let items: Vec<serde_json::Value> = certs
                .iter()
                .map(|c| serde_json::from_str(&c.to_json()).expect("round trip"))
                .collect();
            serde_json::to_string_pretty(&items).expect("serializes")
        };
        if let Err(e) = std::fs::File::create(path).and_then(|mut f| f.write_all(body.as_bytes())) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if certs.iter().all(|c| c.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Rank { common } => {
            let config = config_of(&common)?;
            let ctx = VerifyContext::new(config);
            let mut cert = verify::run_suite(&ctx, "rank");
            cert.command = "rank".into();
            Ok(emit(&common, &[cert]))
        }
        Command::Kernel { common } => {
            let config = config_of(&common)?;
            let ctx = VerifyContext::new(config);
            let started = Instant::now();
            let payload = verify::kernel_json(&ctx);
            let mut cert = Certificate::new("kernel", config.genus.get(), config.seed);
            cert.details = payload;
            cert.timing_ms = started.elapsed().as_millis();
            Ok(emit(&common, &[cert]))
        }
        Command::Verify { suite, common } => {
            let config = config_of(&common)?;
            let ctx = VerifyContext::new(config);
            let certs = if suite == "all" {
                verify::run_all(&ctx)
            } else if verify::ALL_SUITES.contains(&suite.as_str()) {
                vec![verify::run_suite(&ctx, &suite)]
            } else {
                return Err(format!(
                    "unknown suite '{suite}'; valid suites: all, {}",
                    verify::ALL_SUITES.join(", ")
                ));
            };
            Ok(emit(&common, &certs))
        }
        Command::Invariants { kind, args, common } => {
            let config = config_of(&common)?;
            let cert = run_invariant(&kind, &args, config)?;
            Ok(emit(&common, &[cert]))
        }
        Command::Abelianization { common } => {
            let config = config_of(&common)?;
            let ctx = VerifyContext::new(config);
            let cert = verify::run_suite(&ctx, "abelianization");
            Ok(emit(&common, &[cert]))
        }
    }
}

// ---------------------------------------------------------------------------
// invariant-argument parsing
// ---------------------------------------------------------------------------

/// Parses a homology-class expression: signed sums of integer multiples of
/// basis symbols, e.g. "a1", "-b3", "a1+2b2-3a3".
fn parse_vector(genus: Genus, text: &str) -> Result<SymVector, String> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err("empty vector expression".into());
    }
    let mut acc = SymVector::zero(genus);
    let mut rest = cleaned.as_str();
    let mut sign = 1i64;
    loop {
        let mut coeff: i64 = sign;
        let digits_end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if digits_end > 0 {
            let n: i64 = rest[..digits_end].parse().map_err(|_| "bad coefficient")?;
            coeff = sign * n;
            rest = &rest[digits_end..];
        }
        let kind = match rest.chars().next() {
            Some('a') => 'a',
            Some('b') => 'b',
            _ => return Err(format!("expected a<i> or b<i> in '{text}'")),
        };
        rest = &rest[1..];
        let idx_end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if idx_end == 0 {
            return Err(format!("missing index after '{kind}' in '{text}'"));
        }
        let index: u32 = rest[..idx_end].parse().map_err(|_| "bad index")?;
        if index == 0 || index > genus.get() {
            return Err(format!(
                "symbol {kind}{index} out of range for genus {}",
                genus.get()
            ));
        }
        rest = &rest[idx_end..];
        let sym = if kind == 'a' {
            BasisSymbol::a(index)
        } else {
            BasisSymbol::b(index)
        };
        acc = acc
            .add(&sym.vector(genus).scaled(coeff))
            .map_err(|e| e.to_string())?;
        match rest.chars().next() {
            None => return Ok(acc),
            Some('+') => {
                sign = 1;
                rest = &rest[1..];
            }
            Some('-') => {
                sign = -1;
                rest = &rest[1..];
            }
            Some(c) => return Err(format!("unexpected '{c}' in '{text}'")),
        }
    }
}

/// Parses "(u,v),(u,v),..." into symplectic-pair data.
fn parse_pairs(genus: Genus, text: &str) -> Result<Vec<(SymVector, SymVector)>, String> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pairs = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(format!("expected '(' in '{text}'"));
        }
        let close = rest.find(')').ok_or("missing ')'")?;
        let inner = &rest[1..close];
        let (u, v) = inner.split_once(',').ok_or("expected '(u,v)'")?;
        pairs.push((parse_vector(genus, u)?, parse_vector(genus, v)?));
        rest = &rest[close + 1..];
        if let Some(stripped) = rest.strip_prefix(',') {
            rest = stripped;
        }
    }
    if pairs.is_empty() {
        return Err("no pairs given".into());
    }
    Ok(pairs)
}

fn constraint_fail(cert: &mut Certificate, msg: String) {
    cert.result = Outcome::Fail;
    cert.details = json!({ "error": msg });
}

fn run_invariant(kind: &str, args: &[String], config: GenusConfig) -> Result<Certificate, String> {
    let genus = config.genus;
    let spaces = Spaces::new(genus);
    let started = Instant::now();
    let mut cert = Certificate::new(format!("invariants {kind}"), genus.get(), config.seed);
    cert = cert.param("args", json!(args));
    match kind {
        "tau1-pb" => {
            if args.len() != 3 {
                return Err("tau1-pb expects three vector arguments, e.g. a1 a2 b3".into());
            }
            let x = parse_vector(genus, &args[0])?;
            let y = parse_vector(genus, &args[1])?;
            let z = parse_vector(genus, &args[2])?;
            let v = invariants::tau1_pb(&spaces, &x, &y, &z);
            cert.details = json!({ "tau1": spaces.format_lambda3(&v) });
        }
        "tau1-bp" => {
            if args.len() != 2 {
                return Err("tau1-bp expects \"(u1,v1),(u2,v2)\" and the boundary class".into());
            }
            let pairs = parse_pairs(genus, &args[0])?;
            let e = parse_vector(genus, &args[1])?;
            match BpData::new(pairs, e) {
                Ok(data) => {
                    let v = invariants::tau1_bp(&spaces, &data);
                    cert.details = json!({
                        "tau1": spaces.format_lambda3(&v),
                        "beta": boolpoly::beta_bp(&data)
                            .map(|p| p.to_string())
                            .unwrap_or_else(|e| format!("error: {e}")),
                    });
                }
                Err(e) => constraint_fail(&mut cert, e.to_string()),
            }
        }
        "tau2-bscc" => {
            if args.len() != 1 {
                return Err("tau2-bscc expects one argument: \"(u1,v1),(u2,v2)\"".into());
            }
            let pairs = parse_pairs(genus, &args[0])?;
            match BsccData::new(pairs) {
                Ok(data) => {
                    let bracket = gr2::bracket::Bracket::new(genus);
                    let d2 = D2Model::new(&bracket);
                    match invariants::tau2_bscc(&d2, &data) {
                        Ok(w) => {
                            let ambient = invariants::tau2_bscc_ambient(&spaces, &data);
                            let coords: serde_json::Map<String, serde_json::Value> = w
                                .vec
                                .iter()
                                .map(|(c, v)| (c.to_string(), json!(v.to_string())))
                                .collect();
                            cert.details = json!({
                                "tau2": format!("1/2 [ {} ]", spaces.format_s2(&ambient.vec)),
                                "doubled_coordinates": coords,
                            });
                        }
                        Err(e) => constraint_fail(&mut cert, e.to_string()),
                    }
                }
                Err(e) => constraint_fail(&mut cert, e.to_string()),
            }
        }
        "beta-bscc" => {
            if args.len() != 1 {
                return Err("beta-bscc expects one argument: \"(u1,v1),...\"".into());
            }
            match BsccData::new(parse_pairs(genus, &args[0])?) {
                Ok(data) => match boolpoly::beta_bscc(&data) {
                    Ok(p) => cert.details = json!({ "beta": p.to_string() }),
                    Err(e) => constraint_fail(&mut cert, e.to_string()),
                },
                Err(e) => constraint_fail(&mut cert, e.to_string()),
            }
        }
        "beta-bp" => {
            if args.len() != 2 {
                return Err("beta-bp expects \"(u1,v1),...\" and the boundary class".into());
            }
            let pairs = parse_pairs(genus, &args[0])?;
            let e = parse_vector(genus, &args[1])?;
            match BpData::new(pairs, e) {
                Ok(data) => match boolpoly::beta_bp(&data) {
                    Ok(p) => cert.details = json!({ "beta": p.to_string() }),
                    Err(e) => constraint_fail(&mut cert, e.to_string()),
                },
                Err(e) => constraint_fail(&mut cert, e.to_string()),
            }
        }
        "cocycle" => {
            if args.len() != 6 {
                return Err("cocycle expects six vectors: x1 x2 x3 y1 y2 y3".into());
            }
            let vs: Result<Vec<SymVector>, String> =
                args.iter().map(|a| parse_vector(genus, a)).collect();
            let vs = vs?;
            let bracket = gr2::bracket::Bracket::new(genus);
            let d2 = D2Model::new(&bracket);
            let u_lat = invariants::lattice_u(&d2).map_err(|e| e.to_string())?;
            let uvec = spaces.wedge3(&vs[0], &vs[1], &vs[2]);
            let vvec = spaces.wedge3(&vs[3], &vs[4], &vs[5]);
            let pair = spaces.wedge_pair(&uvec, &vvec);
            match invariants::cocycle_c(&bracket, &d2, &u_lat, &pair) {
                Ok((t, z)) => {
                    let tree: serde_json::Map<String, serde_json::Value> = t
                        .vec
                        .iter()
                        .map(|(c, v)| (c.to_string(), json!(v.to_string())))
                        .collect();
                    cert.details = json!({
                        "tree_part_coordinates": tree,
                        "z": z.to_string(),
                        "in_U": true,
                    });
                }
                Err(e) => constraint_fail(&mut cert, e.to_string()),
            }
        }
        other => {
            return Err(format!(
                "unknown invariant '{other}'; valid: tau1-pb, tau1-bp, tau2-bscc, beta-bp, beta-bscc, cocycle"
            ));
        }
    }
    cert.timing_ms = started.elapsed().as_millis();
    Ok(cert)
}
