use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use gbsn::actions::classify_group;
use gbsn::abel::{abelianization, kernel_subspace_r, witness_never_loxodromic};
use gbsn::bass_serre::{
    acylindricity_witnesses, britton_reduce, classify_tree_action, path_stabilizer, to_path_word,
};
use gbsn::exact::Int;
use gbsn::gog::{
    bs, catalog_names, int_matrix_to_json, klein_bottle, leary_minasyan, presentation,
    rat_matrix_to_json, zn_cross_fr, GbsGraph,
};
use gbsn::modular::{modular_data, monodromy_finiteness};
use gbsn::random::{random_graph, random_word, seeded_rng};
use gbsn::subgroup::{induced_decomposition, mod2_quotient, restricted_modular_consistency};
use gbsn::textword::parse_word;
use gbsn::Error;

#[derive(Parser)]
#[command(name = "gbsn", version, about = "Computations with generalized Baumslag-Solitar groups of rank n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Path to a graph-of-groups JSON file
    input: Option<PathBuf>,
    /// Use a built-in example instead of a file (see `gbsn catalog`)
    #[arg(long, conflicts_with = "input")]
    catalog: Option<String>,
    /// Parameter m for --catalog bs
    #[arg(long)]
    m: Option<i64>,
    /// Parameter n for --catalog bs (edge multiplier) or zn-cross-fr (rank)
    #[arg(long)]
    n: Option<i64>,
    /// Parameter r for --catalog zn-cross-fr (free rank)
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check structural validity and list violations
    Validate(Input),
    /// Emit the canonical graph JSON together with a finite presentation
    Present(Input),
    /// Modular homomorphism data: frame matrices and stable-letter images
    Modular(Input),
    /// Decide finiteness of the monodromy group
    Monodromy(Input),
    /// Abelianization invariants (free rank and torsion divisors)
    Abelianize(Input),
    /// Kernel subspace of the free abelianization
    #[command(name = "kernel-R")]
    KernelR(Input),
    /// Top-level classification predicates
    Classify(Input),
    /// Element elliptic in every product action, when monodromy is infinite
    Witness(Input),
    /// Britton-reduce a word (see --word syntax in the README)
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Elliptic/hyperbolic classification and translation length of a word
    TreeClassify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Stabilizer lattice of the tree geodesic moved by a word
    Stabilizer {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Elements violating acylindricity at separation R
    AcylWitness {
        #[command(flatten)]
        input: Input,
        #[arg(long = "separation", default_value_t = 3)]
        separation: usize,
        #[arg(long = "count", default_value_t = 5)]
        count: usize,
    },
    /// Induced decomposition of the kernel of the mod-2 homology quotient
    Subgroup {
        #[command(flatten)]
        input: Input,
        /// JSON array of GF(2) vectors spanning an allowed kernel K
        /// (default: K = 0, the full mod-2 cover)
        #[arg(long)]
        kernel: Option<String>,
    },
    /// List built-in example groups
    Catalog,
    /// Random-instance property campaign (deterministic for a fixed seed)
    Campaign {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
}

enum Failure {
    Malformed(String),
    Invalid(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidGraph(msg) => Failure::Invalid(json!({ "violations": [msg] })),
            other => Failure::Malformed(other.to_string()),
        }
    }
}

fn load(input: &Input) -> Result<(GbsGraph, String), Failure> {
    if let Some(name) = &input.catalog {
        let g = match name.as_str() {
            "leary-minasyan" => leary_minasyan(),
            "klein-bottle" => klein_bottle(),
            "bs" => {
                let m = input.m.ok_or(Failure::Malformed("bs requires --m".into()))?;
                let n = input.n.ok_or(Failure::Malformed("bs requires --n".into()))?;
                bs(m, n).map_err(|e| Failure::Malformed(e.to_string()))?
            }
            "zn-cross-fr" => {
                let n = input
                    .n
                    .ok_or(Failure::Malformed("zn-cross-fr requires --n".into()))?;
                let r = input
                    .r
                    .ok_or(Failure::Malformed("zn-cross-fr requires --r".into()))?;
                if n < 1 {
                    return Err(Failure::Malformed("rank must be at least 1".into()));
                }
                zn_cross_fr(n as usize, r).map_err(|e| Failure::Malformed(e.to_string()))?
            }
            other => {
                return Err(Failure::Malformed(format!(
                    "unknown catalog entry {other}; see `gbsn catalog`"
                )))
            }
        };
        let bytes = serde_json::to_vec(&g.to_json()).unwrap();
        Ok((g, hex_sha256(&bytes)))
    } else if let Some(path) = &input.input {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_slice(&bytes)
            .map_err(|e| Failure::Malformed(format!("invalid JSON: {e}")))?;
        let g = GbsGraph::from_json(&v).map_err(|e| Failure::Malformed(e.to_string()))?;
        Ok((g, hex_sha256(&bytes)))
    } else {
        Err(Failure::Malformed(
            "provide an input file or --catalog NAME".into(),
        ))
    }
}

fn hex_sha256(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn ensure_valid(g: &GbsGraph) -> Result<(), Failure> {
    let violations = g.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(json!({
            "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })))
    }
}

fn envelope(hash: &str, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("input_sha256".into(), json!(hash));
    if let Value::Object(b) = body {
        obj.extend(b);
    }
    Value::Object(obj)
}

fn run(cmd: &Cmd) -> Result<Value, Failure> {
    match cmd {
        Cmd::Validate(input) => {
            let (g, hash) = load(input)?;
            let violations = g.validate();
            let body = json!({
                "valid": violations.is_empty(),
                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            });
            if violations.is_empty() {
                Ok(envelope(&hash, body))
            } else {
                Err(Failure::Invalid(envelope(&hash, body)))
            }
        }
        Cmd::Present(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let p = presentation(&g)?;
            Ok(envelope(
                &hash,
                json!({
                    "graph": g.to_json(),
                    "generators": p.generators.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "relators": p.relators.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                }),
            ))
        }
        Cmd::Modular(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let d = modular_data(&g)?;
            let psi: BTreeMap<&String, Value> =
                d.psi.iter().map(|(k, m)| (k, rat_matrix_to_json(m))).collect();
            let stable: BTreeMap<&String, Value> = d
                .stable_matrices
                .iter()
                .map(|(k, m)| (k, rat_matrix_to_json(m)))
                .collect();
            Ok(envelope(
                &hash,
                json!({
                    "base_vertex": d.base_vertex,
                    "psi": psi,
                    "stable_matrices": stable,
                }),
            ))
        }
        Cmd::Monodromy(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            Ok(envelope(&hash, monodromy_finiteness(&g)?.to_json()))
        }
        Cmd::Abelianize(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            Ok(envelope(&hash, abelianization(&g)?.to_json()))
        }
        Cmd::KernelR(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            Ok(envelope(&hash, kernel_subspace_r(&g)?.to_json()))
        }
        Cmd::Classify(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            Ok(envelope(&hash, classify_group(&g)?.to_json()))
        }
        Cmd::Witness(input) => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let w = witness_never_loxodromic(&g)?;
            Ok(envelope(
                &hash,
                json!({ "witness": w.map(|x| x.to_json()).unwrap_or(Value::Null) }),
            ))
        }
        Cmd::Reduce { input, word } => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let w = parse_word(&g, word)?;
            let reduced = britton_reduce(&g, &to_path_word(&g, &w)?)?;
            Ok(envelope(
                &hash,
                json!({
                    "reduced": reduced.to_json(),
                    "trivial": reduced.is_trivial(),
                    "crossings": reduced.crossings(),
                }),
            ))
        }
        Cmd::TreeClassify { input, word } => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let w = parse_word(&g, word)?;
            Ok(envelope(&hash, classify_tree_action(&g, &w)?.to_json()))
        }
        Cmd::Stabilizer { input, word } => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let w = parse_word(&g, word)?;
            let lat = path_stabilizer(&g, &w)?;
            Ok(envelope(
                &hash,
                json!({
                    "stabilizer_basis": int_matrix_to_json(lat.basis()),
                    "rank": lat.rank(),
                    "index": lat.index().map(|i| i.to_string()),
                }),
            ))
        }
        Cmd::AcylWitness {
            input,
            separation,
            count,
        } => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let w = acylindricity_witnesses(&g, *separation, *count)?;
            Ok(envelope(&hash, w.to_json()))
        }
        Cmd::Subgroup { input, kernel } => {
            let (g, hash) = load(input)?;
            ensure_valid(&g)?;
            let q = mod2_quotient(&g)?;
            let k_gens: Vec<Vec<Int>> = match kernel {
                None => vec![],
                Some(text) => {
                    let v: Vec<Vec<i64>> = serde_json::from_str(text)
                        .map_err(|e| Failure::Malformed(format!("bad --kernel: {e}")))?;
                    v.into_iter()
                        .map(|row| row.into_iter().map(Int::from).collect())
                        .collect()
                }
            };
            let d = induced_decomposition(&g, &q, &k_gens)?;
            let consistency = restricted_modular_consistency(&g, &d)?;
            Ok(envelope(
                &hash,
                json!({
                    "quotient": q.to_json(),
                    "decomposition": d.to_json(),
                    "consistency": {
                        "pass": consistency.pass,
                        "counterexample": consistency.counterexample,
                    },
                }),
            ))
        }
        Cmd::Catalog => Ok(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "entries": catalog_names(),
        })),
        Cmd::Campaign { seed, count } => {
            let mut rng = seeded_rng(*seed);
            let mut kernel_vs_monodromy = 0usize;
            let mut rank_identity = 0usize;
            let mut word_failures = 0usize;
            for _ in 0..*count {
                let g = random_graph(&mut rng);
                let mono = monodromy_finiteness(&g)?;
                let r = kernel_subspace_r(&g)?;
                if (r.dimension == 0) != mono.is_trivial() {
                    kernel_vs_monodromy += 1;
                }
                let ab = abelianization(&g)?;
                let expected = g.non_tree_edges().len() + g.rank - r.dimension;
                if ab.free_rank != expected {
                    rank_identity += 1;
                }
                let w = random_word(&mut rng, &g, 6);
                let ww = w.concat(&w.inverse());
                if !britton_reduce(&g, &to_path_word(&g, &ww)?)?.is_trivial() {
                    word_failures += 1;
                }
            }
            Ok(json!({
                "version": env!("CARGO_PKG_VERSION"),
                "seed": seed,
                "instances": count,
                "counterexamples": {
                    "kernel_dim_zero_iff_trivial_monodromy": kernel_vs_monodromy,
                    "free_rank_identity": rank_identity,
                    "word_inverse_reduction": word_failures,
                },
                "pass": kernel_vs_monodromy == 0 && rank_identity == 0 && word_failures == 0,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.cmd) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::from(2)
        }
    }
}
