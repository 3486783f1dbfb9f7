//! `grig`: command-line front end for grig-core.
//!
//! Exit codes: 0 success, 1 negative answer (not conjugate, or a failed
//! verification), 2 input error, 3 resource guard.

mod groups;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grig_core::coset::{coset_of, km_coset_of};
use grig_core::element::parse_vertex;
use grig_core::guard::MAX_SUPPORTED_DEPTH;
use grig_core::{Conjugacy, ConjugacyEngine, FiniteQuotient, GrigElement, GrigError, Guards, KMask};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "grig", version, about = "Conjugacy and coset computations in the Grigorchuk group")]
struct Cli {
    /// Indented JSON for reading by eye.
    #[arg(long, global = true)]
    pretty: bool,
    /// Cap on worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced form of a word.
    Reduce { word: String },
    /// Product g·h (apply h, then g).
    Mul { g: String, h: String },
    /// Inverse.
    Inv { g: String },
    /// Section of g at a vertex such as 0110.
    Section { g: String, vertex: String },
    /// Image of a vertex.
    Act { g: String, vertex: String },
    /// Element order.
    Order { g: String },
    /// Coset of K containing g.
    Coset { g: String },
    /// Coset of K_m containing g.
    KmCoset {
        g: String,
        #[arg(long, default_value_t = 1)]
        level: u8,
    },
    /// Decide conjugacy in the whole group; exits 1 if not conjugate.
    Conj { g: String, h: String },
    /// Decide conjugacy in the subgroup generated by --subgroup-gens; exits 1 if not conjugate.
    ///
    /// The subgroup is assumed to contain K_m for the given --km-level; this is not checked.
    ConjSub {
        g: String,
        h: String,
        /// Comma-separated generator words.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup_gens: Vec<String>,
        #[arg(long, default_value_t = 0)]
        km_level: u8,
    },
    /// Q-set at a finite depth.
    Qfin {
        g: String,
        h: String,
        #[arg(long)]
        depth: u8,
        #[arg(long, default_value_t = 0)]
        km_level: u8,
    },
    /// Depth at which the Q-set stops changing.
    Stabilize {
        g: String,
        h: String,
        #[arg(long, default_value_t = 14)]
        max_depth: u8,
    },
    /// Recursion tree of the Q-set computation.
    SplittingTree {
        g: String,
        h: String,
        #[arg(long, default_value_t = 6)]
        depth: u8,
        /// Print DOT instead of JSON.
        #[arg(long)]
        dot: bool,
        /// Write DOT to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite quotients by level stabilizers.
    Quotient {
        #[command(subcommand)]
        action: QuotientAction,
    },
    /// Re-derive and check the embedded tables; exits 1 on any failure.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum QuotientAction {
    /// Enumerate the quotient by Stab(n) and print its order.
    Enumerate {
        #[arg(long)]
        depth: u8,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Lifting table against the depth-4 quotient.
    LiftTable,
    /// Schreier graph and coset Cayley table against the depth-3 quotient.
    Schreier {
        /// Write the Schreier graph as DOT to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Q-sets of the generators.
    BaseCong,
    /// Stabilization depths of short pairs.
    QAgreement,
    /// Centralizer formulas on small wreath products.
    Wreath {
        /// BASE:TOP pairs; each side a name (C4, D4, S3) or a Cayley-table file (.json or .csv).
        #[arg(long, value_delimiter = ',', default_values_t = verify::DEFAULT_WREATH_GROUPS.map(String::from))]
        groups: Vec<String>,
    },
    /// Every suite.
    All,
}

enum Failure {
    Grig(GrigError),
    Io(String),
}

impl From<GrigError> for Failure {
    fn from(err: GrigError) -> Self {
        Failure::Grig(err)
    }
}

struct Output {
    value: Value,
    code: u8,
    raw: Option<String>,
}

impl Output {
    fn ok(value: Value) -> Output {
        Output { value, code: 0, raw: None }
    }

    fn answer(value: Value, positive: bool) -> Output {
        Output { value, code: if positive { 0 } else { 1 }, raw: None }
    }
}

fn parse(word: &str) -> Result<GrigElement, GrigError> {
    GrigElement::parse(word)
}

fn guards() -> Result<Guards, GrigError> {
    let mut guards = Guards::default();
    if let Ok(value) = std::env::var("GRIG_MAX_DEPTH") {
        let depth: u8 = value
            .trim()
            .parse()
            .map_err(|_| GrigError::InvalidArgument(format!("GRIG_MAX_DEPTH={value:?} is not a depth")))?;
        if depth > MAX_SUPPORTED_DEPTH {
            return Err(GrigError::InvalidArgument(format!("GRIG_MAX_DEPTH above {MAX_SUPPORTED_DEPTH}")));
        }
        guards.max_depth = depth;
    }
    Ok(guards)
}

fn mask_names(mask: KMask) -> Vec<String> {
    mask.iter().map(|c| c.to_string()).collect()
}

fn conjugacy(result: &Conjugacy, level: u8) -> Output {
    Output::answer(
        json!({
            "conjugate": result.conjugate,
            "level": level,
            "witness_cosets": result.witnesses.names(),
            "depth_used": result.depth_used,
        }),
        result.conjugate,
    )
}

fn run(command: Command) -> Result<Output, Failure> {
    let guards = guards()?;
    let out = match command {
        Command::Reduce { word } => Output::ok(json!(parse(&word)?.to_string())),
        Command::Mul { g, h } => Output::ok(json!(parse(&g)?.multiply(&parse(&h)?).to_string())),
        Command::Inv { g } => Output::ok(json!(parse(&g)?.invert().to_string())),
        Command::Section { g, vertex } => Output::ok(json!(parse(&g)?.section(&parse_vertex(&vertex)?).to_string())),
        Command::Act { g, vertex } => {
            let image: String = parse(&g)?.act(&parse_vertex(&vertex)?).iter().map(|&x| char::from(b'0' + x)).collect();
            Output::ok(json!(image))
        }
        Command::Order { g } => Output::ok(json!(parse(&g)?.order()?)),
        Command::Coset { g } => Output::ok(json!(coset_of(&parse(&g)?).to_string())),
        Command::KmCoset { g, level } => Output::ok(json!(km_coset_of(&parse(&g)?, level, &guards)?.to_string())),
        Command::Conj { g, h } => {
            let mut engine = ConjugacyEngine::new(guards);
            conjugacy(&engine.is_conjugate(&parse(&g)?, &parse(&h)?), 0)
        }
        Command::ConjSub { g, h, subgroup_gens, km_level } => {
            let gens = subgroup_gens.iter().map(|w| parse(w)).collect::<Result<Vec<_>, _>>()?;
            let mut engine = ConjugacyEngine::new(guards);
            conjugacy(&engine.is_conjugate_in_subgroup(&parse(&g)?, &parse(&h)?, &gens, km_level)?, km_level)
        }
        Command::Qfin { g, h, depth, km_level } => {
            let mut engine = ConjugacyEngine::new(guards);
            let set = engine.q_fin_km(&parse(&g)?, &parse(&h)?, km_level, depth)?;
            Output::ok(json!({ "depth": depth, "level": km_level, "cosets": set.names() }))
        }
        Command::Stabilize { g, h, max_depth } => {
            let mut engine = ConjugacyEngine::new(guards);
            let s = engine.stabilization_depth(&parse(&g)?, &parse(&h)?, max_depth)?;
            let sets: Vec<Value> =
                s.sets.iter().map(|&(n, m)| json!({ "depth": n, "cosets": mask_names(m) })).collect();
            Output::ok(json!({ "depth": s.depth, "bound": s.bound, "within_bound": s.within_bound, "sets": sets }))
        }
        Command::SplittingTree { g, h, depth, dot, out } => {
            let engine = ConjugacyEngine::new(guards);
            let tree = engine.build_splitting_tree(&parse(&g)?, &parse(&h)?, depth)?;
            let rendered = tree.to_dot();
            if let Some(path) = &out {
                fs::write(path, &rendered).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            let value = json!({
                "depth": depth,
                "height": tree.height(),
                "nodes": tree.node_count(),
                "q_set": mask_names(engine.evaluate_tree(&tree)),
            });
            Output { value, code: 0, raw: dot.then_some(rendered) }
        }
        Command::Quotient { action: QuotientAction::Enumerate { depth } } => {
            let q = FiniteQuotient::enumerate(depth, &guards)?;
            Output::ok(json!({ "depth": depth, "order": q.len() }))
        }
        Command::Verify { suite } => {
            let report = match suite {
                Suite::LiftTable => verify::lift_table(&guards)?,
                Suite::Schreier { out } => {
                    if let Some(path) = &out {
                        fs::write(path, grig_core::coset::schreier_dot())
                            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    }
                    verify::schreier()
                }
                Suite::BaseCong => verify::base_cong(),
                Suite::QAgreement => verify::q_agreement()?,
                Suite::Wreath { groups } => verify::wreath(&groups, &guards)?,
                Suite::All => verify::all(&guards)?,
            };
            let ok = verify::passed(&report);
            Output::answer(report, ok)
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("{}", json!({ "error": err.to_string() }));
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(out) => {
            match out.raw {
                Some(raw) => print!("{raw}"),
                None if cli.pretty => println!("{}", serde_json::to_string_pretty(&out.value).expect("json")),
                None => println!("{}", out.value),
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Grig(err)) => {
            eprintln!("{}", json!({ "error": err.to_string() }));
            ExitCode::from(if err.is_resource() { 3 } else { 2 })
        }
        Err(Failure::Io(message)) => {
            eprintln!("{}", json!({ "error": message }));
            ExitCode::from(2)
        }
    }
}
