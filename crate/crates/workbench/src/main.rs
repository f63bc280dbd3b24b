//! The ttslab command line: structure checking, topology derivation,
//! embeddings, claim audits, counterexample search, enumeration, and the
//! bounded net-convergence checker.
//!
//! Exit codes: 0 = pass (or exhausted search where no witness is expected),
//! 1 = violation or witness found, 2 = input error, 3 = cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ttslab_core::associations::check_second_association;
use ttslab_core::convergence::{check_convergence_axioms, embed_convergence, embed_topology};
use ttslab_core::derived_topology::derive_topology;
use ttslab_core::foundations::Subset;
use ttslab_core::moore_smith::{check_moore_smith, MsBounds, SubnetNotion};
use ttslab_core::uniform::{check_ucs_axioms, embed_ucs, embed_uniformity};

use ttslab_workbench::audit::{run_audit, AuditBounds, Claim};
use ttslab_workbench::document::{self, Document, DocumentError, Structure};
use ttslab_workbench::enumerate;
use ttslab_workbench::search::{run_search, SearchOutcome, SearchSpec, Target};

const EXIT_PASS: u8 = 0;
const EXIT_WITNESS: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Plain,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum SubnetArg {
    #[default]
    Willard,
    Kelley,
}

#[derive(Parser)]
#[command(
    name = "ttslab",
    version,
    about = "finite-model workbench for generalized topological structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run the axiom checker matching the document kind.
    Check { file: PathBuf },
    /// Derive the open-set topology of a structure document. Ordered
    /// structures use their own pre-order; plain structures use the support
    /// order; topology, convergence and uniformity documents embed first and
    /// use filter refinement.
    Derive { file: PathBuf },
    /// Embed a topology, convergence structure, uniform convergence
    /// structure or uniformity as an ordered token structure document.
    Embed { file: PathBuf },
    /// Audit a claim over its enumerated universe.
    Audit {
        /// One of: xi-tau-transitive, xi-upsilon-transitive,
        /// sigma-lambda-is-tts, power-association-compatible,
        /// support-order-iff, conver-chain, conver-recovery,
        /// upsilon-readings-agree, derived-topology-information-loss.
        claim: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        tokens: usize,
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a structure violating a named property.
    Search {
        /// One of: union-of-closeds-not-closed, tts2-violation,
        /// non-topological-convergence, support-order-compat-violation,
        /// monotonicity-without-up-closure.
        property: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Walk the enumerated universe instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 3)]
        carrier: usize,
        #[arg(long, default_value_t = 4)]
        tokens: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
    },
    /// Enumerate all structures of a kind: topology, convergence, tts, ucs,
    /// uniformity.
    Enumerate {
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        tokens: usize,
        /// Print only the census count.
        #[arg(long)]
        count_only: bool,
    },
    /// Run the bounded net-convergence checks against a net-class document.
    MsCheck {
        file: PathBuf,
        /// Maximum index size for nets and subnets.
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Maximum outer and inner sizes for diagonal frames.
        #[arg(long, default_value_t = 2)]
        frame_bound: usize,
        #[arg(long, value_enum, default_value_t = SubnetArg::Willard)]
        subnet: SubnetArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    ExitCode::from(code)
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Document(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

fn load(path: &PathBuf) -> Result<Structure, CliError> {
    let text = std::fs::read_to_string(path)?;
    let doc = document::parse(&text)?;
    Ok(document::to_structure(&doc)?)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { file } => check_command(&file, cli.format),
        Command::Derive { file } => derive_command(&file, cli.format),
        Command::Embed { file } => embed_command(&file),
        Command::Audit { claim, n, tokens, samples, seed } => {
            let claim = Claim::parse(&claim).map_err(|e| CliError::Input(e.to_string()))?;
            let bounds = AuditBounds { n, tokens, samples, seed };
            let report = run_audit(claim, bounds).map_err(|e| CliError::Cap(e.to_string()))?;
            match cli.format {
                Format::Plain => println!("{report}"),
                Format::Json => print_json(&report),
            }
            Ok(if report.clean() { EXIT_PASS } else { EXIT_WITNESS })
        }
        Command::Search { property, seed, exhaustive, carrier, tokens, samples } => {
            let target = Target::parse(&property).map_err(|e| CliError::Input(e.to_string()))?;
            let spec = SearchSpec { target, carrier, tokens, samples, seed, exhaustive };
            let outcome = run_search(&spec).map_err(|e| CliError::Cap(e.to_string()))?;
            match (&outcome, cli.format) {
                (SearchOutcome::Witness { document, revalidation, checked }, Format::Plain) => {
                    println!("witness found after {checked} candidates");
                    println!("revalidation: {revalidation}");
                    print!("{}", document::serialize(document));
                }
                (SearchOutcome::Exhausted { checked }, Format::Plain) => {
                    println!("EXHAUSTED after {checked} candidates; no witness");
                }
                (_, Format::Json) => print_json(&outcome),
            }
            Ok(match outcome {
                SearchOutcome::Witness { .. } => EXIT_WITNESS,
                SearchOutcome::Exhausted { .. } => EXIT_PASS,
            })
        }
        Command::Enumerate { kind, n, tokens, count_only } => {
            enumerate_command(&kind, n, tokens, count_only, cli.format)
        }
        Command::MsCheck { file, bound, frame_bound, subnet } => {
            ms_check_command(&file, bound, frame_bound, subnet, cli.format)
        }
    }
}

#[derive(Serialize)]
struct CheckReport<T: Serialize> {
    kind: &'static str,
    passed: bool,
    report: T,
}

fn check_command(file: &PathBuf, format: Format) -> Result<u8, CliError> {
    let structure = load(file)?;
    let (passed, plain, json) = match &structure {
        Structure::Topology(t) => {
            // construction already validated the family
            let line = format!("topology on {} points with {} opens: valid", t.carrier().size(), t.open_count());
            (true, line.clone(), serde_json::json!({ "kind": "topology", "passed": true, "opens": t.open_count() }))
        }
        Structure::Convergence(l) => {
            let report = check_convergence_axioms(l);
            let passed = report.passed();
            let plain = format!(
                "point-filter    {}\nmeet-closed     {}\nrefinement      {}\nresult: {}",
                report.point_filter,
                report.meet_closed,
                report.refinement_closed,
                if passed { "pass" } else { "FAIL" }
            );
            (passed, plain, serde_json::to_value(CheckReport { kind: "convergence", passed, report }).expect("serializable"))
        }
        Structure::Ucs(u) => {
            let report = check_ucs_axioms(u);
            let passed = report.passed();
            let plain = format!(
                "point-pairs     {}\nmeet-closed     {}\nrefinement      {}\ninverse         {}\ncomposition     {}\nresult: {}",
                report.point_pairs,
                report.meet_closed,
                report.refinement_closed,
                report.inverse_closed,
                report.composition_closed,
                if passed { "pass" } else { "FAIL" }
            );
            (passed, plain, serde_json::to_value(CheckReport { kind: "ucs", passed, report }).expect("serializable"))
        }
        Structure::Uniformity(u) => {
            let line = format!(
                "uniformity on {} points with {} classes: valid",
                u.carrier().size(),
                u.classes().len()
            );
            (true, line.clone(), serde_json::json!({ "kind": "uniformity", "passed": true, "classes": u.classes().len() }))
        }
        Structure::Tts(sigma) => {
            let report = sigma.check_axioms();
            let passed = report.passed();
            (passed, report.to_string(), serde_json::to_value(CheckReport { kind: "tts", passed, report }).expect("serializable"))
        }
        Structure::Ttsr(sigma) => {
            let report = sigma.check_axioms();
            let passed = report.passed();
            (passed, report.to_string(), serde_json::to_value(CheckReport { kind: "ttsr", passed, report }).expect("serializable"))
        }
        Structure::NetClass(class) => {
            let line = format!("net class on {} points: well formed", class.carrier().size());
            (true, line.clone(), serde_json::json!({ "kind": "net-class", "passed": true }))
        }
    };
    match format {
        Format::Plain => println!("{plain}"),
        Format::Json => print_json(&json),
    }
    Ok(if passed { EXIT_PASS } else { EXIT_WITNESS })
}

#[derive(Serialize)]
struct DeriveReport {
    opens: Vec<Subset>,
    closeds: Vec<Subset>,
    minimal_neighbourhoods: Vec<Subset>,
    proposition_verified: bool,
}

fn derive_command(file: &PathBuf, format: Format) -> Result<u8, CliError> {
    let structure = load(file)?;
    let (sigma, leq) = match &structure {
        Structure::Ttsr(t) => (t.base().clone(), t.leq().clone()),
        Structure::Tts(t) => {
            let assoc =
                check_second_association(t).map_err(|e| CliError::Input(e.to_string()))?;
            (t.clone(), assoc.support.leq)
        }
        Structure::Topology(t) => {
            let emb = embed_topology(t).embedding;
            (emb.ttsr.base().clone(), emb.ttsr.leq().clone())
        }
        Structure::Convergence(l) => {
            let emb = embed_convergence(l);
            (emb.ttsr.base().clone(), emb.ttsr.leq().clone())
        }
        Structure::Uniformity(u) => {
            let emb = embed_uniformity(u).embedding;
            (emb.ttsr.base().clone(), emb.ttsr.leq().clone())
        }
        Structure::Ucs(u) => {
            let emb = embed_ucs(u);
            (emb.ttsr.base().clone(), emb.ttsr.leq().clone())
        }
        Structure::NetClass(_) => {
            return Err(CliError::Input("net classes have no derived topology".into()))
        }
    };
    match derive_topology(&sigma, &leq) {
        Ok(derivation) => {
            let report = DeriveReport {
                opens: derivation.topology.opens().collect(),
                closeds: derivation.closed_sets.clone(),
                minimal_neighbourhoods: derivation.minimal_neighbourhoods.clone(),
                proposition_verified: derivation.proposition.passed(),
            };
            match format {
                Format::Plain => {
                    let render = |sets: &[Subset]| {
                        sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
                    };
                    println!("opens:  {}", render(&report.opens));
                    println!("closed: {}", render(&report.closeds));
                    println!("minimal neighbourhoods: {}", render(&report.minimal_neighbourhoods));
                    println!(
                        "proposition checks: {}",
                        if report.proposition_verified { "pass" } else { "FAIL" }
                    );
                }
                Format::Json => print_json(&report),
            }
            Ok(EXIT_PASS)
        }
        Err(e) => {
            println!("derivation refused: {e}");
            Ok(EXIT_WITNESS)
        }
    }
}

fn embed_command(file: &PathBuf) -> Result<u8, CliError> {
    let structure = load(file)?;
    let (ttsr, notes) = match &structure {
        Structure::Topology(t) => {
            let emb = embed_topology(t);
            let notes = format!(
                "complete: {}; relation transitive: {}",
                emb.complete,
                emb.xi_transitive.passed()
            );
            (emb.embedding.ttsr, notes)
        }
        Structure::Convergence(l) => (embed_convergence(l).ttsr, String::new()),
        Structure::Ucs(u) => (embed_ucs(u).ttsr, String::new()),
        Structure::Uniformity(u) => {
            let emb = embed_uniformity(u);
            let notes = format!(
                "complete: {}; Cauchy matches the square criterion: {}; relation transitive: {}",
                emb.complete,
                emb.cauchy_matches_square_criterion,
                emb.xi_transitive.passed()
            );
            (emb.embedding.ttsr, notes)
        }
        _ => {
            return Err(CliError::Input(
                "embed expects a topology, convergence, ucs or uniformity document".into(),
            ))
        }
    };
    if !notes.is_empty() {
        eprintln!("{notes}");
    }
    print!("{}", document::serialize(&document::ttsr_to_document(&ttsr)));
    Ok(EXIT_PASS)
}

fn enumerate_command(
    kind: &str,
    n: usize,
    tokens: usize,
    count_only: bool,
    format: Format,
) -> Result<u8, CliError> {
    let cap = |e: enumerate::EnumerateError| CliError::Cap(e.to_string());
    let docs: Vec<Document> = match kind {
        "topology" => enumerate::topologies(n)
            .map_err(cap)?
            .iter()
            .map(document::topology_to_document)
            .collect(),
        "convergence" => enumerate::convergence_structures(n)
            .map_err(cap)?
            .iter()
            .map(document::convergence_to_document)
            .collect(),
        "tts" => enumerate::tts_structures(n, tokens)
            .map_err(cap)?
            .iter()
            .map(document::tts_to_document)
            .collect(),
        "ucs" => enumerate::ucs_structures(n)
            .map_err(cap)?
            .iter()
            .map(document::ucs_to_document)
            .collect(),
        "uniformity" => enumerate::equivalences(n)
            .map_err(cap)?
            .into_iter()
            .map(|rel| Document::Uniformity {
                version: document::FORMAT_VERSION,
                carrier: n,
                entourage: rel.pairs().collect(),
            })
            .collect(),
        other => return Err(CliError::Input(format!("unknown kind {other:?}"))),
    };
    if count_only {
        match format {
            Format::Plain => println!("{}", docs.len()),
            Format::Json => print_json(&serde_json::json!({ "kind": kind, "n": n, "count": docs.len() })),
        }
    } else {
        match format {
            Format::Plain => {
                for doc in &docs {
                    println!(
                        "{}",
                        serde_json::to_string(doc).expect("documents serialize")
                    );
                }
            }
            Format::Json => print_json(&docs),
        }
    }
    Ok(EXIT_PASS)
}

fn ms_check_command(
    file: &PathBuf,
    bound: usize,
    frame_bound: usize,
    subnet: SubnetArg,
    format: Format,
) -> Result<u8, CliError> {
    let structure = load(file)?;
    let Structure::NetClass(class) = structure else {
        return Err(CliError::Input("ms-check expects a net-class document".into()));
    };
    let bounds = MsBounds {
        index: bound,
        frame_outer: frame_bound,
        frame_inner: frame_bound,
        notion: match subnet {
            SubnetArg::Willard => SubnetNotion::Willard,
            SubnetArg::Kelley => SubnetNotion::Kelley,
        },
    };
    let report = check_moore_smith(&class, &bounds).map_err(|e| CliError::Cap(e.to_string()))?;
    match format {
        Format::Plain => {
            println!("bounds: index ≤ {}, frames ≤ {}", bounds.index, bounds.frame_outer);
            println!("constants        {}", report.constants);
            println!("subnet-limits    {}", report.subnets);
            println!("divergence       {}", report.divergence);
            println!("divergence-alt   {}", report.divergence_alt);
            println!("diagonal         {}", report.diagonal);
            println!(
                "formulations agree: {}",
                if report.divergence_formulations_agree() { "yes" } else { "NO" }
            );
        }
        Format::Json => print_json(&report),
    }
    Ok(if report.all_pass() { EXIT_PASS } else { EXIT_WITNESS })
}
