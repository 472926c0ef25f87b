//! Command-line surface: hom bases, composition, realization, verification
//! suites, p-local reduction, and divided-power spaces, as JSON or aligned
//! text.  All output is deterministic; exit code 0 on success, 1 when an
//! internal invariant fails, 2 on bad input.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use schcat::error::Error;
use schcat::gamma;
use schcat::json::*;
use schcat::multiset::Multiset;
use schcat::plocal;
use schcat::ring::Ring;
use schcat::schurcat::{hom_basis, SchMorphism};
use schcat::verify;

mod table;

#[derive(Parser)]
#[command(name = "schcat", version, about = "Exact computations with finite multisets, margin-matrix morphisms, and divided powers")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Emit collections in canonical sorted order (the engine always does;
    /// the flag pins it for scripting)
    #[arg(long, global = true)]
    sorted: bool,

    /// Threads for library-internal parallelism; 1 forces sequential
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List the graph basis of the morphisms between two multisets
    Hom(HomArgs),
    /// Compose two formal sums read from a JSON file or stdin
    Compose(ComposeArgs),
    /// Realize a formal sum as an exact matrix on divided-power bases
    Realize(RealizeArgs),
    /// Run one of the invariant suites
    Verify(VerifyArgs),
    /// Reduce a multiset to a p-power (or all-ones) cover and split it
    Reduce(ReduceArgs),
    /// Divided-power spaces: weight bases and torsion modules
    Gamma(GammaArgs),
}

#[derive(Args)]
struct HomArgs {
    /// Source multiset, e.g. "[2,1]" or "{1:2, 2:1}"
    beta: String,
    /// Target multiset
    alpha: String,
    /// Coefficient ring: Z, Q, Zmod:m, or Zlocal:p
    #[arg(long, default_value = "Z")]
    ring: String,
}

#[derive(Args)]
struct ComposeArgs {
    /// JSON file with fields "h" and "g" (the result is h∘g); stdin if absent
    file: Option<String>,
}

#[derive(Args)]
struct RealizeArgs {
    /// JSON file with a formal sum; stdin if absent
    file: Option<String>,
    /// Rank of the free module to evaluate on
    #[arg(long)]
    width: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: assoc, hecke, functor, or preduce
    #[arg(long)]
    suite: String,
    /// Largest cardinality to enumerate
    #[arg(long, default_value_t = 4)]
    max_card: u64,
}

#[derive(Args)]
struct ReduceArgs {
    /// The multiset to reduce
    alpha: String,
    /// Reduce at this prime (multiplicities become p-powers)
    #[arg(long, conflicts_with = "char0")]
    p: Option<u64>,
    /// Characteristic-zero reduction (all multiplicities become one)
    #[arg(long)]
    char0: bool,
}

#[derive(Args)]
struct GammaArgs {
    /// Weight basis of this multiset shape …
    #[arg(long, conflicts_with_all = ["degree", "presentation"])]
    shape: Option<String>,
    /// … on a free module of this rank
    #[arg(long)]
    width: Option<usize>,
    /// Divided power degree applied to a presented module …
    #[arg(long, requires = "presentation")]
    degree: Option<u64>,
    /// … loaded from this JSON file
    #[arg(long)]
    presentation: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvariantViolation(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: 2, message: format!("bad JSON input: {e}") }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.threads {
        Some(n) if n <= 1 => schcat::exec::force_sequential(true),
        Some(n) => std::env::set_var("RAYON_NUM_THREADS", n.to_string()),
        None => {}
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Hom(args) => cmd_hom(cli, args),
        Command::Compose(args) => cmd_compose(cli, args),
        Command::Realize(args) => cmd_realize(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Reduce(args) => cmd_reduce(cli, args),
        Command::Gamma(args) => cmd_gamma(cli, args),
    }
}

fn parse_multiset(s: &str) -> Result<Multiset, Failure> {
    s.parse::<Multiset>().map_err(Failure::from)
}

fn read_input(file: &Option<String>) -> Result<String, Failure> {
    match file.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
        Some(path) => Ok(fs::read_to_string(path)?),
    }
}

fn emit<T: Serialize>(cli: &Cli, command: &str, result: T, table: String) -> Result<(), Failure> {
    match cli.format {
        Format::Json => {
            let envelope = Envelope::new(command, result);
            let text = serde_json::to_string_pretty(&envelope)
                .map_err(|e| Failure { code: 1, message: e.to_string() })?;
            println!("{text}");
        }
        Format::Table => println!("{table}"),
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct HomResult {
    beta: MultisetJson,
    alpha: MultisetJson,
    ring: String,
    rank: usize,
    basis: Vec<HomEntry>,
}

#[derive(Serialize, Deserialize)]
struct HomEntry {
    graph: GraphJson,
    deg_left: String,
    deg_right: String,
}

fn cmd_hom(cli: &Cli, args: &HomArgs) -> Result<(), Failure> {
    let beta = parse_multiset(&args.beta)?;
    let alpha = parse_multiset(&args.alpha)?;
    let ring: Ring = args.ring.parse()?;
    let basis = hom_basis(&beta, &alpha);
    let entries: Vec<HomEntry> = basis
        .iter()
        .map(|g| {
            let span = g.span();
            HomEntry {
                graph: g.into(),
                deg_left: span.left.degree().to_string(),
                deg_right: span.right.degree().to_string(),
            }
        })
        .collect();
    let mut t = table::Table::new(vec!["#", "entries", "deg_left", "deg_right"]);
    for (i, e) in entries.iter().enumerate() {
        t.row(vec![
            i.to_string(),
            table::entries_text(&e.graph.entries),
            e.deg_left.clone(),
            e.deg_right.clone(),
        ]);
    }
    let text = format!(
        "hom {} -> {} over {}: {} graphs\n{}",
        beta,
        alpha,
        ring,
        basis.len(),
        t.render()
    );
    let result = HomResult {
        beta: (&beta).into(),
        alpha: (&alpha).into(),
        ring: ring.to_string(),
        rank: basis.len(),
        basis: entries,
    };
    emit(cli, "hom", result, text)
}

#[derive(Serialize, Deserialize)]
struct ComposeRequest {
    schema: String,
    h: SchMorphismJson,
    g: SchMorphismJson,
}

fn cmd_compose(cli: &Cli, args: &ComposeArgs) -> Result<(), Failure> {
    let input = read_input(&args.file)?;
    let request: ComposeRequest = serde_json::from_str(&input)?;
    if request.schema != SCHEMA_VERSION {
        return Err(Failure {
            code: 2,
            message: format!("unsupported schema {:?}", request.schema),
        });
    }
    let h: SchMorphism = (&request.h).try_into()?;
    let g: SchMorphism = (&request.g).try_into()?;
    let composed = SchMorphism::compose(&h, &g)?;
    let text = table::morphism_text(&composed);
    emit(cli, "compose", SchMorphismJson::from(&composed), text)
}

fn cmd_realize(cli: &Cli, args: &RealizeArgs) -> Result<(), Failure> {
    let input = read_input(&args.file)?;
    let morphism_json: SchMorphismJson = serde_json::from_str(&input)?;
    let morphism: SchMorphism = (&morphism_json).try_into()?;
    let matrix = gamma::realize(&morphism, args.width);
    let json = CoeffMatrixJson::from(&matrix);
    let mut t = table::Table::new(vec![]);
    for row in &json.entries {
        t.row(row.clone());
    }
    let text = format!(
        "realize {} -> {} at width {}: {}x{} over {}\n{}",
        morphism.source(),
        morphism.target(),
        args.width,
        matrix.rows,
        matrix.cols,
        matrix.ring,
        t.render()
    );
    emit(cli, "realize", json, text)
}

#[derive(Serialize, Deserialize)]
struct VerifyResult {
    suite: String,
    max_card: u64,
    cases: usize,
    failures: Vec<String>,
    passed: bool,
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<(), Failure> {
    let report = verify::run_suite(&args.suite, args.max_card)?;
    let passed = report.passed();
    let verdict = if passed { "PASS" } else { "FAIL" };
    let mut text = format!(
        "suite {} (max cardinality {}): {} cases, {} failures: {}",
        report.suite,
        args.max_card,
        report.cases,
        report.failures.len(),
        verdict
    );
    for f in &report.failures {
        text.push_str(&format!("\n  {f}"));
    }
    let result = VerifyResult {
        suite: report.suite.clone(),
        max_card: args.max_card,
        cases: report.cases,
        failures: report.failures.clone(),
        passed,
    };
    emit(cli, "verify", result, text)?;
    if passed {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("suite {} failed", report.suite) })
    }
}

#[derive(Serialize, Deserialize)]
struct ReduceResult {
    alpha: MultisetJson,
    mode: String,
    alpha_prime: MultisetJson,
    cover: MultijectionJson,
    degree: String,
    ring: String,
    idempotent: SchMorphismJson,
}

fn cmd_reduce(cli: &Cli, args: &ReduceArgs) -> Result<(), Failure> {
    let alpha = parse_multiset(&args.alpha)?;
    let (reduction, ring, mode) = match (args.p, args.char0) {
        (Some(p), false) => (plocal::p_reduce(&alpha, p)?, Ring::local(p)?, format!("p={p}")),
        (None, true) => (plocal::char0_reduce(&alpha), Ring::Rat, "char0".to_string()),
        _ => {
            return Err(Failure {
                code: 2,
                message: "choose exactly one of --p <prime> or --char0".into(),
            })
        }
    };
    let idempotent = plocal::split_idempotent(&reduction, ring)?;
    let text = format!(
        "reduce {} ({}): cover {} with degree {}\nidempotent over {}:\n{}",
        alpha,
        mode,
        reduction.reduced,
        reduction.degree,
        ring,
        table::morphism_text(&idempotent)
    );
    let result = ReduceResult {
        alpha: (&alpha).into(),
        mode,
        alpha_prime: (&reduction.reduced).into(),
        cover: (&reduction.cover).into(),
        degree: reduction.degree.to_string(),
        ring: ring.to_string(),
        idempotent: (&idempotent).into(),
    };
    emit(cli, "reduce", result, text)
}

#[derive(Serialize, Deserialize)]
struct GammaBasisResult {
    shape: MultisetJson,
    width: usize,
    dimension: usize,
    basis: Vec<WeightMonomialJson>,
}

#[derive(Serialize, Deserialize)]
struct GammaModuleResult {
    degree: u64,
    input: FPModuleJson,
    module: FPModuleJson,
    invariants: String,
}

fn cmd_gamma(cli: &Cli, args: &GammaArgs) -> Result<(), Failure> {
    match (&args.shape, args.degree, &args.presentation) {
        (Some(shape), None, None) => {
            let width = args.width.ok_or_else(|| Failure {
                code: 2,
                message: "--shape needs --width".into(),
            })?;
            let shape = parse_multiset(shape)?;
            let space = gamma::basis(&shape, width);
            let basis: Vec<WeightMonomialJson> =
                space.basis.iter().map(|m| m.into()).collect();
            let mut t = table::Table::new(vec!["#", "exps"]);
            for (i, m) in basis.iter().enumerate() {
                t.row(vec![i.to_string(), table::entries_text(&m.exps)]);
            }
            let text = format!(
                "gamma basis of {} at width {}: dimension {}\n{}",
                shape,
                width,
                space.dimension(),
                t.render()
            );
            let result = GammaBasisResult {
                shape: (&shape).into(),
                width,
                dimension: space.dimension(),
                basis,
            };
            emit(cli, "gamma", result, text)
        }
        (None, Some(degree), Some(path)) => {
            let input = fs::read_to_string(path)?;
            let module_json: FPModuleJson = serde_json::from_str(&input)?;
            let module: schcat::exactlin::FPModule = (&module_json).try_into()?;
            let result_module = gamma::gamma_of_presentation(degree, &module);
            let invariants = result_module.invariants().to_string();
            let text = format!(
                "gamma^{} of a module with {} generators: {}",
                degree, module.rank, invariants
            );
            let result = GammaModuleResult {
                degree,
                input: module_json,
                module: (&result_module).into(),
                invariants,
            };
            emit(cli, "gamma", result, text)
        }
        _ => Err(Failure {
            code: 2,
            message: "use either --shape with --width, or --degree with --presentation".into(),
        }),
    }
}
