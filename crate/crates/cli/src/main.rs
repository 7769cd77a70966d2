//! Command-line front end: constructions, verification, the count-equation
//! solver and filters, constructive and search extensions, chromatic data,
//! gap-certificate chains, built-in fixtures, and end-to-end reproduction of
//! the named case analyses.
//!
//! Machine-readable JSON goes to standard output; a human summary goes to
//! standard error unless `--quiet` is given. Exit codes: 0 success/feasible,
//! 2 validation or verification failure, 3 search exhausted (nonexistence
//! established), 4 node budget exhausted (undecided), 5 bad input or usage.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;

use sts_bicolor::budget::Budget;
use sts_bicolor::*;

mod reproduce;

const EXIT_OK: i32 = 0;
const EXIT_INVALID: i32 = 2;
const EXIT_EXHAUSTED: i32 = 3;
const EXIT_BUDGET: i32 = 4;
const EXIT_USAGE: i32 = 5;

#[derive(Parser)]
#[command(
    name = "sts-bicolor",
    version,
    about = "Steiner triple systems, bicolorings, and doubling extensions"
)]
struct Cli {
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    /// Also write the JSON output to this file.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a triple system (bose, skolem, or a doubling).
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Re-check an object from its JSON serialization.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Enumerate the count-equation solutions for a base order and pattern.
    SolveEq1(SolveEq1Args),
    /// List the color pairs eligible for the pairwise constructive extension.
    Eligible(EligibleArgs),
    /// Produce an extension certificate (constructively or by search).
    #[command(subcommand)]
    Extend(ExtendCmd),
    /// Lower/upper chromatic numbers and independence data of a system.
    Chromatic(ChromaticArgs),
    /// Build or advance a chain of chromatic-gap certificates.
    Chain(ChainArgs),
    /// Print a built-in fixture.
    Fixtures(FixturesArgs),
    /// Run a named case analysis end-to-end and compare against its
    /// recorded values.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Bose construction, v ≡ 3 (mod 6).
    Bose(OrderArgs),
    /// Skolem construction, v ≡ 1 (mod 6).
    Skolem(OrderArgs),
    /// Doubling construction from a base system.
    Double(DoubleArgs),
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    v: usize,
}

#[derive(Args)]
struct DoubleArgs {
    #[command(flatten)]
    system: SystemInput,
    /// Factorization JSON for the complete graph on v+1 vertices
    /// (defaults to the round-robin factorization).
    #[arg(long, value_name = "PATH")]
    factorization: Option<PathBuf>,
    /// Association JSON (defaults to the identity pairing).
    #[arg(long, value_name = "PATH")]
    association: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// STS axioms on a {"v", "triples"} file.
    Sts(SystemInputArgs),
    /// 1-factorization of the complete graph on its declared vertices.
    Factorization(FileArgs),
    /// Strict bicoloring of a coloring against a system.
    Coloring(VerifyColoringArgs),
    /// Every invariant of an extension certificate, from raw data.
    Certificate(FileArgs),
    /// Every step of a chromatic-gap chain.
    Chain(FileArgs),
}

#[derive(Args)]
struct SystemInputArgs {
    #[command(flatten)]
    system: SystemInput,
}

#[derive(Args)]
struct FileArgs {
    /// Path to the JSON input.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
}

#[derive(Args)]
struct VerifyColoringArgs {
    #[command(flatten)]
    system: SystemInput,
    /// Coloring JSON file ({"v", "k", "colors"}).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Explicit color list, comma-separated, one entry per point.
    #[arg(long, value_delimiter = ',', value_name = "C,C,...")]
    colors: Option<Vec<usize>>,
}

#[derive(Args)]
struct SolveEq1Args {
    #[arg(long)]
    v: usize,
    /// Base class sizes by color position, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
    pattern: Vec<usize>,
    /// Apply a filter to the solution list.
    #[arg(long, value_parser = ["corollary2", "counting"])]
    filter: Option<String>,
}

#[derive(Args)]
struct EligibleArgs {
    #[arg(long)]
    v: usize,
    #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
    pattern: Vec<usize>,
}

#[derive(Subcommand)]
enum ExtendCmd {
    /// Pairwise constructive extension for an eligible color pair.
    Theorem3(ExtendConstructiveArgs),
    /// Layered constructive extension over a color sequence.
    Theorem4(ExtendLayeredArgs),
    /// Exhaustive backtracking search for given per-color counts.
    Search(ExtendSearchArgs),
}

#[derive(Args)]
struct ExtendConstructiveArgs {
    #[command(flatten)]
    input: ColoredSystemInput,
    /// Color pair "i,j" (defaults to the first eligible pair).
    #[arg(long, value_delimiter = ',', value_name = "I,J")]
    pair: Option<Vec<usize>>,
}

#[derive(Args)]
struct ExtendLayeredArgs {
    #[command(flatten)]
    input: ColoredSystemInput,
    /// Color sequence k_1,...,k_p.
    #[arg(long, value_delimiter = ',', value_name = "K,K,...")]
    sequence: Vec<usize>,
}

#[derive(Args)]
struct ExtendSearchArgs {
    #[command(flatten)]
    input: ColoredSystemInput,
    /// Per-color counts of the added points, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "C,C,...")]
    solution: Vec<usize>,
    /// Node budget for the search.
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
    /// Worker threads for the root branching (1 = strictly sequential).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ChromaticArgs {
    #[command(flatten)]
    system: SystemInput,
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
}

#[derive(Args)]
struct ChainArgs {
    /// Extension-certificate JSON to seed the chain from.
    #[arg(long, value_name = "PATH", conflicts_with = "case")]
    seed: Option<PathBuf>,
    /// Build the seed in-process from a named reproduction case
    /// (currently: theorem5).
    #[arg(long, value_parser = ["theorem5"])]
    case: Option<String>,
    /// Number of doubling steps to advance.
    #[arg(long, default_value_t = 3)]
    steps: usize,
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
}

#[derive(Args)]
struct FixturesArgs {
    /// fano | sts9 | cyclic13 | example12 | theorem9_table
    name: String,
}

#[derive(Args)]
pub struct ReproduceArgs {
    /// sts19 | theorem5 | theorem6 | sts25 | sts45-solutions |
    /// sts49-counts | theorem8ii | theorem9 | corollary11
    name: String,
    /// Solution vector for cases that search (theorem5: defaults to 4,4,6).
    #[arg(long, value_delimiter = ',', value_name = "C,C,...")]
    solution: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1_000_000_000)]
    budget: u64,
    /// Worker threads for searching cases.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// A system argument: either a built-in fixture name or a JSON file.
#[derive(Args)]
struct SystemInput {
    /// Built-in system: fano | sts9 | cyclic13 | example12.
    #[arg(long, conflicts_with = "system")]
    fixture: Option<String>,
    /// Path to a {"v", "triples"} JSON file.
    #[arg(long, value_name = "PATH")]
    system: Option<PathBuf>,
}

/// A system plus a strict bicoloring of it.
#[derive(Args)]
struct ColoredSystemInput {
    #[command(flatten)]
    system: SystemInput,
    /// Pattern of the coloring to use, comma-separated class sizes; a witness
    /// is found by enumeration and relabeled so class sizes ascend by color.
    /// example12 carries its own coloring, used when this is omitted.
    #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
    coloring: Option<Vec<usize>>,
    /// Coloring JSON file, used verbatim instead of enumeration.
    #[arg(long, value_name = "PATH")]
    coloring_file: Option<PathBuf>,
}

pub struct Ctx {
    quiet: bool,
    output: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, value: &Value) -> i32 {
        let pretty = serde_json::to_string_pretty(value).expect("JSON serialization");
        println!("{pretty}");
        if let Some(path) = &self.output {
            if let Err(e) = std::fs::write(path, pretty.as_bytes()) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        EXIT_OK
    }

    fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_usage_error { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let ctx = Ctx {
        quiet: cli.quiet,
        output: cli.output.clone(),
    };
    let code = match run(&ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            classify_error(&e)
        }
    };
    std::process::exit(code);
}

/// A budget died before the question was decided.
#[derive(Debug)]
struct BudgetSpent {
    what: String,
}

impl std::fmt::Display for BudgetSpent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "node budget exhausted during {}", self.what)
    }
}

impl std::error::Error for BudgetSpent {}

fn classify_error(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<BudgetSpent>().is_some() {
        return EXIT_BUDGET;
    }
    if let Some(err) = e.downcast_ref::<sts_bicolor::Error>() {
        match err {
            sts_bicolor::Error::VerificationFailure { .. }
            | sts_bicolor::Error::ConstructionUnverified { .. }
            | sts_bicolor::Error::InvalidFactorization { .. } => EXIT_INVALID,
            // explicitly undecided, like a spent node budget
            sts_bicolor::Error::InstanceTooLarge { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    } else {
        EXIT_USAGE
    }
}

fn run(ctx: &Ctx, command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Construct(cmd) => construct(ctx, cmd),
        Command::Verify(cmd) => verify(ctx, cmd),
        Command::SolveEq1(args) => solve_eq1(ctx, args),
        Command::Eligible(args) => eligible(ctx, args),
        Command::Extend(cmd) => extend(ctx, cmd),
        Command::Chromatic(args) => chromatic(ctx, args),
        Command::Chain(args) => chain_cmd(ctx, args),
        Command::Fixtures(args) => fixtures_cmd(ctx, args),
        Command::Reproduce(args) => reproduce::run(ctx, args),
    }
}

/// Loads and validates a system; commands that *report* on possibly-broken
/// input use [`load_system_unchecked`] instead.
fn load_system(input: &SystemInput) -> anyhow::Result<TripleSystem> {
    let sts = load_system_unchecked(input)?;
    let report = sts.validate();
    anyhow::ensure!(
        report.valid,
        "input system is not a valid STS: {}",
        report
            .violation
            .map(|w| w.to_string())
            .unwrap_or_default()
    );
    Ok(sts)
}

fn load_system_unchecked(input: &SystemInput) -> anyhow::Result<TripleSystem> {
    match (&input.fixture, &input.system) {
        (Some(name), None) => match fixtures::lookup(name) {
            Some(Fixture::System(sts)) => Ok(sts),
            Some(Fixture::SystemWithColoring(sts, _)) => Ok(sts),
            Some(Fixture::Table(_)) => anyhow::bail!("fixture {name} is a table, not a system"),
            None => anyhow::bail!("unknown fixture {name}"),
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            Ok(serde_json::from_str(&text)?)
        }
        _ => anyhow::bail!("give exactly one of --fixture or --system"),
    }
}

/// Resolves the coloring for a colored-system input. Pattern-based requests
/// enumerate a witness and relabel it so class sizes ascend by color index.
fn load_colored_system(
    input: &ColoredSystemInput,
    budget: &Budget,
) -> anyhow::Result<(TripleSystem, Coloring)> {
    let sts = load_system(&input.system)?;
    if let Some(path) = &input.coloring_file {
        let text = std::fs::read_to_string(path)?;
        let col: Coloring = serde_json::from_str(&text)?;
        return Ok((sts, col));
    }
    if let Some(pattern) = &input.coloring {
        let k = pattern.len();
        let want = Pattern::new(pattern.iter().copied());
        let result = enumerate_bicolorings(&sts, k, budget);
        if let Some(witness) = result.witnesses.get(&want) {
            return Ok((sts, witness.sorted_by_class_size()));
        }
        if result.complete {
            anyhow::bail!("no strict bicoloring with pattern {want} exists on this system");
        }
        return Err(BudgetSpent {
            what: format!("bicoloring enumeration for a {want} witness"),
        }
        .into());
    }
    if let Some(name) = &input.system.fixture {
        if let Some(Fixture::SystemWithColoring(_, col)) = fixtures::lookup(name) {
            return Ok((sts, col));
        }
    }
    anyhow::bail!("no coloring given: use --coloring (pattern) or --coloring-file")
}

fn construct(ctx: &Ctx, cmd: ConstructCmd) -> anyhow::Result<i32> {
    let sts = match cmd {
        ConstructCmd::Bose(args) => bose_construction(args.v)?,
        ConstructCmd::Skolem(args) => skolem_construction(args.v)?,
        ConstructCmd::Double(args) => {
            let base = load_system(&args.system)?;
            let v = base.order();
            let f = match &args.factorization {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => circle_factorization(v + 1)?,
            };
            let assoc = match &args.association {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => DoublingAssociation::identity(v),
            };
            double(&base, &f, &assoc)?
        }
    };
    let report = sts.validate();
    anyhow::ensure!(report.valid, "constructed system failed validation");
    ctx.note(&format!(
        "valid STS({}) with {} triples",
        sts.order(),
        sts.triples().len()
    ));
    Ok(ctx.emit(&serde_json::to_value(&sts)?))
}

fn verify(ctx: &Ctx, cmd: VerifyCmd) -> anyhow::Result<i32> {
    match cmd {
        VerifyCmd::Sts(args) => {
            let sts = load_system_unchecked(&args.system)?;
            let report = sts.validate();
            ctx.note(&format!(
                "sts: {}",
                if report.valid { "valid" } else { "INVALID" }
            ));
            let code = if report.valid { EXIT_OK } else { EXIT_INVALID };
            ctx.emit(&serde_json::to_value(&report)?);
            Ok(code)
        }
        VerifyCmd::Factorization(args) => {
            let f: OneFactorization = serde_json::from_str(&std::fs::read_to_string(&args.input)?)?;
            let report = validate_factorization(
                &f,
                &GraphKind::Complete {
                    m: f.vertex_count(),
                },
            );
            ctx.note(&format!(
                "factorization: {}",
                if report.valid { "valid" } else { "INVALID" }
            ));
            let code = if report.valid { EXIT_OK } else { EXIT_INVALID };
            ctx.emit(&serde_json::to_value(&report)?);
            Ok(code)
        }
        VerifyCmd::Coloring(args) => {
            let sts = load_system(&args.system)?;
            let col = match (&args.input, &args.colors) {
                (Some(path), None) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                (None, Some(colors)) => {
                    let k = colors.iter().copied().max().map_or(0, |m| m + 1);
                    Coloring::new(k, colors.clone())?
                }
                _ => anyhow::bail!("give exactly one of --input or --colors"),
            };
            let report = verify_bicoloring(&sts, &col)?;
            let pattern = pattern_of(&col);
            ctx.note(&format!(
                "coloring: {} (pattern {pattern})",
                if report.ok {
                    "strict bicoloring"
                } else {
                    "NOT a strict bicoloring"
                }
            ));
            let code = if report.ok { EXIT_OK } else { EXIT_INVALID };
            ctx.emit(&json!({
                "report": report,
                "pattern": pattern,
            }));
            Ok(code)
        }
        VerifyCmd::Certificate(args) => {
            let cert: ExtensionCertificate =
                serde_json::from_str(&std::fs::read_to_string(&args.input)?)?;
            let (ok, transcript) = cert.verify();
            ctx.note(&format!(
                "certificate: {} ({} checks)",
                if ok { "verified" } else { "FAILED" },
                transcript.len()
            ));
            let code = if ok { EXIT_OK } else { EXIT_INVALID };
            ctx.emit(&json!({
                "ok": ok,
                "transcript": transcript,
                "extended_pattern": cert.extended_pattern(),
            }));
            Ok(code)
        }
        VerifyCmd::Chain(args) => {
            let record: ChainRecord = serde_json::from_str(&std::fs::read_to_string(&args.input)?)?;
            let mut checks = Vec::new();
            let mut all = true;
            for (i, step) in record.steps.iter().enumerate() {
                let result = step.verify();
                let ok = result.is_ok();
                all &= ok;
                checks.push(json!({
                    "step": i,
                    "order": step.system.order(),
                    "ok": ok,
                    "detail": result.err().map(|e| e.to_string()),
                }));
            }
            for (i, pair) in record.steps.windows(2).enumerate() {
                let w = pair[0].system.order();
                let ok = pair[1].system.order() == 2 * w + 1
                    && find_subsystem(&pair[1].system, &(0..w).collect::<Vec<_>>()).is_subsystem();
                all &= ok;
                checks.push(json!({
                    "nesting": [i, i + 1],
                    "ok": ok,
                }));
            }
            ctx.note(&format!(
                "chain: {} ({} steps)",
                if all { "verified" } else { "FAILED" },
                record.steps.len()
            ));
            let code = if all { EXIT_OK } else { EXIT_INVALID };
            ctx.emit(&json!({"ok": all, "checks": checks}));
            Ok(code)
        }
    }
}

fn solve_eq1(ctx: &Ctx, args: SolveEq1Args) -> anyhow::Result<i32> {
    anyhow::ensure!(!args.pattern.is_empty(), "--pattern must not be empty");
    anyhow::ensure!(
        args.pattern.iter().sum::<usize>() == args.v,
        "pattern must sum to v = {}",
        args.v
    );
    let solutions = enumerate_eq1_solutions(args.v, &args.pattern);
    let mut out = json!({
        "v": args.v,
        "pattern": args.pattern,
        "solutions": solutions,
        "count": solutions.len(),
    });
    ctx.note(&format!("{} solutions", solutions.len()));
    match args.filter.as_deref() {
        None => {}
        Some("corollary2") => {
            let filtered = filter_corollary2(&solutions, args.v);
            ctx.note(&format!(
                "parity filter keeps {} of {}",
                filtered.survivors.len(),
                solutions.len()
            ));
            out["filter"] = json!("corollary2");
            out["survivors"] = serde_json::to_value(&filtered.survivors)?;
            out["eliminated"] = Value::Array(
                filtered
                    .eliminated
                    .iter()
                    .map(|(sol, why)| json!({"solution": sol, "reason": why.to_string()}))
                    .collect(),
            );
        }
        Some("counting") => {
            let filtered = filter_corollary2(&solutions, args.v);
            let mut survivors = Vec::new();
            let mut eliminated: Vec<Value> = filtered
                .eliminated
                .iter()
                .map(|(sol, why)| json!({"solution": sol, "reason": why.to_string()}))
                .collect();
            for sol in &filtered.survivors {
                match counting_filter(sol, &args.pattern, args.v)? {
                    CountingVerdict::Feasible => survivors.push(sol.clone()),
                    CountingVerdict::Infeasible { reason } => {
                        eliminated.push(json!({"solution": sol, "reason": reason}));
                    }
                }
            }
            ctx.note(&format!(
                "counting filter keeps {} of {}",
                survivors.len(),
                solutions.len()
            ));
            out["filter"] = json!("counting");
            out["survivors"] = serde_json::to_value(&survivors)?;
            out["eliminated"] = Value::Array(eliminated);
        }
        Some(other) => anyhow::bail!("unknown filter {other}"),
    }
    Ok(ctx.emit(&out))
}

fn eligible(ctx: &Ctx, args: EligibleArgs) -> anyhow::Result<i32> {
    anyhow::ensure!(
        args.pattern.iter().sum::<usize>() == args.v,
        "pattern must sum to v = {}",
        args.v
    );
    let pairs = theorem3_eligible(&args.pattern, args.v);
    let detailed: Vec<Value> = pairs
        .iter()
        .map(|&(i, j)| {
            json!({
                "colors": [i, j],
                "sizes": [args.pattern[i], args.pattern[j]],
            })
        })
        .collect();
    ctx.note(&format!("{} eligible pair(s)", pairs.len()));
    Ok(ctx.emit(&json!({
        "v": args.v,
        "pattern": args.pattern,
        "half": args.v.div_ceil(2),
        "eligible": detailed,
    })))
}

fn extend(ctx: &Ctx, cmd: ExtendCmd) -> anyhow::Result<i32> {
    match cmd {
        ExtendCmd::Theorem3(args) => {
            let budget = Budget::new(1_000_000_000);
            let (sts, col) = load_colored_system(&args.input, &budget)?;
            let (i, j) = match &args.pair {
                Some(pair) if pair.len() == 2 => (pair[0], pair[1]),
                Some(_) => anyhow::bail!("--pair needs exactly two colors"),
                None => *theorem3_eligible(&col.class_sizes(), sts.order())
                    .first()
                    .ok_or_else(|| anyhow::anyhow!("no eligible color pair"))?,
            };
            let cert = theorem3_extend(&sts, &col, i, j)?;
            ctx.note(&format!(
                "extended to order {} with pattern {}",
                cert.doubled.order(),
                cert.extended_pattern()
            ));
            Ok(ctx.emit(&serde_json::to_value(&cert)?))
        }
        ExtendCmd::Theorem4(args) => {
            let budget = Budget::new(1_000_000_000);
            let (sts, col) = load_colored_system(&args.input, &budget)?;
            let cert = theorem4_extend(&sts, &col, &args.sequence)?;
            ctx.note(&format!(
                "extended to order {} with pattern {}",
                cert.doubled.order(),
                cert.extended_pattern()
            ));
            Ok(ctx.emit(&serde_json::to_value(&cert)?))
        }
        ExtendCmd::Search(args) => {
            // witness enumeration is bookkeeping; --budget limits the search
            let (sts, col) = load_colored_system(&args.input, &Budget::new(1_000_000_000))?;
            let budget = Budget::new(args.budget);
            let solution = SolutionVector(args.solution.clone());
            match search_extension(&sts, &col, &solution, &budget, args.jobs)? {
                ExtensionSearch::Found(cert) => {
                    ctx.note(&format!(
                        "certificate found: order {} pattern {} ({} nodes)",
                        cert.doubled.order(),
                        cert.extended_pattern(),
                        budget.used()
                    ));
                    Ok(ctx.emit(&serde_json::to_value(&cert)?))
                }
                ExtensionSearch::Exhausted => {
                    ctx.note(&format!(
                        "exhausted: no extension with counts {solution} exists ({} nodes)",
                        budget.used()
                    ));
                    ctx.emit(&json!({
                        "outcome": "exhausted",
                        "solution": solution,
                        "nodes": budget.used(),
                    }));
                    Ok(EXIT_EXHAUSTED)
                }
                ExtensionSearch::BudgetExhausted => {
                    ctx.note("budget exhausted: undecided");
                    ctx.emit(&json!({
                        "outcome": "budget-exhausted",
                        "solution": solution,
                        "nodes": budget.used(),
                    }));
                    Ok(EXIT_BUDGET)
                }
            }
        }
    }
}

fn chromatic(ctx: &Ctx, args: ChromaticArgs) -> anyhow::Result<i32> {
    let sts = load_system(&args.system)?;
    let budget = Budget::new(args.budget);
    let outcome = chromatic_bounds(&sts, &budget);
    let independence = independence_number(&sts, &budget);
    let summary = match &outcome {
        ChromaticOutcome::Exact { chi, chi_bar } => format!("chi = {chi}, chi-bar = {chi_bar}"),
        ChromaticOutcome::Uncolorable => "uncolorable".into(),
        ChromaticOutcome::Partial { .. } => "partial bounds (budget exhausted)".into(),
    };
    ctx.note(&format!(
        "{summary}; alpha {} {}",
        if independence.exact { "=" } else { ">=" },
        independence.alpha
    ));
    let code = match &outcome {
        ChromaticOutcome::Partial { .. } => EXIT_BUDGET,
        _ => EXIT_OK,
    };
    ctx.emit(&json!({
        "order": sts.order(),
        "max_colors_bound": max_colors_bound(sts.order()),
        "chromatic": outcome,
        "independence": independence,
    }));
    Ok(code)
}

fn chain_cmd(ctx: &Ctx, args: ChainArgs) -> anyhow::Result<i32> {
    let seed = match (&args.seed, &args.case) {
        (Some(path), None) => {
            let cert: ExtensionCertificate = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            seed_certificate(&cert)?
        }
        (None, Some(name)) if name == "theorem5" => {
            let budget = Budget::new(args.budget);
            let cert = reproduce::theorem5_certificate(&budget, vec![4, 4, 6], 1)?;
            seed_certificate(&cert)?
        }
        _ => anyhow::bail!("give exactly one of --seed or --case"),
    };
    let record = ChainRecord { steps: vec![seed] };
    let advanced = advance_chain(&record, args.steps);
    let orders: Vec<usize> = advanced
        .record
        .steps
        .iter()
        .map(|s| s.system.order())
        .collect();
    ctx.note(&format!("chain orders: {orders:?}"));
    let code = if advanced.failure.is_some() {
        EXIT_INVALID
    } else {
        EXIT_OK
    };
    ctx.emit(&json!({
        "orders": orders,
        "failure": advanced.failure,
        "record": advanced.record,
    }));
    Ok(code)
}

fn fixtures_cmd(ctx: &Ctx, args: FixturesArgs) -> anyhow::Result<i32> {
    match fixtures::lookup(&args.name) {
        Some(Fixture::System(sts)) => {
            ctx.note(&format!("STS({})", sts.order()));
            Ok(ctx.emit(&serde_json::to_value(&sts)?))
        }
        Some(Fixture::SystemWithColoring(sts, col)) => {
            ctx.note(&format!(
                "STS({}) with a strict {}-bicoloring, pattern {}",
                sts.order(),
                col.k(),
                pattern_of(&col)
            ));
            Ok(ctx.emit(&json!({"system": sts, "coloring": col})))
        }
        Some(Fixture::Table(rows)) => {
            ctx.note(&format!("{} rows", rows.len()));
            Ok(ctx.emit(&serde_json::to_value(&rows)?))
        }
        None => anyhow::bail!("unknown fixture {}", args.name),
    }
}
