//! Command-line front end: solve fixed instances, duel adaptive adversaries,
//! query the exact oracles, and verify colorings.
//!
//! Exit codes are scriptable: 0 for a clean run, 1 for usage and input
//! errors, 2 when an algorithm or adversary breaks its contract (improper
//! coloring, failed guarantee, bad certificate), 3 when an exact oracle
//! refuses an instance over its size limit.
//!
//! Every report is a single JSON document. Reports embed enough to be fed
//! back in: a `solve` report carries its rounds, so it replays as an
//! instance, and its `colors` field makes it double as a coloring file;
//! an `adversary` report replays the same way through its transcript.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::adversaries::{
    IntervalKtAdversary, IntervalNorepAdversary, SumKnownAdversary, SumUnknownAdversary,
    TreeAdversary,
};
use crate::algorithms::{FirstFit, GenericBatch, RandomProper};
use crate::engine::{
    run_duel, run_instance, Adversary, EngineError, Instance, Objective, OnlineColorer,
    TranscriptRound, DEFAULT_BATCH_LIMIT,
};
use crate::format::{parse_coloring, parse_input, FormatError};
use crate::graph::{color_sum, max_color, validate_coloring, Coloring};
use crate::oracle::{chromatic_number_exact, min_sum_coloring_exact, OracleError};
use crate::rat::{Rat, RatPair};
use crate::sum_coloring::{BatchColorF, FirstFitSum, KBatchColor, ScheduleFunction};
use crate::two_batches::TwoBatches;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_VIOLATION: i32 = 2;
const EXIT_SIZE_LIMIT: i32 = 3;

const ALGORITHMS: &str =
    "generic-batch, first-fit, random-proper, two-batches, k-batch-color, batch-color-f, first-fit-sum";
const ADVERSARIES: &str = "tree, interval-norep, interval-kt, sum-known, sum-unknown";

#[derive(Parser)]
#[command(
    name = "batchcolor",
    version,
    about = "Batch graph coloring: online algorithms, adaptive adversaries, exact oracles",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an online algorithm over an instance file and report its cost
    Solve(SolveArgs),
    /// Duel an algorithm against an adaptive adversary and check the guarantee
    Adversary(AdversaryArgs),
    /// Compute the exact optimum of an instance
    Oracle(OracleArgs),
    /// Check a coloring file against an instance file
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    /// Minimize the largest color used
    Colors,
    /// Minimize the sum of all colors
    Sum,
}

impl ObjectiveArg {
    fn objective(self) -> Objective {
        match self {
            ObjectiveArg::Colors => Objective::MaxColor,
            ObjectiveArg::Sum => Objective::SumColors,
        }
    }

    fn flag_for(objective: Objective) -> &'static str {
        match objective {
            Objective::MaxColor => "colors",
            Objective::SumColors => "sum",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Algorithm: generic-batch, first-fit, random-proper, two-batches,
    /// k-batch-color, batch-color-f, or first-fit-sum
    #[arg(long)]
    algorithm: String,
    /// Instance file (graph or interval form), or a previously emitted
    /// transcript / duel report to replay
    #[arg(long)]
    input: PathBuf,
    /// Scoring objective
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Expected batch count; the input is refused when it differs
    #[arg(long)]
    k: Option<usize>,
    /// Color-budget schedule for batch-color-f, e.g. f=isq,cf=329/200
    /// (f: isq, lin, or one; cf: a positive rational)
    #[arg(long)]
    schedule: Option<String>,
    /// Include per-algorithm diagnostics (checkpoints, budget ledger)
    #[arg(long)]
    diagnostics: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Independent runs; with more than one, the report is a JSON array
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Base seed for seeded algorithms; trial t runs with seed + t
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Adversary: tree, interval-norep, interval-kt, sum-known, or sum-unknown
    #[arg(long)]
    name: String,
    /// Comma-separated parameters, e.g. k=2,q=1,M=9,C=10,connect=1
    #[arg(long)]
    params: String,
    /// Algorithm to duel (same names as solve)
    #[arg(long)]
    algorithm: String,
    /// Color-budget schedule for batch-color-f, e.g. f=isq,cf=329/200
    #[arg(long)]
    schedule: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Independent duels; with more than one, the report is a JSON array
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Base seed for seeded algorithms; trial t runs with seed + t
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file (graph or interval form), or a transcript / duel report
    #[arg(long)]
    input: PathBuf,
    /// Objective to optimize exactly
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file (graph or interval form), or a transcript / duel report
    #[arg(long)]
    input: PathBuf,
    /// Coloring file ({"colors": {...}}); a solve report works directly
    #[arg(long)]
    coloring: PathBuf,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A command failure: what to print on stderr and the exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        usage(e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            // The input file describes a broken or unsupported instance.
            EngineError::DuplicateVertex { .. }
            | EngineError::UnknownEndpoint { .. }
            | EngineError::StaleEdge { .. }
            | EngineError::SelfLoop { .. }
            | EngineError::IntervalMismatch { .. }
            | EngineError::MixedRepresentation { .. }
            | EngineError::EdgeOverlapMismatch { .. }
            | EngineError::UnsupportedInstance { .. } => EXIT_USAGE,
            // The algorithm or adversary broke its contract mid-run.
            EngineError::BadColoring { .. }
            | EngineError::AlgorithmFailure { .. }
            | EngineError::BadCertificate { .. }
            | EngineError::TooManyBatches { .. } => EXIT_VIOLATION,
        };
        Failure { code, message: e.to_string() }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Adversary(args) => cmd_adversary(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

// ---------------------------------------------------------------------------
// Algorithms and adversaries by name

/// Concrete algorithm dispatch. A plain trait object would do for running,
/// but diagnostics need the concrete types back afterwards.
enum AnyColorer {
    Generic(GenericBatch),
    FirstFit(FirstFit),
    Random(RandomProper),
    TwoBatches(TwoBatches),
    KBatch(KBatchColor),
    BatchColorF(BatchColorF),
    FirstFitSum(FirstFitSum),
}

impl AnyColorer {
    fn as_dyn(&mut self) -> &mut dyn OnlineColorer {
        match self {
            AnyColorer::Generic(a) => a,
            AnyColorer::FirstFit(a) => a,
            AnyColorer::Random(a) => a,
            AnyColorer::TwoBatches(a) => a,
            AnyColorer::KBatch(a) => a,
            AnyColorer::BatchColorF(a) => a,
            AnyColorer::FirstFitSum(a) => a,
        }
    }

    /// Post-run diagnostics, for algorithms that keep any.
    fn diagnostics(&self) -> Option<serde_json::Value> {
        match self {
            AnyColorer::TwoBatches(a) => a.last_report.as_ref().map(|r| {
                json!({
                    "omega": r.omega,
                    "checkpoints": r.checkpoints,
                    "all_checkpoints_pass": r.checkpoints.iter().all(|c| c.passed()),
                })
            }),
            AnyColorer::BatchColorF(a) => {
                let ledger = a.ledger();
                Some(json!({
                    "schedule": {
                        "name": a.schedule().name(),
                        "c_f": RatPair(a.schedule().c_f()),
                    },
                    "ledger": ledger.entries,
                    "caps_respected": ledger.entries.iter().all(|e| e.assigned <= e.cap),
                }))
            }
            _ => None,
        }
    }
}

fn make_algorithm(name: &str, seed: u64, schedule: Option<&str>) -> Result<AnyColorer, Failure> {
    if schedule.is_some() && name != "batch-color-f" {
        return Err(usage(format!("--schedule only applies to batch-color-f, not {name}")));
    }
    match name {
        "generic-batch" => Ok(AnyColorer::Generic(GenericBatch::new())),
        "first-fit" => Ok(AnyColorer::FirstFit(FirstFit::new())),
        "random-proper" => Ok(AnyColorer::Random(RandomProper::new(seed))),
        "two-batches" => Ok(AnyColorer::TwoBatches(TwoBatches::new())),
        "k-batch-color" => Ok(AnyColorer::KBatch(KBatchColor::new())),
        "batch-color-f" => Ok(AnyColorer::BatchColorF(BatchColorF::new(parse_schedule(schedule)?))),
        "first-fit-sum" => Ok(AnyColorer::FirstFitSum(FirstFitSum::new())),
        other => Err(usage(format!("unknown algorithm {other:?}; known: {ALGORITHMS}"))),
    }
}

/// Parse `f=isq,cf=329/200` into a schedule. `f` picks the growth function
/// (isq: i², lin: i, one: 1) and `cf` its budget constant. Defaults to the
/// certified quadratic schedule. An uncertified pair is accepted — the run
/// itself reports infeasibility if the budget ever runs dry.
fn parse_schedule(spec: Option<&str>) -> Result<ScheduleFunction, Failure> {
    let Some(spec) = spec else {
        return Ok(ScheduleFunction::quadratic());
    };
    let mut fname: Option<&str> = None;
    let mut cf: Option<Rat> = None;
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("bad schedule component {part:?}: expected key=value")))?;
        match key.trim() {
            "f" => fname = Some(value.trim()),
            "cf" => cf = Some(parse_positive_rat(value.trim())?),
            other => {
                return Err(usage(format!("unknown schedule key {other:?}: expected f and cf")))
            }
        }
    }
    let (name, f): (&str, fn(usize) -> u64) = match fname {
        None | Some("isq") => ("quadratic", |i| (i * i) as u64),
        Some("lin") => ("linear", |i| i as u64),
        Some("one") => ("constant", |_| 1),
        Some(other) => {
            return Err(usage(format!("unknown schedule function {other:?}: expected isq, lin, or one")))
        }
    };
    match cf {
        None => {
            if name == "quadratic" {
                Ok(ScheduleFunction::quadratic())
            } else {
                Err(usage(format!("schedule f={} needs an explicit cf=<rational>", fname.unwrap())))
            }
        }
        Some(cf) => Ok(ScheduleFunction::new(name, f, cf)),
    }
}

fn parse_positive_rat(s: &str) -> Result<Rat, Failure> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let bad = || usage(format!("bad rational {s:?}: expected num or num/den"));
    let n: i128 = n.trim().parse().map_err(|_| bad())?;
    let d: i128 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(usage(format!("bad rational {s:?}: zero denominator")));
    }
    let r = Rat::new(n, d);
    if r <= Rat::from_integer(0) {
        return Err(usage(format!("rational {s:?} must be positive")));
    }
    Ok(r)
}

/// Parsed `--params` key/value pairs.
struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(spec: &str) -> Result<Self, Failure> {
        let mut map = BTreeMap::new();
        for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| usage(format!("bad parameter {part:?}: expected key=value")))?;
            if map.insert(key.trim().to_string(), value.trim().to_string()).is_some() {
                return Err(usage(format!("duplicate parameter {:?}", key.trim())));
            }
        }
        Ok(Params(map))
    }

    fn ensure_only(&self, allowed: &[&str], adversary: &str) -> Result<(), Failure> {
        for key in self.0.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(usage(format!(
                    "adversary {adversary} does not take parameter {key:?}; allowed: {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn require_u64(&self, key: &str, adversary: &str) -> Result<u64, Failure> {
        let value = self
            .0
            .get(key)
            .ok_or_else(|| usage(format!("adversary {adversary} needs parameter {key}=<int>")))?;
        value.parse().map_err(|_| usage(format!("parameter {key}={value:?} is not an integer")))
    }

    fn optional_u64(&self, key: &str) -> Result<Option<u64>, Failure> {
        match self.0.get(key) {
            None => Ok(None),
            Some(value) => value
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("parameter {key}={value:?} is not an integer"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, Failure> {
        match self.0.get(key).map(String::as_str) {
            None => Ok(false),
            Some("1") | Some("true") => Ok(true),
            Some("0") | Some("false") => Ok(false),
            Some(other) => {
                Err(usage(format!("parameter {key}={other:?} is not a flag (use 0/1/true/false)")))
            }
        }
    }
}

enum AnyAdversary {
    Tree(TreeAdversary),
    Norep(IntervalNorepAdversary),
    Kt(IntervalKtAdversary),
    SumKnown(SumKnownAdversary),
    SumUnknown(SumUnknownAdversary),
}

impl AnyAdversary {
    fn as_dyn(&mut self) -> &mut dyn Adversary {
        match self {
            AnyAdversary::Tree(a) => a,
            AnyAdversary::Norep(a) => a,
            AnyAdversary::Kt(a) => a,
            AnyAdversary::SumKnown(a) => a,
            AnyAdversary::SumUnknown(a) => a,
        }
    }
}

/// Run a constructor, turning its range assertions into plain messages.
fn quiet_catch<T>(f: impl FnOnce() -> T + std::panic::UnwindSafe) -> Result<T, Failure> {
    let prev = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let result = std::panic::catch_unwind(f);
    std::panic::set_hook(prev);
    result.map_err(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "parameters out of range".to_string());
        usage(message)
    })
}

fn build_adversary(name: &str, params: &Params) -> Result<AnyAdversary, Failure> {
    match name {
        "tree" => {
            params.ensure_only(&["k", "connect"], name)?;
            let k = params.require_u64("k", name)? as usize;
            let connect = params.flag("connect")?;
            quiet_catch(move || TreeAdversary::new(k, connect)).map(AnyAdversary::Tree)
        }
        "interval-norep" => {
            params.ensure_only(&["q"], name)?;
            let q = params.require_u64("q", name)? as usize;
            quiet_catch(move || IntervalNorepAdversary::new(q)).map(AnyAdversary::Norep)
        }
        "interval-kt" => {
            params.ensure_only(&["q"], name)?;
            let q = params.require_u64("q", name)? as usize;
            quiet_catch(move || IntervalKtAdversary::new(q)).map(AnyAdversary::Kt)
        }
        "sum-known" => {
            params.ensure_only(&["k", "M", "connect"], name)?;
            let k = params.require_u64("k", name)? as usize;
            let m = params.require_u64("M", name)?;
            let connect = params.flag("connect")?;
            quiet_catch(move || SumKnownAdversary::new(k, m, connect)).map(AnyAdversary::SumKnown)
        }
        "sum-unknown" => {
            params.ensure_only(&["k", "M", "C"], name)?;
            let k = params.require_u64("k", name)? as usize;
            let m = params.require_u64("M", name)?;
            let c = params.optional_u64("C")?.unwrap_or(10);
            quiet_catch(move || SumUnknownAdversary::new(k, m, c)).map(AnyAdversary::SumUnknown)
        }
        other => Err(usage(format!("unknown adversary {other:?}; known: {ADVERSARIES}"))),
    }
}

// ---------------------------------------------------------------------------
// Commands

#[derive(Serialize)]
struct SolveReport {
    algorithm: String,
    objective: Objective,
    batches: usize,
    vertices: usize,
    cost: u64,
    /// Exact optimum when the oracle can afford this instance.
    opt: Option<RatPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    opt_kind: Option<&'static str>,
    /// `cost / opt`, when `opt` is known.
    ratio: Option<RatPair>,
    /// The run round by round; feeding this report back in replays it.
    rounds: Vec<TranscriptRound>,
    coloring: Coloring,
    /// Same assignment in coloring-file shape, so this report verifies as one.
    colors: Coloring,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<serde_json::Value>,
}

fn cmd_solve(args: SolveArgs) -> Result<i32, Failure> {
    let objective = args.objective.objective();
    let text = read_file(&args.input)?;
    let loaded = parse_input(&text, objective)?;
    if let Some(embedded) = loaded.embedded_objective {
        if embedded != objective {
            return Err(usage(format!(
                "input was scored under --objective {}; pass that to replay it",
                ObjectiveArg::flag_for(embedded)
            )));
        }
    }
    let instance = loaded.instance;
    if let Some(k) = args.k {
        if k != instance.k() {
            return Err(usage(format!("--k {k} does not match the input's {} batches", instance.k())));
        }
    }
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }

    let graph = instance.graph()?;
    let opt = exact_optimum(&instance, objective)?;

    let mut reports = Vec::new();
    for trial in 0..args.trials {
        let mut alg =
            make_algorithm(&args.algorithm, args.seed.wrapping_add(trial), args.schedule.as_deref())?;
        let transcript = run_instance(alg.as_dyn(), &instance)?;
        let ratio = opt.map(|opt| ratio_of(transcript.cost, opt));
        reports.push(SolveReport {
            algorithm: transcript.algorithm,
            objective,
            batches: instance.k(),
            vertices: graph.n(),
            cost: transcript.cost,
            opt: opt.map(|v| RatPair(Rat::from_integer(v as i128))),
            opt_kind: opt.map(|_| "exact"),
            ratio,
            rounds: transcript.rounds,
            coloring: transcript.coloring.clone(),
            colors: transcript.coloring,
            diagnostics: if args.diagnostics { alg.diagnostics() } else { None },
        });
    }
    emit_reports(args.out.as_deref(), &reports)?;
    Ok(EXIT_OK)
}

/// Exact optimum of the instance under the objective, or `None` when the
/// oracle's size limit is the only obstacle.
fn exact_optimum(instance: &Instance, objective: Objective) -> Result<Option<u64>, Failure> {
    let g = instance.graph()?;
    let result = match objective {
        Objective::MaxColor => chromatic_number_exact(&g),
        Objective::SumColors => min_sum_coloring_exact(&g),
    };
    match result {
        Ok((value, _)) => Ok(Some(value)),
        Err(OracleError::SizeLimitExceeded { .. }) => Ok(None),
    }
}

/// `cost / opt` as an exact rational; 1/1 for the empty instance.
fn ratio_of(cost: u64, opt: u64) -> RatPair {
    if opt == 0 {
        RatPair(Rat::from_integer(1))
    } else {
        RatPair(Rat::new(cost as i128, opt as i128))
    }
}

fn cmd_adversary(args: AdversaryArgs) -> Result<i32, Failure> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let params = Params::parse(&args.params)?;
    // Validate both sides before the first duel so a bad pairing fails fast.
    build_adversary(&args.name, &params)?;
    make_algorithm(&args.algorithm, args.seed, args.schedule.as_deref())?;

    let mut reports = Vec::new();
    let mut worst = EXIT_OK;
    for trial in 0..args.trials {
        let mut adv = build_adversary(&args.name, &params)?;
        let mut alg =
            make_algorithm(&args.algorithm, args.seed.wrapping_add(trial), args.schedule.as_deref())?;
        let report = run_duel(alg.as_dyn(), adv.as_dyn(), DEFAULT_BATCH_LIMIT)?;
        if !report.forced_cost_met {
            worst = worst.max(EXIT_VIOLATION);
        }
        let mut value = serde_json::to_value(&report).expect("duel report serializes");
        let guarantee = if report.forced_cost_met { "pass" } else { "fail" };
        value
            .as_object_mut()
            .expect("duel report is an object")
            .insert("guarantee".into(), guarantee.into());
        reports.push(value);
    }
    emit_values(args.out.as_deref(), &reports)?;
    Ok(worst)
}

#[derive(Serialize)]
struct OracleReport {
    objective: Objective,
    vertices: usize,
    optimum: RatPair,
    /// Witness assignment realizing the optimum, in coloring-file shape.
    colors: Coloring,
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, Failure> {
    let objective = args.objective.objective();
    let text = read_file(&args.input)?;
    let loaded = parse_input(&text, objective)?;
    let g = loaded.instance.graph()?;
    let result = match objective {
        Objective::MaxColor => chromatic_number_exact(&g),
        Objective::SumColors => min_sum_coloring_exact(&g),
    };
    let (optimum, witness) = result.map_err(|e| Failure {
        code: EXIT_SIZE_LIMIT,
        message: e.to_string(),
    })?;
    let colors: Coloring =
        witness.iter().enumerate().map(|(v, &c)| (g.id_of(v).to_string(), c)).collect();
    let report = OracleReport {
        objective,
        vertices: g.n(),
        optimum: RatPair(Rat::from_integer(optimum as i128)),
        colors,
    };
    emit_reports(args.out.as_deref(), std::slice::from_ref(&report))?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let text = read_file(&args.input)?;
    // Properness does not depend on the objective; any one loads the graph.
    let loaded = parse_input(&text, Objective::MaxColor)?;
    let g = loaded.instance.graph()?;
    let coloring = parse_coloring(&read_file(&args.coloring)?)?;
    let violations = validate_coloring(&g, &coloring.colors);
    let report = if violations.is_clean() {
        json!({
            "ok": true,
            "vertices": g.n(),
            "max_color": max_color(&coloring.colors),
            "sum_colors": color_sum(&coloring.colors),
        })
    } else {
        json!({
            "ok": false,
            "uncolored": violations.uncolored,
            "unknown": violations.unknown,
            "monochromatic_edges": violations.monochromatic_edges,
        })
    };
    let clean = violations.is_clean();
    emit_values(args.out.as_deref(), std::slice::from_ref(&report))?;
    Ok(if clean { EXIT_OK } else { EXIT_VIOLATION })
}

// ---------------------------------------------------------------------------
// Report emission

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn emit_reports<T: Serialize>(out: Option<&Path>, reports: &[T]) -> Result<(), Failure> {
    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .expect("report serializes");
    write_out(out, &text)
}

fn emit_values(out: Option<&Path>, values: &[serde_json::Value]) -> Result<(), Failure> {
    emit_reports(out, values)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Ok(()) => Ok(()),
                // Downstream closed the pipe; finish quietly.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(usage(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_parse_and_reject_garbage() {
        let s = parse_schedule(None).unwrap();
        assert_eq!(s.name(), "quadratic");
        assert_eq!(s.c_f(), Rat::new(329, 200));

        let s = parse_schedule(Some("f=isq,cf=329/200")).unwrap();
        assert_eq!(s.value(3), 9);
        assert_eq!(s.c_f(), Rat::new(329, 200));

        let s = parse_schedule(Some("f=lin,cf=3")).unwrap();
        assert_eq!(s.name(), "linear");
        assert_eq!(s.value(5), 5);
        assert_eq!(s.c_f(), Rat::from_integer(3));

        let s = parse_schedule(Some("f=one,cf=7/2")).unwrap();
        assert_eq!(s.value(9), 1);

        assert!(parse_schedule(Some("f=exp,cf=2")).is_err());
        assert!(parse_schedule(Some("f=lin")).is_err());
        assert!(parse_schedule(Some("cf=0/5")).is_err());
        assert!(parse_schedule(Some("cf=-1")).is_err());
        assert!(parse_schedule(Some("g=isq")).is_err());
        assert!(parse_schedule(Some("f")).is_err());
    }

    #[test]
    fn params_parse_with_validation() {
        let p = Params::parse("k=2,M=9,connect=1").unwrap();
        assert_eq!(p.require_u64("k", "x").unwrap(), 2);
        assert_eq!(p.require_u64("M", "x").unwrap(), 9);
        assert!(p.flag("connect").unwrap());
        assert!(!p.flag("other").unwrap());
        assert!(p.require_u64("q", "x").is_err());
        assert!(p.ensure_only(&["k", "M"], "x").is_err());
        assert!(p.ensure_only(&["k", "M", "connect"], "x").is_ok());

        assert!(Params::parse("k").is_err());
        assert!(Params::parse("k=1,k=2").is_err());
        assert!(Params::parse("k=zebra").unwrap().require_u64("k", "x").is_err());
    }

    #[test]
    fn adversary_ranges_fail_as_usage_errors() {
        let p = Params::parse("k=9").unwrap();
        let err = build_adversary("tree", &p).err().expect("k=9 is out of range");
        assert_eq!(err.code, EXIT_USAGE);

        // sum-known requires M > 2k².
        let p = Params::parse("k=2,M=8").unwrap();
        let err = build_adversary("sum-known", &p).err().expect("M=8 is too small");
        assert_eq!(err.code, EXIT_USAGE);
        assert!(err.message.contains('M'), "message should name the parameter: {}", err.message);

        let p = Params::parse("q=1").unwrap();
        assert!(build_adversary("interval-kt", &p).is_ok());
        assert!(build_adversary("unknown-name", &p).is_err());

        // Unknown keys are rejected before construction.
        let p = Params::parse("q=1,k=1").unwrap();
        assert!(build_adversary("interval-kt", &p).is_err());
    }

    #[test]
    fn engine_errors_map_to_the_documented_exit_codes() {
        let usage_err: Failure =
            EngineError::SelfLoop { batch: 1, id: "v".into() }.into();
        assert_eq!(usage_err.code, EXIT_USAGE);
        let violation: Failure = EngineError::BadColoring {
            algorithm: "x".into(),
            batch: 1,
            problem: "monochromatic edge".into(),
        }
        .into();
        assert_eq!(violation.code, EXIT_VIOLATION);
        let cert: Failure = EngineError::BadCertificate {
            adversary: "x".into(),
            problem: "witness is improper".into(),
        }
        .into();
        assert_eq!(cert.code, EXIT_VIOLATION);
    }

    #[test]
    fn ratios_are_exact_pairs() {
        assert_eq!(serde_json::to_value(ratio_of(6, 4)).unwrap(), json!([3, 2]));
        assert_eq!(serde_json::to_value(ratio_of(0, 0)).unwrap(), json!([1, 1]));
        assert_eq!(serde_json::to_value(ratio_of(5, 5)).unwrap(), json!([1, 1]));
    }
}
