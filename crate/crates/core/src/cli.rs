//! The `hbg` command line.
//!
//! Every command writing to `--output` also writes `<output>.manifest.json`
//! with the input hashes, seed, restarts and crate version. Failures print
//! `{"error": kind, "message": ...}` on stderr and exit with status 2.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::analytic::{solve_3x2, ThreeTwoAnalysis};
use crate::blackjack::{build_game, CardType, PayoffTable, RoundConfig};
use crate::circuit::{build_circuit, CircuitJson, CircuitSpec};
use crate::error::{Error, Result};
use crate::explorer::search::{expected_advantage, search_shoes, Catalog, SearchParams};
use crate::explorer::sweep::{detect_boundaries, ordering, sweep, Boundary, SweepSpec, SweepSpecJson};
use crate::game::{canonicalize_3x2, is_canonical_3x2, GameJson, GameMatrix};
use crate::hyperbit::HyperbitOptions;
use crate::qsim::{verify_on_game, verify_strategy, VerificationReport};
use crate::solution::SolutionJson;
use crate::solve::{solve_game, SolutionsJson};

#[derive(Debug, Parser)]
#[command(name = "hbg", version, about = "Communication-limited cooperative game solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unlimited, classical and hyperbit values of a game JSON.
    Value(IoArgs),
    /// Builds and solves the game of a blackjack round JSON.
    Blackjack(IoArgs),
    /// Evaluates C(t) = A + B t on a grid and locates region boundaries.
    Sweep(SweepArgs),
    /// Exhaustive search of all shoes of one size for hyperbit advantages.
    Search(SearchArgs),
    /// Synthesizes measurement circuits from a hyperbit solution.
    Circuit(IoArgs),
    /// Simulates a circuit and checks it against its strategy.
    Simulate(SimulateArgs),
    /// Closed-form analysis of a 3x2 game.
    Analytic32(IoArgs),
    /// Schema and invariant checks on any input file, without solving.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Tolerance overrides, `name=value`; names: tie, simulate, ordering.
    #[arg(long = "tol", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep JSON with `A`, `B`, `t_min`, `t_max`, `step`.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Boundary report; defaults to `<output>.boundaries.json`.
    #[arg(long)]
    pub boundaries: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = crate::explorer::search::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Comma-separated upcards, e.g. `9,T`; all ten by default.
    #[arg(long, value_parser = parse_upcards)]
    pub bob_upcards: Option<Upcards>,
    #[arg(long, value_parser = parse_upcards)]
    pub dealer_upcards: Option<Upcards>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Resumable progress log; defaults to `<output>.checkpoint.jsonl`.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Circuit JSON.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Hyperbit solution JSON (or a full `value` / `blackjack` output).
    #[arg(long)]
    pub strategy: PathBuf,
    /// Optional game JSON; adds the simulated game value to the report.
    #[arg(long)]
    pub game: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// File kind; guessed from its fields when absent.
    #[arg(long, value_enum)]
    pub kind: Option<FileKind>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    Game,
    Round,
    Sweep,
    Circuit,
    Solution,
    Solutions,
    Blackjack,
    Analysis,
    Report,
    Catalog,
}

#[derive(Debug, Clone)]
pub struct Upcards(pub Vec<CardType>);

fn parse_upcards(s: &str) -> std::result::Result<Upcards, String> {
    let cards = s
        .split(',')
        .map(|c| c.trim().parse::<CardType>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut dedup = cards.clone();
    dedup.sort();
    dedup.dedup();
    if dedup.len() != cards.len() {
        return Err(format!("repeated upcard in {s:?}"));
    }
    Ok(Upcards(dedup))
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    if !["tie", "simulate", "ordering"].contains(&k) {
        return Err(format!("unknown tolerance {k:?}"));
    }
    let v: f64 = v.parse().map_err(|e| format!("{v:?}: {e}"))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(format!("tolerance {k} must be non-negative"));
    }
    Ok((k.to_string(), v))
}

impl Common {
    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tol.iter().rev().find(|(k, _)| k == name).map_or(default, |(_, v)| *v)
    }

    fn hyperbit(&self) -> HyperbitOptions {
        HyperbitOptions {
            restarts: self.restarts,
            seed: self.seed,
            tie_tolerance: self.tol("tie", 1e-9),
            ..Default::default()
        }
    }
}

/// Default tolerance of `simulate`.
pub const SIMULATE_TOLERANCE: f64 = 1e-9;
/// Default relative tolerance of the sweep orderings.
pub const ORDERING_TOLERANCE: f64 = 1e-9;

/// Run record written beside every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    /// SHA-256 of each input file, by path.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub restarts: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
}

/// Outcome of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub file: String,
    pub kind: Option<FileKind>,
    pub pass: bool,
    /// `kind: message` for each failure.
    pub failures: Vec<String>,
}

impl<'de> Deserialize<'de> for FileKind {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        <FileKind as clap::ValueEnum>::from_str(&s, true).map_err(serde::de::Error::custom)
    }
}

/// `blackjack` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlackjackOutput {
    pub round: RoundConfig,
    pub key: String,
    pub game: GameJson,
    pub payoffs: PayoffTable,
    #[serde(flatten)]
    pub solutions: SolutionsJson,
}

/// `analytic32` output; `transform` maps the input onto the canonical game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticOutput {
    pub canonical: GameJson,
    pub canonicalized: bool,
    pub row_permutation: Vec<usize>,
    pub col_permutation: Vec<usize>,
    pub col_negations: Vec<bool>,
    #[serde(flatten)]
    pub analysis: ThreeTwoAnalysis,
}

/// `sweep` boundary report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub spec: SweepSpecJson,
    pub boundaries: Vec<Boundary>,
}

/// `search` summary written as `<output>.summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub shoe_size: usize,
    pub threshold: f64,
    pub bob_upcards: Vec<CardType>,
    pub dealer_upcards: Vec<CardType>,
    pub configurations: usize,
    /// Present only when every upcard pair was searched.
    pub expected_advantage: Option<f64>,
}

/// Serialized JSON followed by a newline.
pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

struct Run<'a> {
    command: &'static str,
    common: &'a Common,
    inputs: Vec<&'a Path>,
    parameters: BTreeMap<String, Value>,
    tolerances: BTreeMap<String, f64>,
    extra_outputs: Vec<PathBuf>,
}

impl<'a> Run<'a> {
    fn new(command: &'static str, common: &'a Common, inputs: Vec<&'a Path>) -> Self {
        Run {
            command,
            common,
            inputs,
            parameters: BTreeMap::new(),
            tolerances: common.tol.iter().cloned().collect(),
            extra_outputs: Vec::new(),
        }
    }

    fn param(&mut self, k: &str, v: impl Serialize) {
        self.parameters.insert(k.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    /// Writes the main output (or prints it) and the manifest.
    fn finish(self, body: &str, out: &mut dyn Write) -> Result<()> {
        let Some(path) = &self.common.output else {
            out.write_all(body.as_bytes())?;
            return Ok(());
        };
        fs::write(path, body)?;
        let mut inputs = BTreeMap::new();
        for p in &self.inputs {
            inputs.insert(p.display().to_string(), sha256_file(p)?);
        }
        let manifest = Manifest {
            command: self.command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            seed: self.common.seed,
            restarts: self.common.restarts,
            tolerances: self.tolerances,
            parameters: self.parameters,
            outputs: std::iter::once(path.clone())
                .chain(self.extra_outputs)
                .map(|p| p.display().to_string())
                .collect(),
        };
        fs::write(sibling(path, ".manifest.json"), to_json_string(&manifest)?)?;
        Ok(())
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::InvalidArgument("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Hyperbit solution from a solution file or a full `value` / `blackjack`
/// output.
fn hyperbit_solution(v: Value, path: &Path) -> Result<SolutionJson> {
    let v = match v.get("hyperbit") {
        Some(h) => h.clone(),
        None => v,
    };
    serde_json::from_value(v).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn game_from_file(path: &Path) -> Result<GameMatrix> {
    let v: Value = parse(path)?;
    // blackjack outputs carry the game under "game"
    let v = match v.get("game") {
        Some(g) => g.clone(),
        None => v,
    };
    let j: GameJson = serde_json::from_value(v).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    j.try_into()
}

fn cmd_value(a: &IoArgs, out: &mut dyn Write) -> Result<()> {
    let c = game_from_file(&a.input)?;
    let sol = solve_game(&c, &a.common.hyperbit())?;
    let run = Run::new("value", &a.common, vec![&a.input]);
    run.finish(&to_json_string(&sol.to_json())?, out)
}

fn cmd_blackjack(a: &IoArgs, out: &mut dyn Write) -> Result<()> {
    let round: RoundConfig = parse(&a.input)?;
    let round = RoundConfig::new(round.bob_upcard, round.dealer_upcard, round.shoe)?;
    let (c, payoffs) = build_game(&round)?;
    let sol = solve_game(&c, &a.common.hyperbit())?;
    let body = BlackjackOutput {
        key: round.key(),
        round,
        game: GameJson::from(&c),
        payoffs,
        solutions: sol.to_json(),
    };
    let run = Run::new("blackjack", &a.common, vec![&a.input]);
    run.finish(&to_json_string(&body)?, out)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let mut j: SweepSpecJson = parse(&a.input)?;
    j.t_min = a.t_min.unwrap_or(j.t_min);
    j.t_max = a.t_max.unwrap_or(j.t_max);
    j.step = a.step.unwrap_or(j.step);
    let spec = SweepSpec::from_json(&j)?;
    let opts = a.common.hyperbit();
    let tol = a.common.tol("ordering", ORDERING_TOLERANCE);
    let (points, boundaries) = pool(a.workers)?.install(|| -> Result<_> {
        Ok((sweep(&spec, &opts), detect_boundaries(&spec, &opts)?))
    })?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "I_U", "I_C", "I_H", "ordering", "error"])?;
    for p in &points {
        let ord = if p.error.is_none() {
            serde_json::to_value(ordering(p.i_u, p.i_c, p.i_h, tol))?.as_str().unwrap_or("").to_string()
        } else {
            String::new()
        };
        w.write_record([
            p.t.to_string(),
            p.i_u.to_string(),
            p.i_c.to_string(),
            p.i_h.to_string(),
            ord,
            p.error.clone().unwrap_or_default(),
        ])?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        .expect("csv output is utf-8");
    let report = to_json_string(&BoundaryReport { spec: spec.to_json(), boundaries })?;
    let mut run = Run::new("sweep", &a.common, vec![&a.input]);
    run.param("t_min", j.t_min);
    run.param("t_max", j.t_max);
    run.param("step", j.step);
    run.tolerances.insert("ordering".into(), tol);
    let bpath = a.boundaries.clone().or_else(|| a.common.output.as_ref().map(|o| sibling(o, ".boundaries.json")));
    match &bpath {
        Some(p) => {
            fs::write(p, &report)?;
            run.extra_outputs.push(p.clone());
        }
        None => eprint!("{report}"),
    }
    run.finish(&csv, out)
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> Result<()> {
    let mut params = SearchParams::new(a.size);
    params.threshold = a.threshold;
    params.hyperbit = a.common.hyperbit();
    if let Some(u) = &a.bob_upcards {
        params.bob_upcards = u.0.clone();
    }
    if let Some(u) = &a.dealer_upcards {
        params.dealer_upcards = u.0.clone();
    }
    if !(a.threshold >= 0.0 && a.threshold.is_finite()) {
        return Err(Error::InvalidArgument(format!("threshold {} must be non-negative", a.threshold)));
    }
    let checkpoint = a.checkpoint.clone().or_else(|| a.common.output.as_ref().map(|o| sibling(o, ".checkpoint.jsonl")));
    let catalog = pool(a.workers)?.install(|| search_shoes(&params, checkpoint.as_deref()))?;
    let mut bytes = Vec::new();
    catalog.write_csv(&mut bytes)?;
    let summary = SearchSummary {
        shoe_size: a.size,
        threshold: a.threshold,
        bob_upcards: catalog.bob_upcards.clone(),
        dealer_upcards: catalog.dealer_upcards.clone(),
        configurations: catalog.records.len(),
        expected_advantage: expected_advantage(a.size, &catalog).ok(),
    };
    let mut run = Run::new("search", &a.common, Vec::new());
    run.param("size", a.size);
    run.param("threshold", a.threshold);
    run.param("bob_upcards", &catalog.bob_upcards);
    run.param("dealer_upcards", &catalog.dealer_upcards);
    if let Some(o) = &a.common.output {
        let p = sibling(o, ".summary.json");
        fs::write(&p, to_json_string(&summary)?)?;
        run.extra_outputs.push(p);
    } else {
        eprint!("{}", to_json_string(&summary)?);
    }
    if let Some(c) = checkpoint {
        run.extra_outputs.push(c);
    }
    run.finish(&String::from_utf8(bytes).expect("csv output is utf-8"), out)
}

fn cmd_circuit(a: &IoArgs, out: &mut dyn Write) -> Result<()> {
    let sol = hyperbit_solution(parse(&a.input)?, &a.input)?;
    let circuit = build_circuit(&sol.hyperbit_strategy()?)?;
    let run = Run::new("circuit", &a.common, vec![&a.input]);
    run.finish(&to_json_string(&circuit.to_json())?, out)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let cj: CircuitJson = parse(&a.input)?;
    let circuit = CircuitSpec::from_json(&cj)?;
    let strategy = hyperbit_solution(parse(&a.strategy)?, &a.strategy)?.hyperbit_strategy()?;
    let tol = a.common.tol("simulate", SIMULATE_TOLERANCE);
    let report: VerificationReport = match &a.game {
        Some(g) => verify_on_game(&game_from_file(g)?, &strategy, &circuit, tol)?,
        None => verify_strategy(&strategy, &circuit, tol)?,
    };
    let mut inputs: Vec<&Path> = vec![&a.input, &a.strategy];
    inputs.extend(a.game.as_deref());
    let mut run = Run::new("simulate", &a.common, inputs);
    run.tolerances.insert("simulate".into(), tol);
    run.finish(&to_json_string(&report)?, out)
}

fn cmd_analytic(a: &IoArgs, out: &mut dyn Write) -> Result<()> {
    let c = game_from_file(&a.input)?;
    let canonicalized = !is_canonical_3x2(&c);
    let (canon, t) = canonicalize_3x2(&c)?;
    let body = AnalyticOutput {
        canonical: GameJson::from(&canon),
        canonicalized,
        row_permutation: t.row_permutation,
        col_permutation: t.col_permutation,
        col_negations: t.col_negations,
        analysis: solve_3x2(&canon)?,
    };
    let run = Run::new("analytic32", &a.common, vec![&a.input]);
    run.finish(&to_json_string(&body)?, out)
}

fn guess_kind(path: &Path, v: Option<&Value>) -> Option<FileKind> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return Some(FileKind::Catalog);
    }
    let o = v?.as_object()?;
    let has = |k: &str| o.contains_key(k);
    Some(if has("C") {
        FileKind::Game
    } else if has("round") {
        FileKind::Blackjack
    } else if has("bob_upcard") {
        FileKind::Round
    } else if has("A") && has("B") {
        FileKind::Sweep
    } else if has("qubits_per_player") {
        FileKind::Circuit
    } else if has("unlimited") {
        FileKind::Solutions
    } else if has("regime") {
        FileKind::Solution
    } else if has("z_star") {
        FileKind::Analysis
    } else if has("entries") && has("max_deviation") {
        FileKind::Report
    } else {
        return None;
    })
}

fn check_value_order(i_u: f64, i_c: f64, i_h: f64) -> Result<()> {
    let slack = 1e-8 * i_u.abs().max(1.0);
    if !(i_c <= i_h + slack && i_h <= i_u + slack) {
        return Err(Error::Schema(format!("values violate I_C <= I_H <= I_U: {i_c}, {i_h}, {i_u}")));
    }
    Ok(())
}

fn check_solution(s: &SolutionJson) -> Result<()> {
    let m = s.strategy_matrix()?;
    if m.entries().iter().any(|v| v.abs() > 1.0 + 1e-9) {
        return Err(Error::InvalidStrategy("strategy entries outside [-1, 1]".into()));
    }
    if s.regime == crate::solution::Regime::Hyperbit {
        s.hyperbit_strategy()?;
    }
    Ok(())
}

fn check_kind(kind: FileKind, text: &str) -> Result<()> {
    fn de<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
    match kind {
        FileKind::Game => {
            let j: GameJson = de(text)?;
            GameMatrix::try_from(j)?;
        }
        FileKind::Round => de::<RoundConfig>(text)?.validate()?,
        FileKind::Sweep => {
            SweepSpec::from_json(&de(text)?)?;
        }
        FileKind::Circuit => {
            CircuitSpec::from_json(&de(text)?)?;
        }
        FileKind::Solution => check_solution(&de(text)?)?,
        FileKind::Solutions => {
            let s: SolutionsJson = de(text)?;
            check_value_order(s.i_u, s.i_c, s.i_h)?;
            for sol in [&s.unlimited, &s.classical, &s.hyperbit] {
                check_solution(sol)?;
            }
        }
        FileKind::Blackjack => {
            let b: BlackjackOutput = de(text)?;
            b.round.validate()?;
            GameMatrix::try_from(b.game)?;
            check_value_order(b.solutions.i_u, b.solutions.i_c, b.solutions.i_h)?;
        }
        FileKind::Analysis => {
            let a: AnalyticOutput = de(text)?;
            let c = GameMatrix::try_from(a.canonical)?;
            if !is_canonical_3x2(&c) {
                return Err(Error::NotCanonical);
            }
            check_value_order(a.analysis.unlimited_value, a.analysis.classical_value, a.analysis.hyperbit_value)?;
        }
        FileKind::Report => {
            let r: VerificationReport = de(text)?;
            let max = r.entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
            if max != r.max_deviation || r.pass != (max <= r.tolerance) {
                return Err(Error::Schema("report summary disagrees with its entries".into()));
            }
        }
        FileKind::Catalog => {
            let cat = Catalog::read_csv(text.as_bytes(), 0, Vec::new(), Vec::new(), 0.0)?;
            for r in &cat.records {
                check_value_order(r.i_u, r.i_c, r.i_h)?;
            }
        }
    }
    Ok(())
}

/// Schema and invariant check; problems go into the report, never out as
/// errors.
pub fn validate_file(path: &Path, kind: Option<FileKind>) -> ValidationReport {
    let mut report = ValidationReport { file: path.display().to_string(), kind, pass: false, failures: Vec::new() };
    let text = match read(path) {
        Ok(t) => t,
        Err(e) => {
            report.failures.push(format!("{}: {e}", e.kind()));
            return report;
        }
    };
    let value = serde_json::from_str::<Value>(&text).ok();
    let kind = kind.or_else(|| guess_kind(path, value.as_ref()));
    report.kind = kind;
    let Some(kind) = kind else {
        report.failures.push(match value {
            None => "schema: not JSON and not a .csv catalog".into(),
            Some(_) => "schema: unrecognized file kind; pass --kind".into(),
        });
        return report;
    };
    if let Err(e) = check_kind(kind, &text) {
        report.failures.push(format!("{}: {e}", e.kind()));
    }
    report.pass = report.failures.is_empty();
    report
}

/// Runs one parsed command; output goes to `--output` or `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Value(a) => cmd_value(a, out)?,
        Command::Blackjack(a) => cmd_blackjack(a, out)?,
        Command::Sweep(a) => cmd_sweep(a, out)?,
        Command::Search(a) => cmd_search(a, out)?,
        Command::Circuit(a) => cmd_circuit(a, out)?,
        Command::Simulate(a) => cmd_simulate(a, out)?,
        Command::Analytic32(a) => cmd_analytic(a, out)?,
        Command::Validate(a) => {
            let report = validate_file(&a.input, a.kind);
            let body = to_json_string(&report)?;
            match &a.output {
                Some(p) => fs::write(p, body)?,
                None => out.write_all(body.as_bytes())?,
            }
            return Ok(if report.pass { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Error JSON printed on stderr.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Entry point of the binary: exit status 0 on success, 1 for a failed
/// validation and 2 for any error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                print!("{e}");
                return 0;
            }
            let err = Error::InvalidArgument(e.to_string().trim().to_string());
            eprintln!("{}", error_json(&err));
            return 2;
        }
    };
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            2
        }
    }
}
