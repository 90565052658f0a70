//! Command line for the Maker-PhantomBreaker harness.
//!
//! Subcommands: `simulate` (Monte Carlo trials, JSON out), `sweep`
//! (parameter grid, CSV out, resumable), `exact` (tiny-board exact win
//! probability), `verify` (acceptance suite).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/configuration
//! error, 3 resource refusal.

use clap::{Args, Parser, Subcommand};
use phantom_core::acceptance::{run_all, Scale};
use phantom_core::config::{GameConfig, GameKind, SamplingMode};
use phantom_core::error::GameError;
use phantom_core::experiment::{run_sweep, run_trials, CellKey, RunOptions, SweepSpec};
use phantom_core::oracle::exact_win_probability;
use phantom_core::strategies::{BREAKER_NAMES, MAKER_NAMES};
use std::collections::{HashMap, HashSet};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "phantom",
    about = "Biased Maker-PhantomBreaker games on complete graphs: simulate, sweep, solve exactly, verify",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run Monte Carlo trials of one configuration and emit JSON.
    Simulate(SimulateArgs),
    /// Run a parameter grid and emit one CSV row per cell.
    Sweep(SweepArgs),
    /// Compute the exact Maker win probability on a tiny board.
    Exact(ExactArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Verify(VerifyArgs),
}

/// Flags shared by the game-selecting subcommands. Values may also come
/// from a `key = value` config file; explicit flags win.
#[derive(Args, Clone, Default)]
struct GameArgs {
    /// Game kind: mindegree | connectivity | pm | hamiltonicity.
    #[arg(long)]
    game: Option<String>,
    /// Vertex count.
    #[arg(long)]
    n: Option<String>,
    /// Maker bias (claims per round).
    #[arg(long)]
    a: Option<String>,
    /// Breaker bias.
    #[arg(long)]
    b: Option<String>,
    /// Degree target (mindegree game only; defaults to 1, or 2 for
    /// hamiltonicity).
    #[arg(long)]
    k: Option<String>,
    /// Maker strategy name.
    #[arg(long)]
    maker: Option<String>,
    /// Breaker strategy name.
    #[arg(long)]
    breaker: Option<String>,
    /// Flat `key = value` config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads (default: PHANTOM_WORKERS or 1).
    #[arg(long)]
    workers: Option<String>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include per-trial records for the retained prefix of trials.
    #[arg(long)]
    records: bool,
    /// Incident-edge sampling: knowledge-aware | strict-paper.
    #[arg(long)]
    sampling: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma lists and inclusive ranges are accepted for the grid axes,
    /// e.g. `--n 200,400,800 --b 1..6`.
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    /// CSV output path; rows are flushed per cell. With --resume,
    /// existing rows are kept and their cells skipped.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    resume: bool,
    /// Maximum cells x trials accepted before refusing.
    #[arg(long)]
    budget: Option<String>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Append the result to this fixture file (one record per line).
    #[arg(long)]
    fixture_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// quick | full.
    #[arg(long, default_value = "quick")]
    scale: String,
    #[arg(long)]
    workers: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.downcast_ref::<GameError>() {
                Some(GameError::Refused(_)) => EXIT_REFUSED,
                Some(GameError::Unsupported(_)) => EXIT_REFUSED,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

/// Flat `key = value` file: one pair per line, `#` comments.
fn read_config_file(path: &Path) -> anyhow::Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read config file {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            anyhow::bail!("config file line {} is not `key = value`: {line}", lineno + 1);
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Merged lookup: explicit flag wins over the config file.
struct Merged {
    file: HashMap<String, String>,
}

impl Merged {
    fn load(args: &GameArgs) -> anyhow::Result<Self> {
        let file = match &args.config {
            Some(p) => read_config_file(p)?,
            None => HashMap::new(),
        };
        Ok(Merged { file })
    }

    fn get(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }

    fn require(&self, flag: &Option<String>, key: &str) -> anyhow::Result<String> {
        self.get(flag, key)
            .ok_or_else(|| anyhow::anyhow!("missing required option --{key}"))
    }

    fn parse<T: std::str::FromStr>(&self, flag: &Option<String>, key: &str) -> anyhow::Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.require(flag, key)?;
        raw.parse::<T>()
            .map_err(|e| anyhow::anyhow!("invalid --{key} '{raw}': {e}"))
    }

    fn parse_or<T: std::str::FromStr>(
        &self,
        flag: &Option<String>,
        key: &str,
        default: T,
    ) -> anyhow::Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(flag, key) {
            Some(raw) => raw
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("invalid --{key} '{raw}': {e}")),
            None => Ok(default),
        }
    }
}

fn strategies_or_bail(maker: &str, breaker: &str) -> anyhow::Result<()> {
    if !MAKER_NAMES.contains(&maker) {
        anyhow::bail!(
            "unknown maker strategy '{maker}'; known makers: {}",
            MAKER_NAMES.join(", ")
        );
    }
    if !BREAKER_NAMES.contains(&breaker) {
        anyhow::bail!(
            "unknown breaker strategy '{breaker}'; known breakers: {}",
            BREAKER_NAMES.join(", ")
        );
    }
    Ok(())
}

fn default_workers(merged: &Merged, flag: &Option<String>) -> anyhow::Result<usize> {
    if let Some(w) = merged.get(flag, "workers") {
        return w
            .parse::<usize>()
            .map_err(|e| anyhow::anyhow!("invalid --workers '{w}': {e}"));
    }
    if let Ok(w) = std::env::var("PHANTOM_WORKERS") {
        return w
            .parse::<usize>()
            .map_err(|e| anyhow::anyhow!("invalid PHANTOM_WORKERS '{w}': {e}"));
    }
    Ok(1)
}

fn build_config(merged: &Merged, g: &GameArgs) -> anyhow::Result<(GameConfig, String, String)> {
    let game = GameKind::parse(&merged.require(&g.game, "game")?)?;
    let n: usize = merged.parse(&g.n, "n")?;
    let a: u32 = merged.parse(&g.a, "a")?;
    let b: u32 = merged.parse(&g.b, "b")?;
    let default_k = if game == GameKind::Hamiltonicity { 2 } else { 1 };
    let k: u32 = merged.parse_or(&g.k, "k", default_k)?;
    let maker = merged.require(&g.maker, "maker")?;
    let breaker = merged.require(&g.breaker, "breaker")?;
    strategies_or_bail(&maker, &breaker)?;
    let cfg = GameConfig::new(game, n, a, b, k);
    cfg.validate()?;
    Ok((cfg, maker, breaker))
}

/// Floating point pinned to 17 significant digits so output bytes are
/// identical across runs.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<ExitCode> {
    let merged = Merged::load(&args.game)?;
    let (mut cfg, maker, breaker) = build_config(&merged, &args.game)?;
    if let Some(s) = merged.get(&args.sampling, "sampling") {
        cfg.sampling = match s.as_str() {
            "knowledge-aware" => SamplingMode::KnowledgeAware,
            "strict-paper" => SamplingMode::StrictPaper,
            other => anyhow::bail!("invalid --sampling '{other}'"),
        };
    }
    let trials: u64 = merged.parse(&args.trials, "trials")?;
    let seed: u64 = merged.parse(&args.seed, "seed")?;
    let workers = default_workers(&merged, &args.workers)?;
    let emit_records =
        args.records || merged.file.get("records").map(|v| v == "true").unwrap_or(false);
    let opts = RunOptions::new(trials, seed).with_workers(workers);

    let outcome = run_trials(&cfg, &maker, &breaker, &opts)?;
    let json =
        render_simulate_json(&cfg, &maker, &breaker, trials, seed, workers, &outcome, emit_records);
    match &args.out {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn render_simulate_json(
    cfg: &GameConfig,
    maker: &str,
    breaker: &str,
    trials: u64,
    seed: u64,
    workers: usize,
    outcome: &phantom_core::experiment::RunOutcome,
    emit_records: bool,
) -> String {
    // assembled by hand so float formatting stays pinned
    let s = &outcome.stats;
    let reasons: Vec<String> = s
        .reasons
        .iter()
        .map(|(k, v)| format!("\"{k}\":{v}"))
        .collect();
    let records = if !emit_records || outcome.records.is_empty() {
        String::new()
    } else {
        let items: Vec<String> = outcome
            .records
            .iter()
            .map(|r| {
                format!(
                    "{{\"seed\":{},\"winner\":\"{:?}\",\"reason\":\"{}\",\"rounds\":{},\"failures\":{},\"ended_early\":{}}}",
                    r.seed,
                    r.winner,
                    r.reason.name(),
                    r.rounds_used,
                    r.maker_failures,
                    r.ended_early
                )
            })
            .collect();
        format!(",\"records\":[{}]", items.join(","))
    };
    format!(
        "{{\"config\":{{\"game\":\"{}\",\"n\":{},\"a\":{},\"b\":{},\"k\":{},\"maker\":\"{}\",\"breaker\":\"{}\",\"trials\":{},\"seed\":{},\"workers\":{}}},\
\"stats\":{{\"trials\":{},\"maker_wins\":{},\"frequency\":{},\"wilson\":[{},{}],\"mean_rounds\":{},\"mean_failures\":{},\"early_stops\":{},\"reasons\":{{{}}}}}{}}}",
        cfg.game.name(), cfg.n, cfg.a, cfg.b, cfg.k, maker, breaker, trials, seed, workers,
        s.trials, s.maker_wins,
        fmt_f64(s.maker_frequency),
        fmt_f64(s.wilson_low), fmt_f64(s.wilson_high),
        fmt_f64(s.mean_rounds), fmt_f64(s.mean_failures),
        s.early_stops,
        reasons.join(","),
        records
    )
}

/// Parses `1,2,3` lists and `1..6` inclusive ranges.
fn parse_axis<T>(raw: &str, key: &str) -> anyhow::Result<Vec<T>>
where
    T: std::str::FromStr + Copy + PartialOrd + TryFrom<u64>,
    T::Err: std::fmt::Display,
{
    let raw = raw.trim();
    if let Some((lo, hi)) = raw.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|e| anyhow::anyhow!("invalid --{key} range start '{lo}': {e}"))?;
        let hi: u64 = hi
            .trim()
            .parse()
            .map_err(|e| anyhow::anyhow!("invalid --{key} range end '{hi}': {e}"))?;
        if hi < lo {
            anyhow::bail!("empty --{key} range {lo}..{hi}");
        }
        return (lo..=hi)
            .map(|v| T::try_from(v).map_err(|_| anyhow::anyhow!("--{key} value {v} out of range")))
            .collect();
    }
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("invalid --{key} value '{part}': {e}"))
        })
        .collect()
}

const SWEEP_HEADER: &str =
    "game,n,a,b,k,maker,breaker,trials,maker_wins,frequency,wilson_lo,wilson_hi,mean_rounds";

fn sweep_row_csv(row: &phantom_core::experiment::SweepRow) -> String {
    let k = &row.key;
    let s = &row.stats;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        k.game.name(),
        k.n,
        k.a,
        k.b,
        k.k,
        k.maker,
        k.breaker,
        s.trials,
        s.maker_wins,
        fmt_f64(s.maker_frequency),
        fmt_f64(s.wilson_low),
        fmt_f64(s.wilson_high),
        fmt_f64(s.mean_rounds)
    )
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let merged = Merged::load(&args.game)?;
    let g = &args.game;
    let games: Vec<GameKind> = merged
        .require(&g.game, "game")?
        .split(',')
        .map(|s| GameKind::parse(s.trim()).map_err(anyhow::Error::from))
        .collect::<anyhow::Result<_>>()?;
    let ns: Vec<usize> = parse_axis(&merged.require(&g.n, "n")?, "n")?;
    let a_values: Vec<u32> = parse_axis(&merged.require(&g.a, "a")?, "a")?;
    let b_values: Vec<u32> = parse_axis(&merged.require(&g.b, "b")?, "b")?;
    let k_values: Vec<u32> = parse_axis(&merged.get(&g.k, "k").unwrap_or_else(|| "1".into()), "k")?;
    let makers: Vec<String> = merged
        .require(&g.maker, "maker")?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let breakers: Vec<String> = merged
        .require(&g.breaker, "breaker")?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    for m in &makers {
        for b in &breakers {
            strategies_or_bail(m, b)?;
        }
    }
    let spec = SweepSpec {
        games,
        ns,
        a_values,
        b_values,
        k_values,
        makers,
        breakers,
        trials: merged.parse(&args.trials, "trials")?,
        master_seed: merged.parse(&args.seed, "seed")?,
        workers: default_workers(&merged, &args.workers)?,
        budget: merged.parse_or(&args.budget, "budget", 50_000_000u64)?,
    };
    spec.validate()?;

    // resume support: cells already present in the output file are kept
    let mut done: HashSet<CellKey> = HashSet::new();
    let mut existing = String::new();
    if args.resume {
        if let Some(path) = &args.out {
            if let Ok(text) = std::fs::read_to_string(path) {
                for line in text.lines().skip(1) {
                    let mut f = line.split(',');
                    let (Some(game), Some(n), Some(a), Some(b), Some(k), Some(maker), Some(breaker)) = (
                        f.next(), f.next(), f.next(), f.next(), f.next(), f.next(), f.next(),
                    ) else {
                        continue;
                    };
                    let Ok(game) = GameKind::parse(game) else { continue };
                    let (Ok(n), Ok(a), Ok(b), Ok(k)) =
                        (n.parse(), a.parse(), b.parse(), k.parse())
                    else {
                        continue;
                    };
                    done.insert(CellKey {
                        game,
                        n,
                        a,
                        b,
                        k,
                        maker: maker.to_string(),
                        breaker: breaker.to_string(),
                    });
                    existing.push_str(line);
                    existing.push('\n');
                }
            }
        }
    }

    let mut sink: Box<dyn std::io::Write> = match &args.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(sink, "{SWEEP_HEADER}")?;
    sink.write_all(existing.as_bytes())?;
    sink.flush()?;
    run_sweep(
        &spec,
        |key| done.contains(key),
        |row| {
            // flush per cell so partial sweeps are resumable
            let _ = writeln!(sink, "{}", sweep_row_csv(row));
            let _ = sink.flush();
        },
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(args: ExactArgs) -> anyhow::Result<ExitCode> {
    let merged = Merged::load(&args.game)?;
    let (cfg, maker, breaker) = build_config(&merged, &args.game)?;
    let out = exact_win_probability(&cfg, &maker, &breaker)?;
    let p = &out.probability;
    println!("{}/{} = {}", p.numer(), p.denom(), fmt_f64(out.probability_f64()));
    eprintln!(
        "explored {} branches over {} positions",
        out.branches, out.positions
    );
    if let Some(path) = &args.fixture_out {
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        // fixture record: config fields, strategy names, exact fraction
        writeln!(
            file,
            "{} {} {} {} {} {} {} {} {}",
            cfg.game.name(),
            cfg.n,
            cfg.a,
            cfg.b,
            cfg.k,
            maker,
            breaker,
            p.numer(),
            p.denom()
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let scale = match args.scale.as_str() {
        "quick" => Scale::Quick,
        "full" => Scale::Full,
        other => anyhow::bail!("unknown scale '{other}' (use quick or full)"),
    };
    let workers = match &args.workers {
        Some(w) => w
            .parse::<usize>()
            .map_err(|e| anyhow::anyhow!("invalid --workers '{w}': {e}"))?,
        None => std::env::var("PHANTOM_WORKERS")
            .ok()
            .and_then(|w| w.parse().ok())
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|p| p.get().min(16))
                    .unwrap_or(4)
            }),
    };
    let results = run_all(scale, workers)?;
    let mut all_pass = true;
    for r in &results {
        println!("{}", r.line());
        all_pass &= r.pass;
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}
