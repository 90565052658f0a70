//! Seeded, parallel Monte Carlo runner, statistics and parameter sweeps.
//!
//! Trial `i` always plays with seed `mix_seed(master, i)`, so results are
//! identical for any worker count and any execution order; aggregation
//! merges integer counters only. A fixed-size prefix of full records is
//! retained for debugging, the rest is folded into the aggregate.

use crate::config::{GameConfig, GameKind};
use crate::engine::{run_game_full, EndReason, TrialRecord, Winner};
use crate::error::{GameError, Result};
use crate::rng::{mix_seed, TrialRng};
use crate::strategies::{make_breaker, make_maker};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Trials whose index is below this keep their full record (and
/// transcript, when enabled) for debugging.
pub const RECORD_RESERVOIR: u64 = 100;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AggregateStats {
    pub trials: u64,
    pub maker_wins: u64,
    pub maker_frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub mean_rounds: f64,
    pub mean_failures: f64,
    /// Trials ended by each reason, keyed by [`EndReason::name`].
    pub reasons: BTreeMap<String, u64>,
    /// Trials cut short by dead-position detection.
    pub early_stops: u64,
}

/// Commutative partial sums; merging is order-independent.
#[derive(Clone, Debug, Default)]
struct Partial {
    trials: u64,
    maker_wins: u64,
    rounds_sum: u64,
    failures_sum: u64,
    reason_counts: [u64; 5],
    early_stops: u64,
    records: Vec<(u64, TrialRecord)>,
}

impl Partial {
    fn absorb(&mut self, other: Partial) {
        self.trials += other.trials;
        self.maker_wins += other.maker_wins;
        self.rounds_sum += other.rounds_sum;
        self.failures_sum += other.failures_sum;
        for (a, b) in self.reason_counts.iter_mut().zip(other.reason_counts) {
            *a += b;
        }
        self.early_stops += other.early_stops;
        self.records.extend(other.records);
    }

    fn add(&mut self, index: u64, rec: TrialRecord, keep: bool) {
        self.trials += 1;
        if rec.winner == Winner::Maker {
            self.maker_wins += 1;
        }
        self.rounds_sum += rec.rounds_used as u64;
        self.failures_sum += rec.maker_failures;
        let ri = EndReason::ALL.iter().position(|r| *r == rec.reason).unwrap();
        self.reason_counts[ri] += 1;
        if rec.ended_early {
            self.early_stops += 1;
        }
        if keep {
            self.records.push((index, rec));
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub trials: u64,
    pub master_seed: u64,
    pub workers: usize,
    /// Keep full records (with final edge list and transcript) for the
    /// first `RECORD_RESERVOIR` trials. On by default: the reservoir is
    /// the debugging trail for large aggregate-only sweeps.
    pub keep_records: bool,
    /// Also keep transcripts on retained trials.
    pub record_transcripts: bool,
}

impl RunOptions {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        RunOptions {
            trials,
            master_seed,
            workers: 1,
            keep_records: true,
            record_transcripts: true,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_records(mut self, keep: bool) -> Self {
        self.keep_records = keep;
        self
    }

    pub fn with_transcripts(mut self, t: bool) -> Self {
        self.record_transcripts = t;
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub stats: AggregateStats,
    /// Retained records, ordered by trial index.
    pub records: Vec<TrialRecord>,
}

fn run_one(
    cfg: &GameConfig,
    maker_name: &str,
    breaker_name: &str,
    seed: u64,
    transcript: bool,
    keep_edges: bool,
) -> Result<TrialRecord> {
    let mut cfg = cfg.clone();
    cfg.seed = seed;
    cfg.record_transcript = transcript;
    let maker = make_maker(maker_name, &cfg)?;
    let breaker = make_breaker(breaker_name, &cfg)?;
    let mut rng = TrialRng::seeded(seed);
    let game = run_game_full(cfg, maker, breaker, &mut rng)
        .map_err(|e| GameError::Internal(format!("trial with seed {seed} failed: {e}")))?;
    game.into_record(keep_edges)
}

/// Runs `opts.trials` independent games and aggregates them.
pub fn run_trials(
    cfg: &GameConfig,
    maker_name: &str,
    breaker_name: &str,
    opts: &RunOptions,
) -> Result<RunOutcome> {
    if opts.trials == 0 {
        return Err(GameError::InvalidConfig("trials must be >= 1".into()));
    }
    cfg.validate()?;
    make_maker(maker_name, cfg)?; // fail fast on bad names
    make_breaker(breaker_name, cfg)?;

    let fold = |mut acc: Partial, index: u64| -> Result<Partial> {
        let keep = opts.keep_records && index < RECORD_RESERVOIR;
        let seed = mix_seed(opts.master_seed, index);
        let rec = run_one(
            cfg,
            maker_name,
            breaker_name,
            seed,
            keep && opts.record_transcripts,
            keep,
        )?;
        acc.add(index, rec, keep);
        Ok(acc)
    };

    let partial: Partial = if opts.workers <= 1 {
        (0..opts.trials).try_fold(Partial::default(), fold)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| GameError::Internal(format!("worker pool: {e}")))?;
        pool.install(|| {
            (0..opts.trials)
                .into_par_iter()
                .try_fold(Partial::default, fold)
                .try_reduce(Partial::default, |mut a, b| {
                    a.absorb(b);
                    Ok(a)
                })
        })?
    };

    Ok(finish(partial))
}

fn finish(mut partial: Partial) -> RunOutcome {
    partial.records.sort_by_key(|(i, _)| *i);
    let t = partial.trials;
    let (low, high) = wilson_interval(partial.maker_wins, t, 1.96).expect("valid counts");
    let mut reasons = BTreeMap::new();
    for (reason, count) in EndReason::ALL.iter().zip(partial.reason_counts) {
        if count > 0 {
            reasons.insert(reason.name().to_string(), count);
        }
    }
    RunOutcome {
        stats: AggregateStats {
            trials: t,
            maker_wins: partial.maker_wins,
            maker_frequency: partial.maker_wins as f64 / t as f64,
            wilson_low: low,
            wilson_high: high,
            mean_rounds: partial.rounds_sum as f64 / t as f64,
            mean_failures: partial.failures_sum as f64 / t as f64,
            reasons,
            early_stops: partial.early_stops,
        },
        records: partial.records.into_iter().map(|(_, r)| r).collect(),
    }
}

/// Wilson score interval for a binomial proportion, clamped to [0, 1].
pub fn wilson_interval(wins: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 || wins > trials || z.is_nan() || z <= 0.0 {
        return Err(GameError::InvalidConfig(format!(
            "wilson_interval(wins={wins}, trials={trials}, z={z})"
        )));
    }
    let n = trials as f64;
    let p = wins as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the bounds are exactly 0/1 at the extremes; don't let rounding
    // drift them inwards
    let low = if wins == 0 { 0.0 } else { ((centre - spread) / denom).max(0.0) };
    let high = if wins == trials {
        1.0
    } else {
        ((centre + spread) / denom).min(1.0)
    };
    Ok((low, high))
}

/// One cell of a parameter sweep.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub game: GameKind,
    pub n: usize,
    pub a: u32,
    pub b: u32,
    pub k: u32,
    pub maker: String,
    pub breaker: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub key: CellKey,
    pub stats: AggregateStats,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub games: Vec<GameKind>,
    pub ns: Vec<usize>,
    pub a_values: Vec<u32>,
    pub b_values: Vec<u32>,
    pub k_values: Vec<u32>,
    pub makers: Vec<String>,
    pub breakers: Vec<String>,
    pub trials: u64,
    pub master_seed: u64,
    pub workers: usize,
    /// Refuse upfront when cells × trials exceeds this.
    pub budget: u64,
}

impl SweepSpec {
    pub fn cells(&self) -> Vec<CellKey> {
        let mut out = Vec::new();
        for &game in &self.games {
            for &n in &self.ns {
                for &a in &self.a_values {
                    for &b in &self.b_values {
                        for &k in &self.k_values {
                            for maker in &self.makers {
                                for breaker in &self.breakers {
                                    out.push(CellKey {
                                        game,
                                        n,
                                        a,
                                        b,
                                        k,
                                        maker: maker.clone(),
                                        breaker: breaker.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let cells = self.cells();
        if cells.is_empty() {
            return Err(GameError::InvalidConfig("empty sweep grid".into()));
        }
        if self.trials == 0 {
            return Err(GameError::InvalidConfig("trials must be >= 1".into()));
        }
        let total = cells.len() as u64 * self.trials;
        if total > self.budget {
            return Err(GameError::Refused(format!(
                "sweep of {} cells x {} trials = {} games exceeds the budget of {}",
                cells.len(),
                self.trials,
                total,
                self.budget
            )));
        }
        Ok(())
    }
}

/// Runs the sweep cell by cell, invoking `emit` as each row completes so
/// long sweeps can be flushed and resumed. Cells for which `skip` is
/// true (already computed) are not replayed; each cell derives its seed
/// from the master seed and its own key, so resumption cannot change
/// results.
pub fn run_sweep(
    spec: &SweepSpec,
    skip: impl Fn(&CellKey) -> bool,
    mut emit: impl FnMut(&SweepRow),
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for key in spec.cells() {
        if skip(&key) {
            continue;
        }
        let cfg = GameConfig::new(key.game, key.n, key.a, key.b, key.k);
        let opts = RunOptions::new(spec.trials, cell_seed(spec.master_seed, &key))
            .with_workers(spec.workers);
        let outcome = run_trials(&cfg, &key.maker, &key.breaker, &opts)?;
        let row = SweepRow {
            key,
            stats: outcome.stats,
        };
        emit(&row);
        rows.push(row);
    }
    Ok(rows)
}

/// Per-cell master seed: depends only on the sweep seed and the cell key.
pub fn cell_seed(master: u64, key: &CellKey) -> u64 {
    let mut h: u64 = master;
    let mut mix = |x: u64| {
        h = mix_seed(h, x);
    };
    mix(key.game as u64 + 1);
    mix(key.n as u64);
    mix(key.a as u64);
    mix(key.b as u64);
    mix(key.k as u64);
    for byte in key.maker.bytes().chain(key.breaker.bytes()) {
        h = mix_seed(h, byte as u64);
    }
    h
}
