//! Exact win-probability computation for tiny boards.
//!
//! The oracle drives the same engine and strategy code as Monte Carlo
//! runs, but replaces the random source with a replayed choice script.
//! One engine step at a time, it enumerates the step's choice tree: a
//! script that runs out at a fresh draw reports the option count, the
//! branch fans out over all options with uniform weights, and each
//! completed step lands on a successor position. Positions are memoized
//! by a canonical key (ownership vector, both strategy states, turn
//! position), so probabilities are exact rationals by construction.

use crate::config::GameConfig;
use crate::engine::{Game, Winner};
use crate::error::{GameError, Result};
use crate::rng::ScriptRng;
use crate::strategies::{make_breaker, make_maker};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Hard ceiling on explored step-tree branches (and on the upfront
/// position-count estimate).
pub const DEFAULT_BRANCH_CAP: u64 = 100_000_000;

/// One uniform choice point inside the upcoming engine step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoicePoint {
    /// Choices replayed before this draw was reached.
    pub prefix: Vec<u32>,
    /// Number of options of the draw (1 for a step that makes none).
    pub options: u32,
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub probability: BigRational,
    /// Step-tree branches explored (enumeration effort).
    pub branches: u64,
    /// Distinct memoized positions.
    pub positions: u64,
}

impl OracleOutcome {
    pub fn probability_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.probability.to_f64().unwrap_or(f64::NAN)
    }
}

struct Enumerator {
    memo: Option<HashMap<Vec<u8>, BigRational>>,
    branches: u64,
    cap: u64,
    /// Total probability mass reaching a terminal leaf. Only meaningful
    /// without memoization (cache hits skip subtrees); must then be
    /// exactly one.
    leaf_mass: BigRational,
}

impl Enumerator {
    /// Probability that Maker wins from this position. `mass` is the
    /// probability of reaching it along the current traversal path.
    fn win_prob(&mut self, game: &Game, mass: &BigRational) -> Result<BigRational> {
        if game.finished() {
            let (winner, _, _) = game.outcome().expect("finished game has an outcome");
            self.leaf_mass += mass;
            return Ok(if winner == Winner::Maker {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        let key = self.memo.is_some().then(|| {
            let mut k = Vec::with_capacity(256);
            game.encode_key(&mut k);
            k
        });
        if let (Some(memo), Some(k)) = (self.memo.as_ref(), key.as_ref()) {
            if let Some(p) = memo.get(k) {
                return Ok(p.clone());
            }
        }
        // Depth-first over the step's choice tree: each stack entry is a
        // choice script; a script that completes the step yields a child
        // position.
        let mut total = BigRational::zero();
        let mut stack: Vec<(Vec<u32>, BigRational)> = vec![(Vec::new(), BigRational::one())];
        while let Some((script, weight)) = stack.pop() {
            self.branches += 1;
            if self.branches > self.cap {
                return Err(GameError::Refused(format!(
                    "enumeration exceeded the branch cap of {}",
                    self.cap
                )));
            }
            let mut child = game.clone();
            let mut rng = ScriptRng::new(&script);
            match child.step(&mut rng) {
                Ok(_status) => {
                    let child_mass = mass * &weight;
                    let p = self.win_prob(&child, &child_mass)?;
                    total += weight * p;
                }
                Err(GameError::NeedBranch { options }) => {
                    let w = weight / BigRational::from_integer(BigInt::from(options as u64));
                    for c in (0..options as u32).rev() {
                        let mut s = script.clone();
                        s.push(c);
                        stack.push((s, w.clone()));
                    }
                }
                Err(e) => return Err(e),
            }
        }
        if let (Some(memo), Some(k)) = (self.memo.as_mut(), key) {
            memo.insert(k, total.clone());
        }
        Ok(total)
    }
}

/// Upfront feasibility estimate: an upper bound on the number of
/// distinct ownership states of the board.
pub fn position_estimate(cfg: &GameConfig) -> f64 {
    3f64.powi(cfg.edge_count() as i32)
}

/// Exact probability that Maker wins, by weighted traversal of every
/// uniform choice of both registry strategies.
pub fn exact_win_probability(
    cfg: &GameConfig,
    maker_name: &str,
    breaker_name: &str,
) -> Result<OracleOutcome> {
    exact_win_probability_opts(cfg, maker_name, breaker_name, true, DEFAULT_BRANCH_CAP)
}

pub fn exact_win_probability_opts(
    cfg: &GameConfig,
    maker_name: &str,
    breaker_name: &str,
    use_memo: bool,
    branch_cap: u64,
) -> Result<OracleOutcome> {
    cfg.validate()?;
    let estimate = position_estimate(cfg);
    if estimate > branch_cap as f64 {
        return Err(GameError::Refused(format!(
            "board too large for exact enumeration: ~{estimate:.2e} ownership states \
             exceed the cap of {branch_cap}"
        )));
    }
    let maker = make_maker(maker_name, cfg)?;
    let breaker = make_breaker(breaker_name, cfg)?;
    let game = Game::new(cfg.clone(), maker, breaker)?;
    let mut en = Enumerator {
        memo: use_memo.then(HashMap::new),
        branches: 0,
        cap: branch_cap,
        leaf_mass: BigRational::zero(),
    };
    let probability = en.win_prob(&game, &BigRational::one())?;
    if !use_memo && en.leaf_mass != BigRational::one() {
        return Err(GameError::Internal(format!(
            "probability mass leak: leaves sum to {}",
            en.leaf_mass
        )));
    }
    let positions = en.memo.as_ref().map_or(0, |m| m.len() as u64);
    Ok(OracleOutcome {
        probability,
        branches: en.branches,
        positions,
    })
}

/// Choice points of the next engine step: every uniform draw reachable
/// before the step completes, with its option count. A step that draws
/// nothing reports a single one-option point.
pub fn enumerate_choice_points(game: &Game) -> Result<Vec<ChoicePoint>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(script) = stack.pop() {
        let mut child = game.clone();
        let mut rng = ScriptRng::new(&script);
        match child.step(&mut rng) {
            Ok(_) => {}
            Err(GameError::NeedBranch { options }) => {
                for c in (0..options as u32).rev() {
                    let mut s = script.clone();
                    s.push(c);
                    stack.push(s);
                }
                out.push(ChoicePoint {
                    prefix: script,
                    options: options as u32,
                });
            }
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        out.push(ChoicePoint {
            prefix: Vec::new(),
            options: 1,
        });
    }
    out.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    Ok(out)
}
