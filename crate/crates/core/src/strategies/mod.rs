//! Strategy interfaces and the name registry.
//!
//! Strategies are explicit state machines: every decision variable lives
//! in the strategy struct, never in locals spanning random draws. That
//! lets the exact oracle snapshot a mid-game position (board plus both
//! strategy states), and replay or branch it deterministically.

pub mod breaker;
pub mod maker_conn;
pub mod maker_hamilton;
pub mod maker_mindeg;
pub mod maker_pm;
pub mod maker_random;
pub mod params;
pub mod sampling;
pub mod surgery;

use crate::board::{BoardState, EdgeId, MakerView, MoveOutcome};
use crate::config::GameConfig;
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::win_check::WinCertificate;

/// What Maker does with one of her moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MakerAction {
    Attempt(EdgeId),
    /// Resign: a prescribed threshold was exceeded.
    Forfeit,
    /// The strategy's witness structure is complete but its final edge was
    /// already Maker's, so no claim is left to trigger the win check.
    DeclareWin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakerAction {
    Claim(EdgeId),
    Forfeit,
}

pub trait MakerStrategy: Send {
    /// Next move given only Maker's view. Called once per attempt; the
    /// engine packs attempts into rounds of `a`.
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction>;

    /// Engine feedback after the attempt was applied.
    fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, view: &MakerView);

    /// Completed witness structure, if the strategy tracks one.
    fn certificate(&self) -> Option<WinCertificate> {
        None
    }

    /// Canonical encoding of all decision state (for oracle memoization).
    fn encode_state(&self, out: &mut Vec<u8>);

    fn clone_box(&self) -> Box<dyn MakerStrategy>;

    fn name(&self) -> &'static str;
}

pub trait BreakerStrategy: Send {
    /// Next claim given the full board (he has complete information).
    fn next_claim(&mut self, board: &BoardState, rng: &mut dyn RandomSource)
        -> Result<BreakerAction>;

    /// Called after every Maker attempt, successful or failed. This is how
    /// phantom-side strategies watch what Maker tries.
    fn observe_maker_attempt(&mut self, edge: EdgeId, outcome: MoveOutcome, board: &BoardState);

    fn encode_state(&self, out: &mut Vec<u8>);

    fn clone_box(&self) -> Box<dyn BreakerStrategy>;

    fn name(&self) -> &'static str;
}

pub const MAKER_NAMES: [&str; 8] = [
    "mindeg-large",
    "mindeg-small",
    "pm-large",
    "pm-small",
    "conn-large",
    "conn-small",
    "hamilton",
    "random",
];

pub const BREAKER_NAMES: [&str; 3] = ["star-phases", "single-star", "random"];

pub fn make_maker(name: &str, cfg: &GameConfig) -> Result<Box<dyn MakerStrategy>> {
    match name {
        "mindeg-large" => Ok(Box::new(maker_mindeg::MindegLarge::new(cfg))),
        "mindeg-small" => Ok(Box::new(maker_mindeg::MindegSmall::new(cfg))),
        "pm-large" => Ok(Box::new(maker_pm::PmMaker::new(cfg, maker_pm::PmVariant::LargeB)?)),
        "pm-small" => Ok(Box::new(maker_pm::PmMaker::new(cfg, maker_pm::PmVariant::SmallB)?)),
        "conn-large" => Ok(Box::new(maker_conn::ConnLarge::new(cfg))),
        "conn-small" => Ok(Box::new(maker_conn::ConnSmall::new(cfg)?)),
        "hamilton" => Ok(Box::new(maker_hamilton::HamiltonMaker::new(cfg))),
        "random" => Ok(Box::new(maker_random::RandomMaker::new(cfg))),
        _ => Err(GameError::InvalidConfig(format!(
            "unknown maker strategy '{name}' (known: {})",
            MAKER_NAMES.join(", ")
        ))),
    }
}

pub fn make_breaker(name: &str, cfg: &GameConfig) -> Result<Box<dyn BreakerStrategy>> {
    match name {
        "star-phases" => Ok(Box::new(breaker::StarPhases::new(cfg))),
        "single-star" => Ok(Box::new(breaker::SingleStar::new(cfg))),
        "random" => Ok(Box::new(breaker::RandomBreaker::new())),
        _ => Err(GameError::InvalidConfig(format!(
            "unknown breaker strategy '{name}' (known: {})",
            BREAKER_NAMES.join(", ")
        ))),
    }
}
