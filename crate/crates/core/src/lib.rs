//! Simulator and experiment harness for biased (a:b) Maker-PhantomBreaker
//! positional games on the complete graph.
//!
//! Maker and a phantom Breaker alternately claim edges of `K_n`; Maker
//! moves first with `a` attempts per round, Breaker answers with `b`
//! claims he keeps hidden. Maker learns an edge is taken only by trying
//! it and losing the move. The crate provides:
//!
//! - the referee engine with the one-sided information model
//!   ([`engine`], [`board`]);
//! - winning-set checks for the mindegree-k, connectivity, perfect
//!   matching and Hamiltonicity games ([`win_check`]);
//! - the randomized strategies for both players ([`strategies`]);
//! - an exact win-probability oracle for tiny boards that enumerates
//!   every random choice of both strategies ([`oracle`]);
//! - a seeded, parallel Monte Carlo runner with Wilson intervals and
//!   parameter sweeps ([`experiment`]);
//! - the acceptance checks wiring all of it together ([`acceptance`]).

pub mod acceptance;
pub mod bits;
pub mod board;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod rng;
pub mod strategies;
pub mod win_check;

pub use board::{BoardState, EdgeId, MakerView, MoveOutcome, Owner};
pub use config::{GameConfig, GameKind, SamplingMode};
pub use engine::{run_game, EndReason, Game, TrialRecord, Winner};
pub use error::{GameError, Result};
pub use rng::{mix_seed, RandomSource, ScriptRng, TrialRng};
pub use strategies::{make_breaker, make_maker, BREAKER_NAMES, MAKER_NAMES};
