//! The referee: plays one complete game between two strategy objects.
//!
//! Per round, Maker is asked for attempts one at a time until she has made
//! `a`, forfeits, wins, or the board empties; then Breaker claims up to
//! `b` free edges or forfeits. The engine is stepwise — one strategy
//! interaction per [`Game::step`] — so the exact oracle can drive, clone
//! and branch a game mid-round.

use crate::board::{BoardState, EdgeId, MoveOutcome, TranscriptEntry};
use crate::config::{GameConfig, GameKind};
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::strategies::{BreakerAction, BreakerStrategy, MakerAction, MakerStrategy};
use crate::win_check::{self, WinCertificate};
use serde::{Deserialize, Serialize};

/// Exact detection is run after every Maker claim only on boards this
/// small; on larger boards generic (certificate-free) detection for the
/// matching and Hamilton games is deferred to final evaluation. The
/// winning properties are monotone, so deferral never changes the winner.
const PER_CLAIM_EXACT_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    Maker,
    Breaker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EndReason {
    MakerWin,
    MakerForfeit,
    BreakerForfeit,
    BoardExhausted,
    StallCap,
}

impl EndReason {
    pub const ALL: [EndReason; 5] = [
        EndReason::MakerWin,
        EndReason::MakerForfeit,
        EndReason::BreakerForfeit,
        EndReason::BoardExhausted,
        EndReason::StallCap,
    ];

    pub fn winner(&self) -> Option<Winner> {
        match self {
            EndReason::MakerWin | EndReason::BreakerForfeit => Some(Winner::Maker),
            EndReason::MakerForfeit | EndReason::StallCap => Some(Winner::Breaker),
            EndReason::BoardExhausted => None, // decided by the final check
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EndReason::MakerWin => "maker-win",
            EndReason::MakerForfeit => "maker-forfeit",
            EndReason::BreakerForfeit => "breaker-forfeit",
            EndReason::BoardExhausted => "board-exhausted",
            EndReason::StallCap => "stall-cap",
        }
    }
}

/// Complete outcome of one trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub winner: Winner,
    pub reason: EndReason,
    pub rounds_used: u32,
    pub maker_failures: u64,
    pub seed: u64,
    /// True when the game was cut short because the position was provably
    /// dead for Maker (same winner as playing on, fewer rounds).
    pub ended_early: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_maker_edges: Option<Vec<EdgeId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Vec<TranscriptEntry>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    MakerTurn,
    BreakerTurn,
    Done,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepStatus {
    InProgress,
    Finished,
}

pub struct Game {
    pub cfg: GameConfig,
    pub board: BoardState,
    maker: Box<dyn MakerStrategy>,
    breaker: Box<dyn BreakerStrategy>,
    phase: Phase,
    breaker_claims_this_round: u32,
    outcome: Option<(Winner, EndReason, bool)>,
}

impl Clone for Game {
    fn clone(&self) -> Self {
        Game {
            cfg: self.cfg.clone(),
            board: self.board.clone(),
            maker: self.maker.clone_box(),
            breaker: self.breaker.clone_box(),
            phase: self.phase,
            breaker_claims_this_round: self.breaker_claims_this_round,
            outcome: self.outcome,
        }
    }
}

impl Game {
    pub fn new(
        cfg: GameConfig,
        maker: Box<dyn MakerStrategy>,
        breaker: Box<dyn BreakerStrategy>,
    ) -> Result<Self> {
        let board = BoardState::new(&cfg)?;
        Ok(Game {
            cfg,
            board,
            maker,
            breaker,
            phase: Phase::MakerTurn,
            breaker_claims_this_round: 0,
            outcome: None,
        })
    }

    pub fn finished(&self) -> bool {
        self.phase == Phase::Done
    }

    pub fn maker_strategy(&self) -> &dyn MakerStrategy {
        self.maker.as_ref()
    }

    /// Runs exactly one strategy interaction (or a bookkeeping
    /// transition). All randomness of that interaction flows through
    /// `rng`.
    pub fn step(&mut self, rng: &mut dyn RandomSource) -> Result<StepStatus> {
        match self.phase {
            Phase::Done => Ok(StepStatus::Finished),
            Phase::MakerTurn => self.maker_step(rng),
            Phase::BreakerTurn => self.breaker_step(rng),
        }
    }

    fn finish(&mut self, winner: Winner, reason: EndReason, early: bool) -> Result<StepStatus> {
        self.phase = Phase::Done;
        self.outcome = Some((winner, reason, early));
        Ok(StepStatus::Finished)
    }

    fn maker_step(&mut self, rng: &mut dyn RandomSource) -> Result<StepStatus> {
        if self.board.free_edges() == 0 {
            // Board exhausted: final evaluation on Maker's graph.
            let won = self.final_check()?;
            return if won {
                self.finish(Winner::Maker, EndReason::BoardExhausted, false)
            } else {
                self.finish(Winner::Breaker, EndReason::BoardExhausted, false)
            };
        }
        if self.board.maker_attempts_this_round >= self.cfg.a {
            self.phase = Phase::BreakerTurn;
            self.breaker_claims_this_round = 0;
            return Ok(StepStatus::InProgress);
        }
        let budget_left = self.cfg.a - self.board.maker_attempts_this_round;
        let action = {
            let view = self.board.view(self.cfg.a, self.cfg.b, budget_left);
            self.maker.next_action(&view, rng)?
        };
        match action {
            MakerAction::Forfeit => self.finish(Winner::Breaker, EndReason::MakerForfeit, false),
            MakerAction::DeclareWin => {
                if self.full_check()? {
                    self.finish(Winner::Maker, EndReason::MakerWin, false)
                } else {
                    Err(GameError::ContractViolation(format!(
                        "{} declared a win the checker rejects",
                        self.maker.name()
                    )))
                }
            }
            MakerAction::Attempt(e) => {
                let outcome = self.board.attempt_claim_maker(e)?;
                let budget_left = self.cfg.a - self.board.maker_attempts_this_round;
                {
                    let view = self.board.view(self.cfg.a, self.cfg.b, budget_left);
                    self.maker.observe(e, outcome, &view);
                }
                self.breaker.observe_maker_attempt(e, outcome, &self.board);
                if outcome == MoveOutcome::Claimed && self.win_after_claim()? {
                    return self.finish(Winner::Maker, EndReason::MakerWin, false);
                }
                Ok(StepStatus::InProgress)
            }
        }
    }

    fn breaker_step(&mut self, rng: &mut dyn RandomSource) -> Result<StepStatus> {
        if self.board.free_edges() == 0 {
            // Board exhausted during this round; final evaluation happens
            // on the next maker step without advancing the round counter.
            self.phase = Phase::MakerTurn;
            return Ok(StepStatus::InProgress);
        }
        if self.breaker_claims_this_round >= self.cfg.b {
            // Round complete.
            if self.board.round >= self.cfg.stall_cap {
                return self.finish(Winner::Breaker, EndReason::StallCap, false);
            }
            self.board.round += 1;
            self.board.maker_attempts_this_round = 0;
            self.phase = Phase::MakerTurn;
            return Ok(StepStatus::InProgress);
        }
        match self.breaker.next_claim(&self.board, rng)? {
            BreakerAction::Forfeit => self.finish(Winner::Maker, EndReason::BreakerForfeit, false),
            BreakerAction::Claim(e) => {
                self.board.claim_breaker(e)?;
                self.breaker_claims_this_round += 1;
                if self.cfg.early_stop && self.board.dead_position() {
                    // Maker can no longer win; every continuation ends with
                    // the final check failing, so record the exhaustion
                    // outcome now and flag the shortcut.
                    return self.finish(Winner::Breaker, EndReason::BoardExhausted, true);
                }
                Ok(StepStatus::InProgress)
            }
        }
    }

    /// Cheap win detection after a successful Maker claim.
    fn win_after_claim(&mut self) -> Result<bool> {
        match self.cfg.game {
            GameKind::MinDegree => Ok(self.board.below_k() == 0),
            GameKind::Connectivity => Ok(self.board.components.components() == 1),
            GameKind::PerfectMatching | GameKind::Hamiltonicity => {
                if let Some(cert) = self.maker.certificate() {
                    if win_check::verify_certificate(self.cfg.n, self.board.maker_bits(), &cert) {
                        return Ok(true);
                    }
                    return Err(GameError::ContractViolation(format!(
                        "{} produced a certificate its own edges do not support",
                        self.maker.name()
                    )));
                }
                if self.cfg.n <= PER_CLAIM_EXACT_MAX_N {
                    self.exact_check()
                } else {
                    Ok(false)
                }
            }
        }
    }

    /// Full check used by final evaluation and win declarations.
    fn full_check(&mut self) -> Result<bool> {
        match self.cfg.game {
            GameKind::MinDegree => Ok(self.board.below_k() == 0),
            GameKind::Connectivity => Ok(self.board.components.components() == 1),
            GameKind::PerfectMatching | GameKind::Hamiltonicity => {
                if let Some(cert) = self.maker.certificate() {
                    if win_check::verify_certificate(self.cfg.n, self.board.maker_bits(), &cert) {
                        return Ok(true);
                    }
                    return Err(GameError::ContractViolation(format!(
                        "{} produced a certificate its own edges do not support",
                        self.maker.name()
                    )));
                }
                self.exact_check()
            }
        }
    }

    fn exact_check(&self) -> Result<bool> {
        match self.cfg.game {
            GameKind::PerfectMatching => {
                if (0..self.cfg.n).any(|v| self.board.maker_deg(v) == 0) {
                    return Ok(false);
                }
                win_check::check_perfect_matching(self.cfg.n, self.board.maker_bits())
            }
            GameKind::Hamiltonicity => {
                if self.board.maker_edges() < self.cfg.n as u64
                    || (0..self.cfg.n).any(|v| self.board.maker_deg(v) < 2)
                {
                    return Ok(false);
                }
                win_check::check_hamilton(self.cfg.n, self.board.maker_bits())
            }
            _ => unreachable!(),
        }
    }

    fn final_check(&mut self) -> Result<bool> {
        self.full_check()
    }

    /// Position fingerprint for oracle memoization: board, turn position
    /// and both strategy states.
    pub fn encode_key(&self, out: &mut Vec<u8>) {
        out.push(match self.phase {
            Phase::MakerTurn => 0,
            Phase::BreakerTurn => 1,
            Phase::Done => 2,
        });
        out.push(self.breaker_claims_this_round as u8);
        self.board.encode_key(out);
        out.push(0xfe);
        self.maker.encode_state(out);
        out.push(0xff);
        self.breaker.encode_state(out);
    }

    pub fn outcome(&self) -> Option<(Winner, EndReason, bool)> {
        self.outcome
    }

    pub fn into_record(mut self, keep_edges: bool) -> Result<TrialRecord> {
        let (winner, reason, ended_early) = self.outcome.ok_or_else(|| {
            GameError::Internal("record requested before the game finished".into())
        })?;
        Ok(TrialRecord {
            winner,
            reason,
            rounds_used: self.board.round,
            maker_failures: self.board.maker_failures,
            seed: self.cfg.seed,
            ended_early,
            final_maker_edges: keep_edges.then(|| self.board.maker_edge_list().to_vec()),
            transcript: self.board.take_transcript(),
        })
    }

    /// Independent confirmation of the recorded outcome: every win must be
    /// certified by the winning-set checkers recomputed from the final
    /// edge list, not by engine counters.
    pub fn cross_check_outcome(&self) -> Result<()> {
        let Some((winner, reason, _)) = self.outcome else {
            return Err(GameError::Internal("game not finished".into()));
        };
        if !(winner == Winner::Maker && matches!(reason, EndReason::MakerWin | EndReason::BoardExhausted)) {
            return Ok(());
        }
        let n = self.cfg.n;
        let edges = self.board.maker_edge_list();
        let ok = match self.cfg.game {
            GameKind::MinDegree => {
                let mut deg = vec![0u32; n];
                for e in edges {
                    deg[e.u as usize] += 1;
                    deg[e.v as usize] += 1;
                }
                win_check::check_mindegree(&deg, self.cfg.k)
            }
            GameKind::Connectivity => win_check::check_connectivity(n, edges),
            GameKind::PerfectMatching => match self.maker.certificate() {
                Some(c @ WinCertificate::PerfectMatching(_)) => {
                    win_check::verify_certificate(n, self.board.maker_bits(), &c)
                }
                _ => win_check::check_perfect_matching(n, self.board.maker_bits())?,
            },
            GameKind::Hamiltonicity => match self.maker.certificate() {
                Some(c @ WinCertificate::HamiltonCycle(_)) => {
                    win_check::verify_certificate(n, self.board.maker_bits(), &c)
                }
                _ => win_check::check_hamilton(n, self.board.maker_bits())?,
            },
        };
        if ok {
            Ok(())
        } else {
            Err(GameError::Internal(format!(
                "certificate failure: recorded win not confirmed by the {} checker",
                self.cfg.game.name()
            )))
        }
    }
}

/// Plays one complete game and returns its record.
pub fn run_game(
    cfg: GameConfig,
    maker: Box<dyn MakerStrategy>,
    breaker: Box<dyn BreakerStrategy>,
    rng: &mut dyn RandomSource,
) -> Result<TrialRecord> {
    let mut game = Game::new(cfg, maker, breaker)?;
    while game.step(rng)? == StepStatus::InProgress {}
    game.cross_check_outcome()?;
    game.into_record(false)
}

/// As [`run_game`], returning the finished game for inspection.
pub fn run_game_full(
    cfg: GameConfig,
    maker: Box<dyn MakerStrategy>,
    breaker: Box<dyn BreakerStrategy>,
    rng: &mut dyn RandomSource,
) -> Result<Game> {
    let mut game = Game::new(cfg, maker, breaker)?;
    while game.step(rng)? == StepStatus::InProgress {}
    game.cross_check_outcome()?;
    Ok(game)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::MakerView;
    use crate::rng::TrialRng;
    use crate::strategies::make_breaker;

    /// Burns every move on a known-lost edge once it has found one.
    #[derive(Clone, Default)]
    struct TimeWaster {
        hammer: Option<EdgeId>,
        probe: u32,
    }

    impl MakerStrategy for TimeWaster {
        fn next_action(
            &mut self,
            view: &MakerView,
            _rng: &mut dyn RandomSource,
        ) -> Result<MakerAction> {
            if let Some(e) = self.hammer {
                return Ok(MakerAction::Attempt(e));
            }
            // probe fresh edges until one turns out to be Breaker's
            loop {
                let u = self.probe / view.n as u32;
                let v = self.probe % view.n as u32;
                self.probe += 1;
                if u < v {
                    let e = EdgeId::new(u, v);
                    if !view.owns(e) {
                        return Ok(MakerAction::Attempt(e));
                    }
                }
                if self.probe > (view.n * view.n) as u32 {
                    return Ok(MakerAction::Forfeit);
                }
            }
        }

        fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, _view: &MakerView) {
            if outcome == MoveOutcome::Failure {
                self.hammer = Some(edge);
            }
        }

        fn encode_state(&self, out: &mut Vec<u8>) {
            out.extend_from_slice(&self.probe.to_le_bytes());
        }

        fn clone_box(&self) -> Box<dyn MakerStrategy> {
            Box::new(self.clone())
        }

        fn name(&self) -> &'static str {
            "time-waster"
        }
    }

    #[test]
    fn stall_cap_is_reported_distinctly() {
        // tightest legal cap, impossible degree target, wasted maker
        // moves: the round limit fires before the board can empty
        let mut cfg = GameConfig::new(GameKind::MinDegree, 8, 2, 1, 7);
        cfg.stall_cap = cfg.edge_count().div_ceil(3) as u32;
        cfg.early_stop = false;
        let breaker = make_breaker("random", &cfg).unwrap();
        let mut rng = TrialRng::seeded(5);
        let rec = run_game(cfg, Box::new(TimeWaster::default()), breaker, &mut rng).unwrap();
        assert_eq!(rec.reason, EndReason::StallCap);
        assert_eq!(rec.winner, Winner::Breaker);
    }

    /// Declares victory immediately without any structure behind it.
    #[derive(Clone)]
    struct FalseProphet;

    impl MakerStrategy for FalseProphet {
        fn next_action(
            &mut self,
            _view: &MakerView,
            _rng: &mut dyn RandomSource,
        ) -> Result<MakerAction> {
            Ok(MakerAction::DeclareWin)
        }

        fn observe(&mut self, _e: EdgeId, _o: MoveOutcome, _v: &MakerView) {}

        fn encode_state(&self, _out: &mut Vec<u8>) {}

        fn clone_box(&self) -> Box<dyn MakerStrategy> {
            Box::new(FalseProphet)
        }

        fn name(&self) -> &'static str {
            "false-prophet"
        }
    }

    #[test]
    fn unsupported_win_declarations_are_contract_errors() {
        let cfg = GameConfig::new(GameKind::MinDegree, 4, 1, 1, 2);
        let breaker = make_breaker("random", &cfg).unwrap();
        let mut rng = TrialRng::seeded(1);
        let err = run_game(cfg, Box::new(FalseProphet), breaker, &mut rng).unwrap_err();
        assert!(matches!(err, GameError::ContractViolation(_)), "{err}");
    }

    /// Submits an edge it already owns.
    #[derive(Clone)]
    struct OwnEdgeRepeater;

    impl MakerStrategy for OwnEdgeRepeater {
        fn next_action(
            &mut self,
            _view: &MakerView,
            _rng: &mut dyn RandomSource,
        ) -> Result<MakerAction> {
            Ok(MakerAction::Attempt(EdgeId::new(0, 1)))
        }

        fn observe(&mut self, _e: EdgeId, _o: MoveOutcome, _v: &MakerView) {}

        fn encode_state(&self, _out: &mut Vec<u8>) {}

        fn clone_box(&self) -> Box<dyn MakerStrategy> {
            Box::new(OwnEdgeRepeater)
        }

        fn name(&self) -> &'static str {
            "own-edge-repeater"
        }
    }

    #[test]
    fn own_edge_submission_surfaces_as_engine_error() {
        let cfg = GameConfig::new(GameKind::MinDegree, 5, 2, 1, 4);
        let breaker = make_breaker("random", &cfg).unwrap();
        let mut rng = TrialRng::seeded(1);
        let err = run_game(cfg, Box::new(OwnEdgeRepeater), breaker, &mut rng).unwrap_err();
        assert!(matches!(err, GameError::ContractViolation(_)), "{err}");
    }
}
