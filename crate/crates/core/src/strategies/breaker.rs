//! PhantomBreaker strategies.
//!
//! Both star strategies aim to surround a vertex Maker cannot defend:
//! `StarPhases` restarts on a fresh Maker-untouched vertex whenever Maker
//! interferes, `SingleStar` commits to one random vertex for the whole
//! game. `RandomBreaker` is the uniform baseline.

use crate::board::{BoardState, EdgeId, MoveOutcome};
use crate::config::GameConfig;
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::strategies::{BreakerAction, BreakerStrategy};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Upper bound on Maker's win probability against the star-phases
/// strategy in the mindegree-1 game: the product over i of
/// 1 / (b/2a − i), for i = 0 .. ⌊b/2a⌋ − 1. Requires b > 2a.
pub fn star_phases_win_bound(a: u32, b: u32) -> Result<BigRational> {
    if b <= 2 * a {
        return Err(GameError::InvalidConfig(format!(
            "bound requires b > 2a, got a={a}, b={b}"
        )));
    }
    let phases = (b / (2 * a)) as i64; // ⌊b/2a⌋
    let mut p = BigRational::from_integer(BigInt::from(1));
    for i in 0..phases {
        // 1 / (b/2a − i) = 2a / (b − 2a·i)
        p *= BigRational::new(BigInt::from(2 * a as i64), BigInt::from(b as i64 - 2 * a as i64 * i));
    }
    Ok(p)
}

/// Restarting star builder. Each phase targets a uniformly random vertex
/// untouched by Maker (no successful edge and no attempt incident to it)
/// and claims its free edges until Maker tries anything at the target,
/// which abandons the phase. No untouched vertex left means resignation —
/// unless a finished star already decides the game, in which case the
/// remaining moves are uniform filler.
#[derive(Clone)]
pub struct StarPhases {
    untouched: Vec<bool>,
    untouched_count: u32,
    target: Option<u32>,
    abandoned: bool,
    phase_count: u32,
    blocked_degree: u32,
}

impl StarPhases {
    pub fn new(cfg: &GameConfig) -> Self {
        StarPhases {
            untouched: vec![true; cfg.n],
            untouched_count: cfg.n as u32,
            target: None,
            abandoned: false,
            phase_count: 0,
            blocked_degree: cfg.game.blocked_degree(cfg.k),
        }
    }

    fn select_untouched(&self, i: usize) -> u32 {
        let mut seen = 0usize;
        for (v, &u) in self.untouched.iter().enumerate() {
            if u {
                if seen == i {
                    return v as u32;
                }
                seen += 1;
            }
        }
        unreachable!("untouched index out of range")
    }

    pub fn phase_count(&self) -> u32 {
        self.phase_count
    }
}

impl BreakerStrategy for StarPhases {
    fn next_claim(
        &mut self,
        board: &BoardState,
        rng: &mut dyn RandomSource,
    ) -> Result<BreakerAction> {
        loop {
            if self.abandoned {
                self.target = None;
                self.abandoned = false;
            }
            match self.target {
                Some(v) => {
                    match board.first_free_incident(v as usize) {
                        Some(e) => return Ok(BreakerAction::Claim(e)),
                        None => {
                            // Star finished (or nothing left at the target
                            // without Maker interference, which means the
                            // target is fully surrounded). Start over.
                            self.target = None;
                        }
                    }
                }
                None => {
                    if self.untouched_count == 0 {
                        if board.blocked_mindegree(self.blocked_degree) {
                            // Already winning; play filler so the board
                            // runs out instead of resigning a won game.
                            let e = board.sample_free_edge(rng)?;
                            return Ok(BreakerAction::Claim(e));
                        }
                        return Ok(BreakerAction::Forfeit);
                    }
                    let i = rng.uniform_index(self.untouched_count as usize)?;
                    self.target = Some(self.select_untouched(i));
                    self.phase_count += 1;
                }
            }
        }
    }

    fn observe_maker_attempt(&mut self, edge: EdgeId, _outcome: MoveOutcome, _board: &BoardState) {
        for w in [edge.u, edge.v] {
            if self.untouched[w as usize] {
                self.untouched[w as usize] = false;
                self.untouched_count -= 1;
            }
        }
        if let Some(v) = self.target {
            if edge.touches(v) {
                self.abandoned = true;
            }
        }
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        out.push(self.abandoned as u8);
        out.extend_from_slice(&self.target.map_or(u32::MAX, |v| v).to_le_bytes());
        // untouched set is derivable from the transcript, but encoding it
        // keeps the key self-contained
        for &u in &self.untouched {
            out.push(u as u8);
        }
    }

    fn clone_box(&self) -> Box<dyn BreakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "star-phases"
    }
}

/// Commits to one uniformly random vertex at game start and claims its
/// free edges until fewer than k remain. Resigns the moment Maker either
/// reaches degree k at the target or fails on an edge there; afterwards
/// claims uniform filler.
#[derive(Clone)]
pub struct SingleStar {
    k: u32,
    n: usize,
    target: Option<u32>,
    maker_failed_at_target: bool,
    star_done: bool,
}

impl SingleStar {
    pub fn new(cfg: &GameConfig) -> Self {
        SingleStar {
            k: cfg.k,
            n: cfg.n,
            target: None,
            maker_failed_at_target: false,
            star_done: false,
        }
    }

    pub fn target(&self) -> Option<u32> {
        self.target
    }
}

impl BreakerStrategy for SingleStar {
    fn next_claim(
        &mut self,
        board: &BoardState,
        rng: &mut dyn RandomSource,
    ) -> Result<BreakerAction> {
        let v = match self.target {
            Some(v) => v,
            None => {
                let v = rng.uniform_index(self.n)? as u32;
                self.target = Some(v);
                v
            }
        };
        if board.maker_deg(v as usize) >= self.k || self.maker_failed_at_target {
            return Ok(BreakerAction::Forfeit);
        }
        if !self.star_done {
            if board.free_deg(v as usize) >= self.k {
                if let Some(e) = board.first_free_incident(v as usize) {
                    return Ok(BreakerAction::Claim(e));
                }
            }
            self.star_done = true;
        }
        let e = board.sample_free_edge(rng)?;
        Ok(BreakerAction::Claim(e))
    }

    fn observe_maker_attempt(&mut self, edge: EdgeId, outcome: MoveOutcome, _board: &BoardState) {
        if let Some(v) = self.target {
            if outcome == MoveOutcome::Failure && edge.touches(v) {
                self.maker_failed_at_target = true;
            }
        }
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.target.map_or(u32::MAX, |v| v).to_le_bytes());
        out.push(self.maker_failed_at_target as u8);
        out.push(self.star_done as u8);
    }

    fn clone_box(&self) -> Box<dyn BreakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "single-star"
    }
}

/// Uniform random Breaker.
#[derive(Clone, Default)]
pub struct RandomBreaker;

impl RandomBreaker {
    pub fn new() -> Self {
        RandomBreaker
    }
}

impl BreakerStrategy for RandomBreaker {
    fn next_claim(
        &mut self,
        board: &BoardState,
        rng: &mut dyn RandomSource,
    ) -> Result<BreakerAction> {
        let e = board.sample_free_edge(rng)?;
        Ok(BreakerAction::Claim(e))
    }

    fn observe_maker_attempt(&mut self, _edge: EdgeId, _outcome: MoveOutcome, _board: &BoardState) {}

    fn encode_state(&self, _out: &mut Vec<u8>) {}

    fn clone_box(&self) -> Box<dyn BreakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "random"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GameKind;
    use num_traits::ToPrimitive;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn star_phases_bound_values() {
        assert_eq!(star_phases_win_bound(1, 6).unwrap(), ratio(1, 6));
        assert_eq!(star_phases_win_bound(1, 4).unwrap(), ratio(1, 2));
        let p = star_phases_win_bound(2, 5).unwrap();
        assert!((p.to_f64().unwrap() - 0.8).abs() < 1e-15);
        assert!(star_phases_win_bound(1, 2).is_err());
    }

    #[test]
    fn single_star_target_distribution() {
        use crate::rng::TrialRng;
        let cfg = GameConfig::new(GameKind::MinDegree, 10, 1, 1, 1);
        let mut counts = [0u32; 10];
        for seed in 0..5000 {
            let board = BoardState::new(&cfg).unwrap();
            let mut s = SingleStar::new(&cfg);
            let mut rng = TrialRng::seeded(seed);
            match s.next_claim(&board, &mut rng).unwrap() {
                BreakerAction::Claim(_) => {}
                other => panic!("unexpected {other:?}"),
            }
            counts[s.target().unwrap() as usize] += 1;
        }
        for &c in &counts {
            assert!(c > 350, "targets not uniform: {counts:?}");
        }
    }

    #[test]
    fn star_phases_abandons_on_attempt_at_target() {
        use crate::rng::TrialRng;
        let cfg = GameConfig::new(GameKind::MinDegree, 6, 4, 6, 1);
        let mut board = BoardState::new(&cfg).unwrap();
        let mut s = StarPhases::new(&cfg);
        let mut rng = TrialRng::seeded(3);

        // Maker touches 0 and 1 so the first target is in {2..5}.
        let m = EdgeId::new(0, 1);
        board.attempt_claim_maker(m).unwrap();
        s.observe_maker_attempt(m, MoveOutcome::Claimed, &board);

        let BreakerAction::Claim(e1) = s.next_claim(&board, &mut rng).unwrap() else {
            panic!("expected claim");
        };
        let target = s.target.unwrap();
        assert!(e1.touches(target) && target >= 2);
        board.claim_breaker(e1).unwrap();

        // Maker attempts an edge at the target: the phase is abandoned and
        // the next claim targets a fresh untouched vertex.
        let probe = EdgeId::new(target, if target == 5 { 4 } else { 5 });
        let out = board.attempt_claim_maker(probe).unwrap();
        s.observe_maker_attempt(probe, out, &board);
        let BreakerAction::Claim(e2) = s.next_claim(&board, &mut rng).unwrap() else {
            panic!("expected claim");
        };
        let new_target = s.target.unwrap();
        assert_ne!(new_target, target);
        assert!(e2.touches(new_target));
        assert_eq!(s.phase_count(), 2);
    }

    #[test]
    fn star_phases_forfeits_without_untouched_vertices() {
        use crate::rng::TrialRng;
        let cfg = GameConfig::new(GameKind::MinDegree, 4, 2, 2, 1);
        let mut board = BoardState::new(&cfg).unwrap();
        let mut s = StarPhases::new(&cfg);
        let mut rng = TrialRng::seeded(0);
        for e in [EdgeId::new(0, 1), EdgeId::new(2, 3)] {
            board.attempt_claim_maker(e).unwrap();
            s.observe_maker_attempt(e, MoveOutcome::Claimed, &board);
        }
        assert!(matches!(
            s.next_claim(&board, &mut rng).unwrap(),
            BreakerAction::Forfeit
        ));
    }
}
