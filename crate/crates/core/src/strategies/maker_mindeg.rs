//! Maker strategies for the mindegree-k game.
//!
//! `MindegLarge` processes vertices one at a time: draw a uniform vertex
//! still below target, claim random incident edges until its degree
//! reaches k, repeat; phases of ⌈εn⌉ vertex choices are each capped in
//! rounds. `MindegSmall` runs a two-stage weight process: pairs of
//! under-weight vertices are drawn and connected (with a degree repair on
//! failure), then the leftover set is finished vertex by vertex.

use crate::bits::{self, VertexBits};
use crate::board::{EdgeId, MakerView, MoveOutcome};
use crate::config::{GameConfig, SamplingMode};
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::strategies::params::{MindegLargeParams, MindegSmallParams};
use crate::strategies::sampling::VertexPool;
use crate::strategies::{MakerAction, MakerStrategy};

/// One uniform draw over the incident edges of `v` the strategy may
/// submit, honouring the configured sampling mode.
fn draw_incident(
    view: &MakerView,
    v: u32,
    mode: SamplingMode,
    rng: &mut dyn RandomSource,
) -> Result<Option<EdgeId>> {
    let v = v as usize;
    match mode {
        SamplingMode::KnowledgeAware => {
            let cnt = view.unknown_deg(v) as usize;
            if cnt == 0 {
                return Ok(None);
            }
            let i = rng.uniform_index(cnt)?;
            Ok(Some(view.select_unknown_incident(v, i)))
        }
        SamplingMode::StrictPaper => {
            // All incident edges not already Maker's: a known failure may
            // be drawn again (and costs another move).
            let cnt = view.not_mine_deg(v) as usize;
            if cnt == 0 {
                return Ok(None);
            }
            let i = rng.uniform_index(cnt)?;
            Ok(Some(view.select_not_mine_incident(v, i)))
        }
    }
}

#[derive(Clone)]
pub struct MindegLarge {
    k: u32,
    sampling: SamplingMode,
    params: MindegLargeParams,
    pool: VertexPool,
    current: Option<u32>,
    choices_made: u64,
    phase_start_round: u32,
}

impl MindegLarge {
    pub fn new(cfg: &GameConfig) -> Self {
        MindegLarge {
            k: cfg.k,
            sampling: cfg.sampling,
            params: MindegLargeParams::new(cfg.n, cfg.a, cfg.b, cfg.k),
            pool: VertexPool::full(cfg.n),
            current: None,
            choices_made: 0,
            phase_start_round: 1,
        }
    }
}

impl MakerStrategy for MindegLarge {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        loop {
            let v = match self.current {
                Some(v) => v,
                None => {
                    if self.pool.is_empty() {
                        // every vertex reached its target; nothing left to
                        // play under a different win condition
                        return Ok(MakerAction::Forfeit);
                    }
                    if self.choices_made.is_multiple_of(self.params.phase_len) {
                        self.phase_start_round = view.round;
                    }
                    let v = self.pool.draw(rng)?;
                    self.choices_made += 1;
                    self.current = Some(v);
                    v
                }
            };
            if view.my_deg(v as usize) >= self.k {
                self.pool.remove(v);
                self.current = None;
                continue;
            }
            let elapsed = (view.round - self.phase_start_round) as u64 + 1;
            if elapsed > self.params.phase_round_cap {
                return Ok(MakerAction::Forfeit);
            }
            return match draw_incident(view, v, self.sampling, rng)? {
                Some(e) => Ok(MakerAction::Attempt(e)),
                None => Ok(MakerAction::Forfeit), // dead vertex
            };
        }
    }

    fn observe(&mut self, _edge: EdgeId, _outcome: MoveOutcome, _view: &MakerView) {}

    fn encode_state(&self, out: &mut Vec<u8>) {
        self.pool.encode(out);
        out.extend_from_slice(&self.current.map_or(u32::MAX, |v| v).to_le_bytes());
        out.extend_from_slice(&self.choices_made.to_le_bytes());
        out.extend_from_slice(&self.phase_start_round.to_le_bytes());
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "mindeg-large"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SmallMode {
    Stage1Ready,
    /// Pair edge attempted, outcome pending.
    Stage1Pair { v: u32, w: u32 },
    Stage1RepairV { v: u32, w: u32 },
    Stage1RepairW { v: u32, w: u32 },
    Stage2Ready,
    Stage2Work { v: u32 },
}

#[derive(Clone)]
pub struct MindegSmall {
    k: u32,
    params: MindegSmallParams,
    mode: SmallMode,
    weight: Vec<u32>,
    /// Vertices with weight below k.
    below: VertexPool,
    below_mask: VertexBits,
    /// Per-vertex count of below-set partners whose edge is known
    /// unavailable; `known_slots` is its sum over the below set.
    known_in: Vec<u32>,
    known_slots: u64,
    repair_attempts: u64,
    forfeit_pending: bool,
    stage2_start_round: Option<u32>,
}

impl MindegSmall {
    pub fn new(cfg: &GameConfig) -> Self {
        MindegSmall {
            k: cfg.k,
            params: MindegSmallParams::new(cfg.n, cfg.a),
            mode: SmallMode::Stage1Ready,
            weight: vec![0; cfg.n],
            below: VertexPool::full(cfg.n),
            below_mask: VertexBits::filled(cfg.n),
            known_in: vec![0; cfg.n],
            known_slots: 0,
            repair_attempts: 0,
            forfeit_pending: false,
            stage2_start_round: None,
        }
    }

    fn remove_from_below(&mut self, x: u32, view: &MakerView) {
        if !self.below.contains(x) {
            return;
        }
        self.below.remove(x);
        self.below_mask.clear(x as usize);
        self.known_slots -= self.known_in[x as usize] as u64;
        // partners with a known edge to x lose one blocked slot
        let xs = x as usize;
        let words = self.below_mask.words().len();
        for wi in 0..words {
            let mut w = (view.my_bits().row(xs)[wi] | view.revealed_bits().row(xs)[wi])
                & self.below_mask.words()[wi];
            while w != 0 {
                let y = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                self.known_in[y] -= 1;
                self.known_slots -= 1;
            }
        }
    }

    /// Weight bump at the end of a stage-one iteration.
    fn bump_weight(&mut self, x: u32, view: &MakerView) {
        self.weight[x as usize] += 1;
        debug_assert!(view.my_deg(x as usize) >= self.weight[x as usize]);
        if self.weight[x as usize] >= self.k {
            self.remove_from_below(x, view);
        }
    }

    fn end_iteration(&mut self, v: u32, w: u32, view: &MakerView) {
        self.bump_weight(v, view);
        self.bump_weight(w, view);
        if self.repair_attempts > self.params.repair_budget {
            self.forfeit_pending = true;
        }
        self.mode = SmallMode::Stage1Ready;
    }

    /// Uniform eligible pair from the below set: both endpoints distinct
    /// members, edge not known unavailable. One slot draw over ordered
    /// pairs.
    fn draw_pair(&self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<Option<(u32, u32)>> {
        let s = self.below.len() as u64;
        if s < 2 {
            return Ok(None);
        }
        let total = s * (s - 1) - self.known_slots;
        if total == 0 {
            return Ok(None);
        }
        let mut r = rng.uniform_index(total as usize)? as u64;
        for &v in self.below.as_slice() {
            let eligible = (s - 1) - self.known_in[v as usize] as u64;
            if r < eligible {
                let vs = v as usize;
                let words = self.below_mask.words().len();
                let w = bits::select_ith(words, r as usize, |wi| {
                    let mut word = self.below_mask.words()[wi]
                        & !(view.my_bits().row(vs)[wi] | view.revealed_bits().row(vs)[wi]);
                    if wi == vs / 64 {
                        word &= !(1u64 << (vs % 64));
                    }
                    word
                });
                return Ok(Some((v, w as u32)));
            }
            r -= eligible;
        }
        Err(GameError::Internal("pair slot walk exhausted".into()))
    }
}

impl MakerStrategy for MindegSmall {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        if self.forfeit_pending {
            return Ok(MakerAction::Forfeit);
        }
        loop {
            match self.mode {
                SmallMode::Stage1Ready => {
                    if (self.below.len() as u64) < self.params.stage1_floor {
                        self.mode = SmallMode::Stage2Ready;
                        continue;
                    }
                    match self.draw_pair(view, rng)? {
                        Some((v, w)) => {
                            self.mode = SmallMode::Stage1Pair { v, w };
                            return Ok(MakerAction::Attempt(EdgeId::new(v, w)));
                        }
                        None => return Ok(MakerAction::Forfeit), // no eligible pair left
                    }
                }
                SmallMode::Stage1Pair { .. } => {
                    return Err(GameError::Internal(
                        "asked for a move while a pair outcome is pending".into(),
                    ));
                }
                SmallMode::Stage1RepairV { v, w } => {
                    if view.my_deg(v as usize) >= self.k {
                        self.mode = SmallMode::Stage1RepairW { v, w };
                        continue;
                    }
                    match draw_incident(view, v, SamplingMode::KnowledgeAware, rng)? {
                        Some(e) => {
                            self.repair_attempts += 1;
                            return Ok(MakerAction::Attempt(e));
                        }
                        None => return Ok(MakerAction::Forfeit), // dead vertex
                    }
                }
                SmallMode::Stage1RepairW { v, w } => {
                    if view.my_deg(w as usize) >= self.k {
                        self.end_iteration(v, w, view);
                        if self.forfeit_pending {
                            return Ok(MakerAction::Forfeit);
                        }
                        continue;
                    }
                    match draw_incident(view, w, SamplingMode::KnowledgeAware, rng)? {
                        Some(e) => {
                            self.repair_attempts += 1;
                            return Ok(MakerAction::Attempt(e));
                        }
                        None => return Ok(MakerAction::Forfeit),
                    }
                }
                SmallMode::Stage2Ready => {
                    if self.below.is_empty() {
                        // all weights reached k, hence all degrees did too
                        return Ok(MakerAction::Forfeit);
                    }
                    let v = self.below.draw(rng)?;
                    self.mode = SmallMode::Stage2Work { v };
                }
                SmallMode::Stage2Work { v } => {
                    if view.my_deg(v as usize) >= self.k {
                        self.remove_from_below(v, view);
                        self.mode = SmallMode::Stage2Ready;
                        continue;
                    }
                    let start = *self.stage2_start_round.get_or_insert(view.round);
                    let elapsed = (view.round - start) as u64 + 1;
                    if elapsed > self.params.stage2_round_cap {
                        return Ok(MakerAction::Forfeit);
                    }
                    match draw_incident(view, v, SamplingMode::KnowledgeAware, rng)? {
                        Some(e) => return Ok(MakerAction::Attempt(e)),
                        None => return Ok(MakerAction::Forfeit),
                    }
                }
            }
        }
    }

    fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, view: &MakerView) {
        // every attempt makes its edge known; track blocked pair slots
        let (u, w) = (edge.u, edge.v);
        if self.below.contains(u) && self.below.contains(w) {
            self.known_in[u as usize] += 1;
            self.known_in[w as usize] += 1;
            self.known_slots += 2;
        }
        if let SmallMode::Stage1Pair { v, w } = self.mode {
            debug_assert_eq!(EdgeId::new(v, w), edge);
            match outcome {
                MoveOutcome::Claimed => self.end_iteration(v, w, view),
                MoveOutcome::Failure => self.mode = SmallMode::Stage1RepairV { v, w },
            }
        }
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        match self.mode {
            SmallMode::Stage1Ready => out.push(0),
            SmallMode::Stage1Pair { v, w } => {
                out.push(1);
                out.extend_from_slice(&v.to_le_bytes());
                out.extend_from_slice(&w.to_le_bytes());
            }
            SmallMode::Stage1RepairV { v, w } => {
                out.push(2);
                out.extend_from_slice(&v.to_le_bytes());
                out.extend_from_slice(&w.to_le_bytes());
            }
            SmallMode::Stage1RepairW { v, w } => {
                out.push(3);
                out.extend_from_slice(&v.to_le_bytes());
                out.extend_from_slice(&w.to_le_bytes());
            }
            SmallMode::Stage2Ready => out.push(4),
            SmallMode::Stage2Work { v } => {
                out.push(5);
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        for &w in &self.weight {
            out.extend_from_slice(&w.to_le_bytes());
        }
        self.below.encode(out);
        out.extend_from_slice(&self.repair_attempts.to_le_bytes());
        out.push(self.forfeit_pending as u8);
        out.extend_from_slice(&self.stage2_start_round.unwrap_or(0).to_le_bytes());
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "mindeg-small"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::BoardState;
    use crate::config::GameKind;
    use crate::rng::TrialRng;

    fn drive_attempt(
        board: &mut BoardState,
        s: &mut dyn MakerStrategy,
        rng: &mut TrialRng,
    ) -> Option<EdgeId> {
        let view = board.view(1, 1, 1);
        match s.next_action(&view, rng).unwrap() {
            MakerAction::Attempt(e) => {
                let out = board.attempt_claim_maker(e).unwrap();
                board.begin_round();
                let view = board.view(1, 1, 1);
                s.observe(e, out, &view);
                Some(e)
            }
            _ => None,
        }
    }

    #[test]
    fn large_first_choice_is_uniform() {
        let cfg = GameConfig::new(GameKind::MinDegree, 100, 1, 1, 1);
        let mut counts = vec![0u32; 100];
        for seed in 0..20_000u64 {
            let board = BoardState::new(&cfg).unwrap();
            let mut s = MindegLarge::new(&cfg);
            let mut rng = TrialRng::seeded(seed);
            let view = board.view(1, 1, 1);
            match s.next_action(&view, &mut rng).unwrap() {
                MakerAction::Attempt(_) => counts[s.current.unwrap() as usize] += 1,
                other => panic!("unexpected {other:?}"),
            }
        }
        for &c in &counts {
            assert!(c > 100, "first vertex choice not uniform: {c}");
        }
    }

    #[test]
    fn large_removes_vertex_after_reaching_degree() {
        let cfg = GameConfig::new(GameKind::MinDegree, 6, 1, 1, 1);
        let mut board = BoardState::new(&cfg).unwrap();
        let mut s = MindegLarge::new(&cfg);
        let mut rng = TrialRng::seeded(5);
        let e = drive_attempt(&mut board, &mut s, &mut rng).unwrap();
        let v = s.current.unwrap();
        assert!(e.touches(v));
        // k = 1: a successful claim satisfies v; next ask moves on
        // (a later draw may land on the claimed edge's other endpoint,
        // which is also removed without a claim)
        drive_attempt(&mut board, &mut s, &mut rng).unwrap();
        assert!(!s.pool.contains(v));
        assert!(s.choices_made >= 2);
    }

    #[test]
    fn large_forfeits_on_dead_vertex() {
        let cfg = GameConfig::new(GameKind::MinDegree, 4, 1, 1, 1);
        let mut board = BoardState::new(&cfg).unwrap();
        let mut s = MindegLarge::new(&cfg);
        let mut rng = TrialRng::seeded(1);
        // breaker owns every edge; any chosen vertex is dead after its
        // edges are revealed
        for u in 0..4u32 {
            for v in (u + 1)..4 {
                board.claim_breaker(EdgeId::new(u, v)).unwrap();
            }
        }
        let mut forfeited = false;
        for _ in 0..20 {
            let view = board.view(1, 1, 16);
            match s.next_action(&view, &mut rng).unwrap() {
                MakerAction::Attempt(e) => {
                    let out = board.attempt_claim_maker(e).unwrap();
                    board.begin_round();
                    let view = board.view(1, 1, 16);
                    s.observe(e, out, &view);
                }
                MakerAction::Forfeit => {
                    forfeited = true;
                    break;
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(forfeited);
    }

    #[test]
    fn small_claimed_pair_bumps_both_weights() {
        let cfg = GameConfig::new(GameKind::MinDegree, 40, 1, 1, 1);
        let mut board = BoardState::new(&cfg).unwrap();
        let mut s = MindegSmall::new(&cfg);
        let mut rng = TrialRng::seeded(2);
        let e = drive_attempt(&mut board, &mut s, &mut rng).unwrap();
        assert_eq!(s.weight[e.u as usize], 1);
        assert_eq!(s.weight[e.v as usize], 1);
        // k = 1: both left the below set
        assert!(!s.below.contains(e.u) && !s.below.contains(e.v));
        assert_eq!(board.maker_deg(e.u as usize), 1);
    }

    #[test]
    fn small_failure_triggers_repair_skipping_satisfied() {
        let cfg = GameConfig::new(GameKind::MinDegree, 8, 2, 2, 1);
        let mut board = BoardState::new(&cfg).unwrap();
        let mut s = MindegSmall::new(&cfg);
        let mut rng = TrialRng::seeded(7);

        // force a failure: breaker owns everything, so the first drawn
        // pair fails and repair of v begins
        for u in 0..8u32 {
            for v in (u + 1)..8 {
                board.claim_breaker(EdgeId::new(u, v)).unwrap();
            }
        }
        let view = board.view(2, 2, 2);
        let MakerAction::Attempt(e) = s.next_action(&view, &mut rng).unwrap() else {
            panic!("expected attempt");
        };
        let out = board.attempt_claim_maker(e).unwrap();
        assert_eq!(out, MoveOutcome::Failure);
        let view = board.view(2, 2, 1);
        s.observe(e, out, &view);
        assert!(matches!(s.mode, SmallMode::Stage1RepairV { .. }));
        // weights unchanged until the iteration completes
        assert_eq!(s.weight[e.u as usize], 0);
    }

    #[test]
    fn small_stage_boundary_enters_stage_two() {
        let cfg = GameConfig::new(GameKind::MinDegree, 12, 1, 1, 1);
        let mut s = MindegSmall::new(&cfg);
        let board = BoardState::new(&cfg).unwrap();
        let mut rng = TrialRng::seeded(3);
        // shrink the below set under the stage-one floor artificially
        let floor = s.params.stage1_floor as usize;
        let view = board.view(1, 1, 1);
        while s.below.len() >= floor {
            let v = s.below.as_slice()[0];
            s.remove_from_below(v, &view);
        }
        let view = board.view(1, 1, 1);
        match s.next_action(&view, &mut rng).unwrap() {
            MakerAction::Attempt(_) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(s.mode, SmallMode::Stage2Work { .. }));
    }
}
