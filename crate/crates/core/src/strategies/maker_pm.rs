//! Maker strategy for the perfect matching game.
//!
//! Stage one pairs up vertices directly: draw two unmatched vertices, try
//! their edge, and on failure grow the matching through a rematch chain
//! (claim an edge from the unmatched vertex to anyone; if the endpoint is
//! already matched, move its partner onto a fresh unmatched vertex).
//! Stage two finishes the leftovers by building a five-edge path through
//! sampled matched pairs. The two variants differ only in their forfeit
//! accounting: per-step draw budget plus a global round cap for the
//! large-bias regime, one cumulative repair budget for the small-bias
//! regime.

use crate::bits::VertexBits;
use crate::board::{EdgeId, MakerView, MoveOutcome};
use crate::config::{GameConfig, GameKind};
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::strategies::params::PmParams;
use crate::strategies::sampling::VertexPool;
use crate::strategies::{MakerAction, MakerStrategy};
use crate::win_check::WinCertificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmVariant {
    LargeB,
    SmallB,
}

const NO_PARTNER: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
enum PmMode {
    Stage1Ready,
    /// Direct pair edge attempted.
    Stage1Pair { xs: [u32; 2] },
    /// Repairing `xs[idx]`: about to draw a helper endpoint.
    RepairDraw { xs: [u32; 2], idx: u8 },
    /// Helper edge `x–y` attempted.
    RepairPend { xs: [u32; 2], idx: u8, y: u32 },
    /// Helper landed on a matched vertex; about to draw the fresh vertex
    /// that takes over its partner.
    RematchDraw { xs: [u32; 2], idx: u8, y: u32, yp: u32 },
    /// Rematch edge `y'–z` attempted (`y` stays matched to `y'` on failure).
    RematchPend { xs: [u32; 2], idx: u8, y: u32, yp: u32, z: u32 },
    Stage2Ready,
    /// Sampling matched pairs and trying to attach them to x1/x2.
    Stage2Stars(Box<Stage2>),
    /// Joining two successful attachments into the five-edge path.
    Stage2Join(Box<Stage2>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Stage2 {
    xs: [u32; 2],
    /// Pair-list indices not yet drawn this step.
    remaining: Vec<u32>,
    draws_made: u64,
    /// Successful attachments per side: (s, t) with the edge x_i–s owned.
    succ: [Vec<(u32, u32)>; 2],
    /// Pending attachment attempt: (side, s, t).
    pend: Option<(u8, u32, u32)>,
    join_left: u64,
    /// Pending join attempt: (j_index_0, j_index_1).
    pend_join: Option<(u32, u32)>,
}

#[derive(Clone)]
pub struct PmMaker {
    variant: PmVariant,
    game: GameKind,
    n: usize,
    params: PmParams,
    mode: PmMode,
    partner: Vec<u32>,
    matched: u32,
    unmatched: VertexPool,
    unmatched_mask: VertexBits,
    /// Current matching as a pair list, with per-vertex positions for O(1)
    /// removal.
    pairs: Vec<(u32, u32)>,
    pair_pos: Vec<u32>,
    steps_done: u64,
    /// Large-bias: helper draws within the current step.
    step_draws: u64,
    /// Small-bias: cumulative repair edge choices.
    repair_choices: u64,
}

impl PmMaker {
    pub fn new(cfg: &GameConfig, variant: PmVariant) -> Result<Self> {
        if !cfg.n.is_multiple_of(2) {
            return Err(GameError::InvalidConfig(
                "matching strategy requires an even number of vertices".into(),
            ));
        }
        Ok(PmMaker {
            variant,
            game: cfg.game,
            n: cfg.n,
            params: PmParams::new(cfg.n, cfg.a),
            mode: PmMode::Stage1Ready,
            partner: vec![NO_PARTNER; cfg.n],
            matched: 0,
            unmatched: VertexPool::full(cfg.n),
            unmatched_mask: VertexBits::filled(cfg.n),
            pairs: Vec::new(),
            pair_pos: vec![u32::MAX; cfg.n],
            steps_done: 0,
            step_draws: 0,
            repair_choices: 0,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.matched as usize == self.n
    }

    fn is_matched(&self, v: u32) -> bool {
        self.partner[v as usize] != NO_PARTNER
    }

    fn match_pair(&mut self, u: u32, v: u32) {
        debug_assert!(!self.is_matched(u) && !self.is_matched(v));
        self.partner[u as usize] = v;
        self.partner[v as usize] = u;
        self.matched += 2;
        let idx = self.pairs.len() as u32;
        self.pairs.push((u, v));
        self.pair_pos[u as usize] = idx;
        self.pair_pos[v as usize] = idx;
        for w in [u, v] {
            if self.unmatched.contains(w) {
                self.unmatched.remove(w);
                self.unmatched_mask.clear(w as usize);
            }
        }
    }

    /// Dissolves the pair containing `v` without unmatching the vertices
    /// (used mid-rematch, where both get new partners immediately).
    fn drop_pair_of(&mut self, v: u32) {
        let idx = self.pair_pos[v as usize] as usize;
        let (p, q) = self.pairs[idx];
        let last = self.pairs.len() - 1;
        self.pairs.swap_remove(idx);
        if idx <= last && idx < self.pairs.len() {
            let (mp, mq) = self.pairs[idx];
            self.pair_pos[mp as usize] = idx as u32;
            self.pair_pos[mq as usize] = idx as u32;
        }
        for w in [p, q] {
            self.pair_pos[w as usize] = u32::MAX;
            self.partner[w as usize] = NO_PARTNER;
        }
        self.matched -= 2;
    }

    /// Rebinds `y` (previously matched to `yp`) to `x`, and `yp` to `z`.
    fn rematch(&mut self, y: u32, x: u32, yp: u32, z: u32) {
        self.drop_pair_of(y);
        self.match_pair(y, x);
        self.match_pair(yp, z);
    }

    fn advance_repair(&mut self, xs: [u32; 2], idx: u8) {
        if idx == 0 {
            self.mode = PmMode::RepairDraw { xs, idx: 1 };
        } else {
            self.steps_done += 1;
            self.mode = PmMode::Stage1Ready;
        }
    }

    fn small_budget_exhausted(&self) -> bool {
        self.variant == PmVariant::SmallB && self.repair_choices >= self.params.small_repair_budget
    }

    fn complete_join(&mut self, s2: &Stage2, j0: u32, j1: u32) {
        let (s1, t1) = s2.succ[0][j0 as usize];
        let (s2v, t2) = s2.succ[1][j1 as usize];
        let [x1, x2] = s2.xs;
        self.drop_pair_of(s1);
        self.drop_pair_of(s2v);
        self.match_pair(x1, s1);
        self.match_pair(t1, t2);
        self.match_pair(s2v, x2);
        self.mode = PmMode::Stage2Ready;
    }
}

impl MakerStrategy for PmMaker {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        if self.variant == PmVariant::LargeB && view.round as u64 > self.params.global_round_cap {
            return Ok(MakerAction::Forfeit);
        }
        loop {
            match std::mem::replace(&mut self.mode, PmMode::Stage1Ready) {
                PmMode::Stage1Ready => {
                    if self.is_complete() {
                        return if self.game == GameKind::PerfectMatching {
                            Ok(MakerAction::DeclareWin)
                        } else {
                            Ok(MakerAction::Forfeit)
                        };
                    }
                    if self.steps_done >= self.params.stage1_steps {
                        self.mode = PmMode::Stage2Ready;
                        continue;
                    }
                    let (x1, x2) = self.unmatched.draw_pair(rng)?;
                    let e = EdgeId::new(x1, x2);
                    debug_assert!(!view.owns(e));
                    if view.revealed(e) {
                        // known failure: straight to the repair chain
                        self.step_draws = 0;
                        self.mode = PmMode::RepairDraw { xs: [x1, x2], idx: 0 };
                        continue;
                    }
                    self.mode = PmMode::Stage1Pair { xs: [x1, x2] };
                    return Ok(MakerAction::Attempt(e));
                }
                PmMode::Stage1Pair { xs } => {
                    self.mode = PmMode::Stage1Pair { xs };
                    return Err(GameError::Internal("pair outcome pending".into()));
                }
                PmMode::RepairDraw { xs, idx } => {
                    let x = xs[idx as usize];
                    if self.is_matched(x) {
                        self.advance_repair(xs, idx);
                        continue;
                    }
                    if self.variant == PmVariant::LargeB
                        && self.step_draws >= self.params.step_draw_budget
                    {
                        return Ok(MakerAction::Forfeit);
                    }
                    if self.small_budget_exhausted() {
                        return Ok(MakerAction::Forfeit);
                    }
                    let cnt = view.unknown_deg(x as usize) as usize;
                    if cnt == 0 {
                        return Ok(MakerAction::Forfeit); // dead vertex
                    }
                    let i = rng.uniform_index(cnt)?;
                    let e = view.select_unknown_incident(x as usize, i);
                    let y = if e.u == x { e.v } else { e.u };
                    self.step_draws += 1;
                    self.repair_choices += 1;
                    self.mode = PmMode::RepairPend { xs, idx, y };
                    return Ok(MakerAction::Attempt(e));
                }
                PmMode::RepairPend { xs, idx, y } => {
                    self.mode = PmMode::RepairPend { xs, idx, y };
                    return Err(GameError::Internal("repair outcome pending".into()));
                }
                PmMode::RematchDraw { xs, idx, y, yp } => {
                    if self.small_budget_exhausted() {
                        return Ok(MakerAction::Forfeit);
                    }
                    let x = xs[idx as usize];
                    // fresh vertex for the displaced partner: unmatched,
                    // edge to y' unknown, and not x itself
                    let words = self.unmatched_mask.words().len();
                    let yps = yp as usize;
                    let word_at = |wi: usize| {
                        let mut w = self.unmatched_mask.words()[wi] & view.unknown_word(yps, wi);
                        if wi == (x as usize) / 64 {
                            w &= !(1u64 << (x as usize % 64));
                        }
                        w
                    };
                    let cnt: usize = (0..words).map(|wi| word_at(wi).count_ones() as usize).sum();
                    if cnt == 0 {
                        // no usable fresh vertex: treat as a failed rematch
                        // and draw a new helper
                        self.mode = PmMode::RepairDraw { xs, idx };
                        continue;
                    }
                    let i = rng.uniform_index(cnt)?;
                    let z = crate::bits::select_ith(words, i, word_at) as u32;
                    self.repair_choices += 1;
                    self.mode = PmMode::RematchPend { xs, idx, y, yp, z };
                    return Ok(MakerAction::Attempt(EdgeId::new(yp, z)));
                }
                PmMode::RematchPend { xs, idx, y, yp, z } => {
                    self.mode = PmMode::RematchPend { xs, idx, y, yp, z };
                    return Err(GameError::Internal("rematch outcome pending".into()));
                }
                PmMode::Stage2Ready => {
                    if self.is_complete() {
                        return if self.game == GameKind::PerfectMatching {
                            Ok(MakerAction::DeclareWin)
                        } else {
                            Ok(MakerAction::Forfeit)
                        };
                    }
                    let (x1, x2) = self.unmatched.draw_pair(rng)?;
                    let s2 = Stage2 {
                        xs: [x1, x2],
                        remaining: (0..self.pairs.len() as u32).collect(),
                        draws_made: 0,
                        succ: [Vec::new(), Vec::new()],
                        pend: None,
                        join_left: self.params.stage2_join_budget,
                        pend_join: None,
                    };
                    self.mode = PmMode::Stage2Stars(Box::new(s2));
                }
                PmMode::Stage2Stars(mut s2) => {
                    if s2.pend.is_some() {
                        self.mode = PmMode::Stage2Stars(s2);
                        return Err(GameError::Internal("attachment outcome pending".into()));
                    }
                    let budget = 2 * self.params.stage2_pairs_per_side;
                    if s2.draws_made >= budget || s2.remaining.is_empty() {
                        if s2.succ[0].is_empty() || s2.succ[1].is_empty() {
                            return Ok(MakerAction::Forfeit);
                        }
                        self.mode = PmMode::Stage2Join(s2);
                        continue;
                    }
                    let side = (s2.draws_made % 2) as u8;
                    let x = s2.xs[side as usize];
                    // one slot draw picks a remaining pair and its
                    // orientation (which endpoint attaches to x)
                    let slot = rng.uniform_index(2 * s2.remaining.len())?;
                    let ri = slot / 2;
                    let pair_idx = s2.remaining.swap_remove(ri) as usize;
                    let (p, q) = self.pairs[pair_idx];
                    let (s, t) = if slot % 2 == 0 { (p, q) } else { (q, p) };
                    s2.draws_made += 1;
                    let e = EdgeId::new(x, s);
                    if view.owns(e) {
                        // already hers from an earlier repair; counts as a
                        // successful attachment without spending a move
                        s2.succ[side as usize].push((s, t));
                        self.mode = PmMode::Stage2Stars(s2);
                        continue;
                    }
                    if view.revealed(e) {
                        self.mode = PmMode::Stage2Stars(s2);
                        continue;
                    }
                    s2.pend = Some((side, s, t));
                    self.mode = PmMode::Stage2Stars(s2);
                    return Ok(MakerAction::Attempt(e));
                }
                PmMode::Stage2Join(mut s2) => {
                    if s2.pend_join.is_some() {
                        self.mode = PmMode::Stage2Join(s2);
                        return Err(GameError::Internal("join outcome pending".into()));
                    }
                    if s2.join_left == 0 {
                        return Ok(MakerAction::Forfeit);
                    }
                    s2.join_left -= 1;
                    let slot = rng.uniform_index(s2.succ[0].len() * s2.succ[1].len())?;
                    let j0 = (slot / s2.succ[1].len()) as u32;
                    let j1 = (slot % s2.succ[1].len()) as u32;
                    let t1 = s2.succ[0][j0 as usize].1;
                    let t2 = s2.succ[1][j1 as usize].1;
                    let e = EdgeId::new(t1, t2);
                    if view.owns(e) {
                        self.complete_join(&s2, j0, j1);
                        continue;
                    }
                    if view.revealed(e) {
                        self.mode = PmMode::Stage2Join(s2);
                        continue;
                    }
                    s2.pend_join = Some((j0, j1));
                    self.mode = PmMode::Stage2Join(s2);
                    return Ok(MakerAction::Attempt(e));
                }
            }
        }
    }

    fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, _view: &MakerView) {
        match std::mem::replace(&mut self.mode, PmMode::Stage1Ready) {
            PmMode::Stage1Pair { xs } => {
                debug_assert_eq!(EdgeId::new(xs[0], xs[1]), edge);
                match outcome {
                    MoveOutcome::Claimed => {
                        self.match_pair(xs[0], xs[1]);
                        self.steps_done += 1;
                        self.mode = PmMode::Stage1Ready;
                    }
                    MoveOutcome::Failure => {
                        self.step_draws = 0;
                        self.mode = PmMode::RepairDraw { xs, idx: 0 };
                    }
                }
            }
            PmMode::RepairPend { xs, idx, y } => match outcome {
                MoveOutcome::Failure => self.mode = PmMode::RepairDraw { xs, idx },
                MoveOutcome::Claimed => {
                    let x = xs[idx as usize];
                    if !self.is_matched(y) {
                        self.match_pair(x, y);
                        self.advance_repair(xs, idx);
                    } else {
                        let yp = self.partner[y as usize];
                        self.mode = PmMode::RematchDraw { xs, idx, y, yp };
                    }
                }
            },
            PmMode::RematchPend { xs, idx, y, yp, z } => match outcome {
                MoveOutcome::Claimed => {
                    let x = xs[idx as usize];
                    self.rematch(y, x, yp, z);
                    self.advance_repair(xs, idx);
                }
                MoveOutcome::Failure => self.mode = PmMode::RepairDraw { xs, idx },
            },
            PmMode::Stage2Stars(mut s2) => {
                let (side, s, t) = s2.pend.take().expect("attachment outcome without attempt");
                debug_assert!(edge.touches(s));
                if outcome == MoveOutcome::Claimed {
                    s2.succ[side as usize].push((s, t));
                }
                self.mode = PmMode::Stage2Stars(s2);
            }
            PmMode::Stage2Join(mut s2) => {
                let (j0, j1) = s2.pend_join.take().expect("join outcome without attempt");
                if outcome == MoveOutcome::Claimed {
                    self.complete_join(&s2, j0, j1);
                } else {
                    self.mode = PmMode::Stage2Join(s2);
                }
            }
            other => {
                self.mode = other;
                debug_assert!(false, "outcome delivered in a non-pending mode");
            }
        }
    }

    fn certificate(&self) -> Option<WinCertificate> {
        self.is_complete()
            .then(|| WinCertificate::PerfectMatching(self.partner.clone()))
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.steps_done.to_le_bytes());
        out.extend_from_slice(&self.step_draws.to_le_bytes());
        out.extend_from_slice(&self.repair_choices.to_le_bytes());
        for &p in &self.partner {
            out.extend_from_slice(&p.to_le_bytes());
        }
        self.unmatched.encode(out);
        for &(p, q) in &self.pairs {
            out.extend_from_slice(&p.to_le_bytes());
            out.extend_from_slice(&q.to_le_bytes());
        }
        out.push(0xab);
        encode_mode(&self.mode, out);
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        match self.variant {
            PmVariant::LargeB => "pm-large",
            PmVariant::SmallB => "pm-small",
        }
    }
}

fn encode_mode(mode: &PmMode, out: &mut Vec<u8>) {
    match mode {
        PmMode::Stage1Ready => out.push(0),
        PmMode::Stage1Pair { xs } => {
            out.push(1);
            out.extend_from_slice(&xs[0].to_le_bytes());
            out.extend_from_slice(&xs[1].to_le_bytes());
        }
        PmMode::RepairDraw { xs, idx } => {
            out.push(2);
            out.extend_from_slice(&xs[0].to_le_bytes());
            out.extend_from_slice(&xs[1].to_le_bytes());
            out.push(*idx);
        }
        PmMode::RepairPend { xs, idx, y } => {
            out.push(3);
            out.extend_from_slice(&xs[0].to_le_bytes());
            out.extend_from_slice(&xs[1].to_le_bytes());
            out.push(*idx);
            out.extend_from_slice(&y.to_le_bytes());
        }
        PmMode::RematchDraw { xs, idx, y, yp } => {
            out.push(8);
            out.extend_from_slice(&xs[0].to_le_bytes());
            out.extend_from_slice(&xs[1].to_le_bytes());
            out.push(*idx);
            for v in [y, yp] {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        PmMode::RematchPend { xs, idx, y, yp, z } => {
            out.push(4);
            out.extend_from_slice(&xs[0].to_le_bytes());
            out.extend_from_slice(&xs[1].to_le_bytes());
            out.push(*idx);
            for v in [y, yp, z] {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        PmMode::Stage2Ready => out.push(5),
        PmMode::Stage2Stars(s2) | PmMode::Stage2Join(s2) => {
            out.push(if matches!(mode, PmMode::Stage2Stars(_)) { 6 } else { 7 });
            out.extend_from_slice(&s2.xs[0].to_le_bytes());
            out.extend_from_slice(&s2.xs[1].to_le_bytes());
            out.extend_from_slice(&s2.draws_made.to_le_bytes());
            out.extend_from_slice(&s2.join_left.to_le_bytes());
            out.extend_from_slice(&(s2.remaining.len() as u32).to_le_bytes());
            for &r in &s2.remaining {
                out.extend_from_slice(&r.to_le_bytes());
            }
            for side in 0..2 {
                out.extend_from_slice(&(s2.succ[side].len() as u32).to_le_bytes());
                for &(s, t) in &s2.succ[side] {
                    out.extend_from_slice(&s.to_le_bytes());
                    out.extend_from_slice(&t.to_le_bytes());
                }
            }
            if let Some((side, s, t)) = s2.pend {
                out.push(1);
                out.push(side);
                out.extend_from_slice(&s.to_le_bytes());
                out.extend_from_slice(&t.to_le_bytes());
            } else {
                out.push(0);
            }
            if let Some((a, b)) = s2.pend_join {
                out.push(1);
                out.extend_from_slice(&a.to_le_bytes());
                out.extend_from_slice(&b.to_le_bytes());
            } else {
                out.push(0);
            }
        }
    }
}
