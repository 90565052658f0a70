//! Maker strategies for the connectivity game.
//!
//! `ConnLarge` grows a spanning forest edge by edge: pick a vertex not
//! yet picked this stage, then try random unknown edges leaving its
//! component until one lands. n−1 successful sequences build a spanning
//! tree and the claimed edges never close a cycle. `ConnSmall` first
//! builds a perfect matching, then merges the resulting components —
//! pairwise while many two-vertex components remain, then one component
//! at a time until the graph is connected.

use crate::bits::VertexBits;
use crate::board::{EdgeId, MakerView, MoveOutcome};
use crate::config::GameConfig;
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::strategies::maker_pm::{PmMaker, PmVariant};
use crate::strategies::params::{ConnLargeParams, ConnSmallParams};
use crate::strategies::sampling::{self, VertexPool};
use crate::strategies::{MakerAction, MakerStrategy};
use crate::win_check::ComponentIndex;

/// Mirror of the components of Maker's graph, with member lists and the
/// root/size bookkeeping the merge strategies draw from.
#[derive(Clone)]
struct CompTracker {
    ci: ComponentIndex,
    members: Vec<Vec<u32>>,
    roots: VertexPool,
    /// Roots of components of size exactly two.
    pairs: VertexPool,
}

impl CompTracker {
    fn new(n: usize) -> Self {
        CompTracker {
            ci: ComponentIndex::new(n),
            members: (0..n as u32).map(|v| vec![v]).collect(),
            roots: VertexPool::full(n),
            pairs: VertexPool::empty(n),
        }
    }

    fn union(&mut self, u: usize, v: usize) {
        let Some((kept, absorbed)) = self.ci.union_roots(u, v) else {
            return;
        };
        let moved = std::mem::take(&mut self.members[absorbed]);
        self.members[kept].extend(moved);
        self.roots.remove(absorbed as u32);
        self.pairs.remove(absorbed as u32);
        if self.ci.size_of(kept) == 2 {
            self.pairs.insert(kept as u32);
        } else {
            self.pairs.remove(kept as u32);
        }
    }

    fn fill_mask(&mut self, v: u32, mask: &mut VertexBits) {
        mask.clear_all();
        let r = self.ci.find(v as usize);
        for &m in &self.members[r] {
            mask.set(m as usize);
        }
    }

    fn components(&self) -> usize {
        self.ci.components()
    }
}

#[derive(Clone)]
pub struct ConnLarge {
    n: usize,
    params: ConnLargeParams,
    tracker: CompTracker,
    stage_pool: VertexPool,
    seq_done: u64,
    /// Current sequence: chosen vertex and remaining edge choices.
    current: Option<(u32, u64)>,
    mask: VertexBits,
}

impl ConnLarge {
    pub fn new(cfg: &GameConfig) -> Self {
        ConnLarge {
            n: cfg.n,
            params: ConnLargeParams::new(cfg.n, cfg.a, cfg.b),
            tracker: CompTracker::new(cfg.n),
            stage_pool: VertexPool::full(cfg.n),
            seq_done: 0,
            current: None,
            mask: VertexBits::new(cfg.n),
        }
    }
}

impl MakerStrategy for ConnLarge {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        if view.round as u64 > self.params.global_round_cap {
            return Ok(MakerAction::Forfeit);
        }
        let (v, left) = match self.current {
            Some(cur) => cur,
            None => {
                if self.seq_done >= self.n as u64 - 1 {
                    // spanning tree finished; nothing further prescribed
                    return Ok(MakerAction::Forfeit);
                }
                if self.seq_done.is_multiple_of(self.params.stage_len) {
                    self.stage_pool = VertexPool::full(self.n);
                }
                let v = self.stage_pool.draw(rng)?;
                self.stage_pool.remove(v);
                let cur = (v, self.params.seq_edge_budget);
                self.current = Some(cur);
                cur
            }
        };
        if left == 0 {
            return Ok(MakerAction::Forfeit);
        }
        self.tracker.fill_mask(v, &mut self.mask);
        match sampling::sample_cross_edge(view, &self.mask, rng)? {
            Some(e) => {
                self.current = Some((v, left - 1));
                Ok(MakerAction::Attempt(e))
            }
            None => Ok(MakerAction::Forfeit),
        }
    }

    fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, _view: &MakerView) {
        if outcome == MoveOutcome::Claimed {
            debug_assert!(!self.tracker.ci.same(edge.u as usize, edge.v as usize));
            self.tracker.union(edge.u as usize, edge.v as usize);
            self.seq_done += 1;
            self.current = None;
        }
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.seq_done.to_le_bytes());
        self.stage_pool.encode(out);
        match self.current {
            Some((v, left)) => {
                out.push(1);
                out.extend_from_slice(&v.to_le_bytes());
                out.extend_from_slice(&left.to_le_bytes());
            }
            None => out.push(0),
        }
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "conn-large"
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum SmallStage {
    Matching,
    Merge,
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum MergeMode {
    Check,
    /// Cross edge between two pair components attempted.
    PairPend { c1: u32, c2: u32 },
    /// Cross edge out of one pair component attempted.
    SinglePend { c: u32 },
    /// Claiming one leaving edge for each listed component, first success
    /// each.
    Repair { reps: Vec<u32>, qi: usize, pending: bool },
}

#[derive(Clone)]
pub struct ConnSmall {
    params: ConnSmallParams,
    inner: PmMaker,
    tracker: CompTracker,
    stage: SmallStage,
    merge: MergeMode,
    /// Sweep-stage component being joined, if an attempt is in flight or
    /// retrying.
    sweep_current: Option<u32>,
    merge_start_round: Option<u32>,
    sweep_start_round: Option<u32>,
    mask: VertexBits,
}

impl ConnSmall {
    pub fn new(cfg: &GameConfig) -> Result<Self> {
        Ok(ConnSmall {
            params: ConnSmallParams::new(cfg.n, cfg.a),
            inner: PmMaker::new(cfg, PmVariant::SmallB)?,
            tracker: CompTracker::new(cfg.n),
            stage: SmallStage::Matching,
            merge: MergeMode::Check,
            sweep_current: None,
            merge_start_round: None,
            sweep_start_round: None,
            mask: VertexBits::new(cfg.n),
        })
    }

    fn stage_elapsed(start: Option<u32>, round: u32) -> u64 {
        match start {
            Some(s) => (round - s) as u64 + 1,
            None => 1,
        }
    }

    /// Unknown cross edges of the two-vertex components c1, c2, in
    /// canonical order.
    fn pair_candidates(&mut self, view: &MakerView, c1: u32, c2: u32) -> Vec<EdgeId> {
        let r1 = self.tracker.ci.find(c1 as usize);
        let r2 = self.tracker.ci.find(c2 as usize);
        let mut out = Vec::with_capacity(4);
        let mut m1: Vec<u32> = self.tracker.members[r1].clone();
        let mut m2: Vec<u32> = self.tracker.members[r2].clone();
        m1.sort_unstable();
        m2.sort_unstable();
        for &p in &m1 {
            for &q in &m2 {
                let e = EdgeId::new(p, q);
                if !view.known_unavailable(e) {
                    out.push(e);
                }
            }
        }
        out
    }
}

impl MakerStrategy for ConnSmall {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        loop {
            match self.stage {
                SmallStage::Matching => {
                    if self.inner.is_complete() {
                        self.stage = SmallStage::Merge;
                        self.merge_start_round = Some(view.round);
                        continue;
                    }
                    if view.round as u64 > self.params.stage1_round_cap {
                        return Ok(MakerAction::Forfeit);
                    }
                    return self.inner.next_action(view, rng);
                }
                SmallStage::Merge => {
                    if Self::stage_elapsed(self.merge_start_round, view.round)
                        > self.params.stage_round_cap
                    {
                        return Ok(MakerAction::Forfeit);
                    }
                    match std::mem::replace(&mut self.merge, MergeMode::Check) {
                        MergeMode::Check => {
                            let pair_count = self.tracker.pairs.len() as u64;
                            if pair_count == 0 {
                                self.stage = SmallStage::Sweep;
                                self.sweep_start_round = Some(view.round);
                                continue;
                            }
                            if pair_count >= self.params.few_pairs_threshold && pair_count >= 2 {
                                let (c1, c2) = self.tracker.pairs.draw_pair(rng)?;
                                let cands = self.pair_candidates(view, c1, c2);
                                if cands.is_empty() {
                                    // all four edges known unavailable
                                    self.merge = MergeMode::Repair {
                                        reps: vec![c1, c2],
                                        qi: 0,
                                        pending: false,
                                    };
                                    continue;
                                }
                                let f = sampling::draw_from(rng, &cands)?;
                                self.merge = MergeMode::PairPend { c1, c2 };
                                return Ok(MakerAction::Attempt(f));
                            }
                            let c = self.tracker.pairs.draw(rng)?;
                            self.tracker.fill_mask(c, &mut self.mask);
                            match sampling::sample_cross_edge(view, &self.mask, rng)? {
                                Some(f) => {
                                    self.merge = MergeMode::SinglePend { c };
                                    return Ok(MakerAction::Attempt(f));
                                }
                                None => return Ok(MakerAction::Forfeit),
                            }
                        }
                        m @ (MergeMode::PairPend { .. } | MergeMode::SinglePend { .. }) => {
                            self.merge = m;
                            return Err(GameError::Internal("merge outcome pending".into()));
                        }
                        MergeMode::Repair { reps, qi, pending } => {
                            if pending {
                                self.merge = MergeMode::Repair { reps, qi, pending };
                                return Err(GameError::Internal("repair outcome pending".into()));
                            }
                            if qi >= reps.len() {
                                self.merge = MergeMode::Check;
                                continue;
                            }
                            let c = reps[qi];
                            self.tracker.fill_mask(c, &mut self.mask);
                            match sampling::sample_cross_edge(view, &self.mask, rng)? {
                                Some(f) => {
                                    self.merge = MergeMode::Repair { reps, qi, pending: true };
                                    return Ok(MakerAction::Attempt(f));
                                }
                                None => return Ok(MakerAction::Forfeit),
                            }
                        }
                    }
                }
                SmallStage::Sweep => {
                    if self.tracker.components() == 1 {
                        return Ok(MakerAction::Forfeit); // spanning graph done
                    }
                    if Self::stage_elapsed(self.sweep_start_round, view.round)
                        > self.params.stage_round_cap
                    {
                        return Ok(MakerAction::Forfeit);
                    }
                    let c = match self.sweep_current {
                        Some(c) => c,
                        None => {
                            let c = self.tracker.roots.draw(rng)?;
                            self.sweep_current = Some(c);
                            c
                        }
                    };
                    self.tracker.fill_mask(c, &mut self.mask);
                    match sampling::sample_cross_edge(view, &self.mask, rng)? {
                        Some(f) => return Ok(MakerAction::Attempt(f)),
                        None => return Ok(MakerAction::Forfeit),
                    }
                }
            }
        }
    }

    fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, view: &MakerView) {
        if outcome == MoveOutcome::Claimed {
            self.tracker.union(edge.u as usize, edge.v as usize);
        }
        match self.stage {
            SmallStage::Matching => self.inner.observe(edge, outcome, view),
            SmallStage::Merge => match std::mem::replace(&mut self.merge, MergeMode::Check) {
                MergeMode::PairPend { c1, c2 } => {
                    self.merge = if outcome == MoveOutcome::Claimed {
                        MergeMode::Check
                    } else {
                        MergeMode::Repair { reps: vec![c1, c2], qi: 0, pending: false }
                    };
                }
                MergeMode::SinglePend { c } => {
                    self.merge = if outcome == MoveOutcome::Claimed {
                        MergeMode::Check
                    } else {
                        MergeMode::Repair { reps: vec![c], qi: 0, pending: false }
                    };
                }
                MergeMode::Repair { reps, qi, pending } => {
                    debug_assert!(pending);
                    let next_qi = if outcome == MoveOutcome::Claimed { qi + 1 } else { qi };
                    self.merge = MergeMode::Repair { reps, qi: next_qi, pending: false };
                }
                MergeMode::Check => {
                    debug_assert!(false, "merge outcome without a pending attempt");
                }
            },
            SmallStage::Sweep => {
                if outcome == MoveOutcome::Claimed {
                    self.sweep_current = None;
                }
            }
        }
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        out.push(match self.stage {
            SmallStage::Matching => 0,
            SmallStage::Merge => 1,
            SmallStage::Sweep => 2,
        });
        self.inner.encode_state(out);
        match &self.merge {
            MergeMode::Check => out.push(0),
            MergeMode::PairPend { c1, c2 } => {
                out.push(1);
                out.extend_from_slice(&c1.to_le_bytes());
                out.extend_from_slice(&c2.to_le_bytes());
            }
            MergeMode::SinglePend { c } => {
                out.push(2);
                out.extend_from_slice(&c.to_le_bytes());
            }
            MergeMode::Repair { reps, qi, pending } => {
                out.push(3);
                out.push(reps.len() as u8);
                for r in reps {
                    out.extend_from_slice(&r.to_le_bytes());
                }
                out.push(*qi as u8);
                out.push(*pending as u8);
            }
        }
        out.extend_from_slice(&self.sweep_current.map_or(u32::MAX, |c| c).to_le_bytes());
        out.extend_from_slice(&self.merge_start_round.unwrap_or(0).to_le_bytes());
        out.extend_from_slice(&self.sweep_start_round.unwrap_or(0).to_le_bytes());
        // component structure and the two root pools are derivable from
        // the board, but the pools' draw order is not; encode them
        self.tracker.roots.encode(out);
        self.tracker.pairs.encode(out);
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "conn-small"
    }
}
