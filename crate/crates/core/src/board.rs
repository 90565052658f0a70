//! Board representation and the one-sided information view.
//!
//! The edge set of `K_n` is partitioned into Maker's edges, Breaker's
//! edges and free edges. Maker only ever observes her own edges plus the
//! Breaker edges she has revealed through failed attempts; [`MakerView`]
//! carries exactly that and nothing else.

use crate::bits::{self, EdgeBits, Fenwick};
use crate::config::{GameConfig, GameKind};
use crate::error::{GameError, Result};
use crate::win_check::ComponentIndex;
use serde::{Deserialize, Serialize};

/// Canonical undirected edge: `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    pub u: u32,
    pub v: u32,
}

impl EdgeId {
    pub fn new(a: u32, b: u32) -> Self {
        debug_assert!(a != b);
        if a < b {
            EdgeId { u: a, v: b }
        } else {
            EdgeId { u: b, v: a }
        }
    }

    pub fn touches(&self, w: u32) -> bool {
        self.u == w || self.v == w
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Owner {
    Maker,
    Breaker,
    Free,
}

/// Result of one Maker attempt: `Claimed` iff the edge was free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveOutcome {
    Claimed,
    Failure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Actor {
    Maker,
    Breaker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub actor: Actor,
    pub edge: EdgeId,
    pub outcome: MoveOutcome,
}

/// Full game position plus the bookkeeping the referee and the win
/// checkers need. Owned by a single game; never shared mutably.
#[derive(Clone)]
pub struct BoardState {
    n: usize,
    game: GameKind,
    k: u32,
    a: u32,
    b: u32,

    maker: EdgeBits,
    breaker: EdgeBits,
    /// Breaker edges revealed to Maker through her failed attempts.
    revealed: EdgeBits,

    maker_deg: Vec<u32>,
    breaker_deg: Vec<u32>,
    revealed_deg: Vec<u32>,

    maker_edges: u64,
    breaker_edges: u64,
    total_edges: u64,

    /// Per-vertex free degree, kept as a Fenwick tree so a uniform free
    /// edge can be drawn with one index draw.
    free_fenwick: Fenwick,

    pub round: u32,
    pub maker_attempts_this_round: u32,
    pub maker_failures: u64,

    /// Count of vertices with Maker degree below the game's k (mindegree
    /// win condition, maintained incrementally).
    below_k: u32,
    /// Set once some vertex can no longer reach the blocked-degree target.
    dead_position: bool,

    /// Connected components of Maker's graph.
    pub components: ComponentIndex,

    maker_edge_list: Vec<EdgeId>,
    transcript: Option<Vec<TranscriptEntry>>,
}

impl BoardState {
    pub fn new(config: &GameConfig) -> Result<Self> {
        config.validate()?;
        let n = config.n;
        let mut free_fenwick = Fenwick::new(n);
        for v in 0..n {
            free_fenwick.add(v, (n - 1) as i64);
        }
        Ok(BoardState {
            n,
            game: config.game,
            k: config.k,
            a: config.a,
            b: config.b,
            maker: EdgeBits::new(n),
            breaker: EdgeBits::new(n),
            revealed: EdgeBits::new(n),
            maker_deg: vec![0; n],
            breaker_deg: vec![0; n],
            revealed_deg: vec![0; n],
            maker_edges: 0,
            breaker_edges: 0,
            total_edges: config.edge_count(),
            free_fenwick,
            round: 1,
            maker_attempts_this_round: 0,
            maker_failures: 0,
            below_k: n as u32,
            dead_position: false,
            components: ComponentIndex::new(n),
            maker_edge_list: Vec::new(),
            transcript: if config.record_transcript {
                Some(Vec::new())
            } else {
                None
            },
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn owner(&self, e: EdgeId) -> Owner {
        let (u, v) = (e.u as usize, e.v as usize);
        if self.maker.has(u, v) {
            Owner::Maker
        } else if self.breaker.has(u, v) {
            Owner::Breaker
        } else {
            Owner::Free
        }
    }

    #[inline]
    pub fn is_free(&self, e: EdgeId) -> bool {
        let (u, v) = (e.u as usize, e.v as usize);
        !self.maker.has(u, v) && !self.breaker.has(u, v)
    }

    #[inline]
    pub fn maker_deg(&self, v: usize) -> u32 {
        self.maker_deg[v]
    }

    #[inline]
    pub fn breaker_deg(&self, v: usize) -> u32 {
        self.breaker_deg[v]
    }

    /// d_F(v): free degree, O(1).
    #[inline]
    pub fn free_deg(&self, v: usize) -> u32 {
        (self.n as u32 - 1) - self.maker_deg[v] - self.breaker_deg[v]
    }

    #[inline]
    pub fn free_edges(&self) -> u64 {
        self.total_edges - self.maker_edges - self.breaker_edges
    }

    #[inline]
    pub fn maker_edges(&self) -> u64 {
        self.maker_edges
    }

    #[inline]
    pub fn breaker_edges(&self) -> u64 {
        self.breaker_edges
    }

    pub fn maker_bits(&self) -> &EdgeBits {
        &self.maker
    }

    pub fn breaker_bits(&self) -> &EdgeBits {
        &self.breaker
    }

    pub fn revealed_bits(&self) -> &EdgeBits {
        &self.revealed
    }

    pub fn maker_edge_list(&self) -> &[EdgeId] {
        &self.maker_edge_list
    }

    pub fn transcript(&self) -> Option<&[TranscriptEntry]> {
        self.transcript.as_deref()
    }

    pub fn take_transcript(&mut self) -> Option<Vec<TranscriptEntry>> {
        self.transcript.take()
    }

    /// True once some vertex provably cannot reach the game's blocked
    /// degree target in Maker's graph.
    pub fn dead_position(&self) -> bool {
        self.dead_position
    }

    /// Vertices with Maker degree below k (mindegree win = 0).
    pub fn below_k(&self) -> u32 {
        self.below_k
    }

    /// True iff some vertex can never reach Maker degree `k`.
    pub fn blocked_mindegree(&self, k: u32) -> bool {
        (0..self.n).any(|v| self.maker_deg[v] + self.free_deg(v) < k)
    }

    fn record(&mut self, actor: Actor, edge: EdgeId, outcome: MoveOutcome) {
        if let Some(t) = self.transcript.as_mut() {
            t.push(TranscriptEntry { actor, edge, outcome });
        }
    }

    fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.u >= e.v || (e.v as usize) >= self.n {
            return Err(GameError::ContractViolation(format!(
                "edge ({}, {}) is not a canonical edge of K_{}",
                e.u, e.v, self.n
            )));
        }
        Ok(())
    }

    /// One Maker attempt. Claims the edge if free; otherwise reveals it as
    /// Breaker's. Both outcomes consume one of her moves this round.
    pub fn attempt_claim_maker(&mut self, e: EdgeId) -> Result<MoveOutcome> {
        self.check_edge(e)?;
        let (u, v) = (e.u as usize, e.v as usize);
        if self.maker.has(u, v) {
            return Err(GameError::ContractViolation(format!(
                "maker submitted her own edge {e}"
            )));
        }
        if self.maker_attempts_this_round >= self.a {
            return Err(GameError::ContractViolation(format!(
                "maker attempt budget of {} exhausted this round",
                self.a
            )));
        }
        self.maker_attempts_this_round += 1;
        let outcome = if self.breaker.has(u, v) {
            if !self.revealed.has(u, v) {
                self.revealed.set(u, v);
                self.revealed_deg[u] += 1;
                self.revealed_deg[v] += 1;
            }
            self.maker_failures += 1;
            MoveOutcome::Failure
        } else {
            self.maker.set(u, v);
            self.maker_edges += 1;
            self.maker_edge_list.push(e);
            for w in [u, v] {
                self.maker_deg[w] += 1;
                if self.maker_deg[w] == self.k {
                    self.below_k -= 1;
                }
            }
            self.free_fenwick.add(u, -1);
            self.free_fenwick.add(v, -1);
            self.components.union(u, v);
            MoveOutcome::Claimed
        };
        self.record(Actor::Maker, e, outcome);
        debug_assert!(self.maker_edges + self.breaker_edges + self.free_edges() == self.total_edges);
        Ok(outcome)
    }

    /// Resets the per-round attempt counter (the referee calls this as
    /// rounds advance; exposed for harnesses that drive the board
    /// directly).
    pub fn begin_round(&mut self) {
        self.round += 1;
        self.maker_attempts_this_round = 0;
    }

    #[inline]
    pub fn bias(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    /// One Breaker claim; the edge must be free (he has full information).
    pub fn claim_breaker(&mut self, e: EdgeId) -> Result<()> {
        self.check_edge(e)?;
        let (u, v) = (e.u as usize, e.v as usize);
        if self.maker.has(u, v) || self.breaker.has(u, v) {
            return Err(GameError::ContractViolation(format!(
                "breaker claimed non-free edge {e}"
            )));
        }
        self.breaker.set(u, v);
        self.breaker_edges += 1;
        self.free_fenwick.add(u, -1);
        self.free_fenwick.add(v, -1);
        for w in [u, v] {
            self.breaker_deg[w] += 1;
            let target = self.game.blocked_degree(self.k);
            if self.maker_deg[w] < target && self.maker_deg[w] + self.free_deg(w) < target {
                self.dead_position = true;
            }
        }
        self.record(Actor::Breaker, e, MoveOutcome::Claimed);
        debug_assert!(self.maker_edges + self.breaker_edges + self.free_edges() == self.total_edges);
        Ok(())
    }

    /// Draws a uniformly random free edge. Support must be non-empty.
    /// Exactly one index draw: a slot weighted by free degree picks the
    /// vertex, the residual picks the free neighbour, and each edge owns
    /// two slots.
    pub fn sample_free_edge(&self, rng: &mut dyn crate::rng::RandomSource) -> Result<EdgeId> {
        let total = self.free_fenwick.total();
        debug_assert_eq!(total, 2 * self.free_edges());
        let r = rng.uniform_index(total as usize)? as u64;
        let (v, residual) = self.free_fenwick.descend(r);
        let e = self.select_free_incident(v, residual as usize);
        Ok(e)
    }

    /// Draws a uniformly random free edge at `v`; `free_deg(v)` must be
    /// positive.
    pub fn sample_free_incident(
        &self,
        v: usize,
        rng: &mut dyn crate::rng::RandomSource,
    ) -> Result<EdgeId> {
        let cnt = self.free_deg(v) as usize;
        let i = rng.uniform_index(cnt)?;
        Ok(self.select_free_incident(v, i))
    }

    /// The i-th free neighbour of `v` in ascending vertex order.
    pub fn select_free_incident(&self, v: usize, i: usize) -> EdgeId {
        let mrow = self.maker.row(v);
        let brow = self.breaker.row(v);
        let self_word = v / 64;
        let self_bit = 1u64 << (v % 64);
        let w = bits::select_ith(mrow.len(), i, |wi| {
            let mut word = !(mrow[wi] | brow[wi]) & bits::full_mask(self.n, wi);
            if wi == self_word {
                word &= !self_bit;
            }
            word
        });
        EdgeId::new(v as u32, w as u32)
    }

    /// Smallest-index free neighbour of `v`, if any.
    pub fn first_free_incident(&self, v: usize) -> Option<EdgeId> {
        if self.free_deg(v) == 0 {
            None
        } else {
            Some(self.select_free_incident(v, 0))
        }
    }

    pub fn view<'a>(&'a self, a: u32, b: u32, budget_left: u32) -> MakerView<'a> {
        MakerView {
            n: self.n,
            a,
            b,
            k: self.k,
            round: self.round,
            budget_left,
            my: &self.maker,
            revealed: &self.revealed,
            my_deg: &self.maker_deg,
            revealed_deg: &self.revealed_deg,
            my_edge_count: self.maker_edges,
        }
    }

    /// Canonical byte encoding of everything strategy behaviour can
    /// depend on, used as part of the oracle's memo key.
    pub fn encode_key(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.round).to_le_bytes());
        out.push(self.maker_attempts_this_round as u8);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let code = if self.maker.has(u, v) {
                    1u8
                } else if self.breaker.has(u, v) {
                    if self.revealed.has(u, v) {
                        3
                    } else {
                        2
                    }
                } else {
                    0
                };
                out.push(code);
            }
        }
    }
}

/// Maker's knowledge: her edges, the revealed Breaker edges, and the
/// public parameters. Carries no reference to free or hidden edges.
pub struct MakerView<'a> {
    pub n: usize,
    pub a: u32,
    pub b: u32,
    pub k: u32,
    pub round: u32,
    pub budget_left: u32,
    my: &'a EdgeBits,
    revealed: &'a EdgeBits,
    my_deg: &'a [u32],
    revealed_deg: &'a [u32],
    my_edge_count: u64,
}

impl<'a> MakerView<'a> {
    #[inline]
    pub fn owns(&self, e: EdgeId) -> bool {
        self.my.has(e.u as usize, e.v as usize)
    }

    #[inline]
    pub fn revealed(&self, e: EdgeId) -> bool {
        self.revealed.has(e.u as usize, e.v as usize)
    }

    /// True iff Maker knows the edge cannot be claimed fresh: it is hers
    /// already or revealed as Breaker's.
    #[inline]
    pub fn known_unavailable(&self, e: EdgeId) -> bool {
        self.owns(e) || self.revealed(e)
    }

    #[inline]
    pub fn my_deg(&self, v: usize) -> u32 {
        self.my_deg[v]
    }

    #[inline]
    pub fn revealed_deg(&self, v: usize) -> u32 {
        self.revealed_deg[v]
    }

    pub fn my_edge_count(&self) -> u64 {
        self.my_edge_count
    }

    pub fn my_bits(&self) -> &EdgeBits {
        self.my
    }

    pub fn revealed_bits(&self) -> &EdgeBits {
        self.revealed
    }

    /// Number of edges at `v` whose status Maker does not know.
    #[inline]
    pub fn unknown_deg(&self, v: usize) -> u32 {
        (self.n as u32 - 1) - self.my_deg[v] - self.revealed_deg[v]
    }

    /// Word `wi` of the indicator row of unknown neighbours of `v`.
    #[inline]
    pub fn unknown_word(&self, v: usize, wi: usize) -> u64 {
        let mut word = !(self.my.row(v)[wi] | self.revealed.row(v)[wi]) & bits::full_mask(self.n, wi);
        if wi == v / 64 {
            word &= !(1u64 << (v % 64));
        }
        word
    }

    /// The i-th unknown neighbour of `v` in ascending order.
    pub fn select_unknown_incident(&self, v: usize, i: usize) -> EdgeId {
        let words = self.my.row(v).len();
        let w = bits::select_ith(words, i, |wi| self.unknown_word(v, wi));
        EdgeId::new(v as u32, w as u32)
    }

    /// Uniform unknown edge at `v`; `unknown_deg(v)` must be positive.
    pub fn sample_unknown_incident(
        &self,
        v: usize,
        rng: &mut dyn crate::rng::RandomSource,
    ) -> Result<EdgeId> {
        let cnt = self.unknown_deg(v) as usize;
        let i = rng.uniform_index(cnt)?;
        Ok(self.select_unknown_incident(v, i))
    }

    /// Edges at `v` Maker does not own (strict-paper sampling support):
    /// unknown edges plus revealed Breaker edges.
    #[inline]
    pub fn not_mine_deg(&self, v: usize) -> u32 {
        (self.n as u32 - 1) - self.my_deg[v]
    }

    pub fn select_not_mine_incident(&self, v: usize, i: usize) -> EdgeId {
        let words = self.my.row(v).len();
        let w = bits::select_ith(words, i, |wi| {
            let mut word = !self.my.row(v)[wi] & bits::full_mask(self.n, wi);
            if wi == v / 64 {
                word &= !(1u64 << (v % 64));
            }
            word
        });
        EdgeId::new(v as u32, w as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TrialRng;

    fn board(n: usize) -> BoardState {
        BoardState::new(&GameConfig::new(GameKind::MinDegree, n, 8, 1, 1)).unwrap()
    }

    #[test]
    fn fresh_board_counts() {
        let b = board(4);
        assert_eq!(b.free_edges(), 6);
        assert_eq!((0..4).map(|v| b.maker_deg(v)).max(), Some(0));
        let b2 = board(2);
        assert_eq!(b2.free_edges(), 1);
    }

    #[test]
    fn attempt_and_failure_semantics() {
        let mut b = board(4);
        let e = EdgeId::new(0, 1);
        assert_eq!(b.attempt_claim_maker(e).unwrap(), MoveOutcome::Claimed);
        assert_eq!(b.owner(e), Owner::Maker);
        // own edge resubmission is a contract error
        assert!(b.attempt_claim_maker(e).is_err());

        let f = EdgeId::new(2, 3);
        b.claim_breaker(f).unwrap();
        assert_eq!(b.attempt_claim_maker(f).unwrap(), MoveOutcome::Failure);
        assert_eq!(b.maker_failures, 1);
        let view = b.view(1, 1, 1);
        assert!(view.revealed(f));
        assert!(!view.owns(f));
    }

    #[test]
    fn breaker_cannot_claim_taken_edges() {
        let mut b = board(4);
        let e = EdgeId::new(1, 2);
        b.attempt_claim_maker(e).unwrap();
        assert!(b.claim_breaker(e).is_err());
        let f = EdgeId::new(0, 3);
        b.claim_breaker(f).unwrap();
        assert!(b.claim_breaker(f).is_err());
    }

    #[test]
    fn phantom_view_hides_unrevealed_breaker_edges() {
        let mut b = board(5);
        b.claim_breaker(EdgeId::new(0, 1)).unwrap();
        let view = b.view(1, 1, 1);
        assert!(!view.known_unavailable(EdgeId::new(0, 1)));
        assert_eq!(view.unknown_deg(0), 4);
    }

    #[test]
    fn degree_partition_holds() {
        let mut b = board(5);
        b.attempt_claim_maker(EdgeId::new(0, 1)).unwrap();
        b.claim_breaker(EdgeId::new(0, 2)).unwrap();
        for v in 0..5 {
            assert_eq!(b.maker_deg(v) + b.breaker_deg(v) + b.free_deg(v), 4);
        }
        assert_eq!(b.free_deg(0), 2);
        assert_eq!(b.breaker_deg(0), 1);
    }

    #[test]
    fn free_edge_sampling_is_uniform_over_support() {
        let mut b = board(5);
        b.attempt_claim_maker(EdgeId::new(0, 1)).unwrap();
        b.claim_breaker(EdgeId::new(2, 3)).unwrap();
        let mut rng = TrialRng::seeded(3);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..8000 {
            let e = b.sample_free_edge(&mut rng).unwrap();
            assert!(b.is_free(e));
            *counts.entry(e).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 8);
        for (_, c) in counts {
            assert!(c > 800, "biased sample");
        }
    }

    #[test]
    fn blocked_mindegree_detection() {
        let mut b = board(4);
        for v in 1..4 {
            b.claim_breaker(EdgeId::new(0, v)).unwrap();
        }
        assert!(b.blocked_mindegree(1));
        assert!(b.dead_position());
        let fresh = board(4);
        assert!(!fresh.blocked_mindegree(1));
    }
}
