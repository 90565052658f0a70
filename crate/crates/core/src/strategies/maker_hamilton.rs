//! Maker strategy for the Hamiltonicity game.
//!
//! A path is grown one vertex per step, alternating the endpoint it
//! extends at. A failed extension triggers a repair: build small stars of
//! owned edges around the stuck endpoints, then stitch the path back
//! together through one surgically chosen edge. Once the path spans all
//! vertices, the same machinery connects its two ends into a cycle.

use crate::bits::VertexBits;
use crate::board::{EdgeId, MakerView, MoveOutcome};
use crate::config::{GameConfig, GameKind};
use crate::error::{GameError, Result};
use crate::rng::RandomSource;
use crate::strategies::params::HamiltonParams;
use crate::strategies::sampling::VertexPool;
use crate::strategies::surgery::{path_surgery, Surgery};
use crate::strategies::{MakerAction, MakerStrategy};
use crate::win_check::WinCertificate;
use std::collections::VecDeque;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Repair {
    x: u32,
    y: u32,
    /// 0: building the star at x; 1: at y; 2: stitching.
    side: u8,
    /// Candidate endpoints not yet drawn for the current star.
    pool: Vec<u32>,
    draws_left: u64,
    vx: Vec<u32>,
    vx_ok: Vec<u32>,
    vy_ok: Vec<u32>,
    pend_star: Option<u32>,
    /// Non-degenerate endpoint pairs with their designated edges.
    candidates: Vec<(u32, u32, EdgeId)>,
    pair_attempts_left: u64,
    pend_pair: Option<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum HamMode {
    /// First move: claim some edge to seed the path.
    Seed,
    SeedPend { e: EdgeId },
    ExtendReady,
    ExtendPend { x: u32 },
    Repair(Box<Repair>),
}

#[derive(Clone)]
pub struct HamiltonMaker {
    n: usize,
    game: GameKind,
    params: HamiltonParams,
    mode: HamMode,
    path: VecDeque<u32>,
    /// Which end of `path` holds y, the endpoint not added last.
    y_at_front: bool,
    on_path: VertexBits,
    off_path: VertexPool,
    /// Set once the path spans all vertices and the closing step begins.
    closing: Option<u32>,
    /// Completed cycle, once the closing edge is secured.
    complete: Option<Vec<u32>>,
}

impl HamiltonMaker {
    pub fn new(cfg: &GameConfig) -> Self {
        HamiltonMaker {
            n: cfg.n,
            game: cfg.game,
            params: HamiltonParams::new(cfg.n, cfg.a, cfg.b),
            mode: HamMode::Seed,
            path: VecDeque::new(),
            y_at_front: true,
            on_path: VertexBits::new(cfg.n),
            off_path: VertexPool::full(cfg.n),
            closing: None,
            complete: None,
        }
    }

    fn y(&self) -> u32 {
        if self.y_at_front {
            *self.path.front().unwrap()
        } else {
            *self.path.back().unwrap()
        }
    }

    /// Path enumerated from y.
    fn order_from_y(&self) -> Vec<u32> {
        if self.y_at_front {
            self.path.iter().copied().collect()
        } else {
            self.path.iter().rev().copied().collect()
        }
    }

    fn add_to_path(&mut self, v: u32) {
        self.on_path.set(v as usize);
        self.off_path.remove(v);
    }

    /// Successful direct extension: x attaches at the y end and becomes
    /// the endpoint added last, so the next step works the other end.
    fn extend(&mut self, x: u32) {
        if self.y_at_front {
            self.path.push_front(x);
            self.y_at_front = false;
        } else {
            self.path.push_back(x);
            self.y_at_front = true;
        }
        self.add_to_path(x);
    }

    /// Install a rewritten path; `new_order[0]` is the vertex added last,
    /// so y sits at the back.
    fn install_order(&mut self, new_order: Vec<u32>) {
        for &v in &new_order {
            if !self.on_path.has(v as usize) {
                self.add_to_path(v);
            }
        }
        self.path = new_order.into();
        self.y_at_front = false;
    }

    /// The closing step succeeded through `claimed_path`: the path now
    /// runs from the detached endpoint to its old neighbour, and the edge
    /// between them is already Maker's.
    fn complete_cycle(&mut self, cycle: Vec<u32>) {
        debug_assert_eq!(cycle.len(), self.n);
        self.complete = Some(cycle);
    }

    fn begin_repair(&mut self, view: &MakerView, x: u32, y: u32) {
        let mut pool = Vec::new();
        for wi in 0..self.on_path.words().len() {
            let mut w = view.unknown_word(x as usize, wi);
            if wi == (y as usize) / 64 {
                w &= !(1u64 << (y as usize % 64));
            }
            while w != 0 {
                pool.push((wi * 64 + w.trailing_zeros() as usize) as u32);
                w &= w - 1;
            }
        }
        let draws = self.params.star_size.min(pool.len() as u64);
        self.mode = HamMode::Repair(Box::new(Repair {
            x,
            y,
            side: 0,
            pool,
            draws_left: draws,
            vx: Vec::new(),
            vx_ok: Vec::new(),
            vy_ok: Vec::new(),
            pend_star: None,
            candidates: Vec::new(),
            pair_attempts_left: self.params.pair_budget,
            pend_pair: None,
        }));
    }

    /// Candidate endpoints for the y-side star: unknown edges at y,
    /// excluding x and everything already drawn around x.
    fn y_star_pool(&self, view: &MakerView, rep: &Repair) -> Vec<u32> {
        let mut excl = VertexBits::new(self.n);
        excl.set(rep.x as usize);
        for &w in &rep.vx {
            excl.set(w as usize);
        }
        let mut pool = Vec::new();
        for wi in 0..excl.words().len() {
            let mut w = view.unknown_word(rep.y as usize, wi) & !excl.words()[wi];
            while w != 0 {
                pool.push((wi * 64 + w.trailing_zeros() as usize) as u32);
                w &= w - 1;
            }
        }
        pool
    }

    fn build_candidates(&self, view: &MakerView, rep: &Repair) -> Vec<(u32, u32, EdgeId)> {
        let order = self.order_from_y();
        let owns = |e: EdgeId| view.owns(e);
        let mut out = Vec::new();
        for &xp in &rep.vx_ok {
            for &yp in &rep.vy_ok {
                if let Surgery::Claim { edge, .. } = path_surgery(&order, rep.x, xp, yp, &owns) {
                    out.push((xp, yp, edge));
                }
            }
        }
        out
    }

    /// Applies a successful surgery claim and returns to extension (or
    /// finishes the cycle when closing). The designated edge is already
    /// owned at this point, so the rewrite is recomputed with the
    /// ownership degeneracy check suppressed.
    fn apply_surgery(&mut self, x: u32, xp: u32, yp: u32) {
        let order = self.order_from_y();
        let Surgery::Claim { new_order, .. } = path_surgery(&order, x, xp, yp, &|_| false) else {
            unreachable!("surgery became degenerate after its claim succeeded")
        };
        if self.closing.is_some() {
            self.complete_cycle(new_order);
        } else {
            self.install_order(new_order);
        }
        self.mode = HamMode::ExtendReady;
    }
}

impl MakerStrategy for HamiltonMaker {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        if self.complete.is_some() {
            return if self.game == GameKind::Hamiltonicity {
                Ok(MakerAction::DeclareWin)
            } else {
                Ok(MakerAction::Forfeit)
            };
        }
        if view.round as u64 > self.params.global_round_cap {
            return Ok(MakerAction::Forfeit);
        }
        loop {
            match std::mem::replace(&mut self.mode, HamMode::ExtendReady) {
                HamMode::Seed => {
                    // arbitrary first edge: the earliest pair whose status
                    // is unknown (always (0,1) when the game starts fresh)
                    let mut seed = None;
                    'scan: for u in 0..self.n as u32 {
                        for v in (u + 1)..self.n as u32 {
                            let e = EdgeId::new(u, v);
                            if !view.known_unavailable(e) {
                                seed = Some(e);
                                break 'scan;
                            }
                        }
                    }
                    match seed {
                        Some(e) => {
                            self.mode = HamMode::SeedPend { e };
                            return Ok(MakerAction::Attempt(e));
                        }
                        None => return Ok(MakerAction::Forfeit),
                    }
                }
                HamMode::SeedPend { e } => {
                    self.mode = HamMode::SeedPend { e };
                    return Err(GameError::Internal("seed outcome pending".into()));
                }
                HamMode::ExtendReady => {
                    if self.n < 3 {
                        return Ok(MakerAction::Forfeit);
                    }
                    let x = if let Some(x) = self.closing {
                        x
                    } else if self.off_path.is_empty() {
                        // the path is Hamiltonian: detach the endpoint
                        // added last and reconnect it to the other end
                        let vn = if self.y_at_front {
                            self.path.pop_back().unwrap()
                        } else {
                            self.path.pop_front().unwrap()
                        };
                        self.closing = Some(vn);
                        vn
                    } else {
                        self.off_path.draw(rng)?
                    };
                    let y = self.y();
                    let e = EdgeId::new(x, y);
                    if view.owns(e) {
                        // already hers: the step completes without a claim
                        if self.closing.is_some() {
                            let mut cycle = vec![x];
                            cycle.extend(self.order_from_y());
                            self.complete_cycle(cycle);
                            self.mode = HamMode::ExtendReady;
                            return if self.game == GameKind::Hamiltonicity {
                                Ok(MakerAction::DeclareWin)
                            } else {
                                Ok(MakerAction::Forfeit)
                            };
                        }
                        self.extend(x);
                        self.mode = HamMode::ExtendReady;
                        continue;
                    }
                    if view.revealed(e) {
                        self.begin_repair(view, x, y);
                        continue;
                    }
                    self.mode = HamMode::ExtendPend { x };
                    return Ok(MakerAction::Attempt(e));
                }
                HamMode::ExtendPend { x } => {
                    self.mode = HamMode::ExtendPend { x };
                    return Err(GameError::Internal("extension outcome pending".into()));
                }
                HamMode::Repair(mut rep) => {
                    if rep.pend_star.is_some() || rep.pend_pair.is_some() {
                        self.mode = HamMode::Repair(rep);
                        return Err(GameError::Internal("repair outcome pending".into()));
                    }
                    match rep.side {
                        0 | 1 => {
                            if rep.draws_left == 0 || rep.pool.is_empty() {
                                if rep.side == 0 {
                                    // move to the star around y
                                    rep.side = 1;
                                    rep.pool = self.y_star_pool(view, &rep);
                                    rep.draws_left = self.params.star_size.min(rep.pool.len() as u64);
                                    self.mode = HamMode::Repair(rep);
                                    continue;
                                }
                                if rep.vx_ok.is_empty() || rep.vy_ok.is_empty() {
                                    return Ok(MakerAction::Forfeit);
                                }
                                rep.side = 2;
                                rep.candidates = self.build_candidates(view, &rep);
                                if rep.candidates.is_empty() {
                                    return Ok(MakerAction::Forfeit);
                                }
                                self.mode = HamMode::Repair(rep);
                                continue;
                            }
                            let i = rng.uniform_index(rep.pool.len())?;
                            let w = rep.pool.swap_remove(i);
                            rep.draws_left -= 1;
                            rep.pend_star = Some(w);
                            let center = if rep.side == 0 { rep.x } else { rep.y };
                            self.mode = HamMode::Repair(rep);
                            return Ok(MakerAction::Attempt(EdgeId::new(center, w)));
                        }
                        _ => {
                            if rep.pair_attempts_left == 0 {
                                return Ok(MakerAction::Forfeit);
                            }
                            rep.pair_attempts_left -= 1;
                            let i = rng.uniform_index(rep.candidates.len())?;
                            let (xp, yp, edge) = rep.candidates[i];
                            rep.pend_pair = Some((xp, yp));
                            self.mode = HamMode::Repair(rep);
                            return Ok(MakerAction::Attempt(edge));
                        }
                    }
                }
            }
        }
    }

    fn observe(&mut self, edge: EdgeId, outcome: MoveOutcome, view: &MakerView) {
        match std::mem::replace(&mut self.mode, HamMode::ExtendReady) {
            HamMode::SeedPend { e } => {
                debug_assert_eq!(e, edge);
                if outcome == MoveOutcome::Claimed {
                    self.path = VecDeque::from([e.u, e.v]);
                    self.y_at_front = true; // y is the lower endpoint
                    self.add_to_path(e.u);
                    self.add_to_path(e.v);
                    self.mode = HamMode::ExtendReady;
                } else {
                    self.mode = HamMode::Seed; // mid-game start: retry
                }
            }
            HamMode::ExtendPend { x } => {
                if outcome == MoveOutcome::Claimed {
                    if self.closing.is_some() {
                        let mut cycle = vec![x];
                        cycle.extend(self.order_from_y());
                        self.complete_cycle(cycle);
                        self.mode = HamMode::ExtendReady;
                    } else {
                        self.extend(x);
                        self.mode = HamMode::ExtendReady;
                    }
                } else {
                    let y = self.y();
                    self.begin_repair(view, x, y);
                }
            }
            HamMode::Repair(mut rep) => {
                if let Some(w) = rep.pend_star.take() {
                    if rep.side == 0 {
                        rep.vx.push(w);
                        if outcome == MoveOutcome::Claimed {
                            rep.vx_ok.push(w);
                        }
                    } else if outcome == MoveOutcome::Claimed {
                        rep.vy_ok.push(w);
                    }
                    self.mode = HamMode::Repair(rep);
                } else if let Some((xp, yp)) = rep.pend_pair.take() {
                    if outcome == MoveOutcome::Claimed {
                        let x = rep.x;
                        self.apply_surgery(x, xp, yp);
                    } else {
                        self.mode = HamMode::Repair(rep);
                    }
                } else {
                    self.mode = HamMode::Repair(rep);
                    debug_assert!(false, "repair outcome without a pending attempt");
                }
            }
            other => {
                self.mode = other;
                debug_assert!(false, "outcome delivered in a non-pending mode");
            }
        }
    }

    fn certificate(&self) -> Option<WinCertificate> {
        self.complete.clone().map(WinCertificate::HamiltonCycle)
    }

    fn encode_state(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.path.len() as u32).to_le_bytes());
        for &v in &self.path {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(self.y_at_front as u8);
        self.off_path.encode(out);
        out.extend_from_slice(&self.closing.map_or(u32::MAX, |v| v).to_le_bytes());
        out.push(self.complete.is_some() as u8);
        match &self.mode {
            HamMode::Seed => out.push(0),
            HamMode::SeedPend { e } => {
                out.push(1);
                out.extend_from_slice(&e.u.to_le_bytes());
                out.extend_from_slice(&e.v.to_le_bytes());
            }
            HamMode::ExtendReady => out.push(2),
            HamMode::ExtendPend { x } => {
                out.push(3);
                out.extend_from_slice(&x.to_le_bytes());
            }
            HamMode::Repair(rep) => {
                out.push(4);
                out.push(rep.side);
                out.extend_from_slice(&rep.x.to_le_bytes());
                out.extend_from_slice(&rep.y.to_le_bytes());
                out.extend_from_slice(&rep.draws_left.to_le_bytes());
                out.extend_from_slice(&rep.pair_attempts_left.to_le_bytes());
                for list in [&rep.pool, &rep.vx, &rep.vx_ok, &rep.vy_ok] {
                    out.extend_from_slice(&(list.len() as u32).to_le_bytes());
                    for &v in list {
                        out.extend_from_slice(&v.to_le_bytes());
                    }
                }
                out.extend_from_slice(&rep.pend_star.map_or(u32::MAX, |v| v).to_le_bytes());
                if let Some((a, b)) = rep.pend_pair {
                    out.push(1);
                    out.extend_from_slice(&a.to_le_bytes());
                    out.extend_from_slice(&b.to_le_bytes());
                } else {
                    out.push(0);
                }
            }
        }
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "hamilton"
    }
}
