//! Baseline Maker: attempts a uniform edge among those not known to be
//! hers or the opponent's.

use crate::bits::Fenwick;
use crate::board::{EdgeId, MakerView, MoveOutcome};
use crate::config::GameConfig;
use crate::error::Result;
use crate::rng::RandomSource;
use crate::strategies::{MakerAction, MakerStrategy};

#[derive(Clone)]
pub struct RandomMaker {
    /// Per-vertex count of incident edges with unknown status; every
    /// unknown edge owns two slots, which keeps the draw a single index.
    unknown: Fenwick,
}

impl RandomMaker {
    pub fn new(cfg: &GameConfig) -> Self {
        let mut unknown = Fenwick::new(cfg.n);
        for v in 0..cfg.n {
            unknown.add(v, (cfg.n - 1) as i64);
        }
        RandomMaker { unknown }
    }
}

impl MakerStrategy for RandomMaker {
    fn next_action(&mut self, view: &MakerView, rng: &mut dyn RandomSource) -> Result<MakerAction> {
        let total = self.unknown.total();
        if total == 0 {
            return Ok(MakerAction::Forfeit);
        }
        let r = rng.uniform_index(total as usize)? as u64;
        let (v, residual) = self.unknown.descend(r);
        debug_assert!(residual < view.unknown_deg(v) as u64);
        Ok(MakerAction::Attempt(view.select_unknown_incident(v, residual as usize)))
    }

    fn observe(&mut self, edge: EdgeId, _outcome: MoveOutcome, _view: &MakerView) {
        // Either outcome makes the edge known.
        self.unknown.add(edge.u as usize, -1);
        self.unknown.add(edge.v as usize, -1);
    }

    fn encode_state(&self, _out: &mut Vec<u8>) {
        // behaviour depends only on the view
    }

    fn clone_box(&self) -> Box<dyn MakerStrategy> {
        Box::new(self.clone())
    }

    fn name(&self) -> &'static str {
        "random"
    }
}
