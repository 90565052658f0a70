use crate::error::{GameError, Result};
use serde::{Deserialize, Serialize};

/// The four winning-set families on `K_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    MinDegree,
    Connectivity,
    PerfectMatching,
    Hamiltonicity,
}

impl GameKind {
    pub const ALL: [GameKind; 4] = [
        GameKind::MinDegree,
        GameKind::Connectivity,
        GameKind::PerfectMatching,
        GameKind::Hamiltonicity,
    ];

    pub fn parse(s: &str) -> Result<GameKind> {
        match s {
            "mindegree" | "mindeg" => Ok(GameKind::MinDegree),
            "connectivity" | "conn" => Ok(GameKind::Connectivity),
            "pm" | "perfect-matching" | "matching" => Ok(GameKind::PerfectMatching),
            "hamiltonicity" | "hamilton" | "ham" => Ok(GameKind::Hamiltonicity),
            _ => Err(GameError::InvalidConfig(format!("unknown game kind '{s}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GameKind::MinDegree => "mindegree",
            GameKind::Connectivity => "connectivity",
            GameKind::PerfectMatching => "pm",
            GameKind::Hamiltonicity => "hamiltonicity",
        }
    }

    /// Degree target below which a vertex is provably dead for Maker:
    /// the game's own k for the mindegree game, 1 where an isolated vertex
    /// already blocks the win, 2 for Hamilton cycles.
    pub fn blocked_degree(&self, k: u32) -> u32 {
        match self {
            GameKind::MinDegree => k,
            GameKind::Connectivity | GameKind::PerfectMatching => 1,
            GameKind::Hamiltonicity => 2,
        }
    }
}

/// Incident-edge sampling behaviour for Maker strategies.
///
/// `KnowledgeAware` (the default) draws only from edges Maker does not
/// already know to be hers or the opponent's. `StrictPaper` samples over
/// all incident edges not owned by Maker, so a known failure may be
/// re-attempted; provided for comparison runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    #[default]
    KnowledgeAware,
    StrictPaper,
}

/// Full description of one game: the quintuple (n, a, b, game, k) plus
/// engine limits and the trial seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    /// Maker bias: attempts per round.
    pub a: u32,
    /// Breaker bias: claims per round.
    pub b: u32,
    pub game: GameKind,
    /// Degree target; meaningful for the mindegree game only.
    pub k: u32,
    /// Hard round limit; reaching it is reported distinctly.
    pub stall_cap: u32,
    pub seed: u64,
    /// Stop as soon as the position is provably dead for Maker. Never
    /// changes the winner, only the round count; flagged in the record.
    #[serde(default = "default_true")]
    pub early_stop: bool,
    #[serde(default)]
    pub sampling: SamplingMode,
    #[serde(default)]
    pub record_transcript: bool,
}

fn default_true() -> bool {
    true
}

impl GameConfig {
    pub fn new(game: GameKind, n: usize, a: u32, b: u32, k: u32) -> Self {
        GameConfig {
            n,
            a,
            b,
            game,
            k,
            stall_cap: default_stall_cap(n),
            seed: 0,
            early_stop: true,
            sampling: SamplingMode::KnowledgeAware,
            record_transcript: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn edge_count(&self) -> u64 {
        (self.n as u64) * (self.n as u64 - 1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(GameError::InvalidConfig(format!("n must be >= 2, got {}", self.n)));
        }
        if self.a < 1 || self.b < 1 {
            return Err(GameError::InvalidConfig(format!(
                "biases must be >= 1, got a={}, b={}",
                self.a, self.b
            )));
        }
        if self.k < 1 {
            return Err(GameError::InvalidConfig("k must be >= 1".into()));
        }
        if self.game == GameKind::PerfectMatching && !self.n.is_multiple_of(2) {
            return Err(GameError::InvalidConfig(format!(
                "perfect matching game requires even n, got {}",
                self.n
            )));
        }
        let min_cap = self.edge_count().div_ceil((self.a + self.b) as u64);
        if (self.stall_cap as u64) < min_cap {
            return Err(GameError::InvalidConfig(format!(
                "stall_cap {} below the {} rounds needed to exhaust the board",
                self.stall_cap, min_cap
            )));
        }
        Ok(())
    }
}

pub fn default_stall_cap(n: usize) -> u32 {
    let sq = (n as u64).saturating_mul(n as u64);
    sq.min(u32::MAX as u64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_n_matching_rejected() {
        let cfg = GameConfig::new(GameKind::PerfectMatching, 5, 1, 1, 1);
        assert!(matches!(cfg.validate(), Err(GameError::InvalidConfig(_))));
    }

    #[test]
    fn zero_bias_rejected() {
        let cfg = GameConfig::new(GameKind::Connectivity, 4, 0, 1, 1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_cap_exceeds_board_exhaustion() {
        for n in [2usize, 3, 10, 101] {
            let cfg = GameConfig::new(GameKind::MinDegree, n, 1, 1, 1);
            assert!(cfg.validate().is_ok(), "n={n}");
        }
    }

    #[test]
    fn game_kind_parses_aliases() {
        assert_eq!(GameKind::parse("pm").unwrap(), GameKind::PerfectMatching);
        assert_eq!(GameKind::parse("hamilton").unwrap(), GameKind::Hamiltonicity);
        assert!(GameKind::parse("nosuch").is_err());
    }
}
