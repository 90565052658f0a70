//! Strategy parameters: each ε and every sub-polynomial bound resolved to
//! a concrete integer.
//!
//! Conventions, fixed so fixtures are reproducible:
//! - every logarithm is natural;
//! - `ln ln n` is floored at 1;
//! - fractional lengths, thresholds and round caps round up;
//! - every resolved threshold is at least 1.

/// ceil of a positive float.
pub fn ceil_u(x: f64) -> u64 {
    debug_assert!(x >= 0.0);
    (x.ceil() as u64).max(1)
}

pub fn ln(n: usize) -> f64 {
    (n as f64).ln()
}

/// ln ln n, floored at 1.
pub fn lnln(n: usize) -> f64 {
    ln(n).ln().max(1.0)
}

pub fn powf(n: usize, e: f64) -> f64 {
    (n as f64).powf(e)
}

/// Thresholds for the degree strategy in the large-bias regime
/// (ε = a / (20kb)).
#[derive(Clone, Copy, Debug)]
pub struct MindegLargeParams {
    /// Vertex choices per phase: ⌈εn⌉.
    pub phase_len: u64,
    /// Round cap per phase: ⌈2kεn/a⌉.
    pub phase_round_cap: u64,
}

impl MindegLargeParams {
    pub fn new(n: usize, a: u32, b: u32, k: u32) -> Self {
        let eps = a as f64 / (20.0 * k as f64 * b as f64);
        MindegLargeParams {
            phase_len: ceil_u(eps * n as f64),
            phase_round_cap: ceil_u(2.0 * k as f64 * eps * n as f64 / a as f64),
        }
    }
}

/// Thresholds for the degree strategy in the small-bias regime
/// (ε = (10a)⁻²).
#[derive(Clone, Copy, Debug)]
pub struct MindegSmallParams {
    /// Stage boundary: stage one runs while |V_<k| exceeds ⌈n/ln n⌉.
    pub stage1_floor: u64,
    /// Cumulative repair-attempt budget: ⌈(ln n)^10⌉.
    pub repair_budget: u64,
    /// Stage-two round cap: ⌈εn⌉.
    pub stage2_round_cap: u64,
}

impl MindegSmallParams {
    pub fn new(n: usize, a: u32) -> Self {
        let eps = 1.0 / (10.0 * a as f64).powi(2);
        MindegSmallParams {
            stage1_floor: ceil_u(n as f64 / ln(n).max(f64::MIN_POSITIVE)),
            repair_budget: ceil_u(ln(n).powi(10)),
            stage2_round_cap: ceil_u(eps * n as f64),
        }
    }
}

/// Thresholds for the matching strategy.
#[derive(Clone, Copy, Debug)]
pub struct PmParams {
    /// Stage-one step count: n/2 − ⌈n^0.7⌉ (not below 0).
    pub stage1_steps: u64,
    /// Large-bias per-step budget of repair draws: ⌈8 ln n⌉.
    pub step_draw_budget: u64,
    /// Large-bias global round cap: ⌈n/(2a) + n^0.99⌉.
    pub global_round_cap: u64,
    /// Small-bias cumulative repair edge-choice budget: ⌈0.5·n^0.7⌉.
    pub small_repair_budget: u64,
    /// Matched pairs sampled per side in stage two: ⌈n^0.1⌉.
    pub stage2_pairs_per_side: u64,
    /// Endpoint-pair draw budget in stage two: ⌈n^0.1⌉.
    pub stage2_join_budget: u64,
}

impl PmParams {
    pub fn new(n: usize, a: u32) -> Self {
        let half = (n as u64) / 2;
        let n07 = ceil_u(powf(n, 0.7));
        PmParams {
            stage1_steps: half.saturating_sub(n07),
            step_draw_budget: ceil_u(8.0 * ln(n)),
            global_round_cap: ceil_u(n as f64 / (2.0 * a as f64) + powf(n, 0.99)),
            small_repair_budget: ceil_u(0.5 * powf(n, 0.7)),
            stage2_pairs_per_side: ceil_u(powf(n, 0.1)),
            stage2_join_budget: ceil_u(powf(n, 0.1)),
        }
    }
}

/// Thresholds for the connectivity strategy in the large-bias regime
/// (ε = a / (8b)).
#[derive(Clone, Copy, Debug)]
pub struct ConnLargeParams {
    /// Sequences per stage: ⌈ε(n−1)⌉.
    pub stage_len: u64,
    /// Edge choices per sequence: ⌈n^0.2⌉.
    pub seq_edge_budget: u64,
    /// Global round cap: ⌈1.1·n/a⌉.
    pub global_round_cap: u64,
}

impl ConnLargeParams {
    pub fn new(n: usize, a: u32, b: u32) -> Self {
        let eps = a as f64 / (8.0 * b as f64);
        ConnLargeParams {
            stage_len: ceil_u(eps * (n as f64 - 1.0)),
            seq_edge_budget: ceil_u(powf(n, 0.2)),
            global_round_cap: ceil_u(1.1 * n as f64 / a as f64),
        }
    }
}

/// Thresholds for the connectivity strategy in the small-bias regime.
#[derive(Clone, Copy, Debug)]
pub struct ConnSmallParams {
    /// Stage-one (matching) round cap: ⌈n/(2a) + n^0.9⌉.
    pub stage1_round_cap: u64,
    /// Pair-merging switches to single components below ⌈n^(2/3)⌉.
    pub few_pairs_threshold: u64,
    /// Round cap for each of stages two and three: ⌈1.1·n/(4a)⌉.
    pub stage_round_cap: u64,
}

impl ConnSmallParams {
    pub fn new(n: usize, a: u32) -> Self {
        ConnSmallParams {
            stage1_round_cap: ceil_u(n as f64 / (2.0 * a as f64) + powf(n, 0.9)),
            few_pairs_threshold: ceil_u(powf(n, 2.0 / 3.0)),
            stage_round_cap: ceil_u(1.1 * n as f64 / (4.0 * a as f64)),
        }
    }
}

/// Thresholds for the Hamilton cycle strategy.
#[derive(Clone, Copy, Debug)]
pub struct HamiltonParams {
    /// Global round cap: ⌈n/a + n^0.9⌉.
    pub global_round_cap: u64,
    /// Star size per endpoint in a repair: ⌈(a/20b)·ln n·ln ln n⌉.
    pub star_size: u64,
    /// Consecutive endpoint-pair attempts before giving up: ⌈2 ln n⌉.
    pub pair_budget: u64,
}

impl HamiltonParams {
    pub fn new(n: usize, a: u32, b: u32) -> Self {
        HamiltonParams {
            global_round_cap: ceil_u(n as f64 / a as f64 + powf(n, 0.9)),
            star_size: ceil_u(a as f64 / (20.0 * b as f64) * ln(n) * lnln(n)),
            pair_budget: ceil_u(2.0 * ln(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mindeg_large_unbiased_thresholds() {
        // a = k = b = 1: phase length ⌈n/20⌉, cap ⌈n/10⌉ rounds.
        let p = MindegLargeParams::new(1000, 1, 1, 1);
        assert_eq!(p.phase_len, 50);
        assert_eq!(p.phase_round_cap, 100);
    }

    #[test]
    fn hamilton_star_size_scaling() {
        // a=1, b=2: star size is ⌈(1/40)·ln n·ln ln n⌉.
        let n = 100_000;
        let p = HamiltonParams::new(n, 1, 2);
        let expect = (1.0 / 40.0 * ln(n) * lnln(n)).ceil() as u64;
        assert_eq!(p.star_size, expect);
        // tiny boards floor at one edge per star
        assert_eq!(HamiltonParams::new(5, 1, 2).star_size, 1);
    }

    #[test]
    fn pm_stage_lengths() {
        let p = PmParams::new(2000, 1);
        assert_eq!(p.stage1_steps, 1000 - 205);
        assert_eq!(p.stage2_pairs_per_side, 3);
        assert_eq!(p.small_repair_budget, 103);
        // stage one never goes negative on tiny boards
        assert_eq!(PmParams::new(4, 1).stage1_steps, 0);
    }

    #[test]
    fn all_thresholds_at_least_one() {
        for n in [2usize, 3, 5, 10, 100] {
            let h = HamiltonParams::new(n, 1, 6);
            assert!(h.star_size >= 1 && h.pair_budget >= 1 && h.global_round_cap >= 1);
            let c = ConnLargeParams::new(n, 2, 5);
            assert!(c.stage_len >= 1 && c.seq_edge_budget >= 1);
            let m = MindegSmallParams::new(n, 3);
            assert!(m.stage1_floor >= 1 && m.stage2_round_cap >= 1);
        }
    }
}
