//! End-to-end games whose outcomes are forced, straight through the
//! referee.

use phantom_core::config::{GameConfig, GameKind};
use phantom_core::engine::{run_game, EndReason, Winner};
use phantom_core::error::GameError;
use phantom_core::strategies::{make_breaker, make_maker, BREAKER_NAMES, MAKER_NAMES};
use phantom_core::rng::TrialRng;

fn play(cfg: &GameConfig, maker: &str, breaker: &str, seed: u64) -> phantom_core::TrialRecord {
    let m = make_maker(maker, cfg).unwrap();
    let b = make_breaker(breaker, cfg).unwrap();
    let mut rng = TrialRng::seeded(seed);
    run_game(cfg.clone(), m, b, &mut rng).unwrap()
}

#[test]
fn two_vertices_maker_wins_round_one() {
    // she moves first and claims the only edge, for any game she can win
    for (game, k) in [
        (GameKind::MinDegree, 1),
        (GameKind::Connectivity, 1),
        (GameKind::PerfectMatching, 1),
    ] {
        for (a, b) in [(1, 1), (1, 5), (3, 2)] {
            let cfg = GameConfig::new(game, 2, a, b, k);
            for seed in 0..20 {
                let rec = play(&cfg, "random", "random", seed);
                assert_eq!(rec.winner, Winner::Maker, "{game:?} ({a}:{b})");
                assert_eq!(rec.rounds_used, 1);
            }
        }
    }
}

#[test]
fn star_phases_always_wins_k4_at_bias_six() {
    // after Maker's single move two vertices are untouched; a full
    // three-edge star fits in one Breaker turn
    let cfg = GameConfig::new(GameKind::MinDegree, 4, 1, 6, 1);
    for maker in MAKER_NAMES {
        if maker.starts_with("pm") || maker.starts_with("conn") {
            continue; // matching strategies need even wins; conn uses them
        }
        for seed in 0..50 {
            let rec = play(&cfg, maker, "star-phases", seed);
            assert_eq!(rec.winner, Winner::Breaker, "maker={maker} seed={seed}");
        }
    }
}

#[test]
fn all_strategy_pairs_terminate_cleanly() {
    // totality: every registry pair finishes a small game without engine
    // errors, across the four game kinds
    for game in GameKind::ALL {
        let n = 8; // even, so matching strategies construct
        let cfg = GameConfig::new(game, n, 1, 2, if game == GameKind::Hamiltonicity { 2 } else { 1 });
        for maker in MAKER_NAMES {
            for breaker in BREAKER_NAMES {
                for seed in 0..5 {
                    let m = make_maker(maker, &cfg).unwrap();
                    let b = make_breaker(breaker, &cfg).unwrap();
                    let mut rng = TrialRng::seeded(seed);
                    let rec = run_game(cfg.clone(), m, b, &mut rng)
                        .unwrap_or_else(|e| panic!("{game:?} {maker} vs {breaker} seed {seed}: {e}"));
                    assert_ne!(rec.reason, EndReason::StallCap);
                }
            }
        }
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let cfg = GameConfig::new(GameKind::PerfectMatching, 5, 1, 1, 1);
    let m = make_maker("random", &cfg);
    // construction may succeed; the engine rejects the config
    if let Ok(m) = m {
        let b = make_breaker("random", &cfg).unwrap();
        let mut rng = TrialRng::seeded(0);
        let err = run_game(cfg, m, b, &mut rng).unwrap_err();
        assert!(matches!(err, GameError::InvalidConfig(_)));
    }

    let cfg = GameConfig::new(GameKind::MinDegree, 4, 0, 1, 1);
    assert!(cfg.validate().is_err());

    assert!(make_maker("nosuch", &GameConfig::new(GameKind::MinDegree, 4, 1, 1, 1)).is_err());
}

#[test]
fn forfeit_ends_game_immediately() {
    // on a board this small the matching strategy's opening stage has
    // zero steps and its finishing stage has no matched pairs to sample,
    // so it resigns on its first move
    let cfg = GameConfig::new(GameKind::PerfectMatching, 4, 1, 1, 1);
    let rec = play(&cfg, "pm-small", "random", 3);
    assert_eq!(rec.winner, Winner::Breaker);
    assert_eq!(rec.reason, EndReason::MakerForfeit);
    assert_eq!(rec.rounds_used, 1);
}

#[test]
fn random_games_on_odd_small_boards_match_checker_outcomes() {
    // board-exhausted outcomes agree with an independent final check
    for seed in 0..200 {
        let cfg = GameConfig::new(GameKind::Connectivity, 5, 1, 2, 1);
        let m = make_maker("random", &cfg).unwrap();
        let b = make_breaker("random", &cfg).unwrap();
        let mut rng = TrialRng::seeded(seed);
        let game = phantom_core::engine::run_game_full(cfg, m, b, &mut rng).unwrap();
        let (winner, _, _) = game.outcome().unwrap();
        let connected =
            phantom_core::win_check::check_connectivity(5, game.board.maker_edge_list());
        assert_eq!(winner == Winner::Maker, connected, "seed {seed}");
    }
}
