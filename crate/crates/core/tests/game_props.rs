mod common;

use std::sync::Arc;

use common::random_graph;
use makerbreaker::game::{play_game, Budget, GameState, Outcome, Player, Status, WinCondition};
use makerbreaker::graph::grid_graph;
use makerbreaker::policy::{MicroPolicy, RandomPolicy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Random play never ends in a draw and the recorded winner agrees with a
    /// from-scratch evaluation of the final marks.
    #[test]
    fn random_games_end_consistently(n in 1usize..=12, p in 0.0f64..1.0, seed in any::<u64>(), k in 1usize..=5, dom in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Arc::new(random_graph(n, p, &mut rng));
        let cond = if dom { WinCondition::DominatingSet } else { WinCondition::KPath(k.min(n).max(2).min(n)) };
        prop_assume!(cond.validate(&g).is_ok());
        let mut state = GameState::new(g, cond, if rng.gen() { Player::Maker } else { Player::Breaker }).unwrap();
        while !state.is_terminal() {
            let legal = state.legal_moves();
            let v = legal[rng.gen_range(0..legal.len())];
            state.apply_move(v).unwrap();
            prop_assert_eq!(state.status() == Status::MakerWin, state.maker_satisfies());
        }
        prop_assert!(state.status().winner().is_some());
    }
}

#[test]
fn seeded_games_replay_identically() {
    let board = Arc::new(grid_graph(4, 5).unwrap());
    let play = |seed| {
        play_game(
            Arc::clone(&board),
            WinCondition::KPath(4),
            Player::Maker,
            &mut MicroPolicy("winset_count:high".parse().unwrap()),
            &mut RandomPolicy,
            &mut ChaCha8Rng::seed_from_u64(seed),
            Budget::unlimited(),
        )
        .unwrap()
    };
    for seed in 0..20 {
        let a = play(seed);
        let b = play(seed);
        assert_eq!((a.winner, &a.moves), (b.winner, &b.moves));
        assert_ne!(a.winner, Outcome::Timeout);
    }
}
