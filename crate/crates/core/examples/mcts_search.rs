//! One search from a hand-built position, with and without a
//! micro-strategy, next to the exact answer.
//!
//! ```text
//! cargo run --release --example mcts_search
//! ```

use std::sync::Arc;

use makerbreaker::game::{GameState, Player, WinCondition};
use makerbreaker::graph::grid_graph;
use makerbreaker::mcts::{search, MctsConfig};
use makerbreaker::oracle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> makerbreaker::Result<()> {
    // 3x4 grid, Maker needs an induced 4-path. Maker holds 5 and 6, Breaker
    // holds 2 and 9.
    let mut state = GameState::new(Arc::new(grid_graph(3, 4)?), WinCondition::KPath(4), Player::Maker)?;
    for v in [5, 2, 6, 9] {
        state.apply_move(v)?;
    }
    let exact = oracle::solve(&state)?;
    println!("oracle: {} wins, optimal moves {}", exact.value, exact.optimal_moves);

    for cfg in [
        MctsConfig::traditional(2000),
        MctsConfig::modified(2000, "own_adjacency:high".parse()?),
    ] {
        let label = cfg.micro.map_or("traditional".to_string(), |m| m.to_string());
        let choice = search(&state, &cfg, &mut ChaCha8Rng::seed_from_u64(1))?;
        println!("\n{label}: plays {}", choice.chosen);
        let mut children = choice.children.clone();
        children.sort_by(|a, b| b.visits.cmp(&a.visits));
        for c in children.iter().take(5) {
            println!("  vertex {:>2}  visits {:>4}  win rate {:.3}", c.vertex, c.visits, c.win_rate());
        }
    }
    Ok(())
}
