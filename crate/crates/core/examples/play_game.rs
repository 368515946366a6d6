//! Plays a 7-path game on the 6x6 grid: a micro-strategy-guided MCTS Maker
//! against a traditional MCTS Breaker.
//!
//! ```text
//! cargo run --release --example play_game
//! ```

use std::sync::Arc;

use makerbreaker::game::{play_game, Budget, Player, WinCondition};
use makerbreaker::graph::grid_graph;
use makerbreaker::mcts::{MctsConfig, MctsPolicy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> makerbreaker::Result<()> {
    let board = Arc::new(grid_graph(6, 6)?);
    let mut maker = MctsPolicy::new(MctsConfig::modified(200, "own_adjacency:high".parse()?));
    let mut breaker = MctsPolicy::new(MctsConfig::traditional(200));
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let record = play_game(
        board,
        WinCondition::KPath(7),
        Player::Maker,
        &mut maker,
        &mut breaker,
        &mut rng,
        Budget::unlimited(),
    )?;
    print!("{}", record.transcript());
    println!("{} moves in {:.2?}", record.move_count, record.elapsed);
    Ok(())
}
