//! Prints the move distribution every catalog micro-strategy assigns to the
//! same 4x4 position.
//!
//! ```text
//! cargo run --example micro_catalog
//! ```

use std::sync::Arc;

use makerbreaker::game::{GameState, Player, WinCondition};
use makerbreaker::graph::grid_graph;
use makerbreaker::micro::catalog;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> makerbreaker::Result<()> {
    let mut state = GameState::new(Arc::new(grid_graph(4, 4)?), WinCondition::KPath(4), Player::Maker)?;
    for v in [5, 6, 10, 9] {
        state.apply_move(v)?;
    }
    let legal = state.legal_moves();
    println!("Maker to move; legal {legal:?}\n");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for id in catalog() {
        let w = id.weights(&state, Player::Maker, &mut rng);
        let (best, top) = legal
            .iter()
            .zip(w.as_slice())
            .fold((0, 0.0), |acc, (&v, &x)| if x > acc.1 { (v, x) } else { acc });
        println!("{:<30} favors {best:>2} ({:.2})  {}", id.to_string(), top, id.describe());
    }
    Ok(())
}
