//! Exact values of the empty board for small grids under each win condition.
//!
//! ```text
//! cargo run --release --example solve_small
//! ```

use std::sync::Arc;

use makerbreaker::game::{GameState, Player, WinCondition};
use makerbreaker::graph::grid_graph;
use makerbreaker::oracle::Solver;

fn main() -> makerbreaker::Result<()> {
    let conditions = [
        WinCondition::DominatingSet,
        WinCondition::KPath(2),
        WinCondition::KPath(3),
        WinCondition::KPath(4),
    ];
    for (rows, cols) in [(1, 3), (1, 5), (2, 2), (2, 3), (3, 3), (3, 4)] {
        let board = Arc::new(grid_graph(rows, cols)?);
        for cond in conditions {
            if cond.validate(&board).is_err() {
                continue;
            }
            let state = GameState::new(Arc::clone(&board), cond, Player::Maker)?;
            let r = Solver::new().solve(&state)?;
            println!(
                "{rows}x{cols} {:<10} {:<7} optimal {}  ({} nodes)",
                cond.to_string(),
                r.value.to_string(),
                r.optimal_moves,
                r.nodes_visited
            );
        }
    }
    Ok(())
}
