//! Maker-Breaker games on graphs.
//!
//! The crate bundles everything needed to study how strategy rankings carry
//! over from small, cheap versions of a Maker-Breaker game to larger ones:
//!
//! * [`graph`]: boards (grids, `G(n, p)`, Flower Snarks) and the queries that
//!   decide winning sets (induced `k`-paths, dominating sets)
//! * [`game`]: game state, rules and the two-policy game loop
//! * [`micro`]: the micro-strategy catalog of cheap move-weighting functions
//! * [`mcts`]: traditional and micro-strategy-modified MCTS
//! * [`oracle`]: an exact minimax solver for boards of up to 16 vertices
//! * [`harness`]: parameter sweeps, win-rate tables and CSV output
//!
//! ```
//! use std::sync::Arc;
//! use makerbreaker::game::{GameState, Player, WinCondition};
//! use makerbreaker::graph::grid_graph;
//! use makerbreaker::oracle;
//!
//! let board = Arc::new(grid_graph(1, 3).unwrap());
//! let state = GameState::new(board, WinCondition::DominatingSet, Player::Maker).unwrap();
//! let solved = oracle::solve(&state).unwrap();
//! assert_eq!(solved.value, Player::Maker);
//! assert!(solved.optimal_moves.contains(1));
//! ```

pub mod cli;
pub mod error;
pub mod game;
pub mod graph;
pub mod harness;
pub mod mcts;
pub mod micro;
pub mod oracle;
pub mod policy;

pub use error::{Error, Result};
