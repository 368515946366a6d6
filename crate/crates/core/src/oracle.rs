//! Exact minimax solver for small Maker-Breaker games.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{GameState, Mark, Player};
use crate::graph::VertexSet;

/// Largest board the solver accepts by default.
pub const DEFAULT_CAP: usize = 16;
const KEY_CAP: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Winner under optimal play.
    pub value: Player,
    /// Moves that keep `value` for the player to move; empty at terminal
    /// states.
    pub optimal_moves: VertexSet,
    pub nodes_visited: u64,
}

#[derive(Debug)]
pub struct Solver {
    cap: usize,
    memo: Option<HashMap<u128, Player>>,
    nodes: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            cap: DEFAULT_CAP,
            memo: Some(HashMap::new()),
            nodes: 0,
        }
    }

    /// Raises or lowers the vertex cap (at most 63).
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.min(KEY_CAP);
        self
    }

    /// Disables the transposition cache.
    pub fn without_memo(mut self) -> Self {
        self.memo = None;
        self
    }

    pub fn solve(&mut self, state: &GameState) -> Result<SolveResult> {
        let n = state.board().n();
        if n > self.cap {
            return Err(Error::BoardTooLarge { n, cap: self.cap });
        }
        let start = self.nodes;
        let value = self.value(state);
        let mut optimal = Vec::new();
        if !state.is_terminal() {
            for &v in state.legal_moves() {
                let child = state.after(v).expect("legal move");
                if self.value(&child) == value {
                    optimal.push(v);
                }
            }
        }
        Ok(SolveResult {
            value,
            optimal_moves: VertexSet::new(n, optimal)?,
            nodes_visited: self.nodes - start,
        })
    }

    fn value(&mut self, state: &GameState) -> Player {
        self.nodes += 1;
        if let Some(winner) = state.status().winner() {
            return winner;
        }
        let key = memo_key(state);
        if let Some(&v) = self.memo.as_ref().and_then(|m| m.get(&key)) {
            return v;
        }
        let mover = state.to_move();
        let mut value = mover.opponent();
        for &v in state.legal_moves() {
            let child = state.after(v).expect("legal move");
            if self.value(&child) == mover {
                value = mover;
                break;
            }
        }
        if let Some(memo) = self.memo.as_mut() {
            memo.insert(key, value);
        }
        value
    }
}

/// Two bits per vertex plus the mover in the top bit.
fn memo_key(state: &GameState) -> u128 {
    let mut key = 0u128;
    for (i, m) in state.marks().iter().enumerate() {
        let bits = match m {
            Mark::Unmarked => 0u128,
            Mark::Maker => 1,
            Mark::Breaker => 2,
        };
        key |= bits << (2 * i);
    }
    if state.to_move() == Player::Breaker {
        key |= 1 << 127;
    }
    key
}

/// Solves `state` with a fresh memoizing solver at the default cap.
pub fn solve(state: &GameState) -> Result<SolveResult> {
    Solver::new().solve(state)
}

/// The optimal moves of `state`; errors at terminal states.
pub fn best_move_set(state: &GameState) -> Result<VertexSet> {
    if state.is_terminal() {
        return Err(Error::GameOver);
    }
    Ok(solve(state)?.optimal_moves)
}
