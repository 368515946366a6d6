//! Maker-Breaker rules: state, move application, win detection and the game
//! loop that pits two policies against each other.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Graph, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "Maker",
            Player::Breaker => "Breaker",
        })
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maker" => Ok(Player::Maker),
            "breaker" => Ok(Player::Breaker),
            _ => Err(Error::Parse(format!("unknown player `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Unmarked,
    Maker,
    Breaker,
}

impl From<Player> for Mark {
    fn from(p: Player) -> Mark {
        match p {
            Player::Maker => Mark::Maker,
            Player::Breaker => Mark::Breaker,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ongoing,
    MakerWin,
    BreakerWin,
}

impl Status {
    pub fn winner(self) -> Option<Player> {
        match self {
            Status::Ongoing => None,
            Status::MakerWin => Some(Player::Maker),
            Status::BreakerWin => Some(Player::Breaker),
        }
    }
}

/// Family of winning sets. `KPath(k)` counts vertices, not edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WinCondition {
    KPath(usize),
    DominatingSet,
}

impl WinCondition {
    /// Whether `marked` contains a winning set of `board`, evaluated from
    /// scratch.
    pub fn is_satisfied(&self, board: &Graph, marked: &VertexSet) -> bool {
        match *self {
            WinCondition::KPath(k) => graph::contains_induced_k_path(board, marked, k),
            WinCondition::DominatingSet => graph::is_dominating(board, marked),
        }
    }

    pub fn validate(&self, board: &Graph) -> Result<()> {
        match *self {
            WinCondition::KPath(k) if k < 2 => Err(Error::InvalidParameter(format!(
                "path winning sets need k >= 2, got {k}"
            ))),
            WinCondition::KPath(k) if k > board.n() => Err(Error::InvalidParameter(format!(
                "path length {k} exceeds the {} board vertices",
                board.n()
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WinCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WinCondition::KPath(k) => write!(f, "path:{k}"),
            WinCondition::DominatingSet => f.write_str("dominating"),
        }
    }
}

/// A position in a Maker-Breaker game.
#[derive(Clone)]
pub struct GameState {
    board: Arc<Graph>,
    cond: WinCondition,
    marks: Vec<Mark>,
    first: Player,
    to_move: Player,
    history: Vec<usize>,
    status: Status,
    /// Unmarked vertices, ascending.
    free: Vec<usize>,
    maker_mask: Vec<bool>,
    maker_count: usize,
    /// Maker marks in each closed neighborhood (dominating-set condition).
    dominators: Vec<u32>,
    undominated: usize,
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameState")
            .field("cond", &self.cond)
            .field("to_move", &self.to_move)
            .field("history", &self.history)
            .field("status", &self.status)
            .finish()
    }
}

impl GameState {
    pub fn new(board: Arc<Graph>, cond: WinCondition, first: Player) -> Result<Self> {
        if board.n() == 0 {
            return Err(Error::InvalidParameter("board has no vertices".into()));
        }
        cond.validate(&board)?;
        let n = board.n();
        Ok(GameState {
            cond,
            marks: vec![Mark::Unmarked; n],
            first,
            to_move: first,
            history: Vec::with_capacity(n),
            status: Status::Ongoing,
            free: (0..n).collect(),
            maker_mask: vec![false; n],
            maker_count: 0,
            dominators: vec![0; n],
            undominated: n,
            board,
        })
    }

    pub fn board(&self) -> &Graph {
        &self.board
    }

    pub fn board_arc(&self) -> &Arc<Graph> {
        &self.board
    }

    pub fn condition(&self) -> WinCondition {
        self.cond
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn mark(&self, v: usize) -> Mark {
        self.marks[v]
    }

    pub fn first_player(&self) -> Player {
        self.first
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_terminal(&self) -> bool {
        self.status != Status::Ongoing
    }

    /// Unmarked vertices in ascending order; empty once the game is over.
    pub fn legal_moves(&self) -> &[usize] {
        if self.is_terminal() {
            &[]
        } else {
            &self.free
        }
    }

    /// The most recent vertex marked by `player`.
    pub fn last_move_of(&self, player: Player) -> Option<usize> {
        let target = Mark::from(player);
        self.history.iter().rev().copied().find(|&v| self.marks[v] == target)
    }

    pub fn marked_by(&self, player: Player) -> VertexSet {
        let target = Mark::from(player);
        VertexSet::from_mask(&self.marks.iter().map(|&m| m == target).collect::<Vec<_>>())
    }

    /// Count of Maker marks in each closed neighborhood.
    pub(crate) fn maker_dominators(&self) -> &[u32] {
        &self.dominators
    }

    /// Marks `v` for the player to move and recomputes the status.
    pub fn apply_move(&mut self, v: usize) -> Result<()> {
        if self.is_terminal() {
            return Err(Error::GameOver);
        }
        let n = self.board.n();
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if self.marks[v] != Mark::Unmarked {
            return Err(Error::Occupied(v));
        }
        let mover = self.to_move;
        self.marks[v] = mover.into();
        self.history.push(v);
        let pos = self.free.binary_search(&v).expect("unmarked vertex is free");
        self.free.remove(pos);
        self.to_move = mover.opponent();

        if mover == Player::Maker {
            self.maker_mask[v] = true;
            self.maker_count += 1;
            if self.record_maker_mark(v) {
                self.status = Status::MakerWin;
                return Ok(());
            }
        }
        if self.free.is_empty() {
            self.status = Status::BreakerWin;
        }
        Ok(())
    }

    /// Returns a copy of the state with `v` played.
    pub fn after(&self, v: usize) -> Result<GameState> {
        let mut next = self.clone();
        next.apply_move(v)?;
        Ok(next)
    }

    /// Updates the incremental win data for a new Maker mark and reports
    /// whether Maker now holds a winning set through `v`.
    fn record_maker_mark(&mut self, v: usize) -> bool {
        let board = Arc::clone(&self.board);
        for u in std::iter::once(v).chain(board.neighbors(v).iter().copied()) {
            if self.dominators[u] == 0 {
                self.undominated -= 1;
            }
            self.dominators[u] += 1;
        }
        match self.cond {
            WinCondition::DominatingSet => self.undominated == 0,
            WinCondition::KPath(k) => {
                self.maker_count >= k && graph::has_induced_path_through(&board, &self.maker_mask, v, k)
            }
        }
    }

    /// From-scratch evaluation of Maker's marks against the win condition.
    pub fn maker_satisfies(&self) -> bool {
        self.cond
            .is_satisfied(&self.board, &self.marked_by(Player::Maker))
    }
}

/// How a recorded game ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Maker,
    Breaker,
    Timeout,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Maker => "Maker",
            Outcome::Breaker => "Breaker",
            Outcome::Timeout => "Timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub winner: Outcome,
    pub first: Player,
    pub moves: Vec<usize>,
    pub move_count: usize,
    pub elapsed: Duration,
}

impl GameRecord {
    /// One `ply player vertex` line per move, then `result <winner>`.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        let mut player = self.first;
        for (i, v) in self.moves.iter().enumerate() {
            out.push_str(&format!("{} {player} {v}\n", i + 1));
            player = player.opponent();
        }
        out.push_str(&format!("result {}\n", self.winner));
        out
    }
}

/// Wall-clock limits for one game. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Budget {
    pub per_move: Option<Duration>,
    pub per_game: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    fn is_zero(&self) -> bool {
        self.per_move == Some(Duration::ZERO) || self.per_game == Some(Duration::ZERO)
    }
}

/// Anything that can pick a move for the player to move.
pub trait Policy {
    fn name(&self) -> String;

    fn choose(&mut self, state: &GameState, rng: &mut dyn RngCore) -> Result<usize>;
}

/// Plays one game between `maker` and `breaker` starting from an empty board.
///
/// Exceeding either budget ends the game as a timeout. A policy that returns
/// an illegal move aborts the game with an error naming the policy.
pub fn play_game(
    board: Arc<Graph>,
    cond: WinCondition,
    first: Player,
    maker: &mut dyn Policy,
    breaker: &mut dyn Policy,
    rng: &mut dyn RngCore,
    budget: Budget,
) -> Result<GameRecord> {
    let start = Instant::now();
    let mut state = GameState::new(board, cond, first)?;
    let finish = |state: &GameState, winner| GameRecord {
        winner,
        first,
        moves: state.history().to_vec(),
        move_count: state.history().len(),
        elapsed: start.elapsed(),
    };
    if budget.is_zero() {
        return Ok(finish(&state, Outcome::Timeout));
    }

    while !state.is_terminal() {
        let policy: &mut dyn Policy = match state.to_move() {
            Player::Maker => &mut *maker,
            Player::Breaker => &mut *breaker,
        };
        let move_start = Instant::now();
        let v = policy.choose(&state, rng)?;
        if let Err(e) = state.apply_move(v) {
            return Err(Error::IllegalPolicyMove {
                policy: policy.name(),
                vertex: v,
                reason: e.to_string(),
            });
        }
        let over_move = budget.per_move.is_some_and(|b| move_start.elapsed() > b);
        let over_game = budget.per_game.is_some_and(|b| start.elapsed() > b);
        if over_move || over_game {
            return Ok(finish(&state, Outcome::Timeout));
        }
    }
    let winner = match state.status() {
        Status::MakerWin => Outcome::Maker,
        _ => Outcome::Breaker,
    };
    Ok(finish(&state, winner))
}
