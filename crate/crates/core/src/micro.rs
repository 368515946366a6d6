//! Micro-strategies: cheap move-weighting functions usable on any
//! Maker-Breaker game, either as standalone players or as the source of
//! randomness inside MCTS.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{GameState, Mark, Player, WinCondition};
use crate::graph::{self, PathSearch};

/// Sample budget of the winning-set families when none is given.
pub const DEFAULT_WINSET_BUDGET: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform,
    Degree,
    UnmarkedDegree,
    OwnAdjacency,
    OppAdjacency,
    DistLastOwn,
    DistAllOwn,
    DistOpp,
    ComponentSize,
    OwnComponentSize,
    WinsetCount,
    WinsetBlock,
    Closeness,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Uniform,
        Family::Degree,
        Family::UnmarkedDegree,
        Family::OwnAdjacency,
        Family::OppAdjacency,
        Family::DistLastOwn,
        Family::DistAllOwn,
        Family::DistOpp,
        Family::ComponentSize,
        Family::OwnComponentSize,
        Family::WinsetCount,
        Family::WinsetBlock,
        Family::Closeness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Degree => "degree",
            Family::UnmarkedDegree => "unmarked_degree",
            Family::OwnAdjacency => "own_adjacency",
            Family::OppAdjacency => "opp_adjacency",
            Family::DistLastOwn => "dist_last_own",
            Family::DistAllOwn => "dist_all_own",
            Family::DistOpp => "dist_opp",
            Family::ComponentSize => "component_size",
            Family::OwnComponentSize => "own_component_size",
            Family::WinsetCount => "winset_count",
            Family::WinsetBlock => "winset_block",
            Family::Closeness => "closeness",
        }
    }

    /// What the raw score of a candidate vertex measures.
    pub fn describe(self) -> &'static str {
        match self {
            Family::Uniform => "every legal move equally likely",
            Family::Degree => "board degree of the candidate",
            Family::UnmarkedDegree => "unmarked neighbors of the candidate",
            Family::OwnAdjacency => "neighbors already marked by the mover",
            Family::OppAdjacency => "neighbors already marked by the opponent",
            Family::DistLastOwn => "hop distance to the mover's previous mark",
            Family::DistAllOwn => "hop distance to the nearest mark of the mover",
            Family::DistOpp => "hop distance to the nearest opponent mark",
            Family::ComponentSize => "size of the candidate's component among unmarked vertices",
            Family::OwnComponentSize => "size of the mover's component the candidate would join",
            Family::WinsetCount => "sampled open winning sets containing the candidate",
            Family::WinsetBlock => "sampled open winning sets containing the candidate, weighted by Maker progress",
            Family::Closeness => "harmonic closeness to all marked vertices",
        }
    }

    pub fn is_sampled(self) -> bool {
        matches!(self, Family::WinsetCount | Family::WinsetBlock)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    High,
    Low,
}

/// A micro-strategy identifier, serialized as `family:direction[:budget=B]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MicroStrategyId {
    family: Family,
    direction: Direction,
    budget: Option<u32>,
}

impl MicroStrategyId {
    pub fn uniform() -> Self {
        MicroStrategyId {
            family: Family::Uniform,
            direction: Direction::High,
            budget: None,
        }
    }

    pub fn new(family: Family, direction: Direction) -> Self {
        match family {
            Family::Uniform => Self::uniform(),
            f if f.is_sampled() => Self::with_budget(f, direction, DEFAULT_WINSET_BUDGET),
            _ => MicroStrategyId {
                family,
                direction,
                budget: None,
            },
        }
    }

    /// A sampled family with an explicit sample budget per evaluation.
    pub fn with_budget(family: Family, direction: Direction, budget: u32) -> Self {
        assert!(family.is_sampled() && budget > 0);
        MicroStrategyId {
            family,
            direction,
            budget: Some(budget),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn budget(&self) -> Option<u32> {
        self.budget
    }

    pub fn is_uniform(&self) -> bool {
        self.family == Family::Uniform
    }

    pub fn describe(&self) -> String {
        if self.is_uniform() {
            return self.family.describe().to_string();
        }
        let pref = match self.direction {
            Direction::High => "prefer high",
            Direction::Low => "prefer low",
        };
        match self.budget {
            Some(b) => format!("{pref} {} ({b} samples per evaluation)", self.family.describe()),
            None => format!("{pref} {}", self.family.describe()),
        }
    }

    /// Normalized move weights for `mover`, aligned with
    /// `state.legal_moves()`.
    pub fn weights<R: Rng + ?Sized>(
        &self,
        state: &GameState,
        mover: Player,
        rng: &mut R,
    ) -> WeightVector {
        let mut scores = self.raw_scores(state, mover, rng).values;
        if self.direction == Direction::Low && !self.is_uniform() {
            let max = scores.iter().copied().fold(0.0, f64::max);
            for s in &mut scores {
                *s = max - *s;
            }
        }
        WeightVector::from_scores(&scores)
    }

    /// Raw per-candidate scores, before direction and normalization.
    pub fn raw_scores<R: Rng + ?Sized>(
        &self,
        state: &GameState,
        mover: Player,
        rng: &mut R,
    ) -> RawScores {
        let legal = state.legal_moves();
        let board = state.board();
        let own = Mark::from(mover);
        let opp = Mark::from(mover.opponent());
        let count_nbrs = |v: usize, pred: &dyn Fn(Mark) -> bool| {
            board.neighbors(v).iter().filter(|&&w| pred(state.mark(w))).count() as f64
        };
        let flat = || RawScores {
            values: vec![1.0; legal.len()],
            samples: 0,
        };
        let plain = |values: Vec<f64>| RawScores { values, samples: 0 };

        match self.family {
            Family::Uniform => flat(),
            Family::Degree => plain(legal.iter().map(|&v| board.degree(v) as f64).collect()),
            Family::UnmarkedDegree => plain(
                legal
                    .iter()
                    .map(|&v| count_nbrs(v, &|m| m == Mark::Unmarked))
                    .collect(),
            ),
            Family::OwnAdjacency => {
                plain(legal.iter().map(|&v| count_nbrs(v, &|m| m == own)).collect())
            }
            Family::OppAdjacency => {
                plain(legal.iter().map(|&v| count_nbrs(v, &|m| m == opp)).collect())
            }
            Family::DistLastOwn => match state.last_move_of(mover) {
                Some(u) => plain(distance_scores(state, std::iter::once(u))),
                None => flat(),
            },
            Family::DistAllOwn | Family::DistOpp => {
                let target = if self.family == Family::DistAllOwn { own } else { opp };
                let sources: Vec<usize> = (0..board.n()).filter(|&u| state.mark(u) == target).collect();
                if sources.is_empty() {
                    flat()
                } else {
                    plain(distance_scores(state, sources))
                }
            }
            Family::ComponentSize => {
                let unmarked: Vec<bool> = state.marks().iter().map(|&m| m == Mark::Unmarked).collect();
                let (label, comps) = graph::component_labels(board, &unmarked);
                plain(legal.iter().map(|&v| comps[label[v]].len() as f64).collect())
            }
            Family::OwnComponentSize => {
                let mine: Vec<bool> = state.marks().iter().map(|&m| m == own).collect();
                let (label, comps) = graph::component_labels(board, &mine);
                let mut seen = Vec::new();
                plain(
                    legal
                        .iter()
                        .map(|&v| {
                            seen.clear();
                            let mut size = 1;
                            for &w in board.neighbors(v) {
                                let c = label[w];
                                if c != usize::MAX && !seen.contains(&c) {
                                    seen.push(c);
                                    size += comps[c].len();
                                }
                            }
                            size as f64
                        })
                        .collect(),
                )
            }
            Family::WinsetCount | Family::WinsetBlock => self.winset_scores(state, rng),
            Family::Closeness => {
                let marked: Vec<usize> =
                    (0..board.n()).filter(|&u| state.mark(u) != Mark::Unmarked).collect();
                if marked.is_empty() {
                    return flat();
                }
                let values = legal
                    .iter()
                    .map(|&v| {
                        marked
                            .iter()
                            .filter_map(|&u| board.hop_distance(u, v))
                            .map(|d| 1.0 / d as f64)
                            .sum()
                    })
                    .collect();
                plain(values)
            }
        }
    }

    /// Winning-set families. Path conditions draw `budget` random induced
    /// paths avoiding Breaker's marks and count how many pass through each
    /// candidate; dominating sets are scored exactly from Maker's coverage.
    fn winset_scores<R: Rng + ?Sized>(&self, state: &GameState, rng: &mut R) -> RawScores {
        let legal = state.legal_moves();
        let board = state.board();
        let block = self.family == Family::WinsetBlock;
        match state.condition() {
            WinCondition::DominatingSet => {
                let covered = state.maker_dominators();
                let closed = |v: usize| std::iter::once(v).chain(board.neighbors(v).iter().copied());
                let values = legal
                    .iter()
                    .map(|&v| {
                        closed(v)
                            .filter(|&u| covered[u] == 0)
                            .map(|u| {
                                if block {
                                    let open = closed(u)
                                        .filter(|&x| state.mark(x) == Mark::Unmarked)
                                        .count();
                                    1.0 / open as f64
                                } else {
                                    1.0
                                }
                            })
                            .sum()
                    })
                    .collect();
                RawScores { values, samples: 0 }
            }
            WinCondition::KPath(k) => {
                // A fixed number of random open paths per evaluation, each
                // credited to the unmarked candidates it contains.
                let budget = self.budget.unwrap_or(DEFAULT_WINSET_BUDGET) as usize;
                let open: Vec<bool> = state.marks().iter().map(|&m| m != Mark::Breaker).collect();
                let starts: Vec<usize> = (0..board.n()).filter(|&v| open[v]).collect();
                let mut slot = vec![usize::MAX; board.n()];
                for (i, &v) in legal.iter().enumerate() {
                    slot[v] = i;
                }
                let mut values = vec![0.0; legal.len()];
                let mut search = PathSearch::new(board, &open, k);
                for _ in 0..budget {
                    let start = starts[rng.gen_range(0..starts.len())];
                    let Some(path) = search.sample_through(start, rng) else {
                        continue;
                    };
                    let credit = if block {
                        1.0 + path.iter().filter(|&&u| state.mark(u) == Mark::Maker).count() as f64
                    } else {
                        1.0
                    };
                    for &u in path {
                        if slot[u] != usize::MAX {
                            values[slot[u]] += credit;
                        }
                    }
                }
                let samples = budget;
                RawScores { values, samples }
            }
        }
    }
}

/// Hop distances from each legal move to the nearest source. Unreachable
/// candidates score the vertex count, which exceeds every finite distance.
fn distance_scores(state: &GameState, sources: impl IntoIterator<Item = usize>) -> Vec<f64> {
    let board = state.board();
    let dist = graph::multi_source_distances(board, sources);
    state
        .legal_moves()
        .iter()
        .map(|&v| dist[v].unwrap_or(board.n()) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawScores {
    pub values: Vec<f64>,
    /// Random path samples drawn (sampled families only).
    pub samples: usize,
}

impl fmt::Display for MicroStrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_uniform() {
            return f.write_str("uniform");
        }
        let dir = match self.direction {
            Direction::High => "high",
            Direction::Low => "low",
        };
        write!(f, "{}:{dir}", self.family.name())?;
        if let Some(b) = self.budget {
            write!(f, ":budget={b}")?;
        }
        Ok(())
    }
}

impl FromStr for MicroStrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownStrategy(s.to_string());
        let mut parts = s.trim().split(':');
        let family: Family = parts.next().unwrap_or_default().parse().map_err(|_| unknown())?;
        let direction = match parts.next() {
            Some("high") => Direction::High,
            Some("low") => Direction::Low,
            None if family == Family::Uniform => Direction::High,
            _ => return Err(unknown()),
        };
        let mut budget = None;
        for param in parts {
            match param.split_once('=') {
                Some(("budget", value)) if family.is_sampled() && budget.is_none() => {
                    let b: u32 = value.parse().map_err(|_| unknown())?;
                    if b == 0 {
                        return Err(unknown());
                    }
                    budget = Some(b);
                }
                _ => return Err(unknown()),
            }
        }
        Ok(match (family, budget) {
            (f, Some(b)) => MicroStrategyId::with_budget(f, direction, b),
            (f, None) => MicroStrategyId::new(f, direction),
        })
    }
}

impl Serialize for MicroStrategyId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MicroStrategyId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The fixed, ordered list of micro-strategies used by the sweep presets:
/// `uniform`, both directions of every other family, then cheaper-budget
/// variants of the sampled families.
pub fn catalog() -> Vec<MicroStrategyId> {
    let mut ids = vec![MicroStrategyId::uniform()];
    for family in Family::ALL.into_iter().skip(1) {
        for direction in [Direction::High, Direction::Low] {
            ids.push(MicroStrategyId::new(family, direction));
        }
    }
    for budget in [16, 4] {
        for family in [Family::WinsetCount, Family::WinsetBlock] {
            ids.push(MicroStrategyId::with_budget(family, Direction::High, budget));
        }
    }
    ids
}

/// A probability vector over legal moves, aligned with
/// [`GameState::legal_moves`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Normalizes nonnegative scores and mixes in a floor of
    /// `1 / (100 * len)` so every move keeps positive probability. All-zero
    /// scores give the uniform vector.
    pub fn from_scores(scores: &[f64]) -> Self {
        let len = scores.len();
        if len == 0 {
            return WeightVector { weights: Vec::new() };
        }
        let total: f64 = scores.iter().sum();
        let floor = 1.0 / (100.0 * len as f64);
        let weights = scores
            .iter()
            .map(|&s| {
                let base = if total > 0.0 { s / total } else { 1.0 / len as f64 };
                (base + floor) / (1.0 + floor * len as f64)
            })
            .collect();
        WeightVector { weights }
    }

    pub fn uniform(len: usize) -> Self {
        WeightVector {
            weights: vec![1.0 / len as f64; len],
        }
    }

    /// Wraps raw weights as-is; they must be nonnegative.
    pub fn from_raw(weights: Vec<f64>) -> Self {
        WeightVector { weights }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Draws `legal[i]` with probability proportional to `w[i]`.
pub fn sample_move<R: Rng + ?Sized>(w: &WeightVector, legal: &[usize], rng: &mut R) -> Result<usize> {
    if w.len() != legal.len() || legal.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "weight vector of length {} does not match {} legal moves",
            w.len(),
            legal.len()
        )));
    }
    let total: f64 = w.as_slice().iter().sum();
    let mut target = rng.gen::<f64>() * total;
    for (i, &wi) in w.as_slice().iter().enumerate() {
        if target < wi {
            return Ok(legal[i]);
        }
        target -= wi;
    }
    // Rounding left a sliver past the last bucket.
    let last = w.as_slice().iter().rposition(|&x| x > 0.0).unwrap_or(legal.len() - 1);
    Ok(legal[last])
}

/// Among `candidates` (indices into `w`), returns one of maximal weight,
/// breaking exact ties uniformly at random. A lone candidate consumes no
/// randomness.
pub fn argmax_tiebreak<R: Rng + ?Sized>(w: &[f64], candidates: &[usize], rng: &mut R) -> usize {
    assert!(!candidates.is_empty(), "argmax over no candidates");
    if candidates.len() == 1 {
        return candidates[0];
    }
    let best = candidates.iter().map(|&i| w[i]).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = candidates.iter().copied().filter(|&i| w[i] == best).collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.gen_range(0..tied.len())]
    }
}

/// Picks a move for the player to move: uniformly when `micro` is unset or
/// uniform, otherwise by sampling the micro-strategy's weights.
pub fn pick_move<R: Rng + ?Sized>(
    micro: Option<&MicroStrategyId>,
    state: &GameState,
    rng: &mut R,
) -> usize {
    let legal = state.legal_moves();
    match micro {
        Some(id) if !id.is_uniform() => {
            let w = id.weights(state, state.to_move(), rng);
            sample_move(&w, legal, rng).expect("weights are aligned with legal moves")
        }
        _ => legal[rng.gen_range(0..legal.len())],
    }
}
