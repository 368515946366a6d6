//! Monte Carlo Tree Search with UCT selection.
//!
//! Traditional MCTS resolves every random choice uniformly. Setting
//! [`MctsConfig::micro`] gives the modified search: the micro-strategy breaks
//! UCT ties, weights expansion, and drives the searcher's own rollout moves.
//! Micro-strategy hooks only fire at nodes where the searching player is to
//! move; the opponent is modeled by [`MctsConfig::rollout_opponent`].

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use rand::{Rng, RngCore};
use rand::SeedableRng;

type SearchRng = rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameState, Player, Policy};
use crate::micro::{self, MicroStrategyId, WeightVector};

pub const DEFAULT_ITERATIONS: usize = 200;
pub const DEFAULT_EXPLORATION: f64 = SQRT_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MctsConfig {
    /// Iterations (one rollout each) per move decision.
    pub iterations: usize,
    /// Exploration constant of UCT.
    pub c: f64,
    /// Micro-strategy of the searching player; `None` is traditional MCTS.
    pub micro: Option<MicroStrategyId>,
    /// Policy for the opponent's rollout moves; `None` is uniform.
    pub rollout_opponent: Option<MicroStrategyId>,
}

impl Default for MctsConfig {
    fn default() -> Self {
        MctsConfig {
            iterations: DEFAULT_ITERATIONS,
            c: DEFAULT_EXPLORATION,
            micro: None,
            rollout_opponent: None,
        }
    }
}

impl MctsConfig {
    pub fn traditional(iterations: usize) -> Self {
        MctsConfig {
            iterations,
            ..Default::default()
        }
    }

    pub fn modified(iterations: usize, micro: MicroStrategyId) -> Self {
        MctsConfig {
            iterations,
            micro: Some(micro),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("MCTS needs at least one iteration".into()));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exploration constant must be finite and >= 0, got {}",
                self.c
            )));
        }
        Ok(())
    }
}

/// `w/n + c * sqrt(ln(total) / n)`.
pub fn uct(w: u32, n: u32, total: u32, c: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("UCT of an unvisited node".into()));
    }
    if total < n {
        return Err(Error::InvalidParameter(format!(
            "parent visits {total} below child visits {n}"
        )));
    }
    let n = f64::from(n);
    Ok(f64::from(w) / n + c * (f64::from(total).ln() / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChildStats {
    pub vertex: usize,
    pub visits: u32,
    pub wins: u32,
}

impl ChildStats {
    pub fn win_rate(&self) -> f64 {
        if self.visits == 0 {
            0.0
        } else {
            f64::from(self.wins) / f64::from(self.visits)
        }
    }
}

/// Result of one search: the chosen root move and per-child statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveChoice {
    pub chosen: usize,
    pub children: Vec<ChildStats>,
    /// Root visit count, equal to the iterations run.
    pub total: u32,
}

#[derive(Debug, Clone)]
struct Node {
    /// Move leading here; `usize::MAX` at the root.
    mv: usize,
    /// Player who made `mv`.
    mover: Option<Player>,
    children: Vec<usize>,
    /// Legal moves not yet expanded, ascending.
    unexpanded: Vec<usize>,
    wins: u32,
    visits: u32,
    /// Iterations whose selection path stopped at this node.
    ended: u32,
}

impl Node {
    fn new(mv: usize, mover: Option<Player>, state: &GameState) -> Self {
        Node {
            mv,
            mover,
            children: Vec::new(),
            unexpanded: state.legal_moves().to_vec(),
            wins: 0,
            visits: 0,
            ended: 0,
        }
    }
}

struct Search<'a> {
    root: &'a GameState,
    searcher: Player,
    c: f64,
    micro: Option<MicroStrategyId>,
    opponent: Option<MicroStrategyId>,
    nodes: Vec<Node>,
}

impl<'a> Search<'a> {
    fn new(root: &'a GameState, cfg: &MctsConfig) -> Result<Self> {
        cfg.validate()?;
        if root.is_terminal() {
            return Err(Error::GameOver);
        }
        let keep = |id: Option<MicroStrategyId>| id.filter(|m| !m.is_uniform());
        Ok(Search {
            root,
            searcher: root.to_move(),
            c: cfg.c,
            micro: keep(cfg.micro),
            opponent: keep(cfg.rollout_opponent),
            nodes: vec![Node::new(usize::MAX, None, root)],
        })
    }

    /// Micro weights at `state` restricted to `moves` (a subset of the legal
    /// moves), or `None` when the searcher's micro-strategy does not apply.
    fn micro_weights<R: Rng + ?Sized>(
        &self,
        state: &GameState,
        moves: &[usize],
        rng: &mut R,
    ) -> Option<Vec<f64>> {
        let id = self.micro.as_ref()?;
        if state.to_move() != self.searcher {
            return None;
        }
        let legal = state.legal_moves();
        let w = id.weights(state, state.to_move(), rng);
        Some(
            moves
                .iter()
                .map(|m| w.as_slice()[legal.binary_search(m).expect("move is legal")])
                .collect(),
        )
    }

    fn iterate<R: Rng + ?Sized>(&mut self, rng: &mut R, trace: Option<&mut String>) {
        let mut state = self.root.clone();
        let mut node = 0;
        let mut path = vec![0];
        while !state.is_terminal() {
            if !self.nodes[node].unexpanded.is_empty() {
                node = self.expand(node, &mut state, rng);
                path.push(node);
                break;
            }
            node = self.select(node, &state, rng);
            state
                .apply_move(self.nodes[node].mv)
                .expect("tree moves are legal");
            path.push(node);
        }
        self.nodes[node].ended += 1;
        let winner = self.rollout(state, rng);
        for &id in &path {
            let n = &mut self.nodes[id];
            n.visits += 1;
            if n.mover == Some(winner) {
                n.wins += 1;
            }
        }
        if let Some(out) = trace {
            let moves: Vec<String> = path[1..].iter().map(|&i| self.nodes[i].mv.to_string()).collect();
            let _ = writeln!(
                out,
                "iter {} path [{}] winner {winner}",
                self.nodes[0].visits,
                moves.join(" ")
            );
        }
    }

    fn expand<R: Rng + ?Sized>(&mut self, node: usize, state: &mut GameState, rng: &mut R) -> usize {
        let unexpanded = &self.nodes[node].unexpanded;
        let idx = match self.micro_weights(state, unexpanded, rng) {
            Some(w) => {
                let positions: Vec<usize> = (0..w.len()).collect();
                micro::sample_move(&WeightVector::from_raw(w), &positions, rng)
                    .expect("weights cover the unexpanded moves")
            }
            None => rng.gen_range(0..unexpanded.len()),
        };
        let mv = self.nodes[node].unexpanded.remove(idx);
        let mover = state.to_move();
        state.apply_move(mv).expect("unexpanded moves are legal");
        let child = self.nodes.len();
        self.nodes.push(Node::new(mv, Some(mover), state));
        self.nodes[node].children.push(child);
        child
    }

    /// The child maximizing UCT for the player to move at `node`.
    fn select<R: Rng + ?Sized>(&self, node: usize, state: &GameState, rng: &mut R) -> usize {
        let parent = &self.nodes[node];
        let scores: Vec<f64> = parent
            .children
            .iter()
            .map(|&ch| {
                let ch = &self.nodes[ch];
                uct(ch.wins, ch.visits, parent.visits, self.c).expect("expanded children are visited")
            })
            .collect();
        let pos = self.break_ties(&scores, &parent.children, state, rng);
        parent.children[pos]
    }

    /// Index of a maximal score; ties go to the micro-strategy, or to a
    /// uniform draw.
    fn break_ties<R: Rng + ?Sized>(
        &self,
        scores: &[f64],
        children: &[usize],
        state: &GameState,
        rng: &mut R,
    ) -> usize {
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..scores.len()).filter(|&i| scores[i] == best).collect();
        if tied.len() == 1 {
            return tied[0];
        }
        let moves: Vec<usize> = children.iter().map(|&ch| self.nodes[ch].mv).collect();
        let weights = self
            .micro_weights(state, &moves, rng)
            .unwrap_or_else(|| vec![1.0; moves.len()]);
        micro::argmax_tiebreak(&weights, &tied, rng)
    }

    fn rollout<R: Rng + ?Sized>(&self, mut state: GameState, rng: &mut R) -> Player {
        while !state.is_terminal() {
            let id = if state.to_move() == self.searcher {
                self.micro.as_ref()
            } else {
                self.opponent.as_ref()
            };
            let v = micro::pick_move(id, &state, rng);
            state.apply_move(v).expect("picked moves are legal");
        }
        state.status().winner().expect("terminal state has a winner")
    }

    /// Most visited root child; ties by win rate, then by tie-break.
    fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> MoveChoice {
        let root = &self.nodes[0];
        let children: Vec<ChildStats> = root
            .children
            .iter()
            .map(|&ch| {
                let n = &self.nodes[ch];
                ChildStats {
                    vertex: n.mv,
                    visits: n.visits,
                    wins: n.wins,
                }
            })
            .collect();
        let key = |s: &ChildStats| (s.visits, s.win_rate());
        let best = children.iter().map(key).fold((0, f64::NEG_INFINITY), |a, b| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 > a.1) {
                b
            } else {
                a
            }
        });
        let scores: Vec<f64> = children
            .iter()
            .map(|s| if key(s) == best { 1.0 } else { 0.0 })
            .collect();
        let pos = self.break_ties(&scores, &root.children, self.root, rng);
        MoveChoice {
            chosen: children[pos].vertex,
            children,
            total: root.visits,
        }
    }
}

/// Runs `cfg.iterations` MCTS iterations from `state` and picks a move.
pub fn search<R: Rng + ?Sized>(state: &GameState, cfg: &MctsConfig, rng: &mut R) -> Result<MoveChoice> {
    let mut s = Search::new(state, cfg)?;
    for _ in 0..cfg.iterations {
        s.iterate(rng, None);
    }
    Ok(s.choose(rng))
}

/// As [`search`], appending one `iter N path [..] winner P` line per
/// iteration to `trace`.
pub fn search_traced<R: Rng + ?Sized>(
    state: &GameState,
    cfg: &MctsConfig,
    rng: &mut R,
    trace: &mut String,
) -> Result<MoveChoice> {
    let mut s = Search::new(state, cfg)?;
    for _ in 0..cfg.iterations {
        s.iterate(rng, Some(trace));
    }
    Ok(s.choose(rng))
}

/// A policy that runs a fresh search every turn.
#[derive(Debug, Clone)]
pub struct MctsPolicy {
    cfg: MctsConfig,
    trace: Option<String>,
}

impl MctsPolicy {
    pub fn new(cfg: MctsConfig) -> Self {
        MctsPolicy { cfg, trace: None }
    }

    /// Records a search trace for every move, retrievable with
    /// [`MctsPolicy::take_trace`].
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(String::new());
        self
    }

    pub fn take_trace(&mut self) -> Option<String> {
        self.trace.as_mut().map(std::mem::take)
    }

    pub fn config(&self) -> &MctsConfig {
        &self.cfg
    }
}

impl Policy for MctsPolicy {
    fn name(&self) -> String {
        match &self.cfg.micro {
            Some(id) => format!("mcts[{id}]"),
            None => "mcts".into(),
        }
    }

    fn choose(&mut self, state: &GameState, rng: &mut dyn RngCore) -> Result<usize> {
        // One draw from the caller seeds a concrete generator for the search,
        // which keeps the hot loop free of dynamic dispatch.
        let mut rng = SearchRng::from_rng(rng).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let choice = match &mut self.trace {
            Some(trace) => {
                let _ = writeln!(trace, "move {} {}", state.history().len() + 1, state.to_move());
                search_traced(state, &self.cfg, &mut rng, trace)?
            }
            None => search(state, &self.cfg, &mut rng)?,
        };
        Ok(choice.chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::WinCondition;
    use crate::graph::grid_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn p3_dom() -> GameState {
        GameState::new(
            Arc::new(grid_graph(1, 3).unwrap()),
            WinCondition::DominatingSet,
            Player::Maker,
        )
        .unwrap()
    }

    #[test]
    fn uct_examples() {
        assert_eq!(uct(1, 1, 1, 0.0).unwrap(), 1.0);
        assert!((uct(0, 2, 4, 1.4142135).unwrap() - 1.17741).abs() < 1e-5);
        assert_eq!(uct(3, 4, 4, 0.0).unwrap(), 0.75);
        assert!(uct(0, 0, 4, 1.0).is_err());
        assert!(uct(0, 5, 4, 1.0).is_err());
    }

    #[test]
    fn single_iteration_bookkeeping() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let choice = search(&p3_dom(), &MctsConfig::traditional(1), &mut rng).unwrap();
        assert_eq!(choice.total, 1);
        assert_eq!(choice.children.len(), 1);
        assert_eq!(choice.children[0].visits, 1);
    }

    #[test]
    fn p3_choices_are_oracle_optimal() {
        // Every first move wins P3 domination for Maker (the ends win on the
        // next turn), so the center is optimal but not uniquely so.
        let root = p3_dom();
        let optimal = crate::oracle::best_move_set(&root).unwrap();
        assert_eq!(optimal.as_slice(), &[0, 1, 2]);
        let cfg = MctsConfig::traditional(500);
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let choice = search(&root, &cfg, &mut rng).unwrap();
            assert!(optimal.contains(choice.chosen));
            assert!(choice.children.iter().all(|c| c.wins == c.visits));
        }
    }

    #[test]
    fn finds_unique_winning_move() {
        // 1x6 path, 3-path condition; Maker {1, 2}, Breaker {3, 5}: only 0 wins.
        let mut root = GameState::new(
            Arc::new(grid_graph(1, 6).unwrap()),
            WinCondition::KPath(3),
            Player::Maker,
        )
        .unwrap();
        for v in [1, 5, 2, 3] {
            root.apply_move(v).unwrap();
        }
        let cfg = MctsConfig::traditional(500);
        let hits = (0..100)
            .filter(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                search(&root, &cfg, &mut rng).unwrap().chosen == 0
            })
            .count();
        assert!(hits >= 99, "{hits}");
    }

    #[test]
    fn pure_exploitation_follows_best_child() {
        let root = p3_dom();
        let cfg = MctsConfig {
            c: 0.0,
            ..MctsConfig::traditional(1)
        };
        let mut s = Search::new(&root, &cfg).unwrap();
        for (mv, wins) in [(0, 5), (1, 9), (2, 5)] {
            let state = root.after(mv).unwrap();
            let mut node = Node::new(mv, Some(Player::Maker), &state);
            node.wins = wins;
            node.visits = 10;
            s.nodes.push(node);
            let id = s.nodes.len() - 1;
            s.nodes[0].children.push(id);
        }
        s.nodes[0].unexpanded.clear();
        s.nodes[0].visits = 30;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            s.iterate(&mut rng, None);
        }
        let visits: Vec<u32> = s.nodes[0].children.iter().map(|&c| s.nodes[c].visits).collect();
        assert_eq!(visits, vec![10, 60, 10]);
    }

    /// Every node's visits equal the selection paths through it.
    fn check_conservation(s: &Search<'_>) {
        for node in &s.nodes {
            let through: u32 = node.children.iter().map(|&c| s.nodes[c].visits).sum();
            assert_eq!(node.visits, through + node.ended);
            assert!(node.wins <= node.visits);
        }
    }

    #[test]
    fn counts_are_conserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (rows, cols, cond) in [
            (2, 3, WinCondition::KPath(3)),
            (1, 5, WinCondition::DominatingSet),
            (2, 2, WinCondition::KPath(2)),
        ] {
            let root = GameState::new(Arc::new(grid_graph(rows, cols).unwrap()), cond, Player::Maker).unwrap();
            for micro in [None, Some("degree:high".parse().unwrap())] {
                let cfg = MctsConfig {
                    micro,
                    ..MctsConfig::traditional(1)
                };
                let mut s = Search::new(&root, &cfg).unwrap();
                for i in 1..=300 {
                    s.iterate(&mut rng, None);
                    assert_eq!(s.nodes[0].visits, i);
                    if i % 50 == 0 {
                        check_conservation(&s);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_terminal_root() {
        let mut s = p3_dom();
        s.apply_move(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(search(&s, &MctsConfig::default(), &mut rng).is_err());
    }

    #[test]
    fn uniform_micro_matches_traditional() {
        let root = GameState::new(
            Arc::new(grid_graph(3, 3).unwrap()),
            WinCondition::KPath(3),
            Player::Maker,
        )
        .unwrap();
        let plain = MctsConfig::traditional(100);
        let uniform = MctsConfig::modified(100, MicroStrategyId::uniform());
        for seed in 0..20 {
            let a = search(&root, &plain, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let b = search(&root, &uniform, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn policies_are_deterministic() {
        let root = p3_dom();
        let cfg = MctsConfig::modified(50, "degree:high".parse().unwrap());
        let mut a = MctsPolicy::new(cfg.clone());
        let mut b = MctsPolicy::new(cfg);
        let va = a.choose(&root, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let vb = b.choose(&root, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(va, vb);
    }

    #[test]
    fn trace_has_one_line_per_iteration() {
        let mut trace = String::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        search_traced(&p3_dom(), &MctsConfig::traditional(12), &mut rng, &mut trace).unwrap();
        assert_eq!(trace.lines().count(), 12);
        assert!(trace.lines().all(|l| l.starts_with("iter ")));
    }
}
