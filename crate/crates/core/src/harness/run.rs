//! Parallel sweep execution.
//!
//! Every game gets its own RNG keyed by (master seed, row, column, game), so
//! results do not depend on the worker count or on task scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{BoardPlan, ExperimentSpec, Mode, RowPlan, SweepValue};
use crate::error::{Error, Result};
use crate::game::{play_game, Budget, Outcome};
use crate::graph;
use crate::mcts::MctsConfig;
use crate::policy::StrategySpec;

const GRAPH_STREAM: u64 = 0x6772_6170_6873;

/// SplitMix64 folded over `parts`.
pub fn mix(parts: &[u64]) -> u64 {
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        state = state.wrapping_add(p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        state = z ^ (z >> 31);
    }
    state
}

/// Identity of one game in a sweep. The 256-bit RNG key is the concatenation
/// of the four fields, so distinct games never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellSeed {
    pub master: u64,
    pub row: u64,
    pub strategy: u64,
    pub game: u64,
}

impl CellSeed {
    pub fn key(&self) -> [u8; 32] {
        let mut key = [0u8; 32];
        for (chunk, part) in key
            .chunks_exact_mut(8)
            .zip([self.master, self.row, self.strategy, self.game])
        {
            chunk.copy_from_slice(&part.to_le_bytes());
        }
        key
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.key())
    }

    /// Seed of the random board for this game. It ignores the strategy
    /// column, so every column of a row faces the same sequence of boards.
    pub fn graph_seed(&self) -> u64 {
        mix(&[self.master, GRAPH_STREAM, self.row, self.game])
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub maker_wins: u64,
    pub breaker_wins: u64,
    pub timeouts: u64,
    pub attempted: u64,
    /// Why the cell could not be played, if it could not.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invalid: Option<String>,
}

impl CellResult {
    pub fn completed(&self) -> u64 {
        self.attempted - self.timeouts
    }

    /// Maker wins as a percentage of completed games.
    pub fn percent(&self) -> Option<f64> {
        if self.invalid.is_some() || self.completed() == 0 {
            None
        } else {
            Some(self.maker_wins as f64 / self.completed() as f64 * 100.0)
        }
    }

    fn record(&mut self, outcome: Outcome) {
        self.attempted += 1;
        match outcome {
            Outcome::Maker => self.maker_wins += 1,
            Outcome::Breaker => self.breaker_wins += 1,
            Outcome::Timeout => self.timeouts += 1,
        }
    }
}

/// Per-cell outcome counts, indexed `[row][column]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub name: String,
    pub parameter: String,
    pub values: Vec<SweepValue>,
    pub strategies: Vec<String>,
    pub master_seed: u64,
    pub games_per_cell: usize,
    pub cells: Vec<Vec<CellResult>>,
}

impl SweepResult {
    /// Maker win percentages; `NaN` where a cell has no completed games.
    pub fn percent_matrix(&self) -> Vec<Vec<f64>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| c.percent().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    pub fn invalid_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.invalid.is_some()).count()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl RunOptions {
    pub fn with_workers(workers: usize) -> Self {
        RunOptions {
            workers: workers.max(1),
        }
    }
}

/// Maker and Breaker strategies for one column of a row.
pub fn column_strategies(spec: &ExperimentSpec, plan: &RowPlan, column: usize) -> (StrategySpec, StrategySpec) {
    let micro = column.checked_sub(1).map(|i| spec.modified[i]);
    match plan.mode {
        Mode::Mcts => {
            let maker = MctsConfig {
                iterations: plan.maker_iterations,
                c: spec.c,
                micro,
                rollout_opponent: None,
            };
            let breaker = MctsConfig {
                iterations: plan.breaker_iterations,
                c: spec.c,
                micro: None,
                rollout_opponent: None,
            };
            (StrategySpec::Mcts(maker), StrategySpec::Mcts(breaker))
        }
        Mode::Micro => {
            let maker = micro.map_or(StrategySpec::Random, StrategySpec::Micro);
            (maker, StrategySpec::Random)
        }
    }
}

fn budget(spec: &ExperimentSpec) -> Budget {
    Budget {
        per_move: Some(Duration::from_secs_f64(spec.move_timeout_secs)),
        per_game: Some(Duration::from_secs_f64(spec.game_timeout_secs)),
    }
}

#[derive(Debug, Clone, Copy)]
struct Task {
    row: usize,
    column: usize,
    game: usize,
}

fn play_task(spec: &ExperimentSpec, plan: &RowPlan, task: Task, deadline: Option<Instant>) -> Result<Outcome> {
    if deadline.is_some_and(|d| Instant::now() >= d) {
        return Ok(Outcome::Timeout);
    }
    let seed = CellSeed {
        master: spec.master_seed,
        row: task.row as u64,
        strategy: task.column as u64,
        game: task.game as u64,
    };
    let board = match &plan.board {
        BoardPlan::Fixed(g) => Arc::clone(g),
        BoardPlan::Random { n, p } => Arc::new(graph::er_graph(*n, *p, seed.graph_seed())?),
    };
    let (maker, breaker) = column_strategies(spec, plan, task.column);
    let mut rng = seed.rng();
    let record = play_game(
        board,
        plan.condition,
        spec.first,
        maker.build().as_mut(),
        breaker.build().as_mut(),
        &mut rng,
        budget(spec),
    )?;
    Ok(record.winner)
}

/// Plays every game of the sweep. Rows that cannot be played are marked
/// invalid instead of aborting the run.
pub fn run_sweep(spec: &ExperimentSpec, opts: &RunOptions) -> Result<SweepResult> {
    spec.validate()?;
    let columns = spec.strategy_labels();
    let mut cells = vec![vec![CellResult::default(); columns.len()]; spec.sweep.values.len()];
    let plans: Vec<Option<RowPlan>> = (0..spec.sweep.values.len())
        .map(|row| match spec.plan_row(row) {
            Ok(plan) => Some(plan),
            Err(e) => {
                log::warn!("{}: row {} skipped: {e}", spec.name, spec.sweep.values[row]);
                for cell in &mut cells[row] {
                    cell.invalid = Some(e.to_string());
                }
                None
            }
        })
        .collect();

    let tasks: Vec<Task> = plans
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_some())
        .flat_map(|(row, _)| {
            (0..columns.len())
                .flat_map(move |column| (0..spec.games_per_cell).map(move |game| Task { row, column, game }))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let deadline = spec
        .total_timeout_secs
        .map(|s| Instant::now() + Duration::from_secs_f64(s));
    let done = AtomicUsize::new(0);
    let report_every = (tasks.len() / 20).max(1);
    let outcomes: Vec<Result<Outcome>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&task| {
                let plan = plans[task.row].as_ref().expect("tasks only cover planned rows");
                let out = play_task(spec, plan, task, deadline);
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if finished % report_every == 0 {
                    log::info!("{}: {finished}/{} games", spec.name, tasks.len());
                }
                out
            })
            .collect()
    });

    for (task, outcome) in tasks.iter().zip(outcomes) {
        let cell = &mut cells[task.row][task.column];
        match outcome {
            Ok(o) => cell.record(o),
            Err(e) => {
                cell.attempted += 1;
                cell.invalid.get_or_insert_with(|| e.to_string());
            }
        }
    }

    Ok(SweepResult {
        name: spec.name.clone(),
        parameter: spec.sweep.parameter.clone(),
        values: spec.sweep.values.clone(),
        strategies: columns,
        master_seed: spec.master_seed,
        games_per_cell: spec.games_per_cell,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, WinCondition};
    use crate::graph::grid_graph;
    use crate::micro::MicroStrategyId;
    use std::collections::HashSet;

    fn tiny(extra: &str, cols: &str, cond: &str) -> ExperimentSpec {
        let defaults: String = [
            "games_per_cell = 100",
            "master_seed = 7",
            "iterations = 20",
            r#"modified = ["degree:high", "dist_opp:low"]"#,
        ]
        .iter()
        .filter(|line| !extra.contains(line.split(' ').next().unwrap()))
        .map(|line| format!("{line}\n"))
        .collect();
        ExperimentSpec::from_toml(&format!(
            r#"
name = "tiny"
{defaults}{extra}
[board]
family = "grid"
rows = 1
cols = "k"
[condition]
{cond}
[sweep]
parameter = "k"
values = [{cols}]
"#
        ))
        .unwrap()
    }

    #[test]
    fn single_cell_board_is_always_maker() {
        let spec = tiny("", "1", "kind = \"dominating\"");
        let r = run_sweep(&spec, &RunOptions::with_workers(2)).unwrap();
        for cell in &r.cells[0] {
            assert_eq!((cell.maker_wins, cell.attempted), (100, 100));
            assert_eq!(cell.percent(), Some(100.0));
        }
    }

    #[test]
    fn random_play_on_domino_never_makes_two_path() {
        let spec = tiny("mode = \"micro\"\nmodified = [\"uniform\"]\ngames_per_cell = 10000", "2", "kind = \"path\"\nk = 2");
        let r = run_sweep(&spec, &RunOptions::with_workers(1)).unwrap();
        let base = &r.cells[0][0];
        assert_eq!(base.attempted, 10_000);
        assert_eq!(base.maker_wins, 0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = tiny("", "3, 4", "kind = \"path\"\nk = 3");
        let one = run_sweep(&spec, &RunOptions::with_workers(1)).unwrap();
        let eight = run_sweep(&spec, &RunOptions::with_workers(8)).unwrap();
        assert_eq!(one, eight);
    }

    #[test]
    fn accounting_and_invalid_rows() {
        let spec = tiny("games_per_cell = 30", "1, 2, 3", "kind = \"path\"\nk = 2");
        let r = run_sweep(&spec, &RunOptions::with_workers(2)).unwrap();
        assert!(r.cells[0].iter().all(|c| c.invalid.is_some() && c.attempted == 0));
        for row in &r.cells[1..] {
            for c in row {
                assert!(c.invalid.is_none());
                assert_eq!(c.maker_wins + c.breaker_wins + c.timeouts, 30);
                assert_eq!(c.completed(), c.attempted - c.timeouts);
            }
        }
        assert_eq!(r.invalid_cells(), 3);
    }

    #[test]
    fn exhausted_total_budget_records_timeouts() {
        let spec = tiny("total_timeout_secs = 0.0\ngames_per_cell = 5", "3", "kind = \"dominating\"");
        let r = run_sweep(&spec, &RunOptions::with_workers(1)).unwrap();
        for c in &r.cells[0] {
            assert_eq!((c.timeouts, c.attempted), (5, 5));
            assert_eq!(c.percent(), None);
        }
    }

    #[test]
    fn cell_seeds_are_distinct() {
        let mut keys = HashSet::new();
        for row in 0..5 {
            for strategy in 0..30 {
                for game in 0..50 {
                    let seed = CellSeed { master: 1, row, strategy, game };
                    assert!(keys.insert(seed.key()));
                }
            }
        }
        let a = CellSeed { master: 1, row: 2, strategy: 0, game: 9 };
        let b = CellSeed { strategy: 5, ..a };
        assert_eq!(a.graph_seed(), b.graph_seed());
        assert_ne!(a.graph_seed(), CellSeed { game: 10, ..a }.graph_seed());
    }

    #[test]
    fn seat_swap_is_complementary() {
        // Identical strategies A and B on the same seeds: every game of A as
        // Maker against B is replayed exactly with the seats swapped, so
        // A-as-Maker wins equal the games B loses as Breaker.
        let board = Arc::new(grid_graph(3, 3).unwrap());
        let a = StrategySpec::Mcts(MctsConfig::modified(15, MicroStrategyId::new(
            crate::micro::Family::Degree,
            crate::micro::Direction::High,
        )));
        let b = a.clone();
        let mut a_maker_wins = 0;
        let mut b_breaker_losses = 0;
        let mut swapped_maker_wins = 0;
        for game in 0..40 {
            let seed = CellSeed { master: 3, row: 0, strategy: 0, game };
            let play = |maker: &StrategySpec, breaker: &StrategySpec| {
                play_game(
                    Arc::clone(&board),
                    WinCondition::KPath(3),
                    Player::Maker,
                    maker.build().as_mut(),
                    breaker.build().as_mut(),
                    &mut seed.rng(),
                    Budget::unlimited(),
                )
                .unwrap()
                .winner
            };
            let direct = play(&a, &b);
            if direct == Outcome::Maker {
                a_maker_wins += 1;
            }
            if matches!(direct, Outcome::Maker) {
                b_breaker_losses += 1;
            }
            let swapped = play(&b, &a);
            assert_eq!(swapped, direct);
            if swapped == Outcome::Maker {
                swapped_maker_wins += 1;
            }
        }
        assert_eq!(a_maker_wins, b_breaker_losses);
        assert_eq!(a_maker_wins, swapped_maker_wins);
    }
}
