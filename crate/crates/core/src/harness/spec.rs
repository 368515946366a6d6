//! Experiment specifications: what board, which winning sets, which strategy
//! columns, and the one game parameter swept across rows.
//!
//! Specs are TOML. Any field marked as sweepable takes either a literal or the
//! name of the sweep parameter, e.g. `cols = "k"`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Player, WinCondition};
use crate::graph::{self, Graph};
use crate::mcts::{DEFAULT_EXPLORATION, DEFAULT_ITERATIONS};
use crate::micro::{self, MicroStrategyId};

/// A field that is either fixed or bound to the sweep parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Setting<T> {
    Fixed(T),
    Swept(String),
}

impl<T> Setting<T> {
    fn swept_name(&self) -> Option<&str> {
        match self {
            Setting::Swept(name) => Some(name),
            Setting::Fixed(_) => None,
        }
    }
}

impl<T: Clone + FromSweep> Setting<T> {
    fn resolve(&self, value: &SweepValue) -> Result<T> {
        match self {
            Setting::Fixed(v) => Ok(v.clone()),
            Setting::Swept(_) => T::from_sweep(value),
        }
    }
}

/// Conversion from a sweep value to a concrete field type.
pub trait FromSweep: Sized {
    fn from_sweep(value: &SweepValue) -> Result<Self>;
}

impl FromSweep for usize {
    fn from_sweep(value: &SweepValue) -> Result<Self> {
        match value {
            SweepValue::Number(x) if *x >= 0.0 && x.fract() == 0.0 => Ok(*x as usize),
            other => Err(Error::Spec(format!("sweep value {other} is not a nonnegative integer"))),
        }
    }
}

impl FromSweep for f64 {
    fn from_sweep(value: &SweepValue) -> Result<Self> {
        match value {
            SweepValue::Number(x) => Ok(*x),
            other => Err(Error::Spec(format!("sweep value {other} is not a number"))),
        }
    }
}

impl FromSweep for Mode {
    fn from_sweep(value: &SweepValue) -> Result<Self> {
        match value {
            SweepValue::Text(t) if t == "micro" => Ok(Mode::Micro),
            SweepValue::Text(t) if t == "mcts" => Ok(Mode::Mcts),
            other => Err(Error::Spec(format!("sweep value {other} is not `micro` or `mcts`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for SweepValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepValue::Number(x) => write!(f, "{x}"),
            SweepValue::Text(t) => f.write_str(t),
        }
    }
}

/// How strategies are wrapped in a cell.
///
/// * `mcts`: Maker plays (modified) MCTS, Breaker plays traditional MCTS.
/// * `micro`: Maker plays the bare micro-strategy, Breaker plays uniformly at
///   random; the baseline column is a uniformly random Maker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Mcts,
    Micro,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoardSpec {
    Grid {
        rows: Setting<usize>,
        cols: Setting<usize>,
    },
    Er {
        n: Setting<usize>,
        p: Setting<f64>,
        #[serde(default)]
        graph_seed: u64,
        /// One graph per row instead of a fresh draw per game.
        #[serde(default)]
        fixed_graph: bool,
    },
    FlowerSnark {
        t: Setting<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConditionSpec {
    Dominating,
    Path { k: Setting<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<SweepValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakerSpec {
    /// Defaults to the Maker's iteration setting.
    #[serde(default)]
    pub iterations: Option<Setting<usize>>,
}

fn default_games() -> usize {
    10_000
}
fn default_iterations() -> Setting<usize> {
    Setting::Fixed(DEFAULT_ITERATIONS)
}
fn default_c() -> f64 {
    DEFAULT_EXPLORATION
}
fn default_mode() -> Setting<Mode> {
    Setting::Fixed(Mode::Mcts)
}
fn default_first() -> Player {
    Player::Maker
}
fn default_move_timeout() -> f64 {
    5.0
}
fn default_game_timeout() -> f64 {
    120.0
}
fn default_modified() -> Vec<MicroStrategyId> {
    micro::catalog()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub board: BoardSpec,
    pub condition: ConditionSpec,
    pub sweep: Sweep,
    #[serde(default = "default_mode")]
    pub mode: Setting<Mode>,
    /// Micro-strategies of the modified columns; the traditional baseline
    /// column always comes first.
    #[serde(default = "default_modified")]
    pub modified: Vec<MicroStrategyId>,
    #[serde(default = "default_iterations")]
    pub iterations: Setting<usize>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub breaker: Option<BreakerSpec>,
    #[serde(default = "default_games")]
    pub games_per_cell: usize,
    #[serde(default = "default_move_timeout")]
    pub move_timeout_secs: f64,
    #[serde(default = "default_game_timeout")]
    pub game_timeout_secs: f64,
    /// Wall-clock cap for the whole sweep; games not started in time count
    /// as timeouts.
    #[serde(default)]
    pub total_timeout_secs: Option<f64>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_first")]
    pub first: Player,
}

/// Everything needed to play the games of one row.
#[derive(Debug, Clone)]
pub struct RowPlan {
    pub board: BoardPlan,
    pub condition: WinCondition,
    pub mode: Mode,
    pub maker_iterations: usize,
    pub breaker_iterations: usize,
}

#[derive(Debug, Clone)]
pub enum BoardPlan {
    Fixed(Arc<Graph>),
    /// A fresh `G(n, p)` per game.
    Random { n: usize, p: f64 },
}

impl BoardPlan {
    pub fn vertex_count(&self) -> usize {
        match self {
            BoardPlan::Fixed(g) => g.n(),
            BoardPlan::Random { n, .. } => *n,
        }
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("specs serialize")
    }

    /// Column labels: `baseline` then each modified micro-strategy.
    pub fn strategy_labels(&self) -> Vec<String> {
        std::iter::once("baseline".to_string())
            .chain(self.modified.iter().map(ToString::to_string))
            .collect()
    }

    fn sweepable_fields(&self) -> Vec<(&'static str, Option<&str>)> {
        let mut fields = Vec::new();
        match &self.board {
            BoardSpec::Grid { rows, cols } => {
                fields.push(("board.rows", rows.swept_name()));
                fields.push(("board.cols", cols.swept_name()));
            }
            BoardSpec::Er { n, p, .. } => {
                fields.push(("board.n", n.swept_name()));
                fields.push(("board.p", p.swept_name()));
            }
            BoardSpec::FlowerSnark { t } => fields.push(("board.t", t.swept_name())),
        }
        if let ConditionSpec::Path { k } = &self.condition {
            fields.push(("condition.k", k.swept_name()));
        }
        fields.push(("mode", self.mode.swept_name()));
        fields.push(("iterations", self.iterations.swept_name()));
        if let Some(it) = self.breaker.as_ref().and_then(|b| b.iterations.as_ref()) {
            fields.push(("breaker.iterations", it.swept_name()));
        }
        fields
    }

    /// Checks the invariants that do not depend on a particular row:
    /// exactly one swept parameter, a nonempty sweep, sane counts and budgets.
    pub fn validate(&self) -> Result<()> {
        let param = &self.sweep.parameter;
        let mut used = false;
        for (field, name) in self.sweepable_fields() {
            match name {
                Some(n) if n == param => used = true,
                Some(n) => {
                    return Err(Error::Spec(format!(
                        "{field}: refers to sweep parameter `{n}` but the experiment sweeps `{param}`; exactly one swept parameter is allowed"
                    )))
                }
                None => {}
            }
        }
        if !used {
            return Err(Error::Spec(format!(
                "sweep: no field refers to the sweep parameter `{param}`"
            )));
        }
        if self.sweep.values.is_empty() {
            return Err(Error::Spec("sweep.values: empty".into()));
        }
        if self.games_per_cell == 0 {
            return Err(Error::Spec("games_per_cell: must be positive".into()));
        }
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::Spec(format!("c: must be finite and >= 0, got {}", self.c)));
        }
        for (field, secs) in [
            ("move_timeout_secs", Some(self.move_timeout_secs)),
            ("game_timeout_secs", Some(self.game_timeout_secs)),
            ("total_timeout_secs", self.total_timeout_secs),
        ] {
            if let Some(s) = secs {
                if !(s >= 0.0 && s.is_finite()) {
                    return Err(Error::Spec(format!("{field}: must be finite and >= 0, got {s}")));
                }
            }
        }
        Ok(())
    }

    /// Resolves the settings for row `index`. Errors describe why the row
    /// cannot be played (e.g. a path longer than the board).
    pub fn plan_row(&self, index: usize) -> Result<RowPlan> {
        let value = &self.sweep.values[index];
        let board = match &self.board {
            BoardSpec::Grid { rows, cols } => BoardPlan::Fixed(Arc::new(graph::grid_graph(
                rows.resolve(value)?,
                cols.resolve(value)?,
            )?)),
            BoardSpec::Er {
                n,
                p,
                graph_seed,
                fixed_graph,
            } => {
                let (n, p) = (n.resolve(value)?, p.resolve(value)?);
                // Validates (n, p) even when graphs are drawn per game.
                let g = graph::er_graph(n, p, super::run::mix(&[*graph_seed, index as u64]))?;
                if *fixed_graph {
                    BoardPlan::Fixed(Arc::new(g))
                } else {
                    BoardPlan::Random { n, p }
                }
            }
            BoardSpec::FlowerSnark { t } => {
                BoardPlan::Fixed(Arc::new(graph::flower_snark(t.resolve(value)?)?))
            }
        };
        let condition = match &self.condition {
            ConditionSpec::Dominating => WinCondition::DominatingSet,
            ConditionSpec::Path { k } => WinCondition::KPath(k.resolve(value)?),
        };
        if let WinCondition::KPath(k) = condition {
            let n = board.vertex_count();
            if k < 2 || k > n {
                return Err(Error::Spec(format!(
                    "path length {k} is not playable on {n} vertices"
                )));
            }
        }
        let maker_iterations = self.iterations.resolve(value)?;
        let breaker_iterations = match self.breaker.as_ref().and_then(|b| b.iterations.as_ref()) {
            Some(it) => it.resolve(value)?,
            None => maker_iterations,
        };
        if maker_iterations == 0 || breaker_iterations == 0 {
            return Err(Error::Spec("iterations: must be positive".into()));
        }
        Ok(RowPlan {
            board,
            condition,
            mode: self.mode.resolve(value)?,
            maker_iterations,
            breaker_iterations,
        })
    }
}

/// Names of the shipped presets, one per studied game family.
pub const PRESET_NAMES: [&str; 7] = [
    "p5xk_dom",
    "kxk_path7",
    "er12_dom",
    "p6x6_pathk",
    "er15_pathk",
    "snark_rollouts",
    "p5x7_micro_vs_mcts",
];

fn preset_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "p5xk_dom" => include_str!("../../presets/p5xk_dom.toml"),
        "kxk_path7" => include_str!("../../presets/kxk_path7.toml"),
        "er12_dom" => include_str!("../../presets/er12_dom.toml"),
        "p6x6_pathk" => include_str!("../../presets/p6x6_pathk.toml"),
        "er15_pathk" => include_str!("../../presets/er15_pathk.toml"),
        "snark_rollouts" => include_str!("../../presets/snark_rollouts.toml"),
        "p5x7_micro_vs_mcts" => include_str!("../../presets/p5x7_micro_vs_mcts.toml"),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let text = preset_source(name).ok_or_else(|| {
        Error::Spec(format!(
            "unknown preset `{name}`; available: {}",
            PRESET_NAMES.join(", ")
        ))
    })?;
    ExperimentSpec::from_toml(text)
}

/// Reads a spec file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentSpec::from_toml(&text)
}
