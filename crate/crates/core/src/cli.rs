//! The `mbgame` command line.
//!
//! Exit codes: `play` returns 0, 1 or 2 for a Maker win, Breaker win or
//! timeout. Otherwise 0 is success, 64 a usage or input error, 70 a failed
//! run and 74 an I/O error.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{play_game, Budget, GameState, Outcome, Player, Policy, WinCondition};
use crate::graph::{er_graph, flower_snark, grid_graph, Graph};
use crate::harness::output::{self, write_atomic};
use crate::harness::spec::{load_spec, preset, ExperimentSpec, Setting};
use crate::harness::{run_sweep, RunOptions};
use crate::mcts::MctsPolicy;
use crate::micro::catalog;
use crate::oracle;
use crate::policy::StrategySpec;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_FAILURE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "mbgame", version, about = "Maker-Breaker games on graphs: play, solve and sweep")]
pub struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a board as an edge list.
    Board(BoardCmd),
    /// Play one game and print its transcript.
    Play(PlayCmd),
    /// Solve a small position exactly.
    Solve(SolveCmd),
    /// Run an experiment sweep and write its tables.
    Sweep(SweepCmd),
    /// Rank the strategies of a written sweep table, row by row.
    Rank(RankCmd),
    /// List the micro-strategy catalog.
    Catalog,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct BoardArgs {
    /// Grid graph, e.g. `5x3`.
    #[arg(long, value_name = "RxC", value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Erdős–Rényi graph drawn with --seed, e.g. `12,0.3`.
    #[arg(long, value_name = "N,P", value_parser = parse_er)]
    er: Option<(usize, f64)>,
    /// Flower Snark J_T on 4T vertices.
    #[arg(long, value_name = "T")]
    flower_snark: Option<usize>,
    /// Edge-list file.
    #[arg(long, value_name = "FILE")]
    board: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ConditionArgs {
    /// Maker wins with an induced path on K vertices.
    #[arg(long, value_name = "K")]
    path: Option<usize>,
    /// Maker wins with a dominating set.
    #[arg(long)]
    dom: bool,
}

impl ConditionArgs {
    fn condition(&self) -> WinCondition {
        match self.path {
            Some(k) => WinCondition::KPath(k),
            None => WinCondition::DominatingSet,
        }
    }
}

#[derive(Debug, Args)]
struct BoardCmd {
    #[command(flatten)]
    board: BoardArgs,
    /// Seed for random boards.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlayCmd {
    #[command(flatten)]
    board: BoardArgs,
    #[command(flatten)]
    condition: ConditionArgs,
    /// `random`, `micro:ID` or `mcts[:micro=ID,iters=N,c=X,opp=ID]`.
    #[arg(long, default_value = "mcts")]
    maker: String,
    #[arg(long, default_value = "mcts")]
    breaker: String,
    #[arg(long, default_value = "maker")]
    first: Player,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds per move.
    #[arg(long)]
    move_timeout: Option<f64>,
    /// Seconds per game.
    #[arg(long)]
    game_timeout: Option<f64>,
    /// Dump MCTS search traces to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Args)]
struct SolveCmd {
    #[command(flatten)]
    board: BoardArgs,
    #[command(flatten)]
    condition: ConditionArgs,
    #[arg(long, default_value = "maker")]
    first: Player,
    /// Board seed for --er.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Moves already played, alternating from --first, e.g. `1,5,2`.
    #[arg(long, value_delimiter = ',')]
    moves: Vec<usize>,
}

#[derive(Debug, Args)]
struct SweepCmd {
    /// A built-in experiment.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    preset: Option<String>,
    /// An experiment spec in TOML.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Games per cell.
    #[arg(long)]
    games: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// MCTS iterations per move, unless the sweep varies them.
    #[arg(long)]
    iterations: Option<usize>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Seconds per move
    #[arg(long)]
    move_timeout: Option<f64>,
    /// Seconds per game
    #[arg(long)]
    game_timeout: Option<f64>,
    /// Also write the table relative to each row's best strategy.
    #[arg(long)]
    relative: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RankCmd {
    /// A CSV written by `sweep`; its `.meta.json` sidecar supplies names.
    table: PathBuf,
    /// Write the relative table to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (r, c) = s.split_once('x').ok_or("expected RxC, e.g. 5x3")?;
    Ok((
        r.trim().parse().map_err(|e| format!("rows: {e}"))?,
        c.trim().parse().map_err(|e| format!("cols: {e}"))?,
    ))
}

fn parse_er(s: &str) -> std::result::Result<(usize, f64), String> {
    let (n, p) = s.split_once(',').ok_or("expected N,P, e.g. 12,0.3")?;
    Ok((
        n.trim().parse().map_err(|e| format!("n: {e}"))?,
        p.trim().parse().map_err(|e| format!("p: {e}"))?,
    ))
}

fn build_board(args: &BoardArgs, seed: u64) -> Result<Graph> {
    if let Some((r, c)) = args.grid {
        grid_graph(r, c)
    } else if let Some((n, p)) = args.er {
        er_graph(n, p, seed)
    } else if let Some(t) = args.flower_snark {
        flower_snark(t)
    } else if let Some(path) = &args.board {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::from_edge_list(&text)
    } else {
        unreachable!("clap requires one board flag")
    }
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>> {
    s.map(|x| {
        Duration::try_from_secs_f64(x).map_err(|_| Error::InvalidParameter(format!("bad timeout {x}")))
    })
    .transpose()
}

fn parse_strategy(s: &str) -> Result<StrategySpec> {
    s.parse().map_err(|e| {
        let ids: Vec<String> = catalog().iter().map(ToString::to_string).collect();
        Error::Parse(format!(
            "{e}\nstrategies are `random`, `micro:ID` or `mcts[:micro=ID,iters=N,c=X,opp=ID]`; valid IDs:\n  {}",
            ids.join("\n  ")
        ))
    })
}

/// A player seat; MCTS players keep their trace when asked to.
enum Seat {
    Traced(MctsPolicy),
    Plain(Box<dyn Policy + Send>),
}

impl Seat {
    fn new(spec: &StrategySpec, trace: bool) -> Self {
        match spec {
            StrategySpec::Mcts(cfg) if trace => Seat::Traced(MctsPolicy::new(cfg.clone()).with_trace()),
            _ => Seat::Plain(spec.build()),
        }
    }

    fn policy(&mut self) -> &mut dyn Policy {
        match self {
            Seat::Traced(p) => p,
            Seat::Plain(p) => p.as_mut(),
        }
    }

    fn trace(&mut self) -> Option<String> {
        match self {
            Seat::Traced(p) => p.take_trace(),
            Seat::Plain(_) => None,
        }
    }
}

fn cmd_board(cmd: &BoardCmd) -> Result<i32> {
    let text = build_board(&cmd.board, cmd.seed)?.to_edge_list();
    match &cmd.out {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_play(cmd: &PlayCmd) -> Result<i32> {
    let maker_spec = parse_strategy(&cmd.maker)?;
    let breaker_spec = parse_strategy(&cmd.breaker)?;
    let board = Arc::new(build_board(&cmd.board, cmd.seed)?);
    let mut maker = Seat::new(&maker_spec, cmd.trace);
    let mut breaker = Seat::new(&breaker_spec, cmd.trace);
    let budget = Budget {
        per_move: seconds(cmd.move_timeout)?,
        per_game: seconds(cmd.game_timeout)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cmd.seed);
    let record = play_game(
        board,
        cmd.condition.condition(),
        cmd.first,
        maker.policy(),
        breaker.policy(),
        &mut rng,
        budget,
    )?;
    for (who, p) in [("Maker", &mut maker), ("Breaker", &mut breaker)] {
        if let Some(trace) = p.trace() {
            eprint!("# {who} search trace\n{trace}");
        }
    }
    print!("{}", record.transcript());
    Ok(match record.winner {
        Outcome::Maker => 0,
        Outcome::Breaker => 1,
        Outcome::Timeout => 2,
    })
}

fn cmd_solve(cmd: &SolveCmd) -> Result<i32> {
    let board = Arc::new(build_board(&cmd.board, cmd.seed)?);
    let mut state = GameState::new(board, cmd.condition.condition(), cmd.first)?;
    for &v in &cmd.moves {
        state.apply_move(v)?;
    }
    let r = oracle::solve(&state)?;
    println!("value {}", r.value);
    let moves: Vec<String> = r.optimal_moves.iter().map(|v| v.to_string()).collect();
    println!("optimal {}", moves.join(" "));
    log::info!("{} nodes visited", r.nodes_visited);
    Ok(0)
}

fn sweep_spec(cmd: &SweepCmd) -> Result<ExperimentSpec> {
    let mut spec = match (&cmd.preset, &cmd.spec) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => load_spec(path)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    if let Some(g) = cmd.games {
        spec.games_per_cell = g;
    }
    if let Some(s) = cmd.seed {
        spec.master_seed = s;
    }
    if let Some(it) = cmd.iterations {
        if matches!(spec.iterations, Setting::Swept(_)) {
            return Err(Error::InvalidParameter(format!(
                "`{}` sweeps the iteration count; --iterations does not apply",
                spec.name
            )));
        }
        spec.iterations = Setting::Fixed(it);
    }
    if let Some(t) = cmd.move_timeout {
        spec.move_timeout_secs = t;
    }
    if let Some(t) = cmd.game_timeout {
        spec.game_timeout_secs = t;
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_sweep(cmd: &SweepCmd) -> Result<i32> {
    let spec = sweep_spec(cmd)?;
    let opts = match cmd.workers {
        Some(w) => RunOptions::with_workers(w),
        None => RunOptions::default(),
    };
    let result = run_sweep(&spec, &opts)?;
    let csv = cmd.out.join(format!("{}.csv", spec.name));
    output::to_csv_with_spec(&result, &spec, &csv)?;
    println!("{}", csv.display());
    if cmd.relative {
        let rel = cmd.out.join(format!("{}_rel.csv", spec.name));
        write_atomic(&rel, &output::relative_to_max(&result).to_csv_string())?;
        println!("{}", rel.display());
    }
    let played = result.cells.iter().flatten().filter(|c| c.percent().is_some()).count();
    let failed = result.total_cells() - played;
    if failed > 0 {
        eprintln!("{failed} of {} cells produced no result:", result.total_cells());
        for (i, row) in result.cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                if cell.percent().is_none() {
                    let why = cell.invalid.as_deref().unwrap_or("every game timed out");
                    eprintln!("  {}={} {}: {why}", result.parameter, result.values[i], result.strategies[j]);
                }
            }
        }
    }
    Ok(if played == 0 { EXIT_FAILURE } else { 0 })
}

fn cmd_rank(cmd: &RankCmd) -> Result<i32> {
    let text = std::fs::read_to_string(&cmd.table).map_err(|e| Error::io(&cmd.table, e))?;
    let table = output::parse_csv(&text)?;
    let names: Option<Vec<String>> = output::read_metadata(output::meta_path(&cmd.table))
        .ok()
        .map(|m| m.result.strategies);
    let body: Vec<Vec<f64>> = table.iter().map(|r| r[1..].to_vec()).collect();
    let (rel, _) = output::normalize_rows(&body);
    let label = |j: usize| match &names {
        Some(n) if j < n.len() => n[j].clone(),
        _ => format!("#{j}"),
    };
    let mut out = String::new();
    for (row, values) in table.iter().zip(&rel) {
        let mut order: Vec<usize> = (0..values.len()).filter(|&j| !values[j].is_nan()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let ranked: Vec<String> = order.iter().map(|&j| format!("{}={:.4}", label(j), values[j])).collect();
        out.push_str(&format!("{} {}\n", row[0], ranked.join(" ")));
    }
    print!("{out}");
    if let Some(path) = &cmd.out {
        let mut csv = String::new();
        for (row, values) in table.iter().zip(&rel) {
            csv.push_str(&row[0].to_string());
            for x in values {
                if x.is_nan() {
                    csv.push_str(",nan");
                } else {
                    csv.push_str(&format!(",{x:.4}"));
                }
            }
            csv.push('\n');
        }
        write_atomic(path, &csv)?;
    }
    Ok(0)
}

fn cmd_catalog() -> i32 {
    for id in catalog() {
        println!("{id}\t{}", id.describe());
    }
    0
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::GameOver | Error::IllegalPolicyMove { .. } => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line with explicit arguments and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    let result = match &cli.command {
        Command::Board(c) => cmd_board(c),
        Command::Play(c) => cmd_play(c),
        Command::Solve(c) => cmd_solve(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::Rank(c) => cmd_rank(c),
        Command::Catalog => Ok(cmd_catalog()),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
