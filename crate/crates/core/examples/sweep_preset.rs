//! Runs a built-in experiment at reduced scale and prints its table.
//!
//! ```text
//! cargo run --release --example sweep_preset -- er12_dom 20 50
//! ```
//!
//! Arguments: preset name (default `er12_dom`), games per cell (default 10)
//! and an optional MCTS iteration count replacing the preset's.

use std::time::Instant;

use makerbreaker::harness::spec::Setting;
use makerbreaker::harness::{csv_string, preset, run_sweep, RunOptions, PRESET_NAMES};

fn main() -> makerbreaker::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "er12_dom".into());
    let games = args.next().map_or(10, |g| g.parse().expect("games per cell"));
    let iterations: Option<usize> = args.next().map(|i| i.parse().expect("iterations"));

    if !PRESET_NAMES.contains(&name.as_str()) {
        eprintln!("presets: {}", PRESET_NAMES.join(", "));
    }
    let mut spec = preset(&name)?;
    spec.games_per_cell = games;
    if let (Some(it), Setting::Fixed(_)) = (iterations, &spec.iterations) {
        spec.iterations = Setting::Fixed(it);
    }

    let start = Instant::now();
    let result = run_sweep(&spec, &RunOptions::default())?;
    eprintln!(
        "{}: {} rows x {} strategies, {} games each, {:.1?}",
        spec.name,
        result.cells.len(),
        result.strategies.len(),
        games,
        start.elapsed()
    );
    println!("# {} vs {}", result.parameter, result.strategies.join(","));
    print!("{}", csv_string(&result));
    Ok(())
}
