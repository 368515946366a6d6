//! Runs a small custom sweep from an inline spec, writes the CSV tables and
//! prints the win rates relative to each row's best strategy.
//!
//! ```text
//! cargo run --release --example relative_table
//! ```

use makerbreaker::harness::{output, relative_to_max, run_sweep, ExperimentSpec, RunOptions};

const SPEC: &str = r#"
name = "p3xk_dom"
games_per_cell = 40
iterations = 30
master_seed = 5
modified = ["degree:high", "degree:low", "unmarked_degree:high", "closeness:low"]

[board]
family = "grid"
rows = 3
cols = "k"

[condition]
kind = "dominating"

[sweep]
parameter = "k"
values = [2, 3, 4, 5]
"#;

fn main() -> makerbreaker::Result<()> {
    let spec = ExperimentSpec::from_toml(SPEC)?;
    let result = run_sweep(&spec, &RunOptions::default())?;

    let dir = tempfile::tempdir().map_err(|e| makerbreaker::Error::io(".", e))?;
    let csv = dir.path().join("p3xk_dom.csv");
    output::to_csv_with_spec(&result, &spec, &csv)?;
    println!("wrote {} and {}", csv.display(), output::meta_path(&csv).display());

    let rel = relative_to_max(&result);
    println!("\n{:>4} {}", result.parameter, rel.strategies.join("  "));
    for (value, row) in rel.values.iter().zip(&rel.rows) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.2}")).collect();
        println!("{:>4} {}", value.to_string(), cells.join("  "));
    }
    Ok(())
}
