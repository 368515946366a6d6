//! Sweep experiments: declarative specs, a deterministic parallel runner and
//! table output.

pub mod output;
pub mod run;
pub mod spec;
pub mod stats;

pub use output::{csv_string, parse_csv, relative_to_max, to_csv, to_csv_with_spec, RelativeTable};
pub use run::{run_sweep, CellResult, RunOptions, SweepResult};
pub use spec::{load_spec, preset, ExperimentSpec, PRESET_NAMES};
pub use stats::{wilson_interval, Z_95};
