//! Result tables on disk: headerless CSV matrices, a JSON sidecar with the
//! raw counts, and the row-relative normalization.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::run::SweepResult;
use super::spec::{ExperimentSpec, SweepValue};
use crate::error::{Error, Result};

/// Renders the percentage matrix. Column 0 holds the swept value (its index
/// for textual sweeps), then one column per strategy, baseline first.
pub fn csv_string(result: &SweepResult) -> String {
    matrix_csv(&result.values, &result.percent_matrix())
}

fn matrix_csv(values: &[SweepValue], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (i, (value, row)) in values.iter().zip(rows).enumerate() {
        match value {
            SweepValue::Number(x) => write!(out, "{x}").unwrap(),
            SweepValue::Text(_) => write!(out, "{i}").unwrap(),
        }
        for &x in row {
            if x.is_nan() {
                out.push_str(",nan");
            } else {
                write!(out, ",{x:.4}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a headerless numeric CSV, including the leading parameter column.
pub fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            line.split(',')
                .map(|field| {
                    field
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: `{field}`: {e}", i + 1)))
                })
                .collect()
        })
        .collect()
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial table.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Sidecar contents: the spec that produced the table and every raw count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<ExperimentSpec>,
    pub result: SweepResult,
}

/// `results/foo.csv` becomes `results/foo.meta.json`.
pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

/// Writes the CSV and its metadata sidecar.
pub fn to_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    write_table(result, None, path.as_ref())
}

pub fn to_csv_with_spec(result: &SweepResult, spec: &ExperimentSpec, path: impl AsRef<Path>) -> Result<()> {
    write_table(result, Some(spec), path.as_ref())
}

fn write_table(result: &SweepResult, spec: Option<&ExperimentSpec>, path: &Path) -> Result<()> {
    write_atomic(path, &csv_string(result))?;
    let meta = Metadata {
        spec: spec.cloned(),
        result: result.clone(),
    };
    let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Parse(e.to_string()))?;
    write_atomic(&meta_path(path), &(json + "\n"))
}

pub fn read_metadata(path: impl AsRef<Path>) -> Result<Metadata> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Percentages divided by their row maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeTable {
    pub values: Vec<SweepValue>,
    pub strategies: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Rows that could not be normalized, by index.
    pub degenerate_rows: Vec<usize>,
}

impl RelativeTable {
    pub fn to_csv_string(&self) -> String {
        matrix_csv(&self.values, &self.rows)
    }
}

/// Divides each row by its largest finite entry. An all-zero row stays zero
/// and a row with nothing finite stays `NaN`; both are logged and listed.
pub fn normalize_rows(rows: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut degenerate = Vec::new();
    let out = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let max = row.iter().copied().filter(|x| x.is_finite()).fold(f64::NAN, f64::max);
            if max.is_nan() || max <= 0.0 {
                log::warn!("row {i} has no positive entry; left unnormalized");
                degenerate.push(i);
                row.iter().map(|&x| if x.is_finite() { 0.0 } else { f64::NAN }).collect()
            } else {
                row.iter().map(|&x| x / max).collect()
            }
        })
        .collect();
    (out, degenerate)
}

pub fn relative_to_max(result: &SweepResult) -> RelativeTable {
    let (rows, degenerate_rows) = normalize_rows(&result.percent_matrix());
    RelativeTable {
        values: result.values.clone(),
        strategies: result.strategies.clone(),
        rows,
        degenerate_rows,
    }
}
