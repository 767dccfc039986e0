//! Deterministic experiment artifacts: one CSV and one JSON mirror per
//! run, byte-stable for a fixed config and seed. The CSV opens with a
//! comment line carrying the config hash and the effective seed, floats
//! are serialized with 17 significant digits so they round-trip exactly,
//! and rows that could not be computed keep their place with `NaN` cells,
//! a raised flag, and a message in the JSON mirror.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::CliError;

/// One CSV cell. Text cells are static labels (check names, directions),
/// so no quoting or escaping is ever needed.
#[derive(Clone, Debug)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Text(&'static str),
    Flag(bool),
}

/// 17 significant digits: enough for every f64 to round-trip, few enough
/// to stay canonical.
fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::UInt(u) => u.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => (*s).to_string(),
            Cell::Flag(b) => if *b { "1" } else { "0" }.to_string(),
        }
    }
}

/// A per-row numeric failure, mirrored into the JSON artifact.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RowError {
    pub row: usize,
    pub message: String,
}

/// Ordered rows of one experiment, ready to serialize. The last column is
/// always the violation flag.
pub struct Table {
    pub experiment: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub row_errors: Vec<RowError>,
}

#[derive(serde::Serialize)]
struct Mirror<'a> {
    experiment: &'a str,
    config_hash: &'a str,
    seed: u64,
    columns: &'a [&'a str],
    /// Cells as the same strings the CSV carries, so both artifacts agree
    /// bit for bit and non-finite values survive the trip.
    rows: Vec<Vec<String>>,
    row_errors: &'a [RowError],
    violations: u64,
}

impl Table {
    pub fn new(experiment: &'static str, columns: &'static [&'static str]) -> Table {
        debug_assert_eq!(columns.last(), Some(&"flag"));
        Table {
            experiment,
            columns,
            rows: Vec::new(),
            row_errors: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// Record a row whose computation failed: the cells keep the schema
    /// (flag raised) and the message lands in the JSON mirror.
    pub fn push_error(&mut self, cells: Vec<Cell>, message: String) {
        self.row_errors.push(RowError {
            row: self.rows.len(),
            message,
        });
        self.push(cells);
    }

    /// Rows whose flag column is raised.
    pub fn violations(&self) -> u64 {
        self.rows
            .iter()
            .filter(|r| matches!(r.last(), Some(Cell::Flag(true))))
            .count() as u64
    }

    /// Write `<experiment>.csv` and `<experiment>.json` into `dir`,
    /// returning the CSV path for the run summary.
    pub fn write(&self, dir: &Path, config_hash: &str, seed: u64) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Write {
            path: dir.display().to_string(),
            source: e,
        })?;

        let mut csv = String::new();
        let _ = writeln!(csv, "# config_hash={config_hash} seed={seed}");
        let _ = writeln!(csv, "{}", self.columns.join(","));
        let mut rendered = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(csv, "{}", cells.join(","));
            rendered.push(cells);
        }
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        fs::write(&csv_path, &csv).map_err(|e| CliError::Write {
            path: csv_path.display().to_string(),
            source: e,
        })?;

        let mirror = Mirror {
            experiment: self.experiment,
            config_hash,
            seed,
            columns: self.columns,
            rows: rendered,
            row_errors: &self.row_errors,
            violations: self.violations(),
        };
        let json = serde_json::to_string_pretty(&mirror).expect("mirror serializes") + "\n";
        let json_path = dir.join(format!("{}.json", self.experiment));
        fs::write(&json_path, json).map_err(|e| CliError::Write {
            path: json_path.display().to_string(),
            source: e,
        })?;

        Ok(csv_path)
    }
}
