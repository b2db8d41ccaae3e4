use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::config::{CliError, CliResult, RunConfig};

/// Identifier of the JSON report layout; `schema/report-v1.schema.json`.
pub const SCHEMA_ID: &str = "kummer-report/v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(u64),
    S(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::I(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::S(s)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::F)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_float(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Result of one command, ready to be written in either format.
pub struct Outcome {
    pub config: RunConfig,
    pub report: Value,
    /// `None` for commands without a verification gate.
    pub passed: Option<bool>,
    pub table: Table,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    tool_version: &'static str,
    run_config: &'a RunConfig,
    passed: Option<bool>,
    report: &'a Value,
}

pub fn to_value<T: Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| CliError::Io(format!("serializing the report: {e}")))
}

pub fn write(outcome: &Outcome) -> CliResult<()> {
    let io_err = |e: io::Error| CliError::Io(format!("writing the report: {e}"));
    let mut sink: Box<dyn Write> = match &outcome.config.out_path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("cannot create {p}: {e}")))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match outcome.config.format {
        Format::Json => write_json(&mut sink, outcome).map_err(io_err)?,
        Format::Csv => write_csv(&mut sink, outcome)?,
    }
    sink.flush().map_err(io_err)
}

fn write_json<W: Write>(w: &mut W, outcome: &Outcome) -> io::Result<()> {
    let env = Envelope {
        schema: SCHEMA_ID,
        tool_version: env!("CARGO_PKG_VERSION"),
        run_config: &outcome.config,
        passed: outcome.passed,
        report: &outcome.report,
    };
    serde_json::to_writer_pretty(&mut *w, &env)?;
    writeln!(w)
}

/// A `# run_config=<json>` line, then the header row and the data rows.
fn write_csv<W: Write>(w: &mut W, outcome: &Outcome) -> CliResult<()> {
    let config = serde_json::to_string(&outcome.config)
        .map_err(|e| CliError::Io(format!("serializing the run config: {e}")))?;
    writeln!(w, "# run_config={config}").map_err(|e| CliError::Io(e.to_string()))?;
    let mut out = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| CliError::Io(format!("writing CSV: {e}"));
    out.write_record(&outcome.table.header).map_err(csv_err)?;
    for row in &outcome.table.rows {
        out.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for x in [2.0 / 3.0, 1e-300, 123456.789, -0.1, 5e-324] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits: String = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect();
            assert_eq!(digits.len(), 17, "{s}");
        }
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }
}
