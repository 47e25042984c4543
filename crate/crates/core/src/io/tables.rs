//! CSV matrices and traces.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::solvers::{RunTrace, TraceSample};

const TRACE_HEADER: &str = "elapsed_s,work_units,level,error";

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let offset = err.position().map_or(0, |p| p.byte());
    let message = err.to_string();
    match err.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        _ => Error::Parse {
            file: path.display().to_string(),
            offset,
            message,
        },
    }
}

/// Reads a headerless rectangular CSV of nonnegative decimals, one matrix
/// row per line. LF and CRLF line endings are both accepted.
pub fn load_matrix_csv(path: &Path) -> Result<NonnegMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut data = Vec::new();
    let mut cols = 0;
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        cols = record.len();
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                file: path.display().to_string(),
                offset: record.position().map_or(0, |p| p.byte()),
                message: format!("row {}, column {}: '{field}' is not a number", i + 1, j + 1),
            })?;
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::NonnegativityViolation { row: i + 1, col: j + 1 });
            }
            data.push(value);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Parse {
            file: path.display().to_string(),
            offset: 0,
            message: "no rows".into(),
        });
    }
    NonnegMatrix::from_vec(rows, cols, data)
}

/// Loads a CSV matrix as a dataset without grid metadata.
pub fn load_csv(path: &Path) -> Result<Dataset> {
    let matrix = load_matrix_csv(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Dataset::new(matrix, None, name)
}

pub fn save_matrix_csv(path: &Path, m: &NonnegMatrix) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `elapsed_s,work_units,level,error` and one line per sample.
/// Values use the shortest representation that parses back exactly.
pub fn save_trace_csv(trace: &RunTrace, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{TRACE_HEADER}")?;
    for s in &trace.samples {
        writeln!(out, "{},{},{},{}", s.elapsed_s, s.work_units, s.level, s.error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_trace_csv(path: &Path) -> Result<Vec<TraceSample>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != TRACE_HEADER {
        return Err(Error::Parse {
            file: path.display().to_string(),
            offset: 0,
            message: format!("expected header '{TRACE_HEADER}'"),
        });
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let bad = |field: &str| Error::Parse {
            file: path.display().to_string(),
            offset: record.position().map_or(0, |p| p.byte()),
            message: format!("bad trace field '{field}'"),
        };
        let num = |k: usize| record[k].parse::<f64>().map_err(|_| bad(&record[k]));
        samples.push(TraceSample {
            elapsed_s: num(0)?,
            work_units: num(1)?,
            level: record[2].parse().map_err(|_| bad(&record[2]))?,
            error: num(3)?,
        });
    }
    Ok(samples)
}
