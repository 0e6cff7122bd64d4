//! Trace and summary CSV files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRACE_SUFFIX: &str = ".trace.csv";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub run: usize,
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub avg_rotation_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: String,
    pub dimension: usize,
    pub runs: usize,
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub sigma: f64,
}

/// `<problem>-<algorithm>-d<dimension>.trace.csv`
pub fn trace_file_name(problem: &str, algorithm: &str, dimension: usize) -> String {
    format!("{problem}-{algorithm}-d{dimension}{TRACE_SUFFIX}")
}

/// Inverse of [`trace_file_name`].
pub(crate) fn parse_trace_file_name(name: &str) -> Option<(String, String, usize)> {
    let stem = name.strip_suffix(TRACE_SUFFIX)?;
    let (rest, dim) = stem.rsplit_once("-d")?;
    let (problem, algorithm) = rest.rsplit_once('-')?;
    Some((problem.to_owned(), algorithm.to_owned(), dim.parse().ok()?))
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize().collect::<Result<Vec<T>, _>>().map_err(|e| Error::csv(path, e))
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<()> {
    write_rows(path, rows)
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    read_rows(path)
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_rows(path, rows)
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    read_rows(path)
}
