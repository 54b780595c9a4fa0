//! CSV schemas (version 1). Headers are fixed byte-for-byte; a reader that
//! meets a different header reports an error rather than coercing. Floats
//! are serialized in decimal scientific form with 12 significant digits,
//! so value round-trips through text are exact at the tolerances used
//! anywhere downstream.

use std::fs::File;
use std::io;
use std::path::Path;

use defectchain::experiments::{ComparisonRow, DynamicsRow, SweepRow};

pub const SWEEP_HEADER: &[&str] = &[
    "delta", "L", "N", "defect_a", "defect_b", "c_max", "energy", "eig_index", "degenerate",
];
pub const DYNAMICS_HEADER: &[&str] = &["t", "register", "probability", "concurrence"];
pub const SPECTRUM_HEADER: &[&str] = &["L", "N", "eig_index", "energy", "degenerate"];
pub const COMPARE_HEADER: &[&str] = &[
    "delta",
    "L",
    "numeric_cmax",
    "analytic_cmax",
    "numeric_energy",
    "analytic_energy",
    "overlap",
];

#[derive(Debug)]
pub enum CsvError {
    Io(io::Error),
    /// Header or field shape mismatch; message names what was expected.
    Schema(String),
}

impl std::fmt::Display for CsvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CsvError::Io(e) => write!(f, "csv i/o error: {e}"),
            CsvError::Schema(msg) => write!(f, "csv schema error: {msg}"),
        }
    }
}

impl std::error::Error for CsvError {}

impl From<io::Error> for CsvError {
    fn from(e: io::Error) -> Self {
        CsvError::Io(e)
    }
}

impl From<csv::Error> for CsvError {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => {
                CsvError::Io(io::Error::other(e))
            }
            _ => CsvError::Schema(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CsvError>;

/// 12 significant digits, decimal scientific.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn parse_float(field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| CsvError::Schema(format!("bad float field {field:?}")))
}

fn parse_usize(field: &str) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| CsvError::Schema(format!("bad integer field {field:?}")))
}

fn parse_flag(field: &str) -> Result<bool> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(CsvError::Schema(format!("bad 0/1 flag {other:?}"))),
    }
}

fn check_header(reader: &mut csv::Reader<File>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers()?;
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(CsvError::Schema(format!(
            "header mismatch: expected {:?}, found {:?}",
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow<f64>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(SWEEP_HEADER)?;
    for row in rows {
        writer.write_record(&[
            format_float(row.delta),
            row.length.to_string(),
            row.excitations.to_string(),
            row.defect_first.to_string(),
            row.defect_second.to_string(),
            format_float(row.c_max),
            format_float(row.energy),
            row.eig_index.to_string(),
            if row.degenerate { "1" } else { "0" }.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow<f64>>> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(&mut reader, SWEEP_HEADER)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != SWEEP_HEADER.len() {
            return Err(CsvError::Schema(format!(
                "row has {} fields, expected {}",
                record.len(),
                SWEEP_HEADER.len()
            )));
        }
        rows.push(SweepRow {
            delta: parse_float(&record[0])?,
            length: parse_usize(&record[1])?,
            excitations: parse_usize(&record[2])?,
            defect_first: parse_usize(&record[3])?,
            defect_second: parse_usize(&record[4])?,
            c_max: parse_float(&record[5])?,
            energy: parse_float(&record[6])?,
            eig_index: parse_usize(&record[7])?,
            degenerate: parse_flag(&record[8])?,
        });
    }
    Ok(rows)
}

pub fn write_dynamics_csv(path: &Path, rows: &[DynamicsRow<f64>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(DYNAMICS_HEADER)?;
    for row in rows {
        writer.write_record(&[
            format_float(row.time),
            row.register.clone(),
            format_float(row.probability),
            format_float(row.concurrence),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_dynamics_csv(path: &Path) -> Result<Vec<DynamicsRow<f64>>> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(&mut reader, DYNAMICS_HEADER)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() != DYNAMICS_HEADER.len() {
            return Err(CsvError::Schema(format!(
                "row has {} fields, expected {}",
                record.len(),
                DYNAMICS_HEADER.len()
            )));
        }
        rows.push(DynamicsRow {
            time: parse_float(&record[0])?,
            register: record[1].to_string(),
            probability: parse_float(&record[2])?,
            concurrence: parse_float(&record[3])?,
        });
    }
    Ok(rows)
}

/// One spectrum row: (L, N, index, energy, degeneracy flag).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub length: usize,
    pub excitations: usize,
    pub eig_index: usize,
    pub energy: f64,
    pub degenerate: bool,
}

pub fn write_spectrum_csv(path: &Path, rows: &[SpectrumRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(SPECTRUM_HEADER)?;
    for row in rows {
        writer.write_record(&[
            row.length.to_string(),
            row.excitations.to_string(),
            row.eig_index.to_string(),
            format_float(row.energy),
            if row.degenerate { "1" } else { "0" }.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_compare_csv(path: &Path, rows: &[ComparisonRow<f64>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(COMPARE_HEADER)?;
    for row in rows {
        writer.write_record(&[
            format_float(row.delta),
            row.length.to_string(),
            format_float(row.numeric_cmax),
            format_float(row.analytic_cmax),
            format_float(row.numeric_energy),
            format_float(row.analytic_energy),
            format_float(row.overlap),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
