//! Strict CSV ingestion for the two trial arms.
//!
//! Control files carry a mandatory `s,y` header and binary cells; treated
//! files carry a single `s` column. Values must be exactly "0" or "1" so
//! column-order mistakes fail fast instead of silently flipping an arm.

use std::fs;
use std::path::Path;
use surrbound::law::ObservedLaw;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: expected header \"{expected}\", found \"{found}\"")]
    BadHeader { path: String, expected: &'static str, found: String },
    #[error("{path}:{line}: malformed row \"{content}\" (values must be 0 or 1)")]
    MalformedRow { path: String, line: usize, content: String },
    #[error("{path}: no data rows")]
    EmptyFile { path: String },
}

/// Control-arm counts indexed `[y][s]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ControlCounts {
    pub cells: [[u64; 2]; 2],
}

impl ControlCounts {
    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }
}

/// Treated-arm counts: surrogate successes out of a total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreatedCounts {
    pub s1: u64,
    pub total: u64,
}

fn parse_bit(field: &str) -> Option<usize> {
    match field {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

pub fn read_control_csv(path: &Path) -> Result<ControlCounts, IngestError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|source| IngestError::Io { path: display.clone(), source })?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(IngestError::EmptyFile { path: display });
    };
    if header.trim_end() != "s,y" {
        return Err(IngestError::BadHeader {
            path: display,
            expected: "s,y",
            found: header.trim_end().to_string(),
        });
    }
    let mut cells = [[0u64; 2]; 2];
    let mut rows = 0u64;
    for (idx, raw) in lines {
        let line = idx + 1; // 1-based, header included
        let row = raw.trim_end();
        if row.is_empty() {
            continue;
        }
        let mut fields = row.split(',');
        let parsed = match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(y), None) => parse_bit(s).zip(parse_bit(y)),
            _ => None,
        };
        let Some((s, y)) = parsed else {
            return Err(IngestError::MalformedRow {
                path: display,
                line,
                content: row.to_string(),
            });
        };
        cells[y][s] += 1;
        rows += 1;
    }
    if rows == 0 {
        return Err(IngestError::EmptyFile { path: display });
    }
    Ok(ControlCounts { cells })
}

pub fn read_treated_csv(path: &Path) -> Result<TreatedCounts, IngestError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|source| IngestError::Io { path: display.clone(), source })?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(IngestError::EmptyFile { path: display });
    };
    if header.trim_end() != "s" {
        return Err(IngestError::BadHeader {
            path: display,
            expected: "s",
            found: header.trim_end().to_string(),
        });
    }
    let mut s1 = 0u64;
    let mut total = 0u64;
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim_end();
        if row.is_empty() {
            continue;
        }
        let Some(s) = parse_bit(row) else {
            return Err(IngestError::MalformedRow {
                path: display,
                line,
                content: row.to_string(),
            });
        };
        s1 += s as u64;
        total += 1;
    }
    if total == 0 {
        return Err(IngestError::EmptyFile { path: display });
    }
    Ok(TreatedCounts { s1, total })
}

/// Empirical frequencies; exact rationals of the counts to full double
/// precision.
pub fn law_from_counts(control: &ControlCounts, treated: &TreatedCounts) -> ObservedLaw {
    let n = control.total() as f64;
    ObservedLaw {
        p00: control.cells[0][0] as f64 / n,
        p10: control.cells[1][0] as f64 / n,
        p01: control.cells[0][1] as f64 / n,
        p11: control.cells[1][1] as f64 / n,
        s1_treated: treated.s1 as f64 / treated.total as f64,
    }
}
