//! Delimited text matrices: one row per line, values separated by commas,
//! tabs, semicolons or spaces. Blank lines and `#` comments are skipped.

use std::fs;
use std::path::Path;

use ctopo_core::matrix::Grid;

use crate::error::{format_err, io_err, FormatError, Result};

pub fn parse_text_matrix(text: &str) -> std::result::Result<Grid, FormatError> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let before = values.len();
        for tok in line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: f64 = tok.parse().map_err(|_| FormatError::Text {
                line: idx + 1,
                message: format!("not a number: {tok:?}"),
            })?;
            values.push(v);
        }
        let width = values.len() - before;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(FormatError::Text {
                    line: idx + 1,
                    message: format!("row has {width} values, expected {c}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or(FormatError::Text {
        line: 0,
        message: "no rows".into(),
    })?;
    Grid::new(rows, cols, values).map_err(|e| FormatError::Text {
        line: 0,
        message: e.to_string(),
    })
}

/// Shortest round-tripping decimal for each value, comma separated.
pub fn format_text_matrix(grid: &Grid) -> String {
    let mut out = String::new();
    for row in grid.values().chunks(grid.cols()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn read_text_matrix(path: &Path) -> Result<Grid> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_text_matrix(&text).map_err(format_err(path))
}

pub fn write_text_matrix(path: &Path, grid: &Grid) -> Result<()> {
    fs::write(path, format_text_matrix(grid)).map_err(io_err(path))
}
