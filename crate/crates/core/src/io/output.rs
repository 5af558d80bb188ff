//! Comma-separated text output with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::solver::step::Diagnostics;
use crate::state::MixtureState;

/// `{:.16e}` prints 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn timeseries_header(n: usize) -> String {
    let mut h = String::from("t");
    for i in 1..=n {
        write!(h, ",mass_{i}").unwrap();
    }
    h.push_str(",kinetic,potential,dissipation,floor_events");
    h
}

pub fn render_timeseries(series: &[Diagnostics], n: usize) -> String {
    let mut out = timeseries_header(n);
    out.push('\n');
    for d in series {
        out.push_str(&fmt_f64(d.t));
        for &m in &d.masses {
            out.push(',');
            out.push_str(&fmt_f64(m));
        }
        for v in [d.kinetic, d.potential, d.dissipation] {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        writeln!(out, ",{}", d.floor_events).unwrap();
    }
    out
}

pub fn render_snapshot(state: &MixtureState, grid: &Grid1D) -> String {
    let n = state.n_constituents();
    let mut out = String::from("x");
    for i in 1..=n {
        write!(out, ",rho_{i}").unwrap();
    }
    for i in 1..=n {
        write!(out, ",u_{i}").unwrap();
    }
    out.push('\n');
    for j in 0..state.n_cells() {
        out.push_str(&fmt_f64(grid.x(j)));
        for field in state.rho.iter().chain(&state.u) {
            out.push(',');
            out.push_str(&fmt_f64(field[j]));
        }
        out.push('\n');
    }
    out
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes the diagnostics series; an empty series gives a header-only file.
pub fn write_timeseries(series: &[Diagnostics], n: usize, path: &Path) -> Result<()> {
    write(path, &render_timeseries(series, n))
}

pub fn write_snapshot(state: &MixtureState, grid: &Grid1D, path: &Path) -> Result<()> {
    write(path, &render_snapshot(state, grid))
}

/// A parsed delimited table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn parse_table(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty table".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(k, line)| {
            let row = line
                .split(',')
                .map(|v| {
                    v.parse::<f64>().map_err(|_| {
                        Error::InvalidInput(format!("row {}: bad number `{v}`", k + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} columns, header has {}",
                    k + 1,
                    row.len(),
                    header.len()
                )));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table { header, rows })
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text)
}
