//! Field dumps as CSV: header `i,j,x,y,re,im`, one row per node in
//! row-major order (i fastest), values with 17 significant digits.

use std::io::Write;
use std::path::Path;

use bonnetlab_core::analysis::Analysis;
use bonnetlab_core::grid::ComplexField;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HEADER: &str = "i,j,x,y,re,im";

/// Field names accepted by `--dump-fields`.
pub const DUMPABLE: [&str; 5] = ["u", "H", "h", "K", "deltag"];

pub fn write_csv(mut w: impl Write, f: &ComplexField) -> std::io::Result<()> {
    let g = f.grid();
    writeln!(w, "{HEADER}")?;
    for (k, v) in f.values().iter().enumerate() {
        let (i, j) = g.node(k);
        writeln!(
            w,
            "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}",
            g.x(i),
            g.y(j),
            v.re,
            v.im
        )?;
    }
    Ok(())
}

/// The named field of an analysed chart. `deltag` is `None` when every node
/// is umbilic.
pub fn field(analysis: &Analysis, name: &str) -> Result<Option<ComplexField>> {
    let ci = &analysis.invariants;
    Ok(match name {
        "u" => Some(ci.u.to_complex()),
        "H" => Some(ci.mean.to_complex()),
        "h" => Some(ci.hopf.clone()),
        "K" => Some(ci.gauss.to_complex()),
        "deltag" => analysis.log_hopf.as_ref().map(|lh| lh.delta_g.to_complex()),
        other => {
            return Err(Error::Usage(format!(
                "unknown field `{other}`, expected one of {}",
                DUMPABLE.join(",")
            )))
        }
    })
}

/// Parse a comma list of field names, rejecting unknown ones.
pub fn parse_list(list: &str) -> Result<Vec<String>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            if DUMPABLE.contains(&s) {
                Ok(s.to_string())
            } else {
                Err(Error::Usage(format!(
                    "unknown field `{s}`, expected one of {}",
                    DUMPABLE.join(",")
                )))
            }
        })
        .collect()
}

pub fn save_csv(path: &Path, f: &ComplexField) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(&mut buf, f).map_err(|e| Error::io(path, e))?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub value: Complex64,
}

pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(Error::Schema(format!("CSV header must be `{HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(n, line)| {
            let bad = || Error::Schema(format!("CSV line {}: `{line}`", n + 2));
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(bad());
            }
            let f = |k: usize| cols[k].parse::<f64>().map_err(|_| bad());
            Ok(Row {
                i: cols[0].parse().map_err(|_| bad())?,
                j: cols[1].parse().map_err(|_| bad())?,
                x: f(2)?,
                y: f(3)?,
                value: Complex64::new(f(4)?, f(5)?),
            })
        })
        .collect()
}
