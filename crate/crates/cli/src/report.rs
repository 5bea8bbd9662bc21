//! CSV schemas written by the commands. Column order is fixed by field order.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stcm_core::{BerPoint, CouplingMatrix, TraceEntry};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub m: usize,
    pub n: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRow {
    pub snr_db: f64,
    pub ber: f64,
    pub bit_errors: u64,
    pub bits_total: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub snr_db: f64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub candidate_m: usize,
    pub spacing_wavelengths: f64,
    pub avg_ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub snr_db: f64,
    pub ber_style1: f64,
    pub ber_style2: f64,
    pub ci_low_style1: f64,
    pub ci_high_style1: f64,
    pub ci_low_style2: f64,
    pub ci_high_style2: f64,
}

impl From<&BerPoint> for BerRow {
    fn from(p: &BerPoint) -> Self {
        let (ci_low, ci_high) = p.confidence();
        BerRow {
            snr_db: p.snr_db,
            ber: p.ber,
            bit_errors: p.bit_errors,
            bits_total: p.bits_total,
            ci_low,
            ci_high,
        }
    }
}

impl SweepRow {
    pub fn new(sweep_value: f64, p: &BerPoint) -> Self {
        let (ci_low, ci_high) = p.confidence();
        SweepRow {
            sweep_value,
            snr_db: p.snr_db,
            ber: p.ber,
            ci_low,
            ci_high,
        }
    }
}

impl From<&TraceEntry> for TraceRow {
    fn from(e: &TraceEntry) -> Self {
        TraceRow {
            iteration: e.iteration,
            candidate_m: e.candidate_m,
            spacing_wavelengths: e.spacing_wavelengths,
            avg_ber: e.avg_ber,
        }
    }
}

impl CompareRow {
    pub fn new(style1: &BerPoint, style2: &BerPoint) -> Self {
        let (l1, h1) = style1.confidence();
        let (l2, h2) = style2.confidence();
        CompareRow {
            snr_db: style1.snr_db,
            ber_style1: style1.ber,
            ber_style2: style2.ber,
            ci_low_style1: l1,
            ci_high_style1: h1,
            ci_low_style2: l2,
            ci_high_style2: h2,
        }
    }
}

pub fn matrix_rows(c: &CouplingMatrix) -> Vec<MatrixRow> {
    let dim = c.dim();
    (0..dim)
        .flat_map(|m| (0..dim).map(move |n| (m, n)))
        .map(|(m, n)| {
            let v = c.get(m, n);
            MatrixRow {
                m,
                n,
                re: v.re,
                im: v.im,
            }
        })
        .collect()
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

/// One plotted curve: data file (relative to the script), columns and title.
pub struct Curve {
    pub file: String,
    pub x: &'static str,
    pub y: &'static str,
    pub title: String,
}

/// Writes `<stem>.gp` in `dir`, rendering `<stem>.png` with BER on a log axis.
pub fn write_gnuplot(dir: &Path, stem: &str, xlabel: &str, curves: &[Curve]) -> Result<PathBuf> {
    let script = dir.join(format!("{stem}.gp"));
    let mut text = String::new();
    text.push_str("set datafile separator ','\n");
    text.push_str("set terminal pngcairo size 800,600\n");
    text.push_str(&format!("set output '{stem}.png'\n"));
    text.push_str(&format!("set xlabel '{xlabel}'\nset ylabel 'BER'\n"));
    text.push_str("set logscale y\nset grid\n");
    let plots: Vec<String> = curves
        .iter()
        .map(|c| {
            format!(
                "'{}' using '{}':'{}' with linespoints title '{}'",
                c.file, c.x, c.y, c.title
            )
        })
        .collect();
    text.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    let mut f = File::create(&script).map_err(|e| CliError::io(&script, e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::io(&script, e))?;
    Ok(script)
}
