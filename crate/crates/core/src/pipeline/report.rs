//! Sweep report and its CSV rendering.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use super::ingest::AvocadoType;
use crate::error::{Error, Result};
use crate::fracmodel::{BetaMode, Selection, SweepRow};

pub const SWEEP_CSV_HEADER: &str = "degree,alpha,r2_interp,r2_extrap";

/// Result of one α sweep for a region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub region: String,
    pub avocado_type: AvocadoType,
    /// Integer polynomial degree m.
    pub degree: usize,
    pub beta_mode: BetaMode,
    /// Sorted by descending effective degree m − α.
    pub rows: Vec<SweepRow>,
    pub best: Selection,
}

impl SweepReport {
    pub fn new(
        region: &str,
        avocado_type: AvocadoType,
        degree: usize,
        beta_mode: BetaMode,
        mut rows: Vec<SweepRow>,
        best: Selection,
    ) -> Self {
        rows.sort_by(|a, b| b.effective_degree.total_cmp(&a.effective_degree));
        SweepReport {
            region: region.to_string(),
            avocado_type,
            degree,
            beta_mode,
            rows,
            best,
        }
    }
}

/// Fixed six-decimal formatting that never prints a negative zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

pub fn write_sweep_csv<W: Write>(report: &SweepReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt6(r.effective_degree),
            fmt6(r.alpha),
            fmt6(r.r2_interp),
            fmt6(r.r2_extrap)
        )?;
    }
    Ok(())
}

pub fn sweep_csv_string(report: &SweepReport) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(report, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

/// Writes the sweep table to `path`.
pub fn emit_sweep_csv(report: &SweepReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, sweep_csv_string(report)).map_err(|e| Error::io(path, e))
}
