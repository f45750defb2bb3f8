//! Sweep rows as CSV: fixed column order, 12 significant digits, empty
//! cells for estimators the run could not supply.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{LabError, Result};
use crate::sweep::SweepRow;

pub const COLUMNS: &[&str] = &[
    "beta_a",
    "beta_b",
    "e_xx",
    "e_xx_se",
    "e_xy",
    "e_xy_se",
    "e_yx",
    "e_yx_se",
    "e_yy",
    "e_yy_se",
    "e_zz",
    "e_zz_se",
    "qz_raw",
    "qz_eff",
    "qz_se",
    "qx_raw",
    "qx_eff",
    "qx_se",
    "qy_raw",
    "qy_eff",
    "qy_se",
    "c44",
    "c44_se",
    "c24",
    "c24_se",
    "c14",
    "c14_se",
    "r_mdi_raw",
    "r_mdi",
    "r_rfi44_raw",
    "r_rfi44",
    "r_rfi44_se",
    "r_rfi24_raw",
    "r_rfi24",
    "r_rfi24_se",
    "r_rfi14_raw",
    "r_rfi14",
    "r_rfi14_se",
    "issues",
];

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

/// The record for one row, aligned with [`COLUMNS`].
pub fn row_record(row: &SweepRow) -> Vec<String> {
    let mut rec = vec![format_sig12(row.beta_a), format_sig12(row.beta_b)];
    for e in &row.expectations {
        rec.push(cell(e.map(|e| e.value)));
        rec.push(cell(e.map(|e| e.stderr)));
    }
    for q in &row.qber {
        rec.push(cell(q.map(|q| q.raw)));
        rec.push(cell(q.map(|q| q.effective)));
        rec.push(cell(q.map(|q| q.stderr)));
    }
    for c in &row.c {
        rec.push(cell(c.map(|c| c.value)));
        rec.push(cell(c.map(|c| c.stderr)));
    }
    rec.push(cell(row.r_mdi_raw));
    rec.push(cell(row.r_mdi()));
    for r in &row.r_rfi {
        rec.push(cell(r.map(|r| r.raw)));
        rec.push(cell(r.map(|r| r.clamped)));
        rec.push(cell(r.and_then(|r| r.stderr)));
    }
    rec.push(row.issues.join("; "));
    rec
}

/// Serialize rows to CSV bytes (UTF-8, LF line endings, header first).
pub fn to_csv_bytes(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row_record(row))?;
    }
    w.into_inner().map_err(|e| LabError::Io {
        path: "<csv buffer>".into(),
        source: e.into_error(),
    })
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(LabError::Config("no sweep rows to write".into()));
    }
    let bytes = to_csv_bytes(rows)?;
    let mut f = File::create(path).map_err(|e| LabError::io(path, e))?;
    f.write_all(&bytes).map_err(|e| LabError::io(path, e))
}
