//! Experiment harness: configuration, β_B sweeps, CSV and SVG output, and
//! a standalone key-rate calculator.

pub mod config;
pub mod csv_out;
pub mod error;
pub mod svg;
pub mod sweep;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rfiqkd_core::secanalysis::{key_rate_mdi_value, key_rate_rfi, CValue};

pub use config::{parse_config, ExperimentConfig, SweepSpec};
pub use csv_out::{emit_csv, COLUMNS};
pub use error::{LabError, Result};
pub use svg::emit_svg;
pub use sweep::{run_sweep, SweepRow};

pub fn csv_filename(beta_a: f64) -> String {
    format!("sweep_betaA_{beta_a:.4}.csv")
}

/// Write the CSV (and the SVG panels when enabled) into `dir`.
pub fn write_outputs(
    rows: &[SweepRow],
    beta_a: f64,
    dir: &Path,
    emit_svg_panels: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let csv_path = dir.join(csv_filename(beta_a));
    emit_csv(rows, &csv_path)?;
    let mut written = vec![csv_path];
    if emit_svg_panels {
        written.extend(emit_svg(rows, dir)?);
    }
    Ok(written)
}

/// Text report for `qkdlab keyrate`.
pub fn keyrate_report(q_z: f64, c: f64, c_stderr: f64, q_x: Option<f64>) -> Result<String> {
    let k = key_rate_rfi(
        q_z,
        CValue {
            value: c,
            stderr: c_stderr,
        },
    )?;
    let mut out = String::new();
    let _ = writeln!(out, "u      = {:.6}", k.u);
    let _ = writeln!(out, "v      = {:.6}", k.v);
    let _ = writeln!(out, "I_E    = {:.6}", k.i_e);
    let _ = writeln!(out, "r_raw  = {:.6}", k.r_raw);
    let _ = writeln!(out, "r      = {:.6}", k.r);
    if let Some(q_x) = q_x {
        let r = key_rate_mdi_value(q_x, q_z)?;
        let _ = writeln!(out, "r_MDI_raw = {r:.6}");
        let _ = writeln!(out, "r_MDI     = {:.6}", r.max(0.0));
    }
    Ok(out)
}
