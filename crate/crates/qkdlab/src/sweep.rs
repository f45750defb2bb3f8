//! β_B sweeps: one protocol run and one security analysis per point.

use rayon::prelude::*;
use rfiqkd_core::qcore::{Basis, ChannelParams};
use rfiqkd_core::secanalysis::{
    analyze, CValue, CVariant, Expectation, QberRecord, SecurityEstimate, EXPECTATION_PAIRS,
};
use rfiqkd_core::simkit::{run_protocol, ProtocolConfig, StateMenu};

use crate::config::ExperimentConfig;
use crate::error::Result;

/// QBER bases in column order.
pub const QBER_BASES: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

/// One RFI key-rate estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCell {
    pub raw: f64,
    pub clamped: f64,
    pub stderr: Option<f64>,
}

/// Everything reported for one sweep point. `None` marks an estimator the
/// menu cannot supply or one that failed (see `issues`).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta_a: f64,
    pub beta_b: f64,
    /// In [`EXPECTATION_PAIRS`] order: XX, XY, YX, YY, ZZ.
    pub expectations: [Option<Expectation>; 5],
    /// In [`QBER_BASES`] order: Z, X, Y.
    pub qber: [Option<QberRecord>; 3],
    /// C44, C24, C14.
    pub c: [Option<CValue>; 3],
    pub r_mdi_raw: Option<f64>,
    /// RFI rate from C44, C24, C14.
    pub r_rfi: [Option<RateCell>; 3],
    pub issues: Vec<String>,
}

impl SweepRow {
    pub fn from_estimate(beta_a: f64, beta_b: f64, est: &SecurityEstimate) -> Self {
        let mut issues: Vec<String> = est.issues.iter().map(|e| e.to_string()).collect();
        let r_rfi = CVariant::ALL.map(|v| match est.rfi_rate(v)? {
            Ok(k) => {
                let stderr = est.rfi_rate_stderr(v).and_then(|r| r.ok());
                Some(RateCell {
                    raw: k.r_raw,
                    clamped: k.r,
                    stderr,
                })
            }
            Err(e) => {
                issues.push(format!("r_rfi_{}: {e}", &v.name()[1..]));
                None
            }
        });
        SweepRow {
            beta_a,
            beta_b,
            expectations: EXPECTATION_PAIRS.map(|(a, b)| est.expectation(a, b).copied()),
            qber: QBER_BASES.map(|b| est.qber.get(&b).copied()),
            c: CVariant::ALL.map(|v| est.c_value(v)),
            r_mdi_raw: est.mdi_rate(),
            r_rfi,
            issues,
        }
    }

    pub fn c_value(&self, variant: CVariant) -> Option<CValue> {
        self.c[variant as usize]
    }

    pub fn rfi(&self, variant: CVariant) -> Option<RateCell> {
        self.r_rfi[variant as usize]
    }

    pub fn qber_for(&self, basis: Basis) -> Option<QberRecord> {
        QBER_BASES
            .iter()
            .position(|&b| b == basis)
            .and_then(|i| self.qber[i])
    }

    pub fn r_mdi(&self) -> Option<f64> {
        self.r_mdi_raw.map(|r| r.max(0.0))
    }
}

/// Protocol configuration for sweep point `index`.
pub fn point_config(config: &ExperimentConfig, index: usize, beta_b: f64) -> ProtocolConfig {
    ProtocolConfig {
        channel: ChannelParams::new(config.beta_a, beta_b, config.bsm_phase_offset),
        noise: config.noise,
        alice_menu: StateMenu::alice(config.alice_menu),
        bob_menu: StateMenu::new(config.bob_menu, rfiqkd_core::simkit::Party::Bob),
        check_phase: config.check_phase(),
        mode: config.mode,
        shots: config.shots,
        seed: config.seed,
        point: index as u64,
    }
}

/// Evaluate every β_B point. Points run in parallel, each with its own
/// random streams; rows come back in sweep order.
///
/// Configuration errors abort the sweep; estimation failures are kept in
/// the row's `issues` and the sweep continues.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    config
        .beta_b_values()
        .into_par_iter()
        .enumerate()
        .map(|(i, beta_b)| {
            let table = run_protocol(&point_config(config, i, beta_b))?;
            Ok(SweepRow::from_estimate(
                config.beta_a,
                beta_b,
                &analyze(&table),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SweepSpec;
    use rfiqkd_core::simkit::MenuMode;

    #[test]
    fn ideal_analytic_sweep() {
        let cfg = ExperimentConfig {
            sweep: Some(SweepSpec::full_turn(61)),
            ..ExperimentConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 61);
        for row in &rows {
            assert!((row.c_value(CVariant::C44).unwrap().value - 2.0).abs() < 1e-12);
            assert!((row.rfi(CVariant::C44).unwrap().raw - 1.0).abs() < 1e-12);
            let qx = row.qber_for(Basis::X).unwrap().raw;
            assert!((qx - (1.0 - row.beta_b.cos()) / 2.0).abs() < 1e-12);
            assert!(row.issues.is_empty());
        }
        assert!(rows.windows(2).all(|w| w[0].beta_b < w[1].beta_b));
    }

    #[test]
    fn one_check_rows_lack_c44_and_c24() {
        let cfg = ExperimentConfig {
            alice_menu: MenuMode::OneCheck,
            sweep: Some(SweepSpec::full_turn(4)),
            ..ExperimentConfig::default()
        };
        for row in run_sweep(&cfg).unwrap() {
            assert!(row.c_value(CVariant::C44).is_none());
            assert!(row.c_value(CVariant::C24).is_none());
            assert!(row.c_value(CVariant::C14).is_some());
            assert!(row.rfi(CVariant::C44).is_none());
            assert!(row.expectations[0].is_none());
        }
    }

    #[test]
    fn estimation_failures_stay_in_the_row() {
        // zero shots: every estimator fails but the sweep completes
        let cfg = ExperimentConfig {
            shots: 0,
            sweep: Some(SweepSpec::full_turn(3)),
            ..ExperimentConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows
            .iter()
            .all(|r| !r.issues.is_empty() && r.c.iter().all(Option::is_none)));
    }
}
