use crate::error::{QkdError, Result};

use super::state::wrap_angle;

/// Frame rotations between each transmitter and Charlie, plus the phase
/// picked up at Charlie's beamsplitter. Angles are stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelParams {
    beta_a: f64,
    beta_b: f64,
    bsm_phase_offset: f64,
}

impl ChannelParams {
    pub fn new(beta_a: f64, beta_b: f64, bsm_phase_offset: f64) -> Self {
        ChannelParams {
            beta_a: wrap_angle(beta_a),
            beta_b: wrap_angle(beta_b),
            bsm_phase_offset: wrap_angle(bsm_phase_offset),
        }
    }

    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn beta_a(&self) -> f64 {
        self.beta_a
    }

    pub fn beta_b(&self) -> f64 {
        self.beta_b
    }

    pub fn bsm_phase_offset(&self) -> f64 {
        self.bsm_phase_offset
    }

    /// Relative rotation β = β_A − β_B, reduced to `[0, 2π)`.
    pub fn relative_beta(&self) -> f64 {
        wrap_angle(self.beta_a - self.beta_b)
    }
}

/// Per-arm noise and accidental-click rate.
///
/// `dephase_*` only damps X/Y coherences; `depol_*` damps every Pauli
/// component. Together they let the Z error rate and the X/Y fringe
/// visibility be set independently.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseParams {
    pub depol_a: f64,
    pub depol_b: f64,
    pub dephase_a: f64,
    pub dephase_b: f64,
    pub background_click: f64,
}

impl NoiseParams {
    pub fn ideal() -> Self {
        Self::default()
    }

    /// Same depolarizing strength on both arms.
    pub fn symmetric_depolarizing(p: f64) -> Self {
        NoiseParams {
            depol_a: p,
            depol_b: p,
            ..Self::default()
        }
    }

    /// Symmetric noise that reproduces a target Z correlation `⟨ZZ⟩ = −zz`
    /// and conjugate-basis fringe visibility `visibility`.
    ///
    /// Depolarizing fixes `(1−p)² = zz`; dephasing supplies the rest of the
    /// visibility loss, `(1−p)²(1−d)² = visibility`.
    pub fn calibrated(zz: f64, visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&zz) || zz == 0.0 {
            return Err(QkdError::Domain {
                name: "zz",
                value: zz,
                range: "(0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&visibility) || visibility > zz {
            return Err(QkdError::Domain {
                name: "visibility",
                value: visibility,
                range: "[0, |⟨ZZ⟩|]",
            });
        }
        let p = 1.0 - zz.sqrt();
        let d = 1.0 - (visibility / zz).sqrt();
        Ok(NoiseParams {
            depol_a: p,
            depol_b: p,
            dephase_a: d,
            dephase_b: d,
            background_click: 0.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("depol_a", self.depol_a),
            ("depol_b", self.depol_b),
            ("dephase_a", self.dephase_a),
            ("dephase_b", self.dephase_b),
            ("background_click", self.background_click),
        ];
        for (name, value) in fields {
            if !(0.0..=1.0).contains(&value) {
                return Err(QkdError::Domain {
                    name,
                    value,
                    range: "[0, 1]",
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn angles_are_reduced() {
        let ch = ChannelParams::new(-PI / 2.0, 3.0 * TAU + 0.5, TAU);
        assert!((ch.beta_a() - 1.5 * PI).abs() < 1e-12);
        assert!((ch.beta_b() - 0.5).abs() < 1e-9);
        assert!(ch.bsm_phase_offset() < 1e-12);
        assert!(ch.relative_beta() >= 0.0 && ch.relative_beta() < TAU);
    }

    #[test]
    fn calibration_targets() {
        let n = NoiseParams::calibrated(0.987, 0.945).unwrap();
        let scale_z = (1.0 - n.depol_a).powi(2);
        let scale_xy = scale_z * (1.0 - n.dephase_a).powi(2);
        assert!((scale_z - 0.987).abs() < 1e-12);
        assert!((scale_xy - 0.945).abs() < 1e-12);
        assert!(n.validate().is_ok());
        assert!(NoiseParams::calibrated(0.9, 0.95).is_err());
    }

    #[test]
    fn validate_names_field() {
        let n = NoiseParams {
            depol_b: 1.5,
            ..NoiseParams::default()
        };
        match n.validate() {
            Err(QkdError::Domain { name, .. }) => assert_eq!(name, "depol_b"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
