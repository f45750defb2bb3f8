//! Binary entropy and asymptotic secret-key rates.

use crate::error::{QkdError, Result};

use super::cparam::CValue;
use super::estimators::QberRecord;

/// Square-root arguments this close below zero are treated as round-off.
pub const SQRT_GUARD: f64 = 1e-9;
const DOMAIN_SLACK: f64 = 1e-12;

/// Shannon entropy of a Bernoulli(x) variable, in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) || x.is_nan() {
        return Err(QkdError::Domain {
            name: "x",
            value: x,
            range: "[0, 1]",
        });
    }
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

fn check_qber(name: &'static str, q: f64) -> Result<f64> {
    if !(0.0..=0.5 + DOMAIN_SLACK).contains(&q) {
        return Err(QkdError::Domain {
            name,
            value: q,
            range: "[0, 0.5]",
        });
    }
    Ok(q.min(0.5))
}

/// `1 − H(Q_X) − H(Q_Z)` on effective QBERs; may be negative.
pub fn key_rate_mdi(q_x: &QberRecord, q_z: &QberRecord) -> f64 {
    // effective QBERs lie in [0, 0.5] by construction
    key_rate_mdi_value(q_x.effective, q_z.effective).unwrap_or(f64::NAN)
}

/// [`key_rate_mdi`] on bare numbers, with domain checks.
pub fn key_rate_mdi_value(q_x: f64, q_z: f64) -> Result<f64> {
    let q_x = check_qber("q_x", q_x)?;
    let q_z = check_qber("q_z", q_z)?;
    Ok(1.0 - binary_entropy(q_x)? - binary_entropy(q_z)?)
}

/// Terms of the RFI-MDI key-rate bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRateBreakdown {
    pub u: f64,
    pub v: f64,
    /// Eve's information bound.
    pub i_e: f64,
    pub r_raw: f64,
    /// `max(0, r_raw)`
    pub r: f64,
}

/// RFI-MDI key rate `1 − H(Q_Z) − I_E(Q_Z, C)`.
///
/// `u = min(√(C/2)/(1−Q_Z), 1)`, `v = √(C/2 − (1−Q_Z)²u²)/Q_Z`,
/// `I_E = Q_Z·H((1+v)/2) + (1−Q_Z)·H((1+u)/2)`.
///
/// C may overshoot 2 by up to three standard errors and is then clipped.
/// When `u < 1` the `v` argument vanishes identically and `v = 0`.
pub fn key_rate_rfi(q_z: f64, c: CValue) -> Result<KeyRateBreakdown> {
    let q = check_qber("q_z", q_z)?;
    let slack = (3.0 * c.stderr).max(SQRT_GUARD);
    if c.value.is_nan() || c.value < -slack || c.value > 2.0 + slack {
        return Err(QkdError::Domain {
            name: "c",
            value: c.value,
            range: "[0, 2]",
        });
    }
    let half_c = c.value.clamp(0.0, 2.0) / 2.0;
    let unclamped_u = half_c.sqrt() / (1.0 - q);
    let (u, v) = if unclamped_u < 1.0 {
        (unclamped_u, 0.0)
    } else {
        let inner = half_c - (1.0 - q) * (1.0 - q);
        if inner < -SQRT_GUARD {
            return Err(QkdError::Inconsistent(format!(
                "negative v argument {inner:e} at Q_Z = {q}, C = {}",
                c.value
            )));
        }
        let v = if q > 0.0 {
            inner.max(0.0).sqrt() / q
        } else {
            0.0
        };
        if v > 1.0 + SQRT_GUARD {
            return Err(QkdError::Inconsistent(format!(
                "v = {v} > 1 at Q_Z = {q}, C = {}: C exceeds what any state with this Q_Z allows",
                c.value
            )));
        }
        (1.0, v.min(1.0))
    };
    // the v-term carries weight Q_Z and vanishes at Q_Z = 0
    let v_term = if q > 0.0 {
        q * binary_entropy((1.0 + v) / 2.0)?
    } else {
        0.0
    };
    let i_e = v_term + (1.0 - q) * binary_entropy((1.0 + u) / 2.0)?;
    let r_raw = 1.0 - binary_entropy(q)? - i_e;
    Ok(KeyRateBreakdown {
        u,
        v,
        i_e,
        r_raw,
        r: r_raw.max(0.0),
    })
}

/// First-order error of `r_raw` from independent errors on Q_Z and C,
/// using central differences.
pub fn key_rate_rfi_stderr(q_z: f64, q_z_stderr: f64, c: CValue) -> Result<f64> {
    const H: f64 = 1e-6;
    let rate = |q: f64, cv: f64| {
        key_rate_rfi(
            q,
            CValue {
                value: cv,
                stderr: c.stderr,
            },
        )
        .map(|k| k.r_raw)
    };
    let partial = |f: &dyn Fn(f64) -> Result<f64>, x: f64, lo: f64, hi: f64| -> Result<f64> {
        let a = (x - H).max(lo);
        let b = (x + H).min(hi);
        Ok((f(b)? - f(a)?) / (b - a))
    };
    let q = q_z.clamp(0.0, 0.5);
    let cv = c.value.clamp(0.0, 2.0);
    let dq = partial(&|x| rate(x, cv), q, 0.0, 0.5)?;
    let dc = partial(&|x| rate(q, x), cv, 0.0, 2.0)?;
    Ok(((dq * q_z_stderr).powi(2) + (dc * c.stderr).powi(2)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Basis;

    // Reference values from a 40-digit evaluation of the same formulas.
    const H_011: f64 = 0.499_915_958_164_528;
    const H_0007: f64 = 0.060_172_442_032_008_555;
    const MDI_011_0007: f64 = 0.439_911_599_803_463_45;
    const RFI_0007_177: [f64; 3] = [
        0.947_376_018_239_012_1,
        0.181_316_420_199_189_3,
        0.758_511_137_768_802_2,
    ];
    const RFI_002_15: [f64; 3] = [
        0.883_699_391_616_774_1,
        0.333_656_968_828_804_9,
        0.524_902_488_629_374_5,
    ];

    #[test]
    fn entropy_endpoints_and_midpoint() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11).unwrap() - H_011).abs() < 1e-14);
        assert!((binary_entropy(0.007).unwrap() - H_0007).abs() < 1e-14);
    }

    #[test]
    fn entropy_domain() {
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.0 + 1e-6).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
        assert_eq!(binary_entropy(-1e-14).unwrap(), 0.0);
    }

    #[test]
    fn mdi_rates() {
        let rec = |b, q| QberRecord::from_raw(b, q, 0.0);
        assert_eq!(key_rate_mdi(&rec(Basis::X, 0.0), &rec(Basis::Z, 0.0)), 1.0);
        assert!(key_rate_mdi(&rec(Basis::X, 0.5), &rec(Basis::Z, 0.0)).abs() < 1e-15);
        let r = key_rate_mdi(&rec(Basis::X, 0.11), &rec(Basis::Z, 0.007));
        assert!((r - MDI_011_0007).abs() < 1e-12);
        // raw QBER above one half is flipped before use
        let flipped = key_rate_mdi(&rec(Basis::X, 0.89), &rec(Basis::Z, 0.007));
        assert!((flipped - MDI_011_0007).abs() < 1e-12);
        assert!(key_rate_mdi_value(0.7, 0.0).is_err());
    }

    #[test]
    fn rfi_perfect_channel() {
        let k = key_rate_rfi(0.0, CValue::exact(2.0)).unwrap();
        assert_eq!(k.u, 1.0);
        assert_eq!(k.i_e, 0.0);
        assert_eq!(k.r, 1.0);
    }

    #[test]
    fn rfi_reference_points() {
        let k = key_rate_rfi(0.007, CValue::exact(1.77)).unwrap();
        assert!((k.u - RFI_0007_177[0]).abs() < 1e-12);
        assert_eq!(k.v, 0.0);
        assert!((k.i_e - RFI_0007_177[1]).abs() < 1e-12);
        assert!((k.r_raw - RFI_0007_177[2]).abs() < 1e-12);

        let k = key_rate_rfi(0.02, CValue::exact(1.5)).unwrap();
        assert!((k.u - RFI_002_15[0]).abs() < 1e-12);
        assert!((k.i_e - RFI_002_15[1]).abs() < 1e-12);
        assert!((k.r_raw - RFI_002_15[2]).abs() < 1e-12);
    }

    #[test]
    fn rfi_domain_and_consistency() {
        assert!(matches!(
            key_rate_rfi(0.0, CValue::exact(2.5)),
            Err(QkdError::Domain { name: "c", .. })
        ));
        assert!(key_rate_rfi(0.0, CValue::exact(-0.1)).is_err());
        // statistical overshoot within 3σ is clipped
        let k = key_rate_rfi(
            0.0,
            CValue {
                value: 2.02,
                stderr: 0.01,
            },
        )
        .unwrap();
        assert_eq!(k.r, 1.0);
        // C = 2 with nonzero Q_Z needs v > 1
        assert!(matches!(
            key_rate_rfi(0.01, CValue::exact(2.0)),
            Err(QkdError::Inconsistent(_))
        ));
        assert!(key_rate_rfi(0.6, CValue::exact(1.0)).is_err());
    }

    #[test]
    fn clamped_branch_within_bounds() {
        // u clamps once C/2 ≥ (1−Q)²; v stays ≤ 1 while C/2 ≤ (1−Q)² + Q²
        let q: f64 = 0.1;
        let c = 2.0 * ((1.0 - q).powi(2) + 0.5 * q * q);
        let k = key_rate_rfi(q, CValue::exact(c)).unwrap();
        assert_eq!(k.u, 1.0);
        assert!((k.v - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn stderr_propagation() {
        let s = key_rate_rfi_stderr(
            0.007,
            0.001,
            CValue {
                value: 1.77,
                stderr: 0.03,
            },
        )
        .unwrap();
        assert!(s > 0.0 && s < 0.1);
        assert_eq!(
            key_rate_rfi_stderr(0.007, 0.0, CValue::exact(1.77)).unwrap(),
            0.0
        );
    }
}
