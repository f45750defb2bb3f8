//! Per-setting outcome distributions and seeded shot sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::qcore::{
    apply_dephasing, apply_depolarizing, apply_frame_rotation, bsm_outcome_probs, make_state, Arm,
    ChannelParams, NoiseParams, OutcomeProbs, TwoQubitDensity,
};

use super::menu::Setting;

/// Identifies an independent random stream.
///
/// The ChaCha key is `seed ‖ point ‖ 0 ‖ 0` (little-endian words) and the
/// ChaCha stream id is the setting index, so every setting of every sweep
/// point owns a disjoint stream regardless of evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub seed: u64,
    pub point: u64,
    pub setting: u64,
}

impl StreamId {
    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.point.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.setting);
        rng
    }
}

/// Noisy two-qubit state reaching Charlie for one setting.
pub fn received_state(
    setting: &Setting,
    channel: &ChannelParams,
    noise: &NoiseParams,
) -> TwoQubitDensity {
    let alice = apply_frame_rotation(make_state(setting.alice), channel.beta_a());
    let bob = apply_frame_rotation(make_state(setting.bob), channel.beta_b());
    let mut rho = TwoQubitDensity::product(&alice, &bob);
    rho = apply_depolarizing(&rho, Arm::A, noise.depol_a);
    rho = apply_depolarizing(&rho, Arm::B, noise.depol_b);
    rho = apply_dephasing(&rho, Arm::A, noise.dephase_a);
    apply_dephasing(&rho, Arm::B, noise.dephase_b)
}

/// Exact announcement distribution for one setting, background clicks included.
pub fn setting_distribution(
    setting: &Setting,
    channel: &ChannelParams,
    noise: &NoiseParams,
) -> OutcomeProbs {
    let rho = received_state(setting, channel, noise);
    let p = bsm_outcome_probs(&rho, channel.bsm_phase_offset());
    let bg = noise.background_click;
    OutcomeProbs {
        psi_plus: (1.0 - bg) * p.psi_plus + bg / 2.0,
        psi_minus: (1.0 - bg) * p.psi_minus + bg / 2.0,
        no_click: (1.0 - bg) * p.no_click,
    }
}

fn binomial<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if n == 0 || p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    // only fails for p outside [0, 1], excluded above
    Binomial::new(n, p).map(|d| d.sample(rng)).unwrap_or(0)
}

/// One multinomial draw of `shots` rounds over `(Ψ+, Ψ−, NoClick)`,
/// by sequential conditional binomials.
pub fn sample_multinomial<R: Rng + ?Sized>(
    rng: &mut R,
    shots: u64,
    probs: &OutcomeProbs,
) -> [u64; 3] {
    let n_plus = binomial(rng, shots, probs.psi_plus);
    let rest = shots - n_plus;
    let tail = 1.0 - probs.psi_plus;
    let n_minus = if tail > 0.0 {
        binomial(rng, rest, probs.psi_minus / tail)
    } else {
        0
    };
    [n_plus, n_minus, rest - n_minus]
}
