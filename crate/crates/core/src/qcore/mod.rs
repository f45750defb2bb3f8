//! Exact finite-dimensional engine: state preparation, frame rotation,
//! per-arm noise, and Bell-state-measurement probabilities.

pub mod bsm;
pub mod channel;
pub mod density;
pub mod state;

pub use bsm::{bsm_outcome_probs, BellOutcome, OutcomeProbs};
pub use channel::{ChannelParams, NoiseParams};
pub use density::{apply_dephasing, apply_depolarizing, Arm, TwoQubitDensity};
pub use state::{
    apply_frame_rotation, make_state, wrap_angle, Basis, Bit, PureQubit, StatePrepSpec,
};
