use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{QkdError, Result};
use crate::qcore::{Basis, Bit, ChannelParams, NoiseParams};

use super::menu::{
    apply_check_phase, build_setting_grid, validate_menus, Setting, SettingKey, StateMenu,
};
use super::sampling::{sample_multinomial, setting_distribution, StreamId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimMode {
    /// Expected counts, `probability × shots`, stored unrounded.
    Analytic,
    /// Seeded multinomial samples.
    MonteCarlo,
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimMode::Analytic => "analytic",
            SimMode::MonteCarlo => "montecarlo",
        })
    }
}

impl FromStr for SimMode {
    type Err = QkdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(SimMode::Analytic),
            "montecarlo" | "monte_carlo" | "mc" => Ok(SimMode::MonteCarlo),
            other => Err(QkdError::Config(format!(
                "unknown simulation mode {other:?} (expected analytic or montecarlo)"
            ))),
        }
    }
}

/// Coincidence record for one setting. Counts are integers in Monte Carlo
/// mode and real-valued expectations in analytic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingOutcome {
    pub setting: Setting,
    pub n_psi_plus: f64,
    pub n_psi_minus: f64,
    pub n_no_click: f64,
    pub shots: u64,
}

impl SettingOutcome {
    /// Ψ+ and Ψ− clicks together.
    pub fn clicks(&self) -> f64 {
        self.n_psi_plus + self.n_psi_minus
    }
}

/// Draw `shots` rounds of one setting from `rng`.
pub fn simulate_setting<R: Rng + ?Sized>(
    setting: &Setting,
    channel: &ChannelParams,
    noise: &NoiseParams,
    shots: u64,
    rng: &mut R,
) -> SettingOutcome {
    let probs = setting_distribution(setting, channel, noise);
    let [p, m, n] = sample_multinomial(rng, shots, &probs);
    SettingOutcome {
        setting: *setting,
        n_psi_plus: p as f64,
        n_psi_minus: m as f64,
        n_no_click: n as f64,
        shots,
    }
}

/// Everything needed to produce one count table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub channel: ChannelParams,
    pub noise: NoiseParams,
    pub alice_menu: StateMenu,
    pub bob_menu: StateMenu,
    /// θ of the phase-freedom X+ check state; `None` sends the standard X+.
    pub check_phase: Option<f64>,
    pub mode: SimMode,
    pub shots: u64,
    pub seed: u64,
    /// Sweep-point index, folded into the random stream key.
    pub point: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            channel: ChannelParams::ideal(),
            noise: NoiseParams::ideal(),
            alice_menu: StateMenu::alice(super::menu::MenuMode::Six),
            bob_menu: StateMenu::bob(),
            check_phase: None,
            mode: SimMode::Analytic,
            shots: 100_000,
            seed: 0,
            point: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableMetadata {
    pub channel: ChannelParams,
    pub noise: NoiseParams,
    pub alice_menu: StateMenu,
    pub bob_menu: StateMenu,
    pub check_phase: Option<f64>,
    pub shots: u64,
    pub seed: u64,
    pub point: u64,
    pub mode: SimMode,
}

/// All coincidence records of one protocol run, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    outcomes: Vec<SettingOutcome>,
    index: HashMap<SettingKey, usize>,
    pub metadata: TableMetadata,
}

impl CountTable {
    pub fn new(outcomes: Vec<SettingOutcome>, metadata: TableMetadata) -> Result<Self> {
        let mut index = HashMap::with_capacity(outcomes.len());
        for (i, o) in outcomes.iter().enumerate() {
            if index.insert(o.setting.key(), i).is_some() {
                return Err(QkdError::Config(format!("duplicate setting {}", o.setting)));
            }
        }
        Ok(CountTable {
            outcomes,
            index,
            metadata,
        })
    }

    pub fn outcomes(&self) -> &[SettingOutcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn get(&self, alice: (Basis, Bit), bob: (Basis, Bit)) -> Option<&SettingOutcome> {
        self.index
            .get(&(alice.0, alice.1, bob.0, bob.1))
            .map(|&i| &self.outcomes[i])
    }

    /// True if Alice's X+ was replaced by the phase-freedom variant.
    pub fn uses_check_phase(&self) -> bool {
        self.metadata.check_phase.is_some()
    }
}

/// Run every setting of the active grid and assemble the count table.
///
/// Settings are evaluated in parallel; each one reads only its own
/// [`StreamId`], so the result does not depend on the worker count.
pub fn run_protocol(config: &ProtocolConfig) -> Result<CountTable> {
    validate_menus(&config.alice_menu, &config.bob_menu)?;
    config
        .noise
        .validate()
        .map_err(|e| QkdError::Config(e.to_string()))?;
    if config.check_phase.is_some() && config.alice_menu.mode != super::menu::MenuMode::OneCheck {
        return Err(QkdError::Config(
            "the phase-freedom check state requires Alice's one-check menu".into(),
        ));
    }
    if config.mode == SimMode::MonteCarlo && config.shots == 0 {
        return Err(QkdError::Config("Monte Carlo mode needs shots ≥ 1".into()));
    }

    let mut grid = build_setting_grid(&config.alice_menu, &config.bob_menu);
    if let Some(theta) = config.check_phase {
        apply_check_phase(&mut grid, theta);
    }

    let outcomes: Vec<SettingOutcome> = grid
        .par_iter()
        .enumerate()
        .map(|(i, setting)| match config.mode {
            SimMode::Analytic => {
                let p = setting_distribution(setting, &config.channel, &config.noise);
                let n = config.shots as f64;
                SettingOutcome {
                    setting: *setting,
                    n_psi_plus: p.psi_plus * n,
                    n_psi_minus: p.psi_minus * n,
                    n_no_click: p.no_click * n,
                    shots: config.shots,
                }
            }
            SimMode::MonteCarlo => {
                let mut rng = StreamId {
                    seed: config.seed,
                    point: config.point,
                    setting: i as u64,
                }
                .rng();
                simulate_setting(
                    setting,
                    &config.channel,
                    &config.noise,
                    config.shots,
                    &mut rng,
                )
            }
        })
        .collect();

    CountTable::new(
        outcomes,
        TableMetadata {
            channel: config.channel,
            noise: config.noise,
            alice_menu: config.alice_menu,
            bob_menu: config.bob_menu,
            check_phase: config.check_phase,
            shots: config.shots,
            seed: config.seed,
            point: config.point,
            mode: config.mode,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simkit::menu::{MenuMode, Party};

    #[test]
    fn analytic_one_check_has_18_entries() {
        let cfg = ProtocolConfig {
            alice_menu: StateMenu::alice(MenuMode::OneCheck),
            ..ProtocolConfig::default()
        };
        let table = run_protocol(&cfg).unwrap();
        assert_eq!(table.len(), 18);
        assert!(table
            .get((Basis::X, Bit::Minus), (Basis::X, Bit::Plus))
            .is_none());
        assert!(table
            .get((Basis::X, Bit::Plus), (Basis::Y, Bit::Minus))
            .is_some());
    }

    #[test]
    fn analytic_counts_are_unrounded() {
        let cfg = ProtocolConfig {
            channel: ChannelParams::new(0.3, 0.0, 0.0),
            shots: 1000,
            ..ProtocolConfig::default()
        };
        let table = run_protocol(&cfg).unwrap();
        let o = table
            .get((Basis::X, Bit::Plus), (Basis::X, Bit::Plus))
            .unwrap();
        assert!((o.n_psi_plus - 250.0 * (1.0 + 0.3f64.cos())).abs() < 1e-9);
        assert!(o.n_psi_plus.fract() != 0.0);
    }

    #[test]
    fn conservation_in_monte_carlo() {
        let cfg = ProtocolConfig {
            channel: ChannelParams::new(1.0, 0.2, 0.0),
            noise: NoiseParams::symmetric_depolarizing(0.05),
            mode: SimMode::MonteCarlo,
            shots: 5_000,
            seed: 42,
            ..ProtocolConfig::default()
        };
        let table = run_protocol(&cfg).unwrap();
        for o in table.outcomes() {
            assert_eq!(o.n_psi_plus + o.n_psi_minus + o.n_no_click, 5_000.0);
        }
    }

    #[test]
    fn same_seed_same_table() {
        let cfg = ProtocolConfig {
            channel: ChannelParams::new(0.7, 2.0, 0.1),
            mode: SimMode::MonteCarlo,
            shots: 10_000,
            seed: 9,
            ..ProtocolConfig::default()
        };
        assert_eq!(run_protocol(&cfg).unwrap(), run_protocol(&cfg).unwrap());
        let other = ProtocolConfig { seed: 10, ..cfg };
        assert_ne!(run_protocol(&cfg).unwrap(), run_protocol(&other).unwrap());
    }

    #[test]
    fn configuration_errors() {
        let bad_bob = ProtocolConfig {
            bob_menu: StateMenu::new(MenuMode::OneCheck, Party::Bob),
            ..ProtocolConfig::default()
        };
        assert!(matches!(run_protocol(&bad_bob), Err(QkdError::Config(_))));

        let bad_phase = ProtocolConfig {
            check_phase: Some(0.3),
            ..ProtocolConfig::default()
        };
        assert!(matches!(run_protocol(&bad_phase), Err(QkdError::Config(_))));

        let no_shots = ProtocolConfig {
            mode: SimMode::MonteCarlo,
            shots: 0,
            ..ProtocolConfig::default()
        };
        assert!(run_protocol(&no_shots).is_err());
    }

    #[test]
    fn zero_shot_setting() {
        let s = build_setting_grid(&StateMenu::alice(MenuMode::Six), &StateMenu::bob())[7];
        let mut rng = StreamId {
            seed: 0,
            point: 0,
            setting: 0,
        }
        .rng();
        let o = simulate_setting(
            &s,
            &ChannelParams::ideal(),
            &NoiseParams::ideal(),
            0,
            &mut rng,
        );
        assert_eq!((o.n_psi_plus, o.n_psi_minus, o.n_no_click), (0.0, 0.0, 0.0));
    }
}
