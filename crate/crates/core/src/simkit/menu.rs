use std::fmt;
use std::str::FromStr;

use crate::error::{QkdError, Result};
use crate::qcore::{Basis, Bit, StatePrepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

/// Which states a party may send.
///
/// Every menu includes Z± for key generation; the modes differ only in
/// how many X/Y check states are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MenuMode {
    /// Z±, X±, Y±
    Six,
    /// X±, Y± as check states (same state set as `Six`)
    FourCheck,
    /// X± as check states
    TwoCheck,
    /// X+ only as check state
    OneCheck,
}

impl MenuMode {
    pub fn name(self) -> &'static str {
        match self {
            MenuMode::Six => "six",
            MenuMode::FourCheck => "four",
            MenuMode::TwoCheck => "two",
            MenuMode::OneCheck => "one",
        }
    }
}

impl fmt::Display for MenuMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MenuMode {
    type Err = QkdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "six" => Ok(MenuMode::Six),
            "four" | "four_check" => Ok(MenuMode::FourCheck),
            "two" | "two_check" => Ok(MenuMode::TwoCheck),
            "one" | "one_check" => Ok(MenuMode::OneCheck),
            other => Err(QkdError::Config(format!(
                "unknown state menu {other:?} (expected six, four, two or one)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateMenu {
    pub mode: MenuMode,
    pub party: Party,
}

impl StateMenu {
    pub fn new(mode: MenuMode, party: Party) -> Self {
        StateMenu { mode, party }
    }

    pub fn alice(mode: MenuMode) -> Self {
        Self::new(mode, Party::Alice)
    }

    pub fn bob() -> Self {
        Self::new(MenuMode::Six, Party::Bob)
    }

    /// States in grid order: basis Z, X, Y; bit +, −.
    pub fn states(&self) -> Vec<StatePrepSpec> {
        let allowed = |b: Basis, bit: Bit| match self.mode {
            MenuMode::Six | MenuMode::FourCheck => true,
            MenuMode::TwoCheck => b != Basis::Y,
            MenuMode::OneCheck => b == Basis::Z || (b == Basis::X && bit == Bit::Plus),
        };
        Basis::ALL
            .iter()
            .flat_map(|&b| Bit::ALL.iter().map(move |&bit| (b, bit)))
            .filter(|&(b, bit)| allowed(b, bit))
            .map(|(b, bit)| StatePrepSpec::new(b, bit))
            .collect()
    }

    pub fn contains(&self, basis: Basis, bit: Bit) -> bool {
        self.states()
            .iter()
            .any(|s| s.basis == basis && s.bit == bit)
    }
}

/// Reduced menus are only defined for Alice; Bob always sends all six states.
pub fn validate_menus(alice: &StateMenu, bob: &StateMenu) -> Result<()> {
    if alice.party != Party::Alice || bob.party != Party::Bob {
        return Err(QkdError::Config("menus assigned to the wrong party".into()));
    }
    if bob.mode != MenuMode::Six {
        return Err(QkdError::Config(format!(
            "Bob's menu must be six, got {}",
            bob.mode
        )));
    }
    Ok(())
}

/// One (Alice state, Bob state) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setting {
    pub alice: StatePrepSpec,
    pub bob: StatePrepSpec,
}

/// Lookup key for a setting; the θ variant of X+ is still keyed as X+.
pub type SettingKey = (Basis, Bit, Basis, Bit);

impl Setting {
    pub fn key(&self) -> SettingKey {
        (
            self.alice.basis,
            self.alice.bit,
            self.bob.basis,
            self.bob.bit,
        )
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.alice, self.bob)
    }
}

/// Cartesian product of both menus, Alice-major.
pub fn build_setting_grid(alice_menu: &StateMenu, bob_menu: &StateMenu) -> Vec<Setting> {
    let bob_states = bob_menu.states();
    alice_menu
        .states()
        .into_iter()
        .flat_map(|a| {
            bob_states
                .iter()
                .map(move |&b| Setting { alice: a, bob: b })
        })
        .collect()
}

/// Replace Alice's X+ check state with `(|0⟩ + e^{iθ}|1⟩)/√2` everywhere in the grid.
pub fn apply_check_phase(grid: &mut [Setting], theta: f64) {
    for s in grid.iter_mut() {
        if s.alice.basis == Basis::X && s.alice.bit == Bit::Plus {
            s.alice = s.alice.with_phase(theta);
        }
    }
}
