//! Protocol-round simulation: setting grids, exact per-setting outcome
//! distributions, seeded multinomial sampling and count tables.

pub mod menu;
pub mod sampling;
pub mod table;

pub use menu::{build_setting_grid, validate_menus, MenuMode, Party, Setting, StateMenu};
pub use sampling::{setting_distribution, StreamId};
pub use table::{
    run_protocol, simulate_setting, CountTable, ProtocolConfig, SettingOutcome, SimMode,
};
