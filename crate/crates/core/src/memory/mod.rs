//! Optimal write profiles and time-domain simulation of state transfer into a
//! tunable-coupling phonon cavity.
//!
//! Everything below works in the dimensionless time `tau' = kappa_e t`. The
//! incoming excitation has the exponential envelope `sqrt(r) e^{-r t / 2}`,
//! so in dimensionless units it is fully described by `ratio = r / kappa_e`.

mod config;
mod delay;
mod optimize;
mod oracle;
mod profile;
mod simulate;

pub use config::{TransferConfig, TransferConfigFile, DEFAULT_HORIZON, DEFAULT_SLOPE_CAP};
pub use delay::{delay_step, simulate_with_delay, simulate_with_delay_step};
pub use optimize::{ns_grid, optimize_delays, OptimizeResult, RidgeFit, ScanPoint};
pub use oracle::{single_excitation_oracle, single_excitation_oracle_step};
pub use profile::{
    discretize_profile, optimal_kappa, optimal_theta, profile_constants, PhaseProfile,
    ProfileConstants, ARCCOS_SLACK,
};
pub use simulate::{
    simulate_transfer, simulate_transfer_step, write_scan_csv, write_trajectory_csv,
    LossBreakdown, TrajectoryPoint, TransferResult, DEFAULT_STEP,
};
