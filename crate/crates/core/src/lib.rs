//! Closed-form physics for strain-tuned phononic circuits.
//!
//! The crate is organised around four independent toolkits plus a batch
//! front end:
//!
//! * [`tensor`]: finite-strain kinematics, second/third-order strain energy
//!   of diamond-cubic silicon, the strain-dependent ("phonoelastic") stiffness
//!   matrix and Bond rotations between the `[100]` and `[110]` frames.
//! * [`slh`]: composition algebra for linear passive SLH network nodes
//!   (concatenation, series product, feedback reduction) and extraction of
//!   the Heisenberg-Langevin coefficients.
//! * [`memory`]: optimal write profiles for a tunable-coupling phonon cavity,
//!   fixed-step simulation of the transfer with and without mirror round-trip
//!   delay, and a grid search over clock lags.
//! * [`circuits`]: Mach-Zehnder algebra, triangular mesh decomposition of
//!   `U(N)`, voltage-to-phase calibration and the tunable mirror predicate.
//! * [`cli`]: the `phononic` command line tool.
//!
//! Angular rates are in rad/s throughout the library. Only the file formats
//! and the command line take ordinary frequencies in Hz.

pub mod circuits;
pub mod cli;
pub mod error;
pub mod memory;
pub mod slh;
pub mod tensor;

pub use error::{Error, Result};

/// Complex scalar used by every module.
pub type C64 = num_complex::Complex64;
