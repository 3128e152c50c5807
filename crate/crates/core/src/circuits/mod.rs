//! Interferometer algebra for programmable multi-mode meshes.
//!
//! Two-mode elements follow the convention
//!
//! ```text
//! U(theta, phi) = i [[e^{i phi/2} sin(theta/2),  e^{i phi/2} cos(theta/2)],
//!                    [e^{-i phi/2} cos(theta/2), -e^{-i phi/2} sin(theta/2)]]
//! ```
//!
//! so `theta = pi` is the bar state and `theta = 0` the cross state.
//! Mesh port indices are 0-based.

mod calibration;
mod mirror;
mod mzi;
mod reck;

pub use calibration::{phase_from_voltage, CalibrationCurve, CalibrationQuantity};
pub use mirror::{mirror_state, MirrorState};
pub use mzi::{beam_splitter, interferometer_output_powers, mzi_from_primitives, mzi_unitary, phase_pair};
pub use reck::{
    haar_unitary, max_deviation, parse_unitary_csv, reck_decompose, unitarity_defect, write_unitary_csv,
    MeshPlan, MziSetting, UNITARITY_TOL,
};
