use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-physical deformation: det(I + g) = {jacobian} <= 0")]
    NonPhysicalDeformation { jacobian: f64 },

    #[error("port mismatch: {left} ports cannot feed {right} ports")]
    PortMismatch { left: usize, right: usize },

    #[error("invalid port index {index} for a {n_ports}-port system")]
    InvalidPort { index: usize, n_ports: usize },

    #[error("singular feedback loop from output {out_port} to input {in_port}: loop gain is 1")]
    SingularLoop { out_port: usize, in_port: usize },

    #[error("profile argument {argument} outside [-1, 1]")]
    ProfileOutOfRange { argument: f64 },

    #[error("no sampling satisfies slope cap {cap} within the horizon")]
    InfeasibleCap { cap: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("delay history cannot serve tau' = {requested} (oldest stored {oldest})")]
    HistoryUnderrun { requested: f64, oldest: f64 },

    #[error("matrix is not unitary: max |U^H U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value {value} outside calibrated range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    /// Malformed or inconsistent user input (files, configs, scripts).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by bad inputs rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::InvalidInput(_)
                | Error::InvalidPort { .. }
                | Error::DimensionMismatch { .. }
                | Error::PortMismatch { .. }
                | Error::OutOfRange { .. }
        )
    }
}
