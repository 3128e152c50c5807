use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::profile::{discretize_profile, profile_constants, PhaseProfile};
use crate::error::{Error, Result};

pub const DEFAULT_HORIZON: f64 = 25.0;
pub const DEFAULT_SLOPE_CAP: f64 = 23.0;

/// Physical parameters of one transfer. Rates in rad/s, delays in s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferConfig {
    /// Raw per-port extrinsic rate.
    pub kappa_e: f64,
    pub kappa_i: f64,
    /// Decay rate of the incoming power envelope.
    pub r: f64,
    /// Cavity to mirror round trip.
    pub delta_f: f64,
    /// Lag of the mirror phase clock.
    pub delta_m: f64,
    /// Lag of the cavity detuning clock.
    pub delta_c: f64,
    /// Final dimensionless time.
    pub horizon: f64,
}

impl Default for TransferConfig {
    fn default() -> Self {
        let kappa_e = 2.0 * PI * 300e3;
        Self {
            kappa_e,
            kappa_i: 2.0 * PI,
            r: kappa_e / 3.0,
            delta_f: 0.0,
            delta_m: 0.0,
            delta_c: 0.0,
            horizon: DEFAULT_HORIZON,
        }
    }
}

impl TransferConfig {
    /// Default device with the given `r / kappa_e`, no loss and no delay.
    pub fn lossless(ratio: f64) -> Self {
        let base = Self::default();
        Self { r: ratio * base.kappa_e, kappa_i: 0.0, ..base }
    }

    pub fn ratio(&self) -> f64 {
        self.r / self.kappa_e
    }

    pub fn loss_ratio(&self) -> f64 {
        self.kappa_i / self.kappa_e
    }

    /// `kappa_e delta_F`.
    pub fn tau_f(&self) -> f64 {
        self.kappa_e * self.delta_f
    }

    pub fn tau_m(&self) -> f64 {
        self.kappa_e * self.delta_m
    }

    pub fn tau_c(&self) -> f64 {
        self.kappa_e * self.delta_c
    }

    pub fn with_delays(mut self, delta_f: f64, delta_m: f64, delta_c: f64) -> Self {
        self.delta_f = delta_f;
        self.delta_m = delta_m;
        self.delta_c = delta_c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.kappa_e, self.kappa_i, self.r, self.delta_f, self.delta_m, self.delta_c, self.horizon,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("transfer parameters must be finite".into()));
        }
        if self.kappa_e <= 0.0 {
            return Err(Error::Domain(format!("kappa_e must be positive, got {}", self.kappa_e)));
        }
        if self.kappa_i < 0.0 {
            return Err(Error::Domain(format!("kappa_i must be non-negative, got {}", self.kappa_i)));
        }
        let ratio = self.ratio();
        if !(ratio > 0.0 && ratio < 4.0) {
            return Err(Error::Domain(format!("r / kappa_e = {ratio} outside (0, 4)")));
        }
        if self.delta_f < 0.0 {
            return Err(Error::Domain(format!("delta_F must be non-negative, got {}", self.delta_f)));
        }
        let tau_c = profile_constants(ratio)?.tau_c;
        if self.horizon <= tau_c {
            return Err(Error::Domain(format!(
                "horizon {} does not exceed the critical time {tau_c}",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// On-disk form of a transfer configuration. Frequencies are ordinary
/// frequencies in Hz and delays in ns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferConfigFile {
    pub kappa_e_hz: f64,
    #[serde(default)]
    pub kappa_i_hz: f64,
    pub r_hz: f64,
    #[serde(default)]
    pub delta_f_ns: f64,
    #[serde(default)]
    pub delta_m_ns: f64,
    #[serde(default)]
    pub delta_c_ns: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    /// When present the write profile is slope-capped; otherwise the
    /// closed-form profile is used.
    #[serde(default)]
    pub slope_cap: Option<f64>,
}

fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}

impl TransferConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("transfer config: {e}")))
    }

    pub fn to_config(&self) -> Result<TransferConfig> {
        let config = TransferConfig {
            kappa_e: 2.0 * PI * self.kappa_e_hz,
            kappa_i: 2.0 * PI * self.kappa_i_hz,
            r: 2.0 * PI * self.r_hz,
            delta_f: self.delta_f_ns * 1e-9,
            delta_m: self.delta_m_ns * 1e-9,
            delta_c: self.delta_c_ns * 1e-9,
            horizon: self.horizon,
        };
        config.validate()?;
        Ok(config)
    }

    /// The write profile this file asks for.
    pub fn profile(&self) -> Result<PhaseProfile> {
        let config = self.to_config()?;
        let ideal = PhaseProfile::optimal(config.ratio())?;
        match self.slope_cap {
            Some(cap) => discretize_profile(&ideal, cap, config.horizon),
            None => Ok(ideal),
        }
    }
}
