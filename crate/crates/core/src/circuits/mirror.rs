use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MirrorState {
    Propagating,
    Reflecting,
}

/// Whether a waveguide section whose band is shifted by `delta_f` (Hz)
/// still transmits at an operating point `band_edge_offset` (Hz) inside the
/// band. A negative shift moves the band edge toward the operating point,
/// which is reflected once the shift reaches the offset.
pub fn mirror_state(delta_f: f64, band_edge_offset: f64) -> Result<MirrorState> {
    if !(band_edge_offset > 0.0) || !band_edge_offset.is_finite() {
        return Err(Error::Domain(format!("band edge offset must be positive, got {band_edge_offset}")));
    }
    if !delta_f.is_finite() {
        return Err(Error::Domain("frequency shift must be finite".into()));
    }
    Ok(if delta_f <= -band_edge_offset { MirrorState::Reflecting } else { MirrorState::Propagating })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(mirror_state(-685e3, 486e3).unwrap(), MirrorState::Reflecting);
        assert_eq!(mirror_state(-400e3, 486e3).unwrap(), MirrorState::Propagating);
        assert_eq!(mirror_state(0.0, 486e3).unwrap(), MirrorState::Propagating);
        assert_eq!(mirror_state(900e3, 486e3).unwrap(), MirrorState::Propagating);
        assert_eq!(mirror_state(-486e3, 486e3).unwrap(), MirrorState::Reflecting);
        assert!(mirror_state(-1.0, 0.0).is_err());
    }
}
