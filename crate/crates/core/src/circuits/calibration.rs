use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::phase_accumulation;

/// What a calibration table maps the bias voltage to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationQuantity {
    /// Band frequency shift in Hz.
    DeltaF,
    /// Phase per waveguide period in rad.
    Phase,
}

/// Measured bias response, interpolated linearly between points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationCurve {
    pub quantity: CalibrationQuantity,
    /// `(voltage V, value)` with strictly increasing voltages.
    pub points: Vec<(f64, f64)>,
}

impl CalibrationCurve {
    pub fn new(quantity: CalibrationQuantity, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("a calibration needs at least two points".into()));
        }
        if points.iter().any(|(v, y)| !v.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidInput("calibration values must be finite".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidInput("calibration voltages must increase strictly".into()));
        }
        Ok(Self { quantity, points })
    }

    /// Read a CSV with header `voltage_v,delta_f_hz` or `voltage_v,phase_rad`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |e: csv::Error| Error::InvalidInput(format!("calibration csv: {e}"));
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(bad)?.clone();
        let quantity = match (headers.get(0), headers.get(1), headers.len()) {
            (Some("voltage_v"), Some("delta_f_hz"), 2) => CalibrationQuantity::DeltaF,
            (Some("voltage_v"), Some("phase_rad"), 2) => CalibrationQuantity::Phase,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "calibration header must be voltage_v,delta_f_hz or voltage_v,phase_rad, got {:?}",
                    headers.iter().collect::<Vec<_>>().join(",")
                )))
            }
        };
        let mut points = Vec::new();
        for rec in reader.deserialize::<(f64, f64)>() {
            points.push(rec.map_err(bad)?);
        }
        Self::new(quantity, points)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Tabulated value at `v`; no extrapolation.
    pub fn value_at(&self, v: f64) -> Result<f64> {
        let (min, max) = self.range();
        if !(v >= min && v <= max) {
            return Err(Error::OutOfRange { value: v, min, max });
        }
        let i = self.points.partition_point(|&(x, _)| x <= v);
        if i == self.points.len() {
            return Ok(self.points[i - 1].1);
        }
        let (x0, y0) = self.points[i - 1];
        let (x1, y1) = self.points[i];
        Ok(y0 + (y1 - y0) * (v - x0) / (x1 - x0))
    }
}

/// Phase shift of a biased section `length_periods` periods of pitch `a`
/// long. Frequency tables are converted through `dk = 2 pi |df| / v_g` with a
/// negative shift giving a positive phase; phase tables are per period.
pub fn phase_from_voltage(cal: &CalibrationCurve, v: f64, length_periods: f64, v_g: f64, a: f64) -> Result<f64> {
    if !(length_periods >= 0.0) || !(a > 0.0) {
        return Err(Error::Domain(format!(
            "need non-negative length and positive pitch (got {length_periods} periods, a = {a})"
        )));
    }
    let y = cal.value_at(v)?;
    match cal.quantity {
        CalibrationQuantity::DeltaF => phase_accumulation(y, v_g, length_periods * a, 0.0, 0.0),
        CalibrationQuantity::Phase => Ok(y * length_periods),
    }
}
