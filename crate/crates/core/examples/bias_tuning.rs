//! Phase shifts and mirror switching from a measured bias calibration.

use phononic::circuits::{interferometer_output_powers, mirror_state, phase_from_voltage, CalibrationCurve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/bias_calibration.csv");
    let cal = CalibrationCurve::from_csv(&std::fs::read_to_string(path)?)?;
    let (v_g, pitch, periods) = (312.0, 530e-9, 100.0);
    let band_edge = 5e6;
    println!("{:>6} {:>10} {:>9} {:>8} {:>8}  mirror", "V", "df (MHz)", "phi", "P1", "P2");
    for v in (-50..=50).step_by(10) {
        let v = v as f64;
        let df = cal.value_at(v)?;
        let phi = phase_from_voltage(&cal, v, periods, v_g, pitch)?;
        let (p1, p2) = interferometer_output_powers(phi);
        let state = mirror_state(df, band_edge)?;
        println!("{v:>6.0} {:>10.3} {phi:>9.4} {p1:>8.4} {p2:>8.4}  {state:?}", df / 1e6);
    }
    Ok(())
}
