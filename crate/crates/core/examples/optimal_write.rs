//! Optimal write profile for an exponentially decaying phonon pulse and the
//! simulated capture, with and without a finite phase-slew rate.

use phononic::memory::{
    discretize_profile, optimal_theta, profile_constants, simulate_transfer, PhaseProfile, TransferConfig,
    DEFAULT_SLOPE_CAP,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = TransferConfig::default();
    let x = config.ratio();
    let c = profile_constants(x)?;
    println!("r / kappa_e = {x:.4}: A1 = {:.5}, switch-on at t_c = {:.4} us", c.a1, c.tau_c / config.kappa_e * 1e6);
    for tau in [0.0, c.tau_c, 0.5, 1.0, 2.0, 3.0, 5.0] {
        println!("  tau = {tau:.3}: theta = {:.4} rad", optimal_theta(x, tau)?);
    }
    let ideal = PhaseProfile::optimal(x)?;
    let capped = discretize_profile(&ideal, DEFAULT_SLOPE_CAP, config.horizon)?;
    for (name, p) in [("closed form", &ideal), ("slope-capped", &capped)] {
        let r = simulate_transfer(&config, p)?;
        println!(
            "{name:>13}: F = {:.5}  reflected {:.4}  intrinsic {:.1e}  untransferred {:.1e}",
            r.fidelity, r.loss.reflected, r.loss.intrinsic, r.loss.residual_input
        );
    }
    println!("\n{:>6} {:>8} {:>8}", "x", "A1", "F_sim");
    for x in [0.05, 0.1, 0.2, 1.0 / 3.0, 0.5, 1.0, 2.0, 3.0] {
        let cfg = TransferConfig { horizon: f64::max(25.0 / (3.0 * x), 25.0), ..TransferConfig::lossless(x) };
        let f = simulate_transfer(&cfg, &PhaseProfile::optimal(x)?)?.fidelity;
        println!("{x:>6.3} {:>8.5} {f:>8.5}", profile_constants(x)?.a1);
    }
    Ok(())
}
