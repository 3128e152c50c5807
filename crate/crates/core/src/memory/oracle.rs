use nalgebra::DVector;

use super::config::TransferConfig;
use super::profile::PhaseProfile;
use super::simulate::{step_count, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::slh::{compensated_tunable_cavity, concatenate, master_eq_coeffs, series, trivial_node, SlhTriplet};
use crate::C64;

const SOURCE: &str = "source";
const CAVITY: &str = "a_c";

/// Transfer fidelity from the single-excitation sector of the cascaded
/// source and cavity network.
///
/// The incoming excitation is emitted by a virtual source cavity of decay
/// rate `r` that starts with one phonon. At every instant the compensated
/// cavity network is rebuilt by SLH composition and the one-excitation
/// amplitudes evolve under `-i H_eff = -i h - 1/2 L^dag L`. The result is
/// the population of the memory cavity at the horizon.
pub fn single_excitation_oracle(config: &TransferConfig, profile: &PhaseProfile) -> Result<f64> {
    single_excitation_oracle_step(config, profile, DEFAULT_STEP)
}

/// [`single_excitation_oracle`] with an explicit nominal step.
pub fn single_excitation_oracle_step(config: &TransferConfig, profile: &PhaseProfile, step: f64) -> Result<f64> {
    config.validate()?;
    if config.delta_f != 0.0 {
        return Err(Error::Domain("the single-excitation oracle has no propagation delay".into()));
    }
    let (n, h) = step_count(config.horizon, step)?;
    let ki = config.loss_ratio();
    let source = SlhTriplet::new(
        nalgebra::DMatrix::identity(1, 1),
        nalgebra::DMatrix::from_element(1, 1, C64::new(config.ratio().sqrt(), 0.0)),
        nalgebra::DMatrix::zeros(1, 1),
        vec![SOURCE.to_string()],
    )?;
    let feed = concatenate(&source, &trivial_node(1)?);

    let generator = |tau: f64| -> Result<nalgebra::DMatrix<C64>> {
        let memory = compensated_tunable_cavity(1.0, ki, profile.theta(tau))?;
        let net = series(&memory, &feed)?;
        Ok(master_eq_coeffs(&net).drift)
    };
    let probe = series(&compensated_tunable_cavity(1.0, ki, 0.0)?, &feed)?;
    let src = probe.modes.iter().position(|m| m == SOURCE).expect("source mode");
    let cav = probe.modes.iter().position(|m| m == CAVITY).expect("cavity mode");

    let mut psi = DVector::<C64>::zeros(probe.n_modes());
    psi[src] = C64::new(1.0, 0.0);
    for k in 0..n {
        let t = k as f64 * h;
        let g0 = generator(t)?;
        let gm = generator(t + 0.5 * h)?;
        let g1 = generator(t + h)?;
        let k1 = &g0 * &psi;
        let k2 = &gm * (&psi + &k1 * C64::new(0.5 * h, 0.0));
        let k3 = &gm * (&psi + &k2 * C64::new(0.5 * h, 0.0));
        let k4 = &g1 * (&psi + &k3 * C64::new(h, 0.0));
        psi += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0);
    }
    Ok(psi[cav].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::simulate_transfer;

    #[test]
    fn matches_semiclassical_simulation() {
        let config = TransferConfig { horizon: 8.0, ..TransferConfig::lossless(1.0 / 3.0) };
        let profile = PhaseProfile::optimal(1.0 / 3.0).unwrap();
        let oracle = single_excitation_oracle(&config, &profile).unwrap();
        let direct = simulate_transfer(&config, &profile).unwrap().fidelity;
        assert!((oracle - direct).abs() < 1e-9, "{oracle} vs {direct}");
    }

    #[test]
    fn decoupled_and_delayed() {
        let config = TransferConfig { horizon: 2.0, ..TransferConfig::lossless(1.0 / 3.0) };
        let pi = PhaseProfile::Constant(std::f64::consts::PI);
        assert!(single_excitation_oracle(&config, &pi).unwrap() < 1e-28);
        let delayed = config.with_delays(60e-9, 0.0, 0.0);
        assert!(matches!(single_excitation_oracle(&delayed, &pi), Err(Error::Domain(_))));
    }
}
