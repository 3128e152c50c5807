use std::io::Write;

use serde::Serialize;

use super::config::TransferConfig;
use super::optimize::ScanPoint;
use super::profile::PhaseProfile;
use crate::error::{Error, Result};
use crate::C64;

/// Nominal integrator step in `tau'`.
pub const DEFAULT_STEP: f64 = 0.002;
pub(crate) const MIN_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub amplitude: C64,
    pub theta: f64,
}

/// Where the incoming excitation went, as fractions of the pulse energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBreakdown {
    /// Energy leaving through the waveguide port.
    pub reflected: f64,
    /// Energy absorbed by intrinsic loss.
    pub intrinsic: f64,
    /// Pulse energy still to arrive after the horizon, `e^{-ratio T}`.
    pub residual_input: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferResult {
    /// `|A_c|^2` at the horizon.
    pub fidelity: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub loss: LossBreakdown,
}

pub(crate) fn step_count(horizon: f64, step: f64) -> Result<(usize, f64)> {
    if !(step >= MIN_STEP) || !step.is_finite() {
        return Err(Error::Integration(format!("step size {step:e} below {MIN_STEP:e}")));
    }
    let n = (horizon / step).ceil() as usize;
    Ok((n, horizon / n as f64))
}

/// Semiclassical capture without propagation delay: integrates
/// `dA/dtau' = -1/2 (4 cos^2(theta/2) + kappa_i/kappa_e) A - 2 cos(theta/2) a_in`
/// with `a_in = sqrt(ratio) e^{-ratio tau' / 2}` and `A(0) = 0`.
pub fn simulate_transfer(config: &TransferConfig, profile: &PhaseProfile) -> Result<TransferResult> {
    simulate_transfer_step(config, profile, DEFAULT_STEP)
}

/// [`simulate_transfer`] with an explicit nominal step.
pub fn simulate_transfer_step(
    config: &TransferConfig,
    profile: &PhaseProfile,
    step: f64,
) -> Result<TransferResult> {
    config.validate()?;
    let (n, h) = step_count(config.horizon, step)?;
    let x = config.ratio();
    let ki = config.loss_ratio();
    let sx = x.sqrt();

    // State: amplitude, reflected energy, intrinsic energy.
    let rhs = |tau: f64, a: C64| -> (C64, f64, f64) {
        let c = (profile.theta(tau) / 2.0).cos();
        let drive = sx * (-0.5 * x * tau).exp();
        let da = -0.5 * (4.0 * c * c + ki) * a - 2.0 * c * drive;
        let out = drive + 2.0 * c * a;
        (da, out.norm_sqr(), ki * a.norm_sqr())
    };

    let mut a = C64::new(0.0, 0.0);
    let (mut refl, mut intr) = (0.0, 0.0);
    let mut trajectory = Vec::with_capacity(n + 1);
    trajectory.push(TrajectoryPoint { tau: 0.0, amplitude: a, theta: profile.theta(0.0) });
    for k in 0..n {
        let t = k as f64 * h;
        let (a1, r1, i1) = rhs(t, a);
        let (a2, r2, i2) = rhs(t + 0.5 * h, a + 0.5 * h * a1);
        let (a3, r3, i3) = rhs(t + 0.5 * h, a + 0.5 * h * a2);
        let (a4, r4, i4) = rhs(t + h, a + h * a3);
        a += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        refl += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
        intr += h / 6.0 * (i1 + 2.0 * i2 + 2.0 * i3 + i4);
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::Integration(format!("amplitude diverged at tau' = {t}")));
        }
        let tau = (k + 1) as f64 * h;
        trajectory.push(TrajectoryPoint { tau, amplitude: a, theta: profile.theta(tau) });
    }
    Ok(TransferResult {
        fidelity: a.norm_sqr(),
        trajectory,
        loss: LossBreakdown {
            reflected: refl,
            intrinsic: intr,
            residual_input: (-x * config.horizon).exp(),
        },
    })
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("csv output: {e}"))
}

/// Trajectory CSV with columns `tau_prime, re_A, im_A, theta`.
pub fn write_trajectory_csv<W: Write>(out: W, result: &TransferResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["tau_prime", "re_A", "im_A", "theta"]).map_err(csv_error)?;
    for p in &result.trajectory {
        w.serialize((p.tau, p.amplitude.re, p.amplitude.im, p.theta)).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

/// Delay scan CSV with columns `delta_m_ns, delta_c_ns, fidelity`.
pub fn write_scan_csv<W: Write>(out: W, scan: &[ScanPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["delta_m_ns", "delta_c_ns", "fidelity"]).map_err(csv_error)?;
    for p in scan {
        w.serialize((p.delta_m * 1e9, p.delta_c * 1e9, p.fidelity)).map_err(csv_error)?;
    }
    w.flush().map_err(csv_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::profile_constants;

    #[test]
    fn ideal_profile_reaches_a1() {
        let config = TransferConfig::lossless(1.0 / 3.0);
        let r = simulate_transfer(&config, &PhaseProfile::optimal(1.0 / 3.0).unwrap()).unwrap();
        let a1 = profile_constants(1.0 / 3.0).unwrap().a1;
        assert!((r.fidelity - a1).abs() < 2e-3, "{} vs {a1}", r.fidelity);
        let total = r.fidelity + r.loss.reflected + r.loss.residual_input;
        assert!((total - 1.0).abs() < 1e-6, "{total}");
        assert_eq!(r.trajectory.len(), 12_501);
    }

    #[test]
    fn decoupled_cavity_stays_empty() {
        let config = TransferConfig::lossless(1.0 / 3.0);
        let r = simulate_transfer(&config, &PhaseProfile::Constant(std::f64::consts::PI)).unwrap();
        assert!(r.fidelity < 1e-28);
        assert!(r.trajectory.iter().all(|p| p.amplitude.norm() < 1e-14));
    }

    #[test]
    fn constant_coupling_matches_two_exponential_solution() {
        // dA/dt = -2A - 2 sqrt(x) e^{-x t/2}  =>  A = 2 sqrt(x) (e^{-2t} - e^{-x t/2}) / (2 - x/2)
        let x = 1.0 / 3.0;
        let config = TransferConfig { horizon: 6.0, ..TransferConfig::lossless(x) };
        let r = simulate_transfer(&config, &PhaseProfile::Constant(0.0)).unwrap();
        let exact = |t: f64| 2.0 * x.sqrt() * ((-2.0 * t).exp() - (-0.5 * x * t).exp()) / (2.0 - 0.5 * x);
        let peak_num = r.trajectory.iter().map(|p| p.amplitude.norm_sqr()).fold(0.0, f64::max);
        let peak_exact = r.trajectory.iter().map(|p| exact(p.tau).powi(2)).fold(0.0, f64::max);
        assert!((peak_num - peak_exact).abs() < 1e-10);
        let t_peak = (2.0f64 / (0.5 * x)).ln() / (2.0 - 0.5 * x);
        assert!((peak_exact - exact(t_peak).powi(2)).abs() < 1e-6);
        for p in r.trajectory.iter().step_by(250) {
            assert!((p.amplitude.re - exact(p.tau)).abs() < 1e-10);
        }
    }

    #[test]
    fn tiny_step_is_rejected() {
        let config = TransferConfig::lossless(1.0 / 3.0);
        let p = PhaseProfile::Constant(0.0);
        assert!(matches!(simulate_transfer_step(&config, &p, 1e-9), Err(Error::Integration(_))));
    }

    #[test]
    fn csv_headers() {
        let config = TransferConfig { horizon: 1.0, ..TransferConfig::lossless(1.0 / 3.0) };
        let r = simulate_transfer(&config, &PhaseProfile::Constant(0.0)).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("tau_prime,re_A,im_A,theta\n0.0,0.0,0.0,0.0\n"));
        assert_eq!(text.lines().count(), 502);
    }
}
