//! Capture with a finite cavity to mirror round trip.
//!
//! With `D = kappa_e delta_F`, `M = kappa_e delta_M` and `C = kappa_e delta_C`
//! the amplitude obeys
//!
//! ```text
//! dA/dtau = i sin(theta(tau - C)) A - (1 + kappa_i / 2 kappa_e) A
//!         - e^{i theta(tau - D/2 - M)} [ e^{-i theta(tau - D)/2} a(tau - D) + A(tau - D) ]
//!         - e^{-i theta(tau)/2} a(tau)
//! ```
//!
//! where `a(tau) = sqrt(ratio) e^{-ratio tau / 2}` is evaluated without a
//! cutoff at negative times and `A(tau < 0) = 0`. Delayed amplitudes come
//! from a ring buffer of past grid values through 4-point Lagrange
//! interpolation.

use num_complex::Complex64;

use super::config::TransferConfig;
use super::profile::PhaseProfile;
use super::simulate::{step_count, LossBreakdown, TrajectoryPoint, TransferResult, DEFAULT_STEP};
use crate::error::{Error, Result};
use crate::C64;

/// Nominal step `min(kappa_e delta_F / 20, 0.002)`.
pub fn delay_step(config: &TransferConfig) -> f64 {
    let d = config.tau_f();
    if d > 0.0 {
        (d / 20.0).min(DEFAULT_STEP)
    } else {
        DEFAULT_STEP
    }
}

/// Simulate the delayed dynamics with the nominal step.
pub fn simulate_with_delay(config: &TransferConfig, profile: &PhaseProfile) -> Result<TransferResult> {
    simulate_with_delay_step(config, profile, delay_step(config))
}

/// [`simulate_with_delay`] with an explicit nominal step.
pub fn simulate_with_delay_step(
    config: &TransferConfig,
    profile: &PhaseProfile,
    step: f64,
) -> Result<TransferResult> {
    config.validate()?;
    let setup = DelaySetup::new(config, profile, step)?;
    let det = setup.detuning(profile, config.tau_c());
    let rt = setup.round_trip(profile, config.tau_m());
    let run = setup.run(&det, &rt, true)?;
    let x = config.ratio();
    let residual = (-x * config.horizon).exp();
    let fidelity = run.amplitude.norm_sqr();
    let trajectory = run
        .trajectory
        .into_iter()
        .map(|(tau, amplitude)| TrajectoryPoint { tau, amplitude, theta: profile.theta(tau) })
        .collect();
    Ok(TransferResult {
        fidelity,
        trajectory,
        loss: LossBreakdown {
            // Energy balance closure; includes excitation still in flight.
            reflected: 1.0 - residual - fidelity - run.intrinsic,
            intrinsic: run.intrinsic,
            residual_input: residual,
        },
    })
}

/// Lagrange stencil for a delayed point `k + offset + u` with `u` in `[0, 1)`.
#[derive(Debug, Clone, Copy)]
struct Stencil {
    offset: isize,
    weights: [f64; 4],
}

impl Stencil {
    fn new(shift: f64) -> Self {
        let base = shift.floor();
        let u = shift - base;
        Self {
            offset: base as isize,
            weights: [
                -u * (u - 1.0) * (u - 2.0) / 6.0,
                (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
                -(u + 1.0) * u * (u - 2.0) / 2.0,
                (u + 1.0) * u * (u - 1.0) / 6.0,
            ],
        }
    }
}

/// Fixed-capacity store of the most recent grid amplitudes.
struct History {
    buf: Vec<C64>,
    newest: isize,
}

impl History {
    fn new(capacity: usize) -> Self {
        Self { buf: vec![C64::new(0.0, 0.0); capacity], newest: 0 }
    }

    fn push(&mut self, j: isize, a: C64) {
        let cap = self.buf.len() as isize;
        self.buf[j.rem_euclid(cap) as usize] = a;
        self.newest = j;
    }

    fn get(&self, j: isize, h: f64) -> Result<C64> {
        let cap = self.buf.len() as isize;
        if j < 0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if j > self.newest || j <= self.newest - cap {
            return Err(Error::HistoryUnderrun {
                requested: j as f64 * h,
                oldest: (self.newest - cap + 1).max(0) as f64 * h,
            });
        }
        Ok(self.buf[j.rem_euclid(cap) as usize])
    }

    fn interpolate(&self, k: usize, s: &Stencil, h: f64) -> Result<C64> {
        let j0 = k as isize + s.offset;
        let mut acc = C64::new(0.0, 0.0);
        for (m, w) in s.weights.iter().enumerate() {
            acc += *w * self.get(j0 - 1 + m as isize, h)?;
        }
        Ok(acc)
    }
}

pub(crate) struct DelayRun {
    pub amplitude: C64,
    pub intrinsic: f64,
    pub trajectory: Vec<(f64, C64)>,
}

/// Lag-independent part of a delayed simulation, sampled on the half-step
/// grid `tau_i = i h / 2`. Shared across lag settings by the optimizer.
pub(crate) struct DelaySetup {
    n: usize,
    h: f64,
    tau_f: f64,
    loss: f64,
    delayed_drive: Vec<C64>,
    direct_drive: Vec<C64>,
    /// `None` when `D = 0` and the delayed amplitude is the current one.
    stencils: Option<[Stencil; 3]>,
    capacity: usize,
}

impl DelaySetup {
    pub fn new(config: &TransferConfig, profile: &PhaseProfile, step: f64) -> Result<Self> {
        let (n, h) = step_count(config.horizon, step)?;
        let d = config.tau_f();
        let x = config.ratio();
        let sx = x.sqrt();
        let drive = |tau: f64| {
            sx * (-0.5 * x * tau).exp() * Complex64::from_polar(1.0, -0.5 * profile.theta(tau))
        };
        let times = (0..=2 * n).map(|i| i as f64 * 0.5 * h);
        let delayed_drive = times.clone().map(|t| drive(t - d)).collect();
        let direct_drive = times.map(drive).collect();
        let (stencils, capacity) = if d > 0.0 {
            let q = d / h;
            if q <= 2.0 {
                return Err(Error::Integration(format!(
                    "step {h} too coarse for round trip {d}: need at least 2 steps per delay"
                )));
            }
            let st = [Stencil::new(-q), Stencil::new(0.5 - q), Stencil::new(1.0 - q)];
            (Some(st), q.ceil() as usize + 8)
        } else {
            (None, 1)
        };
        Ok(Self {
            n,
            h,
            tau_f: d,
            loss: 1.0 + 0.5 * config.loss_ratio(),
            delayed_drive,
            direct_drive,
            stencils,
            capacity,
        })
    }

    fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=2 * self.n).map(move |i| i as f64 * 0.5 * self.h)
    }

    /// `i sin(theta(tau - lag))` where `lag = kappa_e delta_C`.
    pub fn detuning(&self, profile: &PhaseProfile, lag: f64) -> Vec<C64> {
        self.times().map(|t| C64::new(0.0, profile.theta(t - lag).sin())).collect()
    }

    /// `e^{i theta(tau - D/2 - lag)}` where `lag = kappa_e delta_M`.
    pub fn round_trip(&self, profile: &PhaseProfile, lag: f64) -> Vec<C64> {
        let shift = 0.5 * self.tau_f + lag;
        self.times().map(|t| Complex64::from_polar(1.0, profile.theta(t - shift))).collect()
    }

    pub fn run(&self, det: &[C64], rt: &[C64], record: bool) -> Result<DelayRun> {
        let h = self.h;
        let ki = 2.0 * (self.loss - 1.0);
        let f = |i: usize, a: C64, ad: C64| {
            det[i] * a - self.loss * a - rt[i] * (self.delayed_drive[i] + ad) - self.direct_drive[i]
        };
        let mut hist = History::new(self.capacity);
        let mut a = C64::new(0.0, 0.0);
        let mut intrinsic = 0.0;
        hist.push(0, a);
        let mut trajectory = Vec::new();
        if record {
            trajectory.reserve(self.n + 1);
            trajectory.push((0.0, a));
        }
        for k in 0..self.n {
            let i = 2 * k;
            let (k1, k2, k3, k4, stages);
            match &self.stencils {
                Some([s0, sm, s1]) => {
                    let d0 = hist.interpolate(k, s0, h)?;
                    let dm = hist.interpolate(k, sm, h)?;
                    let d1 = hist.interpolate(k, s1, h)?;
                    k1 = f(i, a, d0);
                    let a2 = a + 0.5 * h * k1;
                    k2 = f(i + 1, a2, dm);
                    let a3 = a + 0.5 * h * k2;
                    k3 = f(i + 1, a3, dm);
                    let a4 = a + h * k3;
                    k4 = f(i + 2, a4, d1);
                    stages = [a, a2, a3, a4];
                }
                None => {
                    k1 = f(i, a, a);
                    let a2 = a + 0.5 * h * k1;
                    k2 = f(i + 1, a2, a2);
                    let a3 = a + 0.5 * h * k2;
                    k3 = f(i + 1, a3, a3);
                    let a4 = a + h * k3;
                    k4 = f(i + 2, a4, a4);
                    stages = [a, a2, a3, a4];
                }
            }
            intrinsic += h / 6.0
                * ki
                * (stages[0].norm_sqr() + 2.0 * stages[1].norm_sqr() + 2.0 * stages[2].norm_sqr() + stages[3].norm_sqr());
            a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Integration(format!("amplitude diverged at tau' = {}", k as f64 * h)));
            }
            hist.push(k as isize + 1, a);
            if record {
                trajectory.push(((k + 1) as f64 * h, a));
            }
        }
        Ok(DelayRun { amplitude: a, intrinsic, trajectory })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::simulate_transfer;

    #[test]
    fn stencil_reproduces_cubics() {
        for shift in [-56.5, -20.25, -3.9] {
            let s = Stencil::new(shift);
            let u = shift - shift.floor();
            let poly = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t - 0.25 * t * t * t;
            let approx: f64 = s.weights.iter().enumerate().map(|(m, w)| w * poly(m as f64 - 1.0)).sum();
            assert!((approx - poly(u)).abs() < 1e-12);
        }
    }

    #[test]
    fn history_reports_underrun() {
        let mut h = History::new(4);
        for j in 0..10 {
            h.push(j, C64::new(j as f64, 0.0));
        }
        assert_eq!(h.get(9, 1.0).unwrap(), C64::new(9.0, 0.0));
        assert_eq!(h.get(-3, 1.0).unwrap(), C64::new(0.0, 0.0));
        assert!(matches!(h.get(5, 1.0), Err(Error::HistoryUnderrun { .. })));
        assert!(matches!(h.get(10, 1.0), Err(Error::HistoryUnderrun { .. })));
    }

    #[test]
    fn zero_delay_matches_ode() {
        let config = TransferConfig::lossless(1.0 / 3.0);
        let profile = PhaseProfile::optimal(1.0 / 3.0).unwrap();
        let dde = simulate_with_delay(&config, &profile).unwrap();
        let ode = simulate_transfer(&config, &profile).unwrap();
        assert_eq!(dde.trajectory.len(), ode.trajectory.len());
        for (p, q) in dde.trajectory.iter().zip(&ode.trajectory) {
            assert!((p.amplitude - q.amplitude).norm() < 1e-12);
        }
    }

    #[test]
    fn coarse_step_rejected() {
        let config = TransferConfig::default().with_delays(60e-9, 0.0, 0.0);
        let profile = PhaseProfile::optimal(config.ratio()).unwrap();
        assert!(matches!(
            simulate_with_delay_step(&config, &profile, 0.06),
            Err(Error::Integration(_))
        ));
        let tiny = TransferConfig::default().with_delays(1e-15, 0.0, 0.0);
        assert!(matches!(simulate_with_delay(&tiny, &profile), Err(Error::Integration(_))));
    }
}
