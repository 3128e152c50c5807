use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on the arccos argument before it is reported out of range.
pub const ARCCOS_SLACK: f64 = 1e-12;

/// Closed-form constants of the optimal capture profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileConstants {
    /// Ideal transfer fidelity.
    pub a1: f64,
    pub a2: f64,
    /// Dimensionless switch time `kappa_e t_c`.
    pub tau_c: f64,
}

fn check_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio < 4.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("r / kappa_e = {ratio} outside (0, 4)")))
    }
}

/// Constants of the lossless optimal profile for `ratio = r / kappa_e`.
pub fn profile_constants(ratio: f64) -> Result<ProfileConstants> {
    check_ratio(ratio)?;
    let x = ratio;
    let b = 8.0 / (4.0 + x);
    let lead = 16.0 / (4.0 * (1.0 / x).sqrt() + x.sqrt()).powi(2);
    let a1 = lead * b.powf(-8.0 / (4.0 - x)) + b.powf(-2.0 / (4.0 / x - 1.0));
    let tau_c = 2.0 / (4.0 - x) * b.ln();
    Ok(ProfileConstants { a1, a2: 1.0, tau_c })
}

fn kappa_after(x: f64, c: &ProfileConstants, tau: f64) -> f64 {
    let e = (-x * tau).exp();
    x * e / (c.a1 - c.a2 * e)
}

/// Optimal effective coupling `kappa / kappa_e` at dimensionless time `tau`.
pub fn optimal_kappa(ratio: f64, tau: f64) -> Result<f64> {
    let c = profile_constants(ratio)?;
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("tau' must be non-negative, got {tau}")));
    }
    Ok(if tau < c.tau_c { 4.0 } else { kappa_after(ratio, &c, tau) })
}

/// Optimal mirror phase `arccos(kappa / 2 kappa_e - 1)` at `tau`.
pub fn optimal_theta(ratio: f64, tau: f64) -> Result<f64> {
    let c = profile_constants(ratio)?;
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("tau' must be non-negative, got {tau}")));
    }
    if tau < c.tau_c {
        return Ok(0.0);
    }
    let arg = kappa_after(ratio, &c, tau) / 2.0 - 1.0;
    if arg.abs() > 1.0 + ARCCOS_SLACK || arg.is_nan() {
        return Err(Error::ProfileOutOfRange { argument: arg });
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Mirror phase as a function of dimensionless time.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseProfile {
    /// The optimal profile evaluated exactly.
    ClosedForm { ratio: f64, constants: ProfileConstants },
    /// Piecewise-linear through `(tau', theta)` samples, held constant outside.
    Sampled { samples: Vec<(f64, f64)>, constants: Option<ProfileConstants> },
    Constant(f64),
}

impl PhaseProfile {
    pub fn optimal(ratio: f64) -> Result<Self> {
        Ok(Self::ClosedForm { ratio, constants: profile_constants(ratio)? })
    }

    pub fn constant(theta: f64) -> Result<Self> {
        check_phase(theta)?;
        Ok(Self::Constant(theta))
    }

    /// Sampled profile; times must increase strictly and phases must be
    /// non-decreasing within `[0, pi]`.
    pub fn sampled(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("a sampled profile needs at least one sample".into()));
        }
        for (i, &(t, th)) in samples.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidInput(format!("sample time {t} is not finite")));
            }
            check_phase(th)?;
            if i > 0 {
                let (tp, thp) = samples[i - 1];
                if t <= tp {
                    return Err(Error::InvalidInput("sample times must increase strictly".into()));
                }
                if th < thp {
                    return Err(Error::InvalidInput("sampled phases must be non-decreasing".into()));
                }
            }
        }
        Ok(Self::Sampled { samples, constants: None })
    }

    pub fn constants(&self) -> Option<ProfileConstants> {
        match self {
            Self::ClosedForm { constants, .. } => Some(*constants),
            Self::Sampled { constants, .. } => *constants,
            Self::Constant(_) => None,
        }
    }

    pub fn samples(&self) -> Option<&[(f64, f64)]> {
        match self {
            Self::Sampled { samples, .. } => Some(samples),
            _ => None,
        }
    }

    /// `theta(tau)`. The closed form is zero before the switch time,
    /// including negative times.
    pub fn theta(&self, tau: f64) -> f64 {
        match self {
            Self::ClosedForm { ratio, constants } => {
                if tau < constants.tau_c {
                    0.0
                } else {
                    (kappa_after(*ratio, constants, tau) / 2.0 - 1.0).clamp(-1.0, 1.0).acos()
                }
            }
            Self::Sampled { samples, .. } => interpolate(samples, tau),
            Self::Constant(theta) => *theta,
        }
    }
}

fn check_phase(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("phase {theta} outside [0, pi]")))
    }
}

fn interpolate(samples: &[(f64, f64)], tau: f64) -> f64 {
    let i = samples.partition_point(|&(t, _)| t <= tau);
    if i == 0 {
        return samples[0].1;
    }
    if i == samples.len() {
        return samples[i - 1].1;
    }
    let (t0, y0) = samples[i - 1];
    let (t1, y1) = samples[i];
    y0 + (y1 - y0) * (tau - t0) / (t1 - t0)
}

/// Phase at which a stalled sampling is still acceptable.
const NEAR_PI: f64 = PI - 0.01;

/// Resample a profile so that no linear segment after the switch time is
/// steeper than `slope_cap` (rad per unit `tau'`).
///
/// Samples lie on the grid `tau_c (1 + k / 10)`. Starting from `(tau_c, 0)`,
/// each new sample is the earliest grid point whose secant slope from the
/// previous sample respects the cap, so with a cap of 23 the first rise is
/// sampled at `1.1 tau_c`. Sampling continues up to `horizon`.
pub fn discretize_profile(profile: &PhaseProfile, slope_cap: f64, horizon: f64) -> Result<PhaseProfile> {
    if !(slope_cap > 0.0) {
        return Err(Error::Domain(format!("slope cap must be positive, got {slope_cap}")));
    }
    let constants = profile
        .constants()
        .ok_or_else(|| Error::Domain("discretization needs a profile with a switch time".into()))?;
    let tc = constants.tau_c;
    if !(horizon > tc) {
        return Err(Error::Domain(format!("horizon {horizon} does not exceed tau_c = {tc}")));
    }
    let dt = 0.1 * tc;
    let grid = |k: usize| tc + k as f64 * dt;

    let mut samples = vec![(0.0, profile.theta(0.0)), (tc, profile.theta(tc))];
    let mut k = 0;
    loop {
        let (tp, thp) = samples[samples.len() - 1];
        let mut next = None;
        let mut j = k + 1;
        while grid(j) <= horizon * (1.0 + 1e-12) {
            let t = grid(j);
            let th = profile.theta(t);
            if (th - thp) / (t - tp) <= slope_cap {
                next = Some((j, t, th));
                break;
            }
            j += 1;
        }
        match next {
            Some((j, t, th)) => {
                samples.push((t, th));
                k = j;
            }
            None if grid(k + 1) > horizon * (1.0 + 1e-12) || thp >= NEAR_PI => break,
            None => return Err(Error::InfeasibleCap { cap: slope_cap }),
        }
    }
    Ok(PhaseProfile::Sampled { samples, constants: Some(constants) })
}
