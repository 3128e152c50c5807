use rayon::prelude::*;
use serde::Serialize;

use super::config::TransferConfig;
use super::delay::{delay_step, DelaySetup};
use super::profile::PhaseProfile;
use crate::error::{Error, Result};

/// Fidelities closer than this count as a tie.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    /// Mirror clock lag, s.
    pub delta_m: f64,
    /// Detuning clock lag, s.
    pub delta_c: f64,
    pub fidelity: f64,
}

/// Least-squares line `delta_c = slope delta_m + intercept` through the
/// interior ridge points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgeFit {
    pub slope: f64,
    /// s.
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub best: ScanPoint,
    /// Every grid cell, `delta_m`-major in grid order.
    pub scan: Vec<ScanPoint>,
    /// Best `delta_c` for each `delta_m`.
    pub ridge: Vec<ScanPoint>,
    /// `None` with fewer than three ridge points off the `delta_c` grid edges.
    pub ridge_fit: Option<RidgeFit>,
}

/// Evenly spaced grid in seconds from `start_ns` to `stop_ns` inclusive.
pub fn ns_grid(start_ns: f64, stop_ns: f64, step_ns: f64) -> Result<Vec<f64>> {
    if !(step_ns > 0.0) || !(stop_ns >= start_ns) || !start_ns.is_finite() || !stop_ns.is_finite() {
        return Err(Error::Domain(format!("bad grid {start_ns}..{stop_ns} step {step_ns}")));
    }
    let n = ((stop_ns - start_ns) / step_ns + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| (start_ns + k as f64 * step_ns) / 1e9).collect())
}

fn better(a: &ScanPoint, b: &ScanPoint) -> bool {
    if a.fidelity > b.fidelity + TIE_TOL {
        return true;
    }
    if a.fidelity < b.fidelity - TIE_TOL {
        return false;
    }
    (a.delta_m.abs(), a.delta_c.abs()) < (b.delta_m.abs(), b.delta_c.abs())
}

fn pick_best<'a>(points: impl IntoIterator<Item = &'a ScanPoint>) -> Option<ScanPoint> {
    points.into_iter().fold(None, |acc: Option<ScanPoint>, p| match acc {
        Some(b) if !better(p, &b) => Some(b),
        _ => Some(*p),
    })
}

/// Exhaustive search over mirror and detuning clock lags maximizing the
/// delayed-capture fidelity. The lags in `config` are ignored.
pub fn optimize_delays(
    config: &TransferConfig,
    profile: &PhaseProfile,
    dm_grid: &[f64],
    dc_grid: &[f64],
) -> Result<OptimizeResult> {
    if dm_grid.is_empty() || dc_grid.is_empty() {
        return Err(Error::Domain("lag grids must be non-empty".into()));
    }
    if dm_grid.iter().chain(dc_grid).any(|v| !v.is_finite()) {
        return Err(Error::Domain("lag grids must be finite".into()));
    }
    config.validate()?;
    let setup = DelaySetup::new(config, profile, delay_step(config))?;
    let ke = config.kappa_e;
    let det: Vec<_> = dc_grid.par_iter().map(|&c| setup.detuning(profile, ke * c)).collect();
    let rt: Vec<_> = dm_grid.par_iter().map(|&m| setup.round_trip(profile, ke * m)).collect();

    let nc = dc_grid.len();
    let scan = (0..dm_grid.len() * nc)
        .into_par_iter()
        .map(|cell| {
            let (im, ic) = (cell / nc, cell % nc);
            let run = setup.run(&det[ic], &rt[im], false)?;
            Ok(ScanPoint { delta_m: dm_grid[im], delta_c: dc_grid[ic], fidelity: run.amplitude.norm_sqr() })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = pick_best(&scan).expect("non-empty scan");
    let ridge: Vec<ScanPoint> = scan.chunks(nc).map(|row| pick_best(row).expect("non-empty row")).collect();
    let (lo, hi) = dc_grid.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let interior: Vec<(f64, f64)> = ridge
        .iter()
        .filter(|p| p.delta_c != lo && p.delta_c != hi)
        .map(|p| (p.delta_m, p.delta_c))
        .collect();
    Ok(OptimizeResult { best, scan, ridge, ridge_fit: fit_line(&interior) })
}

fn fit_line(points: &[(f64, f64)]) -> Option<RidgeFit> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(RidgeFit { slope, intercept, r_squared, points_used: n })
}
