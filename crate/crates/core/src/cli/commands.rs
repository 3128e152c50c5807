use serde::Serialize;
use serde_json::json;

use super::args::*;
use super::Failure;
use crate::circuits::{self, CalibrationCurve, MeshPlan};
use crate::memory::{self, ScanPoint, TransferConfigFile, TransferResult};
use crate::slh::{self, MasterEqJson, TripletJson};
use crate::tensor::{self, CubicModuli, DisplacementGradient, EnergyOrder, StrainVoigt};
use crate::C64;

type Outcome = Result<String, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {path}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Computation(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn json_only(format: Format, what: &str) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(invalid(format!("{what} has no CSV form"))),
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Tensor(c) => tensor_cmd(c, cli.format),
        Command::Slh(c) => slh_cmd(c, cli.format),
        Command::Memory(c) => memory_cmd(c, cli.format),
        Command::Pmmi(c) => pmmi_cmd(c, cli.format),
    }
}

fn parse_strain(text: &str) -> Result<StrainVoigt, Failure> {
    if text.trim() == "zeros" {
        return Ok(StrainVoigt::zero());
    }
    let v: [f64; 6] = serde_json::from_str(text).map_err(|e| invalid(format!("strain: {e}")))?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid("strain components must be finite"));
    }
    Ok(StrainVoigt(v))
}

fn load_material(m: &MaterialArgs) -> Result<(StrainVoigt, CubicModuli), Failure> {
    let s = parse_strain(&m.strain)?;
    let c = match &m.moduli {
        Some(path) => CubicModuli::from_json(&read(path)?)?,
        None => CubicModuli::silicon(),
    };
    Ok((s, c))
}

fn matrix6_rows(m: &nalgebra::Matrix6<f64>) -> Vec<Vec<f64>> {
    (0..6).map(|i| (0..6).map(|j| m[(i, j)] + 0.0).collect()).collect()
}

fn matrix6_csv(m: &nalgebra::Matrix6<f64>) -> String {
    matrix6_rows(m)
        .iter()
        .map(|row| row.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}

fn tensor_cmd(cmd: &TensorCmd, format: Format) -> Outcome {
    match cmd {
        TensorCmd::Energy { material, order } => {
            json_only(format, "tensor energy")?;
            let (s, c) = load_material(material)?;
            let order = match order {
                OrderArg::Second => EnergyOrder::Second,
                OrderArg::Third => EnergyOrder::Third,
            };
            to_json(&json!({
                "strain": s.0,
                "order": order,
                "energy_j_per_m3": tensor::strain_energy(&s, &c, order),
                "within_expansion_bound": s.within_expansion_bound(),
            }))
        }
        TensorCmd::Phonoelastic { material } => {
            let (s, c) = load_material(material)?;
            let m = tensor::phonoelastic_tensor(&s, &c);
            match format {
                Format::Csv => Ok(matrix6_csv(&m.0)),
                Format::Json => to_json(&json!({ "strain": s.0, "stiffness_pa": matrix6_rows(&m.0) })),
            }
        }
        TensorCmd::Bond { material, xi } => {
            let (s, c) = load_material(material)?;
            let m = tensor::bond_rotate(&tensor::phonoelastic_tensor(&s, &c), *xi);
            match format {
                Format::Csv => Ok(matrix6_csv(&m.0)),
                Format::Json => to_json(&json!({ "strain": s.0, "xi": xi, "stiffness_pa": matrix6_rows(&m.0) })),
            }
        }
        TensorCmd::Strain { gradient } => {
            json_only(format, "tensor strain")?;
            let rows: [[f64; 3]; 3] =
                serde_json::from_str(gradient).map_err(|e| invalid(format!("gradient: {e}")))?;
            let g = DisplacementGradient::from_rows(rows);
            let summary = tensor::deformation_summary(&g)?;
            to_json(&json!({
                "strain": tensor::green_lagrange_strain(&g).0,
                "jacobian": summary.jacobian,
                "density_ratio": summary.density_ratio,
            }))
        }
        TensorCmd::Phase { delta_f_hz, v_g, length, k, delta_l } => {
            json_only(format, "tensor phase")?;
            let phase = tensor::phase_accumulation(*delta_f_hz, *v_g, *length, *k, *delta_l)?;
            to_json(&json!({ "phase_rad": phase, "phase_deg": phase.to_degrees() }))
        }
        TensorCmd::PiLength { delta_f_hz, v_g } => {
            json_only(format, "tensor pi-length")?;
            to_json(&json!({ "length_m": tensor::pi_length(*delta_f_hz, *v_g)? }))
        }
    }
}

fn slh_cmd(cmd: &SlhCmd, format: Format) -> Outcome {
    let SlhCmd::Compose { network } = cmd;
    json_only(format, "slh compose")?;
    let spec = slh::network::NetworkSpec::from_json(&read(network)?)?;
    let g = spec.evaluate()?;
    let coeffs = slh::master_eq_coeffs(&g);
    to_json(&json!({
        "triplet": TripletJson::from(&g),
        "master_equation": MasterEqJson::from(&coeffs),
    }))
}

fn parse_range(text: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invalid(format!("grid {text:?}: {e}")))?;
    match nums[..] {
        [start, stop, step] => Ok(memory::ns_grid(start, stop, step)?),
        [single] => Ok(vec![single / 1e9]),
        _ => Err(invalid(format!("grid {text:?} must be start:stop:step"))),
    }
}

fn trajectory_csv(result: &TransferResult) -> Result<String, Failure> {
    let mut buf = Vec::new();
    memory::write_trajectory_csv(&mut buf, result)?;
    String::from_utf8(buf).map_err(|e| Failure::Computation(e.to_string()))
}

fn scan_csv(scan: &[ScanPoint]) -> Result<String, Failure> {
    let mut buf = Vec::new();
    memory::write_scan_csv(&mut buf, scan)?;
    String::from_utf8(buf).map_err(|e| Failure::Computation(e.to_string()))
}

fn write_side(path: &str, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body).map_err(|e| Failure::Computation(format!("cannot write {path}: {e}")))
}

fn scan_point_json(p: &ScanPoint) -> serde_json::Value {
    json!({ "delta_m_ns": p.delta_m * 1e9, "delta_c_ns": p.delta_c * 1e9, "fidelity": p.fidelity })
}

fn memory_cmd(cmd: &MemoryCmd, format: Format) -> Outcome {
    match cmd {
        MemoryCmd::Fidelity { ratio, horizon } => {
            json_only(format, "memory fidelity")?;
            let constants = memory::profile_constants(*ratio)?;
            let config = memory::TransferConfig { horizon: *horizon, ..memory::TransferConfig::lossless(*ratio) };
            let simulated = memory::simulate_transfer(&config, &memory::PhaseProfile::optimal(*ratio)?)?;
            to_json(&json!({
                "ratio": ratio,
                "fidelity": constants.a1,
                "a1": constants.a1,
                "a2": constants.a2,
                "tau_c": constants.tau_c,
                "simulated_fidelity": simulated.fidelity,
                "horizon": horizon,
            }))
        }
        MemoryCmd::Simulate { config, trajectory } => {
            let file = TransferConfigFile::from_json(&read(config)?)?;
            let cfg = file.to_config()?;
            let profile = file.profile()?;
            let delayed = cfg.delta_f != 0.0 || cfg.delta_m != 0.0 || cfg.delta_c != 0.0;
            let result = if delayed {
                memory::simulate_with_delay(&cfg, &profile)?
            } else {
                memory::simulate_transfer(&cfg, &profile)?
            };
            let csv = trajectory_csv(&result)?;
            if let Some(path) = trajectory {
                write_side(path, &csv)?;
            }
            match format {
                Format::Csv => Ok(csv),
                Format::Json => {
                    let last = result.trajectory.last().map(|p| p.amplitude).unwrap_or(C64::new(0.0, 0.0));
                    to_json(&json!({
                        "fidelity": result.fidelity,
                        "ratio": cfg.ratio(),
                        "delayed": delayed,
                        "profile": if file.slope_cap.is_some() { "discretized" } else { "closed_form" },
                        "final_amplitude": [last.re, last.im],
                        "loss": result.loss,
                        "steps": result.trajectory.len() - 1,
                    }))
                }
            }
        }
        MemoryCmd::Optimize { config, dm_ns, dc_ns, scan } => {
            let file = TransferConfigFile::from_json(&read(config)?)?;
            let cfg = file.to_config()?;
            let profile = file.profile()?;
            let dm = parse_range(dm_ns)?;
            let dc = parse_range(dc_ns)?;
            let result = memory::optimize_delays(&cfg, &profile, &dm, &dc)?;
            let csv = scan_csv(&result.scan)?;
            if let Some(path) = scan {
                write_side(path, &csv)?;
            }
            match format {
                Format::Csv => Ok(csv),
                Format::Json => {
                    let fit = result.ridge_fit.map(|f| {
                        json!({
                            "slope": f.slope,
                            "intercept_ns": f.intercept * 1e9,
                            "r_squared": f.r_squared,
                            "points_used": f.points_used,
                        })
                    });
                    to_json(&json!({
                        "best": scan_point_json(&result.best),
                        "ridge": result.ridge.iter().map(scan_point_json).collect::<Vec<_>>(),
                        "ridge_fit": fit,
                        "cells": result.scan.len(),
                    }))
                }
            }
        }
    }
}

#[derive(Serialize)]
struct DecomposeOutput<'a> {
    #[serde(flatten)]
    plan: &'a MeshPlan,
    reconstruction_error: f64,
}

fn pmmi_cmd(cmd: &PmmiCmd, format: Format) -> Outcome {
    match cmd {
        PmmiCmd::Decompose { unitary } => {
            json_only(format, "pmmi decompose")?;
            let u = circuits::parse_unitary_csv(&read(unitary)?)?;
            let plan = circuits::reck_decompose(&u)?;
            let err = circuits::max_deviation(&plan.to_matrix()?, &u);
            to_json(&DecomposeOutput { plan: &plan, reconstruction_error: err })
        }
        PmmiCmd::Apply { plan, input } => {
            let plan: MeshPlan =
                serde_json::from_str(&read(plan)?).map_err(|e| invalid(format!("mesh plan: {e}")))?;
            let pairs: Vec<[f64; 2]> =
                serde_json::from_str(input).map_err(|e| invalid(format!("input amplitudes: {e}")))?;
            let x: Vec<C64> = pairs.iter().map(|p| C64::new(p[0], p[1])).collect();
            let y = plan.apply(&x)?;
            match format {
                Format::Csv => Ok(std::iter::once("re,im\n".to_string())
                    .chain(y.iter().map(|z| format!("{:e},{:e}\n", z.re, z.im)))
                    .collect()),
                Format::Json => to_json(&json!({
                    "output": y.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "input_norm": x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
                    "output_norm": y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
                })),
            }
        }
        PmmiCmd::Phase { calibration, voltage, periods, v_g, pitch } => {
            json_only(format, "pmmi phase")?;
            let cal = CalibrationCurve::from_csv(&read(calibration)?)?;
            let phase = circuits::phase_from_voltage(&cal, *voltage, *periods, *v_g, *pitch)?;
            to_json(&json!({ "phase_rad": phase, "phase_deg": phase.to_degrees() }))
        }
        PmmiCmd::Mirror { delta_f_hz, band_edge_hz } => {
            json_only(format, "pmmi mirror")?;
            let state = circuits::mirror_state(*delta_f_hz, *band_edge_hz)?;
            to_json(&json!({ "delta_f_hz": delta_f_hz, "band_edge_hz": band_edge_hz, "state": state }))
        }
    }
}
