use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use phononic::circuits::{haar_unitary, write_unitary_csv};
use phononic::cli::run;
use phononic::tensor::{strain_energy, CubicModuli, EnergyOrder, StrainVoigt};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn phononic(args: &[&str]) -> Out {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("phononic").chain(args.iter().copied()), &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn ok_json(args: &[&str]) -> Value {
    let out = phononic(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_u = write(dir.path(), "bad.csv", "1,0,0.5,0\n0,0,1,0\n");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["--help"], 0),
        (vec!["tensor", "energy", "--strain", "zeros"], 0),
        (vec!["tensor", "energy", "--strain", "[1,2]"], 2),
        (vec!["tensor", "energy", "--strain", "zeros", "--format", "csv"], 2),
        (vec!["tensor", "bogus"], 2),
        (vec!["tensor", "pi-length", "--delta-f-hz", "0", "--v-g", "312"], 2),
        (vec!["memory", "fidelity", "--ratio", "0.3333333333", "--horizon", "0.1"], 2),
        (vec!["memory", "fidelity", "--ratio", "5"], 2),
        (vec!["memory", "simulate", "--config", "/nonexistent/config.json"], 2),
        (vec!["pmmi", "decompose", "--unitary", &bad_u], 1),
        (vec!["pmmi", "mirror", "--delta-f-hz", "-1e6", "--band-edge-hz", "0"], 2),
    ];
    for (args, code) in cases {
        let out = phononic(&args);
        assert_eq!(out.code, code, "{args:?}: {}", out.stderr);
    }
}

#[test]
fn successful_runs_write_a_manifest() {
    let out = phononic(&["pmmi", "mirror", "--delta-f-hz", "-6e6", "--band-edge-hz", "5e6"]);
    assert_eq!(out.code, 0);
    let m: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(m["command"], "pmmi mirror");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    let body: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(body["state"], "reflecting");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(dir.path(), "u.csv", &write_unitary_csv(&haar_unitary(5, &mut ChaCha8Rng::seed_from_u64(1))));
    let runs: [&[&str]; 3] = [
        &["tensor", "bond", "--strain", "[1e-3,0,0,0,0,2e-4]", "--format", "csv"],
        &["pmmi", "decompose", "--unitary", &u],
        &["memory", "simulate", "--config", &data("transfer_ideal.json")],
    ];
    for args in runs {
        let (a, b) = (phononic(args), phononic(args));
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = phononic(&["--output", path.to_str().unwrap(), "tensor", "pi-length", "--delta-f-hz", "1e6", "--v-g", "312"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!((v["length_m"].as_f64().unwrap() - 156e-6).abs() < 1e-15);
}

#[test]
fn energy_matches_library() {
    let s = [1e-3, -2e-4, 5e-4, 1e-4, 0.0, -3e-4];
    let json = serde_json::to_string(&s).unwrap();
    let v = ok_json(&["tensor", "energy", "--strain", &json]);
    let w = strain_energy(&StrainVoigt(s), &CubicModuli::default(), EnergyOrder::Third);
    assert!((v["energy_j_per_m3"].as_f64().unwrap() - w).abs() <= 1e-15 * w);
    assert_eq!(ok_json(&["tensor", "energy", "--strain", "zeros"])["energy_j_per_m3"], 0.0);
}

#[test]
fn phonoelastic_at_zero_strain_is_the_stiffness() {
    let v = ok_json(&["tensor", "phonoelastic", "--strain", "zeros"]);
    let m = &v["stiffness_pa"];
    assert_eq!(m[0][0], 165.64e9);
    assert_eq!(m[0][1], 63.94e9);
    assert_eq!(m[3][3], 79.51e9);
    assert_eq!(m[0][3], 0.0);
    let csv = phononic(&["tensor", "phonoelastic", "--strain", "zeros", "--format", "csv"]);
    assert_eq!(csv.code, 0);
    assert!(!csv.stdout.contains("-0"));
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn compensated_network_composes_to_closed_form() {
    let v = ok_json(&["slh", "compose", "--network", &data("compensated_memory.json")]);
    let t = &v["triplet"];
    let ke = 2.0 * std::f64::consts::PI * 300e3;
    let ki = 2.0 * std::f64::consts::PI;
    let (l0, l1) = (complex(&t["L"][0][0]), complex(&t["L"][1][0]));
    assert!((l0.0 - 2.0 * ke.sqrt() * 0.5f64.cos()).abs() < 1e-9 && l0.1.abs() < 1e-9);
    assert!((l1.0 - ki.sqrt()).abs() < 1e-12);
    assert!(complex(&t["H"][0][0]).0.abs() < 1e-6);
    assert!((complex(&t["S"][0][0]).0 - 1.0).abs() < 1e-12);
    assert!(complex(&t["S"][0][1]).0.abs() < 1e-12);
}

#[test]
fn single_node_network_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let net = r#"{"nodes":[{"id":"c","kind":"cavity","params":{"kappa_e_hz":1.0,"kappa_i_hz":0.0,"detuning_hz":0.0}}],"script":[]}"#;
    let v = ok_json(&["slh", "compose", "--network", &write(dir.path(), "n.json", net)]);
    let t = &v["triplet"];
    assert_eq!(t["n_ports"], 3);
    let root = (2.0 * std::f64::consts::PI).sqrt();
    for (k, want) in [root, root, 0.0].into_iter().enumerate() {
        let l = complex(&t["L"][k][0]);
        assert!((l.0 - want).abs() < 1e-12 && l.1 == 0.0);
    }
    assert_eq!(t["modes"][0], "a_c");
}

#[test]
fn unit_gain_loop_fails_computation() {
    let dir = tempfile::tempdir().unwrap();
    let net = r#"{"nodes":[{"id":"w","kind":"trivial","params":{"n":1}}],
        "script":[{"op":"feedback","args":{"system":"w","out_port":1,"in_port":1},"out":"x"}]}"#;
    let out = phononic(&["slh", "compose", "--network", &write(dir.path(), "loop.json", net)]);
    assert_eq!(out.code, 1, "{}", out.stderr);
}

#[test]
fn memory_fidelity_and_simulation() {
    let v = ok_json(&["memory", "fidelity", "--ratio", "0.3333333333333333"]);
    assert!((v["fidelity"].as_f64().unwrap() - 0.969).abs() < 5e-4);
    assert!((v["simulated_fidelity"].as_f64().unwrap() - 0.969).abs() < 1e-3);
    let v = ok_json(&["memory", "simulate", "--config", &data("transfer_delay_60ns.json")]);
    assert!((v["fidelity"].as_f64().unwrap() - 0.890).abs() <= 0.005);
    assert_eq!(v["delayed"], true);
}

#[test]
fn memory_simulate_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.csv");
    let v = ok_json(&["memory", "simulate", "--config", &data("transfer_ideal.json"), "--trajectory", traj.to_str().unwrap()]);
    let text = std::fs::read_to_string(traj).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("tau"));
    assert_eq!(text.lines().count(), v["steps"].as_u64().unwrap() as usize + 2);
}

#[test]
fn memory_optimize_small_grid() {
    let v = ok_json(&[
        "memory", "optimize", "--config", &data("transfer_delay_60ns.json"), "--dm-ns", "18:22:2", "--dc-ns", "-36:-32:2",
    ]);
    assert!(v.to_string().contains("ridge"));
    let out = phononic(&["memory", "optimize", "--config", &data("transfer_delay_60ns.json"), "--dm-ns", "5:1:1"]);
    assert_eq!(out.code, 2);
}

#[test]
fn decompose_identity_and_haar() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.csv", "1,0,0,0,0,0\n0,0,1,0,0,0\n0,0,0,0,1,0\n");
    let v = ok_json(&["pmmi", "decompose", "--unitary", &id]);
    assert!(v["reconstruction_error"].as_f64().unwrap() < 1e-14);
    assert_eq!(v["elements"].as_array().unwrap().len(), 3);

    let u = haar_unitary(6, &mut ChaCha8Rng::seed_from_u64(42));
    let path = write(dir.path(), "haar.csv", &write_unitary_csv(&u));
    let v = ok_json(&["pmmi", "decompose", "--unitary", &path]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 15);
    assert!(v["reconstruction_error"].as_f64().unwrap() < 1e-12);

    let plan = write(dir.path(), "plan.json", &v.to_string());
    let w = ok_json(&["pmmi", "apply", "--plan", &plan, "--input", "[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0]]"]);
    for k in 0..6 {
        let (re, im) = complex(&w["output"][k]);
        assert!((re - u[(k, 0)].re).abs() < 1e-12 && (im - u[(k, 0)].im).abs() < 1e-12);
    }
}

#[test]
fn calibration_phase() {
    let v = ok_json(&["pmmi", "phase", "--calibration", &data("bias_calibration.csv"), "--voltage", "-50", "--periods", "1000"]);
    let expect = 2.0 * std::f64::consts::PI * 7.94e6 * 1000.0 * 530e-9 / 312.0;
    assert!((v["phase_rad"].as_f64().unwrap() - expect).abs() < 1e-9 * expect);
    let out = phononic(&["pmmi", "phase", "--calibration", &data("bias_calibration.csv"), "--voltage", "80", "--periods", "1"]);
    assert_eq!(out.code, 2);
}
