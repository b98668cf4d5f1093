//! End-to-end tests of the `slicelab` binary: file emission, JSON shapes,
//! golden outputs, exit codes, determinism, and config-file merging.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn slicelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicelab"))
        .args(args)
        .output()
        .expect("binary failed to spawn")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("killed by signal")
}

const HEADER: &str = "beta,T,L,Z,U,Utilde,C";

#[test]
fn curve_writes_one_csv_per_l_plus_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = slicelab(&[
        "curve", "--model", "sho", "--l-list", "1,3,5", "--beta-min", "0.2",
        "--beta-max", "5", "--steps", "100", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names = ["curve_sho_L1.csv", "curve_sho_L3.csv", "curve_sho_L5.csv", "curve_sho_exact.csv"];
    for name in names {
        let text = fs::read_to_string(dir.path().join(name)).unwrap_or_else(|_| panic!("{name} missing"));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER, "{name} header");
        assert_eq!(lines.len(), 101, "{name} should hold 100 samples");
        // the oscillator has no Hamiltonian-average estimator: Utilde stays empty
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 7, "{name} column count");
        assert!(fields[5].is_empty(), "{name} Utilde should be empty, got {:?}", fields[5]);
    }
    // the exact curve is not tied to a slice count: its L cell is empty
    let exact = fs::read_to_string(dir.path().join("curve_sho_exact.csv")).unwrap();
    let first = exact.lines().nth(1).unwrap();
    assert!(first.split(',').nth(2).unwrap().is_empty(), "exact row: {first}");
    // the per-L file carries its slice count in every row
    let l3 = fs::read_to_string(dir.path().join("curve_sho_L3.csv")).unwrap();
    assert!(l3.lines().skip(1).all(|row| row.split(',').nth(2) == Some("3")));
}

#[test]
fn curve_files_are_byte_identical_across_reruns() {
    let run = |dir: &Path| {
        let out = slicelab(&[
            "curve", "--model", "dimer", "--j", "1", "--jprime", "1/4",
            "--l-list", "1,2", "--steps", "40", "--out-dir", dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(a.path());
    run(b.path());
    for name in ["curve_dimer_L1.csv", "curve_dimer_L2.csv", "curve_dimer_exact.csv"] {
        let left = fs::read(a.path().join(name)).unwrap();
        let right = fs::read(b.path().join(name)).unwrap();
        assert_eq!(left, right, "{name} differs between reruns");
    }
}

#[test]
fn spin_curves_order_by_slice_count() {
    let out = slicelab(&[
        "curve", "--model", "spin", "--s", "1/2", "--j", "1", "--l-list", "1..10",
        "--beta-min", "0.5", "--beta-max", "2", "--steps", "3", "--format", "json",
    ]);
    let doc = stdout_json(&out);
    let curves = doc["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 10);
    // at fixed temperature the energy falls monotonically with L, and every
    // zero-temperature limit block reports U = −1/4 with C = −L
    for row in 0..3 {
        let us: Vec<f64> = curves
            .iter()
            .map(|c| c["samples"][row]["U"].as_f64().unwrap())
            .collect();
        assert!(
            us.windows(2).all(|w| w[1] < w[0]),
            "U not decreasing with L at sample {row}: {us:?}"
        );
    }
    for (i, c) in curves.iter().enumerate() {
        assert_eq!(c["l"].as_u64(), Some(i as u64 + 1));
        assert_eq!(c["limits"]["U"].as_f64(), Some(-0.25));
        assert_eq!(c["limits"]["C"].as_f64(), Some(-(i as f64 + 1.0)));
    }
    // the exact reference curve rides along without a slice count
    assert!(doc["exact"]["samples"].as_array().unwrap().len() == 3);
}

#[test]
fn antiferromagnetic_dimer_curve_set_emits() {
    let dir = tempfile::tempdir().unwrap();
    let out = slicelab(&[
        "curve", "--model", "dimer", "--j", "-1", "--l-list", "1,2,3,4",
        "--steps", "20", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for l in 1..=4 {
        assert!(dir.path().join(format!("curve_dimer_L{l}.csv")).exists());
    }
}

#[test]
fn dos_emits_the_exact_dimer_comb() {
    let doc = stdout_json(&slicelab(&["dos", "--model", "dimer", "--j", "1", "--l", "1"]));
    let terms = doc["terms"].as_array().unwrap();
    let want = [
        ("-1/2", 0, "2"),
        ("-1/2", 1, "1"),
        ("1/2", 0, "2"),
        ("1/2", 1, "-1"),
    ];
    assert_eq!(terms.len(), want.len());
    for (term, (center, order, coeff)) in terms.iter().zip(want) {
        assert_eq!(term["center"].as_str(), Some(center));
        assert_eq!(term["order"].as_u64(), Some(order));
        assert_eq!(term["coeff"].as_str(), Some(coeff));
    }
}

#[test]
fn dos_emits_the_two_slice_spin_comb() {
    let doc = stdout_json(&slicelab(&[
        "dos", "--model", "spin", "--s", "1/2", "--j", "1", "--l", "2",
    ]));
    let terms = doc["terms"].as_array().unwrap();
    // squaring the one-slice factor keeps a single line but raises its
    // polynomial degree: δ, δ′, δ″ all centered on E = −1/4
    assert_eq!(terms.len(), 3);
    for (order, (term, coeff)) in terms.iter().zip(["2", "1", "1/8"]).enumerate() {
        assert_eq!(term["center"].as_str(), Some("-1/4"));
        assert_eq!(term["order"].as_u64(), Some(order as u64));
        assert_eq!(term["coeff"].as_str(), Some(coeff));
    }
}

#[test]
fn dos_samples_the_oscillator_density() {
    let out = slicelab(&["dos", "--model", "sho", "--l", "3", "--e-max", "3", "--steps", "300"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "E,g");
    assert_eq!(lines.len(), 301, "300 sample rows expected");
    assert!(lines[1].starts_with("0,"), "grid starts at E = 0: {}", lines[1]);
    assert!(lines[300].starts_with("3,"), "grid ends at e-max: {}", lines[300]);
}

#[test]
fn series_rows_match_known_coefficients() {
    let doc = stdout_json(&slicelab(&[
        "series", "--model", "dimer", "--j", "1", "--order", "4", "--l-list", "1,2,3",
    ]));
    let rows = doc["rows"].as_array().unwrap();
    let cubic: Vec<&str> = rows.iter().map(|r| r["coefficients"][3].as_str().unwrap()).collect();
    assert_eq!(cubic, ["0", "0", "-1/9"]);
    let quartic: Vec<&str> = rows.iter().map(|r| r["coefficients"][4].as_str().unwrap()).collect();
    assert_eq!(quartic, ["5/96", "13/192", "23/288"]);

    let doc = stdout_json(&slicelab(&[
        "series", "--model", "spin", "--s", "1/2", "--j", "1", "--order", "0", "--l-list", "5",
    ]));
    assert_eq!(doc["rows"][0]["coefficients"].as_array().unwrap().len(), 1);
    assert_eq!(doc["rows"][0]["coefficients"][0].as_str(), Some("2"));

    // the quadratic coefficient is the comb's half second moment — the same
    // 3/2 at any slice count
    let doc = stdout_json(&slicelab(&[
        "series", "--model", "dimer", "--j", "1", "--order", "2", "--l-list", "7",
    ]));
    assert_eq!(doc["rows"][0]["coefficients"][2].as_str(), Some("3/2"));
}

#[test]
fn check_quadrature_reports_a_deterministic_pass() {
    let out = slicelab(&[
        "check", "--model", "dimer", "--j", "1", "--jprime", "2", "--l", "1",
        "--beta", "1", "--method", "quadrature",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["method"].as_str(), Some("quadrature"));
    assert_eq!(doc["pass"].as_bool(), Some(true));
    let z = &doc["checks"][0];
    assert_eq!(z["std_error"].as_f64(), Some(0.0));
    assert!(z["sigma_distance"].is_null());
    assert_eq!(doc["avg_sign"], Value::Null);
}

#[test]
fn check_mc_reports_the_sign_and_replays_bit_identically() {
    let args = [
        "check", "--model", "spin", "--s", "1/2", "--j", "1", "--l", "3",
        "--beta", "2", "--method", "mc", "--samples", "1000000", "--seed", "42",
    ];
    let first = slicelab(&args);
    assert_eq!(exit_code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let doc = stdout_json(&first);
    assert_eq!(doc["pass"].as_bool(), Some(true));
    let sign = doc["avg_sign"].as_f64().unwrap();
    // three slices let the sampled trace dip negative now and then
    assert!(sign > 0.99 && sign < 1.0, "avg_sign = {sign}");
    let again = slicelab(&args);
    assert_eq!(first.stdout, again.stdout, "same seed must replay bit for bit");
}

#[test]
fn check_mixed_channel_records_unit_sign() {
    let out = slicelab(&[
        "check", "--model", "dimer", "--j", "1", "--jprime", "0", "--l", "1",
        "--beta", "1", "--method", "mc", "--channel", "mixed",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["channel"].as_str(), Some("mixed"));
    // the one-slice mixed-channel integrand is |z|² ≥ 0, so the recorded
    // sign is exactly one
    assert_eq!(doc["avg_sign"].as_f64(), Some(1.0));
}

#[test]
fn check_failure_sets_exit_code_one() {
    let out = slicelab(&[
        "check", "--model", "spin", "--s", "1/2", "--j", "1", "--l", "5",
        "--beta", "6", "--method", "mc", "--samples", "100", "--seed", "4",
    ]);
    assert_eq!(exit_code(&out), 1, "a 3σ miss must exit 1");
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["pass"].as_bool(), Some(false));
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        // the oscillator approximant needs an odd slice count
        &["curve", "--model", "sho", "--l-list", "2"],
        // no terminating expansion exists for the oscillator
        &["series", "--model", "sho", "--order", "2", "--l-list", "3"],
        // expansion order is capped at 8
        &["series", "--model", "dimer", "--j", "1", "--order", "9", "--l-list", "1"],
        // nine field dimensions exceed the tensor-grid cap of six
        &["check", "--model", "spin", "--l", "3", "--beta", "1", "--method", "quadrature"],
        // quadrature runs in the real channel only
        &["check", "--model", "dimer", "--j", "1", "--jprime", "2", "--l", "1",
          "--beta", "1", "--method", "quadrature", "--channel", "mixed"],
        // the sampled oscillator density needs a window
        &["dos", "--model", "sho", "--l", "3"],
        // β domain
        &["curve", "--model", "spin", "--beta-min", "-2"],
        // unknown subcommand
        &["transmogrify"],
    ];
    for args in cases {
        let out = slicelab(args);
        assert_eq!(exit_code(&out), 2, "expected usage error for {args:?}");
        assert!(out.stdout.is_empty() || !out.status.success());
    }
    // unknown keys in a config file are rejected, not ignored
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "model=spin\nl=3\nbeta=1\nmethod=mc\nfrobnicate=1\n").unwrap();
    let out = slicelab(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("frobnicate"), "stderr should name the bad key: {err}");
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(
        &path,
        "# sampler cross-check\nmodel=spin\ns=1/2\nj=1\nl=3\nbeta=2\nmethod=mc\nsamples=1000\nseed=7\n",
    )
    .unwrap();
    let from_file = stdout_json(&slicelab(&["check", "--config", path.to_str().unwrap()]));
    assert_eq!(from_file["n_samples"].as_u64(), Some(1000));
    assert_eq!(from_file["seed"].as_u64(), Some(7));
    // an explicit flag wins over the file
    let overridden = stdout_json(&slicelab(&[
        "check", "--config", path.to_str().unwrap(), "--samples", "2000",
    ]));
    assert_eq!(overridden["n_samples"].as_u64(), Some(2000));
    assert_eq!(overridden["seed"].as_u64(), Some(7));
}
