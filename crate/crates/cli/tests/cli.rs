use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosenmorse")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn spectrum_lists_bound_levels() {
    let o = run(&["spectrum"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["n", "energy", "shifted"]);
    assert_eq!(rows.len(), 1 + 16);
    let e0: f64 = rows[1][1].parse().unwrap();
    assert!((e0 + 400.64).abs() < 1e-12);
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn rmi_spectrum_honours_level_count() {
    let o = run(&["spectrum", "--variant", "rmi", "--n", "5"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1 + 5);
    let e0: f64 = rows[1][1].parse().unwrap();
    assert!((e0 + 96.0).abs() < 1e-12);
}

#[test]
fn susy_verify_reports_added_level() {
    let o = run(&["susy-verify", "--k", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["check", "n", "value", "tolerance", "skipped", "passed"]);
    let eps = rows.iter().find(|r| r[0] == "added_level").expect("added_level row");
    assert!((eps[2].parse::<f64>().unwrap() + 529.483932).abs() < 1e-6);
    assert!(rows[1..].iter().all(|r| r[5] == "true"));
}

#[test]
fn ladder_verify_passes_low_levels() {
    let o = run(&["ladder-verify", "--n", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert!(rows.iter().any(|r| r[0] == "lower" && r[1] == "3"));
    assert!(rows[1..].iter().all(|r| r[5] == "true"));
}

#[test]
fn uncertainty_sweep_columns() {
    let o = run(&["uncertainty-sweep", "--w", "1,2,4"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["w", "var_x", "var_p", "product"]);
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        let (vx, vp, prod): (f64, f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        assert!((vx * vp - prod).abs() <= 1e-12 * prod);
        assert!(prod >= 0.25);
    }
}

#[test]
fn eigenstate_derivative_columns() {
    let o = run(&["eigenstate", "--n", "2", "--jet-order", "2", "--x", "-1:1:0.5"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["x", "re", "im", "d1_re", "d1_im", "d2_re", "d2_im"]);
    assert_eq!(rows.len(), 1 + 5);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["spectrum", "--lambda", "-1"][..],
        &["spectrum", "--bogus"],
        &["spectrum", "--variant", "rmi", "--k", "2"],
        &["coherent-density", "--w", "2:1:0.5"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["susy-verify", "--seed", "7", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(&["trajectory", "--w", "1,2", "--t", "0,0.01", "--format", "json"]);
    assert!(first.status.success());
    let path = dir.path().join("run.json");
    fs::write(&path, &first.stdout).unwrap();
    let second = run(&["trajectory", "--config", path.to_str().unwrap()]);
    assert!(second.status.success(), "{}", String::from_utf8_lossy(&second.stderr));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn toml_config_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "variant = \"rmi\"\nlambda = 20.0\ns = 2.0\nn = 8\n").unwrap();
    let out = dir.path().join("spectrum.csv");
    let o = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--n", "3", "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let rows = csv_rows(&fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 1 + 3);
    assert!((rows[1][1].parse::<f64>().unwrap() + 96.0).abs() < 1e-12);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "lamda = 3.0\n").unwrap();
    assert_eq!(run(&["spectrum", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classical_orbit_conserves_energy() {
    let o = run(&["classical-orbit", "--w", "2", "--t-end", "0.5", "--sample-every", "500"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["w", "t", "x", "p", "energy", "drift"]);
    let drift = rows[0].iter().position(|c| c == "drift").unwrap();
    for r in &rows[1..] {
        assert!(r[drift].parse::<f64>().unwrap() < 1e-8);
    }
}
