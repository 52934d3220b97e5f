use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz-lab")).args(args).env("RIESZ_LAB_THREADS", "2").output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn geometry_of_the_unit_disk() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&run(&["geometry", "--shape", "disk", "--R", "1", "--h", "0.03125", "--out", out]));
    let rho = v["rho_theta"].as_f64().unwrap();
    assert!((rho - 2.0).abs() <= 3.0 * 0.03125, "{rho}");
    assert_eq!(v["complement_thickness"]["satisfied"], Value::Bool(true));
    assert_eq!(read(&dir.path().join("geometry.json")), v);
}

#[test]
fn verify_lemma_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        json(&run(&["verify-lemma", "--trials", "60", "--seed", "5", "--out", d.path().to_str().unwrap()]));
    }
    let va = read(&a.path().join("verify_lemma.json"));
    assert_eq!(va, read(&b.path().join("verify_lemma.json")));
    let keys: Vec<&str> = va.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["failures", "max_residual", "min_remainder", "trials"]);
    assert_eq!(va["failures"], 0);
    assert_eq!(va["trials"], 60);
    assert!(a.path().join("bly_kroger.json").exists());
}

#[test]
fn bounds_sweep_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    json(&run(&["bounds", "--shape", "square", "--h", "0.0625", "--Lambda", "3..12.8:4", "--gamma", "1", "--out", out]));
    let csv = std::fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "domain,bc,B,gamma,Lambda,riesz,main,ratio,gap,rho_theta,width,E,flag");
    assert_eq!(lines.count(), 8);
    assert!(dir.path().join("gap_vs_E.svg").exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lab.toml");
    std::fs::write(&cfg, "h = 0.0625\ntheta = 0.5\n[shape]\nname = \"disk\"\nr = 1.0\n").unwrap();
    let out = dir.path().to_str().unwrap();
    let base = json(&run(&["geometry", "--config", cfg.to_str().unwrap(), "--out", out]));
    assert_eq!(base["h"], 0.0625);
    assert_eq!(base["theta"], 0.5);
    let over = json(&run(&["geometry", "--config", cfg.to_str().unwrap(), "--theta", "0.25", "--out", out]));
    assert_eq!(over["theta"], 0.25);
    assert!(over["rho_theta"].as_f64() > base["rho_theta"].as_f64());
}

#[test]
fn mask_input() {
    let dir = tempfile::tempdir().unwrap();
    let mask = dir.path().join("t.mask");
    std::fs::write(&mask, "2 0.25 4 3\n1000\n1111\n1111\n").unwrap();
    let v = json(&run(&["geometry", "--mask", mask.to_str().unwrap(), "--tol", "0.25", "--out", dir.path().to_str().unwrap()]));
    assert_eq!(v["cells"], 9);
    assert!((v["measure"].as_f64().unwrap() - 9.0 / 16.0).abs() < 1e-12);
}

#[test]
fn configuration_errors_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["bounds", "--shape", "square", "--h", "0.0625", "--Lambda", "5..200", "--out", out],
        vec!["geometry", "--shape", "hexagon", "--out", out],
        vec!["geometry", "--h", "0.05", "--tol", "0.01", "--out", out],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(4), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
