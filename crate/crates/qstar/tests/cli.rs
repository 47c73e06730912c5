use std::path::Path;
use std::process::{Command, Output};

use qstar::instance::InstanceFile;

fn qstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qstar")).args(args).env_remove("QSTAR_SEED").output().expect("binary runs")
}

fn write_instance(dir: &Path, name: &str, file: &InstanceFile) -> String {
    let path = dir.join(name);
    std::fs::write(&path, file.to_json().unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn passing_suite_exits_zero_with_schema() {
    let out = qstar(&["verify", "lp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn csv_output_has_fixed_header() {
    let out = qstar(&["verify", "lp", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("instance,theorem,direction,verdict,margin,runtime_ms"));
}

#[test]
fn wrong_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut f = qstar::bundled::find("pw2-l2").unwrap();
    f.label = "pw2-claimed-nilpotent".into();
    f.expect.as_mut().unwrap().semisimple = Some(false);
    let path = write_instance(dir.path(), "bad.json", &f);
    let out = qstar(&["semisimple", "--instance", &path]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    assert_eq!(qstar(&["gns", "--instance", broken.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qstar(&["gns", "--instance", "no-such-thing"]).status.code(), Some(2));

    let mut f = qstar::bundled::find("pw2-l2").unwrap();
    f.label = "non-associative".into();
    f.structure_constants[0][1][0] = qstar::instance::CNum::Real(1.0);
    let path = write_instance(dir.path(), "law.json", &f);
    assert_eq!(qstar(&["semisimple", "--instance", &path]).status.code(), Some(2));

    assert_eq!(qstar(&["--tol", "-1", "verify", "lp"]).status.code(), Some(2));
    assert_eq!(qstar(&["generate", "lp-grid", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn env_seed_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_qstar")).args(["verify", "lp", "--seed", "3"]).env("QSTAR_SEED", "11").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 11);
}

#[test]
fn generated_instances_round_trip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rand.json");
    let p = path.to_str().unwrap();
    let a = qstar(&["generate", "random-star-algebra", "--seed", "9", "--out", p]);
    assert_eq!(a.status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    qstar(&["generate", "random-star-algebra", "--seed", "9", "--out", p]);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let out = qstar(&["semisimple", "--instance", p, "--format", "table"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn crossnorm_command_reports_all_three() {
    let out = qstar(&["crossnorm", "--instance", "pw2-l2", "--right", "pw2-l2", "--z", "[[1,0],[0,1]]"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let values: Vec<f64> = v["results"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert_eq!(values.len(), 3);
    // The unit-normalised ℓ2 factor scales every coordinate by 1/√2.
    let expected = [0.5, 1.0, 0.5_f64.sqrt()];
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() < 1e-9, "{values:?}");
    }
    assert_eq!(qstar(&["crossnorm", "--instance", "pw2-l2", "--z", "[[1,0,0]]"]).status.code(), Some(2));
}
