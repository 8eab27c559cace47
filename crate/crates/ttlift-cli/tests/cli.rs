use std::path::Path;
use std::process::{Command, Output};

fn ttlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttlift")).args(args).env_remove("TTLIFT_MODEL_DIR").output().expect("runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gravity1d_verifies() {
    let o = ttlift(&["verify", "--model", "gravity1d"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("metric.eta_hat") && s.ends_with("overall: pass\n"));
}

#[test]
fn group_selection_exits_zero() {
    assert_eq!(code(&ttlift(&["verify", "--model", "a2", "--check", "saito_hat"])), 0);
    assert_eq!(code(&ttlift(&["verify", "--model", "rand2d", "--check", "ttstar_hat,lax.big"])), 0);
}

#[test]
fn negative_tolerance_fails_every_check() {
    let o = ttlift(&["verify", "--model", "gravity1d", "--nmax", "1", "--dmax", "3", "--tol", "-1", "--check", "frame"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).ends_with("overall: fail\n"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "n": 1, "surprise": true}"#).unwrap();
    let bad = bad.to_str().unwrap();
    for args in [
        vec!["verify", "--model", bad],
        vec!["verify", "--model", "no_such_model"],
        vec!["verify", "--model", "a2", "--check", "nonsense"],
        vec!["lift", "--model", "a2", "--target", "nonsense"],
        vec!["lift", "--model", "a3", "--target", "h_hat"],
        vec!["verify", "--model", "a2", "--dmax", "0"],
        vec!["verify", "--model", "a2", "--mode", "octonion"],
    ] {
        let o = ttlift(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = ttlift(&["verify", "--model", "a2", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn models_are_listed() {
    let o = ttlift(&["models", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["gravity1d", "a2", "rand2d", "a3"]);
}

#[test]
fn lift_u_low_degree() {
    let o = ttlift(&["lift", "--model", "gravity1d", "--target", "u", "--nmax", "1", "--dmax", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["target"], "u");
    assert_eq!(v["shape"], serde_json::json!([1]));
    // u = t0 + t0 t1 + t0 t1^2 through degree 3.
    assert_eq!(v["components"][0]["terms"].as_array().unwrap().len(), 3);
    assert_eq!(v["components"][0]["valid_degree"], 3);
    assert_eq!(v["display"][0], "1*t1_0 + 1*t1_0*t1_1 + 1*t1_0*t1_1^2");
}

#[test]
fn dw_rescaling_only_touches_level_two_and_up() {
    let run = |norm: &str| {
        let o = ttlift(&["lift", "--model", "gravity1d", "--target", "u", "--nmax", "2", "--dmax", "3", "--normalization", norm]);
        assert_eq!(code(&o), 0);
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()
    };
    let (liu, dw) = (run("liu"), run("dw-rescaled"));
    assert_eq!(dw["normalization"], "dw-rescaled");
    assert_ne!(liu["components"], dw["components"]);
}

fn write_config(dir: &Path, name: &str) {
    let o = ttlift(&["verify", "--model", "a3", "--check", "small", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut cfg = v["config"].clone();
    cfg["name"] = name.into();
    std::fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
}

#[test]
fn model_dir_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "mine");
    let o = Command::new(env!("CARGO_BIN_EXE_ttlift"))
        .args(["verify", "--model", "mine", "--check", "small"])
        .env("TTLIFT_MODEL_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ttlift(&["verify", "--model", "mine"])), 2);
}
