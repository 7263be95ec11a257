use std::process::{Command, Output};

use serde_json::Value;

fn paramod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paramod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

#[test]
fn ising_modular_data() {
    let out = paramod(&["modular-data", "A", "1", "--level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["labels"].as_array().unwrap().len(), 3);
    assert_eq!(v["central_charge"], "1/2");
    assert_eq!(v["counts"]["formula"], 3);
    let vac = v["vacuum"].as_u64().unwrap() as usize;
    let mut row: Vec<f64> = v["s_matrix"][vac].as_array().unwrap().iter().map(re).collect();
    row.sort_by(f64::total_cmp);
    let want = [0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2];
    for (a, b) in row.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
    let phases: Vec<&str> = v["labels"].as_array().unwrap().iter().map(|l| l["t_phase"].as_str().unwrap()).collect();
    assert!(phases.contains(&"47/48"));
}

#[test]
fn level_one_is_trivial() {
    let v = json(&paramod(&["modular-data", "A", "1", "--level", "1"]));
    assert_eq!(v["labels"].as_array().unwrap().len(), 1);
    assert!((re(&v["s_matrix"][0][0]) - 1.0).abs() < 1e-12);
}

#[test]
fn g2_level_one_count() {
    // |P_+^1| = 2, |Q/Q_L| = 3 and P = Q for G_2
    let v = json(&paramod(&["modular-data", "G", "2", "--level", "1"]));
    assert_eq!(v["labels"].as_array().unwrap().len(), 6);
    assert_eq!(v["counts"]["weight_over_root"], 1);
}

#[test]
fn serialized_numbers_survive_a_round_trip() {
    let out = paramod(&["modular-data", "A", "1", "--level", "3"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    for row in v["s_matrix"].as_array().unwrap() {
        for z in row.as_array().unwrap() {
            for part in [z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap()] {
                let again: f64 = format!("{part:.14e}").parse().unwrap();
                assert_eq!(again, part);
                assert!(text.contains(&serde_json::to_string(&part).unwrap()));
            }
        }
    }
}

#[test]
fn output_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = paramod(&["modular-data", "A", "2", "--level", "1", "-o", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let meta: Value = serde_json::from_slice(&std::fs::read(dir.path().join("a.json.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["tool"], "paramod");
}

#[test]
fn branching_schema() {
    let v = json(&paramod(&["branching", "A", "1", "--level", "2", "--lambda", "0", "--weight", "0", "--depth", "5"]));
    assert_eq!(v["offset"], "-1/48");
    assert_eq!(v["depth"], 5);
    let c: Vec<i64> = v["coeffs"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(c, vec![1, 0, 1, 1, 2, 2]);
    assert!(v.get("warning").is_none());

    let z = json(&paramod(&["branching", "A", "1", "--level", "2", "--lambda", "0", "--weight", "1", "--depth", "3"]));
    assert!(z["warning"].is_string());
    assert!(z["coeffs"].as_array().unwrap().iter().all(|x| x == 0));
}

#[test]
fn verify_checks_pass() {
    for args in [
        vec!["verify", "sdual", "A", "1", "--level", "2", "--tau", "0.1+1.05i", "--depth", "60"],
        vec!["verify", "counts", "A", "1", "--level", "3"],
        vec!["verify", "eta", "--tau", "1.3i", "--depth", "80"],
        vec!["verify", "theta", "B", "2", "--level", "2"],
        vec!["verify", "verlinde", "A", "1", "--level", "4"],
        vec!["verify", "orbifold", "A", "1", "--level", "2", "--tau", "1.1i"],
    ] {
        let out = paramod(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn failing_residual_exits_one() {
    let out = paramod(&["verify", "eta", "--tolerance", "1e-40", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(paramod(&["modular-data", "A", "1", "--tau", "0.5-1i"]).status.code(), Some(2));
    assert_eq!(paramod(&["modular-data", "Z", "1"]).status.code(), Some(2));
    assert_eq!(paramod(&["verify", "sdual"]).status.code(), Some(2));
    assert_eq!(paramod(&["modular-data", "B", "1"]).status.code(), Some(2));
    assert_eq!(paramod(&["branching", "A", "1", "--level", "1", "--lambda", "3", "--weight", "0"]).status.code(), Some(2));
}

#[test]
fn resource_caps_exit_three() {
    assert_eq!(paramod(&["modular-data", "E", "8", "--level", "1"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_paramod"))
        .args(["modular-data", "A", "2", "--level", "1"])
        .env("PARAMOD_WEYL_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn csv_and_text_formats() {
    let out = paramod(&["modular-data", "A", "1", "--level", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("label,t_phase,s0_re,s0_im"));
    assert_eq!(text.lines().count(), 4);
    let out = paramod(&["verify", "counts", "A", "2", "--level", "2", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
}
