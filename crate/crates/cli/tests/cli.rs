use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"))
}

fn ctsda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctsda")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn retrieve(cfg: &str, obs: &[&str], extra: &[&str]) -> Output {
    let cfg = config(cfg);
    let mut args = vec!["retrieve", "--config", cfg.to_str().unwrap()];
    for o in obs {
        args.extend(["--obs", o]);
    }
    args.extend(extra);
    ctsda(&args)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn classify_reports_each_case() {
    let run = |name: &str| {
        let o = ctsda(&["classify", "--config", config(name).to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        stdout(&o).lines().next().unwrap().to_owned()
    };
    assert_eq!(run("baseline"), "Case III, p/q=4/3, V_T=[20,24], V_S=[15,18]");
    assert!(run("case2").starts_with("Case II, k=2"));
    assert!(run("case1").starts_with("Case I,"));
}

#[test]
fn classify_json_has_per_carrier_ranges() {
    let o = ctsda(&["classify", "--config", config("baseline").to_str().unwrap(), "--json"]);
    let v = json(&o);
    assert_eq!(v["case"]["case_id"], "III");
    assert_eq!(v["case"]["p_over_q"], "4/3");
    assert_eq!(v["carriers"][1]["max_azimuth_shift"], 1000.0);
}

#[test]
fn bad_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"d": 0.4, "unknown": 1}"#).unwrap();
    let o = ctsda(&["classify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = ctsda(&["classify", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn retrieves_target_two_with_reference_integers() {
    let o = retrieve("baseline", &["1=-6.4708", "2=7.3716"], &["--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert!((v["result"]["v_hat"].as_f64().unwrap() - 13.4504).abs() < 1e-3);
    let ints: Vec<i64> = v["result"]["integers"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|w| [w["n_t"].as_i64().unwrap(), w["n_s"].as_i64().unwrap()])
        .collect();
    assert_eq!(ints, [1, 0, 1, -1]);
    assert_eq!(v["result"]["method"], "search");
    let shifts = v["azimuth_shifts"].as_array().unwrap();
    assert!((shifts[0].as_f64().unwrap() - 545.8).abs() < 1.0);
}

#[test]
fn theorem1_warns_about_its_validity_range() {
    let o = retrieve("baseline", &["1=3.1043", "2=7.1790"], &["--method", "theorem1", "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((json(&o)["result"]["v_hat"].as_f64().unwrap() - 13.1417).abs() < 1e-3);
    assert!(stderr(&o).contains("warning") && stderr(&o).contains("[-15, 15)"), "{}", stderr(&o));
}

#[test]
fn zero_observations_give_zero() {
    let o = retrieve("baseline", &["1=0", "2=0"], &["--json"]);
    let v = json(&o);
    assert_eq!(v["result"]["v_hat"], 0.0);
    assert_eq!(v["azimuth_shifts"][0], 0.0);
}

#[test]
fn closed_forms_are_used_for_cases_one_and_two() {
    let o = retrieve("case1", &["1=0", "2=-8"], &["--json"]);
    let v = json(&o);
    assert_eq!(v["result"]["method"], "closed_form_crt");
    assert!((v["result"]["v_hat"].as_f64().unwrap() + 24.0).abs() < 1e-9);
    let o = retrieve("case2", &["1=-1", "2=3"], &["--json"]);
    let v = json(&o);
    assert_eq!(v["result"]["method"], "closed_form_crt");
    assert!((v["result"]["v_hat"].as_f64().unwrap() - 17.0).abs() < 1e-9);
}

#[test]
fn observation_csv_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("obs.csv");
    std::fs::write(&path, "lambda,v_space\n0.06,7.3716\n0.05,-6.4708\n").unwrap();
    let cfg = config("baseline");
    let o = ctsda(&["retrieve", "--config", cfg.to_str().unwrap(), "--obs-csv", path.to_str().unwrap(), "--json"]);
    let flags = retrieve("baseline", &["1=-6.4708", "2=7.3716"], &["--json"]);
    assert_eq!(json(&o)["result"], json(&flags)["result"]);
}

#[test]
fn retrieval_failures_have_distinct_exit_codes() {
    let o = retrieve("baseline", &["1=40", "2=0"], &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("S_T"));
    let o = retrieve("baseline", &["1=-3", "2=-8"], &["--xi-e", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("ambiguous"));
    let o = retrieve("baseline", &["1=1"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = retrieve("baseline", &["0=1", "2=1"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_reproduces_the_size_table() {
    let o = ctsda(&["enumerate", "--csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("lambda1,lambda2,vt1,vs1,vt2,vs2,v_lb,size,v_ub"));
    let expected = [
        (6.0, 24.0, 24.0),
        (12.0, 12.0, 48.0),
        (20.0, 20.0, 80.0),
        (30.0, 120.0, 120.0),
        (42.0, 168.0, 168.0),
        (56.0, 80.0, 224.0),
        (72.0, 96.0, 288.0),
        (90.0, 360.0, 360.0),
        (110.0, 440.0, 440.0),
        (132.0, 132.0, 528.0),
    ];
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), expected.len());
    for (row, (v_lb, size, v_ub)) in rows.iter().zip(expected) {
        assert_eq!((row[6], row[7], row[8]), (v_lb, size, v_ub), "pair {:?}", &row[..2]);
    }
}

#[test]
fn fold_grid_is_a_sawtooth_table() {
    let cfg = config("baseline");
    let o =
        ctsda(&["fold", "--config", cfg.to_str().unwrap(), "--v-min", "-1", "--v-max", "1", "--step", "0.5", "--csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("v_r,lambda,v_time,v_space,n_t,n_s"));
    assert_eq!(out.lines().count(), 1 + 5 * 2);
    let o = ctsda(&["fold", "--config", cfg.to_str().unwrap(), "--v", "17", "--json"]);
    let v = json(&o);
    assert_eq!(v[0]["v_space"], -3.0);
    assert_eq!(v[1]["n_t"], 1);
}

#[test]
fn sweep_has_a_named_parameter_column() {
    let o = ctsda(&["sweep", "--vary", "prf", "--from", "400", "--to", "1600", "--points", "4", "--csv"]);
    assert_eq!(stdout(&o), "f_p,size\n400,10\n800,15\n1200,15\n1600,15\n");
}

#[test]
fn seeded_runs_are_bit_identical_and_leave_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = ctsda(&[
            "montecarlo",
            "--trials",
            "40",
            "--xi-max",
            "0.4",
            "--xi-step",
            "0.2",
            "--seed",
            "9",
            "--csv",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        out
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("xi_e,rmse,trials,failures\n"));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "montecarlo");
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["config"]["lambdas"][0], 0.05);
    assert_eq!(manifest["outputs"][0], a.to_str().unwrap());
}

#[test]
fn simulate_recovers_a_folded_target() {
    let cfg = config("baseline");
    let args =
        ["simulate", "--config", cfg.to_str().unwrap(), "--v-r", "-16.87", "--snr-db", "10", "--seed", "3", "--json"];
    let o = ctsda(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert!((v["retrieval"]["result"]["v_hat"].as_f64().unwrap() + 16.87).abs() < 0.05);
    assert_eq!(stdout(&ctsda(&args)), stdout(&o));
}

#[test]
fn csv_is_rejected_for_non_tabular_output() {
    let o = ctsda(&["classify", "--config", config("baseline").to_str().unwrap(), "--csv"]);
    assert_eq!(o.status.code(), Some(2));
}
