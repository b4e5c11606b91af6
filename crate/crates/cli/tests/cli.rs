use std::process::Command;

use serde_json::Value;

fn ceinv(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ceinv")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), serde_json::from_slice(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ceinv(&["universal-group", "--window", "0"]).0, 2);
    assert_eq!(ceinv(&["delta1-tables", "--group", "x", "--window", "1"]).0, 2);
    assert_eq!(ceinv(&["delta1-tables", "--group", "0,2", "--window", "1"]).0, 2);
    assert_eq!(ceinv(&["section-e", "--contexts", "some"]).0, 2);
    assert_eq!(ceinv(&["qq-verify", "--bound", "0"]).0, 2);
    assert_eq!(ceinv(&["spans-equal", "--without", "XY"]).0, 2);
    assert_eq!(ceinv(&["no-such-command"]).0, 2);
}

#[test]
fn report_shape() {
    let (code, r) = ceinv(&["universal-group", "--window", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "universal-group");
    assert_eq!(r["config"]["window"], 1);
    assert_eq!(r["results"]["free_rank"], 7);
    assert_eq!(r["results"]["torsion"], serde_json::json!([2, 2]));
    assert_eq!(r["verdict"], true);
    assert!(r["wall_time_ms"].is_u64());
}

#[test]
fn failed_verification_exits_one() {
    let (code, r) = ceinv(&["spans-equal", "--window", "1", "--without", "QQ"]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], false);
}

#[test]
fn relations_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("ceinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let matrix = dir.join("rel.json");
    let report = dir.join("report.json");
    let m = matrix.to_str().unwrap();
    let (code, _) = ceinv(&["universal-group", "--window", "1", "--export-relations", m, "--out", report.to_str().unwrap()]);
    assert_eq!(code, 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(written["results"]["group"], "Z^7 + Z/2 + Z/2");
    let (code, r) = ceinv(&["universal-group", "--relations", m]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["group"], "Z^7 + Z/2 + Z/2");

    std::fs::write(&matrix, r#"{"cols":["H^1_0","Q^2_0"],"rows":[[2,0],[0,2]]}"#).unwrap();
    let (_, r) = ceinv(&["universal-group", "--relations", m]);
    assert_eq!(r["results"]["torsion"], serde_json::json!([2, 2]));
    std::fs::write(&matrix, r#"{"cols":["a"],"rows":[[1,2]]}"#).unwrap();
    assert_eq!(ceinv(&["universal-group", "--relations", m]).0, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn single_quintuple_from_file() {
    let path = std::env::temp_dir().join(format!("ceinv-q-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"normals":[["1","0","0"],["0","1","0"],["0","0","1"],["1","1","1"],["1","2","3"]],"m":2}"#)
        .unwrap();
    let (code, r) = ceinv(&["qq-verify", "--quintuple", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["reduced"], "Q^2_1 + Q^2_2");
    assert_eq!(r["results"]["diagram"]["crossings"].as_array().unwrap().len(), 10);
    std::fs::write(&path, r#"{"normals":[["1","0","0"],["0","1","0"],["0","0","1"],["1","1","0"],["1","2","3"]],"m":0}"#)
        .unwrap();
    assert_eq!(ceinv(&["qq-verify", "--quintuple", path.to_str().unwrap()]).0, 2);
    std::fs::remove_file(&path).ok();
}

#[test]
fn seeds_make_runs_repeatable() {
    let a = ceinv(&["qq-verify", "--trials", "25", "--seed", "3", "--bound", "9"]).1;
    let b = ceinv(&["qq-verify", "--trials", "25", "--seed", "3", "--bound", "9"]).1;
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["results"]["passed"], 25);
    let (code, r) = ceinv(&["section-e", "--n", "2", "--window", "1", "--contexts", "sample:10", "--seed", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["contexts"], 10);
}
