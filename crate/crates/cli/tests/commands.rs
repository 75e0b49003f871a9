//! Runs the `bgg` binary end to end.

use std::process::Command;

use serde_json::Value;

fn bgg(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bgg")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, _) = bgg(args);
    (code, serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}")))
}

#[test]
fn homology_example() {
    let (code, v) = json(&["homology", "A3", "--p", "1", "--q", "1,2", "--hw", "0,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "bgg/1");
    assert_eq!(v["result"]["homology_dims"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["result"]["labels"][1][0], serde_json::json!(["1/1", "-2/1", "1/1"]));
    assert_eq!(v["result"]["matches_prediction"], true);
}

#[test]
fn pathgeom_example() {
    let (code, v) = json(&["pathgeom", "--w", "0", "--k", "0", "--l", "0", "--validate"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["sequence"]["weights"][2], serde_json::json!(["2/1", "-3/1", "0/1"]));
    assert_eq!(r["sequence"]["orders"], serde_json::json!([1, 1]));
    assert_eq!(r["classification"], "case-a");
    assert_eq!(r["engine"]["matches"], true);
    let (_, v) = json(&["pathgeom", "--w", "0", "--k", "1", "--l", "2"]);
    assert_eq!(v["result"]["sequence"]["bundles"][0], "S^1 V*(0,4)");
    assert_eq!(v["result"]["tensor_bundle"]["label"], "T^1_2[4]");
}

#[test]
fn splitting_example() {
    let (code, v) = json(&["splitting", "A3", "--p", "1", "--q", "1,2", "--hw", "0,0,0", "--degree", "0", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], true);
    let (code, v) = json(&["qop", "A2", "--q", "1,2", "--hw", "1,0", "--degree", "1", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdicts"]["methods_agree"], true);
}

#[test]
fn every_command_runs() {
    let cases: [&[&str]; 11] = [
        &["rootsys", "A3"],
        &["hasse", "A3", "--p", "1", "--q", "1,2", "--hw", "0,0,0"],
        &["orbit", "A2", "--hw", "0,0"],
        &["orbit", "A2", "--hw", "0,0", "--word", "1,2"],
        &["spectrum", "A2", "--q", "1,2", "--hw", "1,1"],
        &["kostant-check", "A3", "--p", "1", "--q", "1,2", "--hw", "1,0,1"],
        &["kunneth", "A3", "--p", "1", "--q", "1,2", "--hw", "1,0,0"],
        &["compressed", "A2", "--q", "1,2", "--hw", "0,0", "--seed", "2", "--sequence", "conjugated"],
        &["insertion", "A3", "--q", "1,2"],
        &["insertion", "A3", "--q", "1,2", "--f", "full"],
        &["selftest", "--criteria", "1,9"],
    ];
    for args in cases {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["schema"], "bgg/1");
    }
    let (_, v) = json(&["orbit", "A2", "--hw", "0,0", "--word", "1,2"]);
    assert_eq!(v["result"]["image"], serde_json::json!(["-3/1", "0/1"]));
}

#[test]
fn independent_operators_report_missing_hypothesis() {
    let (code, v) = json(&["compressed", "A2", "--q", "1,2", "--hw", "1,0", "--seed", "5", "--sequence", "independent"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["sequence"]["hypothesis_met"], false);
}

#[test]
fn exit_codes() {
    let (code, v) = json(&["homology", "A3", "--q", "1,2", "--hw", "0,x,0"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("parse")));
    let (code, _) = json(&["nonsense"]);
    assert_eq!(code, 2);
    let (code, v) = json(&["homology", "A3", "--p", "1", "--q", "1,2", "--hw", "0,-1,0"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (3, Some("representability")));
    let (code, v) = json(&["homology", "A3", "--p", "2", "--q", "1"  , "--hw", "0,0,0"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("nesting")));
    let (code, v) = json(&["kostant-check", "A2", "--q", "1,2", "--hw", "1,1", "--scale", "killing"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (4, Some("calibration")));
    let (code, _) = json(&["selftest", "--mutate", "flip-action-sign", "--criteria", "2"]);
    assert_eq!(code, 4);
}

#[test]
fn dimension_guard_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bgg"))
        .args(["homology", "A3", "--p", "1", "--q", "1,2", "--hw", "0,3,3"])
        .env("BGG_MAX_DIM", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "too-large");
}

#[test]
fn job_lines_match_subcommands() {
    let a = bgg(&["homology", "A3", "--p", "1", "--q", "1,2", "--hw", "0,0,0"]).1;
    let b = bgg(&["--job", "homology q=2,1 hw=0,0,0 algebra=A3 p=1"]).1;
    assert_eq!(a, b);
}

#[test]
fn plain_mode_uses_dynkin_notation() {
    let (code, out, _) = bgg(&["homology", "A3", "--p", "1", "--q", "1,2", "--hw", "0,0,0", "--plain"]);
    assert_eq!(code, 0);
    assert!(out.contains("H_1: x{1}--x{-2}--o{1}"), "{out}");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("bgg-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let (code, stdout, _) = bgg(&["rootsys", "A2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["weyl_group_order"], 6);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn selftest_is_deterministic() {
    let (c1, a, timing) = bgg(&["selftest"]);
    let (c2, b, _) = bgg(&["selftest"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(timing.contains("criterion  1:"));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 11);
}
