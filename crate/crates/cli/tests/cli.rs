use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn index5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_index5"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn parse_round_trips() {
    let out = index5(&["parse", "bwd1v1duals1v1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["string"], "bwd1v1duals1v1");
    assert_eq!(v["layer_sizes"], serde_json::json!([1, 1, 1]));
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(code(&index5(&["parse", "bwdxx"])), 1);
    assert_eq!(code(&index5(&["info", "no-such-pair"])), 1);
    assert_eq!(code(&index5(&["classify"])), 1);
    assert_eq!(code(&index5(&["frobnicate"])), 1);
    assert_eq!(code(&index5(&["--help"])), 0);
}

#[test]
fn info_reports_exact_index() {
    let v = json(&index5(&["info", "D10"]));
    assert_eq!(v["plus"]["index_five"], true);
    assert_eq!(v["plus"]["norm_sq"]["exact"], "5");
    let layers = v["dimensions"]["plus"]["values"].as_array().unwrap();
    assert_eq!(layers[1][0]["exact"], "√5");
}

#[test]
fn obstruct_eliminates_g1() {
    let v = json(&index5(&["obstruct", "G_1"]));
    assert_eq!(v["eliminated_by"], "dual_dimension_mismatch");
}

#[test]
fn iso_respects_opposite_flag() {
    let plain = json(&index5(&["iso", "G_8", "A4<A5"]));
    assert_eq!(plain["isomorphic"], false);
    let opp = json(&index5(&["iso", "G_8", "A4<A5", "--opposite"]));
    assert_eq!(opp["isomorphic"], true);
    assert_eq!(opp["iso"]["swapped"], true);
}

#[test]
fn connect_z5_has_one_orbit() {
    let out = index5(&["connect", "Z5", "--restarts", "3", "--seed", "7", "--sequential"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["restarts"], 3);
    assert_eq!(v["orbit_count"], 1);
    assert!(v["best_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn classify_catalog_entry() {
    let out = index5(&["classify", "G_5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["fate"], "REALIZED_UNIQUE");
    assert_eq!(v["matched"]["canonical"], "S4S5");
}

#[test]
fn classify_file_with_forged_fate_exits_two() {
    let g1 = json(&index5(&["info", "G_1"]));
    let record = serde_json::json!({
        "name": "forged",
        "plus": g1["plus"]["string"],
        "minus": g1["minus"]["string"],
        "expected_fate": "REALIZED_UNIQUE",
    });
    let path = scratch("forged.json", &record.to_string());
    let out = index5(&["classify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("forged"));
}

#[test]
fn two_line_file_is_a_pair() {
    let path = scratch("a3.txt", "bwd1v1duals1v1\nbwd1v1duals1v1\n");
    let v = json(&index5(&["info", path.to_str().unwrap()]));
    assert_eq!(v["plus"]["string"], "bwd1v1duals1v1");
    assert_eq!(v["plus"]["index_five"], false);
}

#[test]
fn classify_all_summary() {
    let out = index5(&["classify", "--all"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["summary"]["survivors"], 5);
    assert_eq!(v["summary"]["external"], 2);
    assert_eq!(v["summary"]["total"], v["records"].as_array().unwrap().len());
}

#[test]
fn report_formats() {
    let out = index5(&["report", "--json", "--sequential"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["invariants"].as_array().unwrap().len(), 7);
    assert!(v.get("connections").is_none());
    let md = index5(&["report", "--markdown"]);
    assert_eq!(code(&md), 0);
    assert!(String::from_utf8_lossy(&md.stdout).starts_with("# Index 5 classification"));
}

#[test]
fn branch_values() {
    let v = json(&index5(&["branch", "--samples", "2048"]));
    assert!((v["f_at_one"][0].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let targets: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["target"].as_f64().unwrap())
        .collect();
    assert_eq!(targets.iter().filter(|&&t| t == 2.0).count(), 2);
    assert_eq!(targets.iter().filter(|&&t| t == -1.0).count(), 2);
}
