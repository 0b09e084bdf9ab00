use std::process::Command;

use parclass_cli::execute;
use serde_json::Value;

fn run(args: &[&str]) -> parclass_cli::Outcome {
    execute(std::iter::once("parclass").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn count_borel_both_engines() {
    let v = json(&["count", "--group", "GL2", "--q", "2", "--parabolic", "1,1", "--quantity", "group", "--engine", "both"]);
    let r = &v["reports"][0];
    assert_eq!(r["brute"], 4);
    assert_eq!(r["formula"], 4);
    assert_eq!(r["agree"], true);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert!(v["versions"]["parclass-core"].is_string());
}

#[test]
fn count_whole_group_and_gl1() {
    let v = json(&["count", "--group", "GL2", "--q", "2", "--parabolic", "2", "--quantity", "group"]);
    assert_eq!(v["reports"][0]["brute"], 3);
    let v = json(&["count", "--group", "GL1", "--q", "5", "--parabolic", "1", "--quantity", "lie"]);
    assert_eq!(v["reports"][0]["brute"], 5);
    assert_eq!(v["reports"][0]["formula"], 5);
}

#[test]
fn count_all_cells_csv() {
    let out = run(&["count", "--group", "GL2", "--q", "2,3", "--format", "csv"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "group,parabolic,quantity,q,brute,formula,agree,ms_brute,ms_formula");
    // 2 fields × 2 compositions × 3 quantities
    assert_eq!(lines.len(), 13);
    assert!(lines[1..].iter().all(|l| l.contains(",true,")));
}

#[test]
fn reports_reproduce_except_timing() {
    let strip = |mut v: Value| {
        for r in v["reports"].as_array_mut().unwrap() {
            r["ms_brute"] = Value::Null;
            r["ms_formula"] = Value::Null;
        }
        v
    };
    let args = ["count", "--group", "GL2", "--q", "3", "--parabolic", "1,1"];
    assert_eq!(strip(json(&args)), strip(json(&args)));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--group", "GL2", "--q", "2", "--format", "md"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(!out.stdout.contains("FAIL"));
    let v = json(&["verify", "--group", "GL3", "--q", "2"]);
    assert!(v["identities"].as_array().unwrap().iter().all(|r| r["failed"] == 0));
}

#[test]
fn verify_sl2_f2_rejected() {
    let out = run(&["verify", "--group", "SL2", "--q", "2"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("κ degenerate: p | n"), "{}", out.stderr);
}

#[test]
fn porc_sweeps() {
    let v = json(&["porc", "--group", "GL2", "--q", "2,3,5,7", "--parabolic", "2", "--quantity", "group"]);
    assert_eq!(v["porc"]["search"]["minimal_modulus"], 1);
    assert_eq!(v["porc"]["fits"][0]["classes"][0]["poly"], "q^2-1");
    assert_eq!(v["porc"]["fits"][0]["classes"][0]["verified_at"], serde_json::json!([7]));
    let v = json(&["porc", "--group", "GL2", "--q", "2,3,5,7", "--parabolic", "1,1"]);
    assert_eq!(v["porc"]["fits"][0]["classes"][0]["poly"], "2q^2-2q");
}

#[test]
fn porc_empty_q_is_config_error() {
    assert_eq!(run(&["porc", "--group", "GL2", "--q", ""]).code, 2);
    assert_eq!(run(&["porc", "--group", "GL2"]).code, 2);
}

#[test]
fn green_exports() {
    let out = run(&["green", "--n", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "lambda\\rho,\"[2]\",\"[1,1]\"\n\"[2]\",1,1\n\"[1,1]\",1-q,q+1\n");
    assert_eq!(run(&["green", "--n", "1"]).stdout, "lambda\\rho,\"[1]\"\n\"[1]\",1\n");
    let out = run(&["green", "--n", "7"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("bound"));
}

#[test]
fn config_errors() {
    assert_eq!(run(&["count", "--group", "GL2", "--q", "6"]).code, 2);
    assert_eq!(run(&["count", "--group", "XL2", "--q", "2"]).code, 2);
    assert_eq!(run(&["count", "--group", "GL2", "--q", "2", "--parabolic", "1,2"]).code, 2);
    assert_eq!(run(&["count", "--group", "GL2", "--q", "2", "--quantity", "bogus"]).code, 2);
    assert_eq!(run(&["count", "--group", "GL2", "--q", "2", "--budget", "0"]).code, 2);
}

#[test]
fn budget_refusal() {
    let out = run(&["count", "--group", "GL3", "--q", "3", "--budget", "1000"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("budget"));
}

#[test]
fn output_file_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let p = path.to_str().unwrap();
    let out = run(&["count", "--group", "GL2", "--q", "2", "--parabolic", "1,1", "--quantity", "nil", "--format", "csv", "--output", p]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("GL2(F_2),\"1,1\",nil,2,4,4,true"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn binary_exit_codes_and_env_budget() {
    let bin = env!("CARGO_BIN_EXE_parclass");
    let ok = Command::new(bin).args(["count", "--group", "GL2", "--q", "2", "--parabolic", "1,1", "--quantity", "group"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let refused = Command::new(bin)
        .args(["count", "--group", "GL2", "--q", "3"])
        .env("PARCLASS_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(refused.status.code(), Some(3));
    let bad = Command::new(bin).args(["verify", "--group", "SL2", "--q", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
