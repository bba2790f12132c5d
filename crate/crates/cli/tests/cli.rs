use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmlab")).args(args).env_remove("GMLAB_SEED").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn assert_valid(schema: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}", schema_name = path.display());
}

/// Parses the `value` column of an `x,value` CSV.
fn csv_values(out: &Output) -> Vec<f64> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value"));
    lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect()
}

#[test]
fn eval_examples() {
    let out = gmlab(&["eval", "alpha-hat-n2:cdf", "--alpha", "1", "--at", "4"]);
    assert!(out.status.success());
    assert!((csv_values(&out)[0] - 0.5).abs() < 1e-15);

    let out = gmlab(&["eval", "t-n3:exp-cdf", "--at", "1.4142135"]);
    assert!((csv_values(&out)[0] - 0.395_400).abs() < 1e-6);

    let out = gmlab(&["eval", "t-n3:gamma2-cdf", "--at", "0.70710678", "--format", "json"]);
    let doc = json_of(&out);
    assert_valid("eval.schema.json", &doc);
    assert_eq!(doc["points"][0]["value"].as_f64(), Some(0.0));
}

#[test]
fn eval_csv_has_seventeen_significant_digits() {
    let out = gmlab(&["eval", "alpha-hat-n2:quantile", "--alpha", "0.7", "--grid", "0.1:0.9:5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let (x, v) = row.split_once(',').unwrap();
    assert_eq!(x, "1.0000000000000001e-1");
    let mantissa = v.split('e').next().unwrap().replace('.', "");
    assert_eq!(mantissa.len(), 17, "{v}");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn eval_json_matches_schema_on_grids() {
    for args in [
        &["eval", "alpha-hat-n2:pdf", "--alpha", "2", "--grid", "1.5:10:7", "--format", "json"][..],
        &["eval", "t-n3:numeric-cdf", "--alpha", "0.7", "--at", "1", "--at", "2", "--format", "json"][..],
        &["eval", "t-n3:density", "--alpha", "1", "--at", "1.2", "--format", "json"][..],
    ] {
        let out = gmlab(args);
        assert!(out.status.success(), "{args:?}");
        assert_valid("eval.schema.json", &json_of(&out));
    }
}

#[test]
fn order_check_examples_and_exit_codes() {
    let out = gmlab(&["order-check", "--order", "star", "--pair", "t-n3-exp-vs-gamma2"]);
    assert_eq!(out.status.code(), Some(4));
    let doc = json_of(&out);
    assert_valid("order-check.schema.json", &doc);
    assert_eq!(doc["report"]["verdict"], "violated");

    let out = gmlab(&["order-check", "--order", "disp", "--pair", "alpha-hat-n2", "--alpha1", "1", "--alpha2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_valid("order-check.schema.json", &doc);
    assert_eq!(doc["report"]["verdict"], "holds");

    let out = gmlab(&["order-check", "--order", "st", "--pair", "alpha-hat-n2", "--alpha1", "2", "--alpha2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["report"]["worst_margin"], 0.0);

    let out =
        gmlab(&["order-check", "--order", "disp", "--pair", "inverse-alpha-hat-n2", "--alpha1", "1", "--alpha2", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert_valid("order-check.schema.json", &json_of(&out));
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["eval", "alpha-hat-n2:cdf", "--at", "4"],
        &["eval", "no-such-target", "--at", "1"],
        &["eval", "alpha-hat-n2:pdf", "--alpha", "1", "--at", "0.5"],
        &["order-check", "--order", "st", "--pair", "alpha-hat-n2", "--alpha1", "1"],
        &["mc", "exp-identity", "--reps", "100"],
        &["verify-paper", "--grid-size", "1"],
    ];
    for args in cases {
        let out = gmlab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(gmlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn mc_summaries_match_schema() {
    let out = gmlab(&["mc", "alpha-hat", "--n", "2", "--alpha", "0.3", "--reps", "20000"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_valid("mc.schema.json", &doc);
    assert_eq!(doc["verdict"], "accepted");

    let out = gmlab(&["mc", "alpha-hat", "--n", "5", "--alpha", "2", "--reps", "100"]);
    let doc = json_of(&out);
    assert_valid("mc.schema.json", &doc);
    assert!(doc["ks"].is_null() && doc["reference"].is_null());

    let out = gmlab(&["mc", "t-n3", "--alpha", "0.6", "--reps", "2000"]);
    assert_valid("mc.schema.json", &json_of(&out));
}

#[test]
fn mc_identity_example() {
    let out = gmlab(&["mc", "exp-identity", "--alpha", "1", "--reps", "1000000", "--seed", "42"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_valid("mc.schema.json", &doc);
    assert_eq!(doc["verdict"], "accepted");
    assert_eq!(doc["seed"], 42);
}

#[test]
fn mc_alpha_hat_example_meets_the_gate() {
    let out = gmlab(&["mc", "alpha-hat", "--n", "2", "--alpha", "0.3", "--reps", "1000000"]);
    let ks = json_of(&out)["ks"]["statistic"].as_f64().unwrap();
    assert!(ks < 0.002, "{ks}");
}

#[test]
fn mc_sample_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out =
            gmlab(&["mc", "t-n3", "--alpha", "2", "--reps", "10", "--seed", "1", "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta, tb);
    let mut lines = ta.lines();
    assert!(lines.next().unwrap().starts_with("# descriptor=T[n=3,alpha=2],seed=1,reps=10"));
    assert_eq!(lines.next(), Some("value"));
    assert_eq!(lines.count(), 10);
    // no temporary files left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn seed_comes_from_the_environment_unless_given() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_gmlab"));
        cmd.args(["mc", "t-n3", "--alpha", "1", "--reps", "50"]).args(extra).env_remove("GMLAB_SEED");
        if let Some(v) = env {
            cmd.env("GMLAB_SEED", v);
        }
        json_of(&cmd.output().unwrap())
    };
    assert_eq!(run(None, &[])["seed"], 0);
    let from_env = run(Some("77"), &[]);
    assert_eq!(from_env["seed"], 77);
    assert_eq!(run(Some("77"), &["--seed", "5"])["seed"], 5);
    assert_eq!(from_env, run(None, &["--seed", "77"]));
    let bad = Command::new(env!("CARGO_BIN_EXE_gmlab"))
        .args(["mc", "t-n3", "--reps", "5"])
        .env("GMLAB_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn outputs_are_written_to_files_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cdf.json");
    let out =
        gmlab(&["eval", "t-n3:exp-cdf", "--grid", "0.8:3:4", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid("eval.schema.json", &doc);
    assert_eq!(doc["points"].as_array().unwrap().len(), 4);
}

#[test]
fn low_power_verify_run_is_inconclusive_not_failed() {
    let out = gmlab(&["verify-paper", "--reps", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert_valid("verify-paper.schema.json", &doc);
    let items = doc["items"].as_array().unwrap();
    for id in ["alpha-hat-n2-mc", "exp-shift-identity", "t-n3-mc"] {
        let item = items.iter().find(|it| it["id"] == id).unwrap();
        assert_eq!(item["status"], "inconclusive-low-power", "{id}");
    }
    assert_eq!(doc["summary"]["fail"], 0);
    assert_eq!(doc["summary"]["inconclusive-low-power"], 3);
    let ratios = &items.iter().find(|it| it["id"] == "star-ratios").unwrap()["computed"]["ratios"];
    for (r, want) in ratios.as_array().unwrap().iter().zip([1.32686, 1.31502, 1.32081]) {
        assert!((r.as_f64().unwrap() - want).abs() < 5e-5);
    }
    let extrema = items.iter().find(|it| it["id"] == "quantile-difference-extrema").unwrap();
    assert!((extrema["computed"]["p_max"].as_f64().unwrap() - 0.72).abs() <= 0.03);
}

#[test]
fn verify_report_is_deterministic() {
    let a = gmlab(&["verify-paper", "--reps", "20000", "--seed", "9"]);
    let b = gmlab(&["verify-paper", "--reps", "20000", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
