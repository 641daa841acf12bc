use appell_core::{parse_rational, FamilyId, FamilyKind, Var};
use serde_json::Value;
use std::process::{Command, Output};

fn appell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_appell")).args(args).env_remove("APPELL_NMAX").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = appell(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn line(args: &[&str]) -> String {
    stdout(args).trim_end_matches('\n').to_string()
}

fn schema_check(schema: &str, doc: &Value) {
    let path = format!("{}/schemas/{schema}", env!("CARGO_MANIFEST_DIR"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn family_members() {
    assert_eq!(line(&["family", "bernoulli", "--n", "2"]), "x^2 - x + 1/6");
    assert_eq!(line(&["family", "gen-euler", "--n", "0", "--m", "7/3"]), "1");
    assert_eq!(line(&["family", "mixed", "--n", "1"]), "x - 1/2*m - 1/2*l");
    assert_eq!(line(&["family", "mixed", "--n", "1", "--m", "1", "--l", "1"]), "x - 1");
    assert_eq!(stdout(&["family", "euler", "--max-n", "2"]), "0: 1\n1: x - 1/2\n2: x^2 - x\n");
}

#[test]
fn eval_points() {
    assert_eq!(line(&["eval", "bernoulli", "--n", "2", "--x", "0"]), "1/6");
    assert_eq!(line(&["eval", "euler", "--n", "2", "--x", "1"]), "0");
    assert_eq!(line(&["eval", "gen-bernoulli", "--n", "3", "--m", "0", "--x", "2"]), "8");
    assert_eq!(line(&["eval", "bernoulli", "--n", "3", "--x", "-1/2"]), "-3/4");
}

fn owned(args: &[String]) -> String {
    line(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn eval_agrees_with_library_on_a_grid() {
    let points = ["0", "1", "-2", "1/3", "7/10"];
    for (kind, m, l) in [
        (FamilyKind::Bernoulli, None, None),
        (FamilyKind::Euler, None, None),
        (FamilyKind::GenBernoulli, Some("5/2"), None),
        (FamilyKind::GenEuler, Some("-1"), None),
        (FamilyKind::Mixed, Some("2"), Some("1/3")),
    ] {
        let rat = |s: Option<&str>| s.map(|s| parse_rational(s).unwrap());
        let id = FamilyId::new(kind, rat(m), rat(l)).unwrap();
        let mut orders = Vec::new();
        for (flag, value) in [("--m", m), ("--l", l)] {
            if let Some(v) = value {
                orders.extend([flag.to_string(), v.to_string()]);
            }
        }
        for n in [0usize, 3, 6] {
            let mut args: Vec<String> = ["family", kind.name(), "--n"].map(String::from).to_vec();
            args.push(n.to_string());
            args.extend(orders.iter().cloned());
            let poly: appell_core::MultiPoly = owned(&args).parse().unwrap();
            assert_eq!(poly, id.member(n));
            for x in points {
                args[0] = "eval".into();
                let mut eval_args = args.clone();
                eval_args.extend(["--x".to_string(), x.to_string()]);
                let cli = parse_rational(&owned(&eval_args)).unwrap();
                let lib = poly.eval_constant(&[(Var::X, parse_rational(x).unwrap())]).unwrap();
                assert_eq!(cli, lib, "{kind} n={n} x={x}");
            }
        }
    }
}

#[test]
fn tables() {
    let csv = stdout(&["table", "bernoulli", "--max-n", "4", "--format", "csv"]);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2], "2,1/6,-1,1");
    assert_eq!(rows[4], "4,-1/30,0,1,-2,1");
    assert_eq!(stdout(&["table", "euler", "--max-n", "0"]), "0,1\n");
    let sym = stdout(&["table", "gen-bernoulli", "--max-n", "2"]);
    assert_eq!(sym.lines().nth(1), Some("1,\"-1/2*m\",1"));
    assert_eq!(line(&["table", "gen-bernoulli", "--max-n", "1", "--m", "2"]), "0,1\n1,-1,1");
}

#[test]
fn verify_reports() {
    let out = stdout(&["verify", "--identity", "main-theorem", "--max-n", "12"]);
    assert!(out.starts_with("PASS main-theorem n=0..=12"), "{out}");
    let doc = json(&["verify", "--identity", "all", "--max-n", "0", "--format", "json"]);
    schema_check("verify.schema.json", &doc);
    assert_eq!(doc["passed"], doc["total"]);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 25);
}

#[test]
fn mc_runs() {
    let doc = json(&["mc", "bernoulli", "--n", "5", "--m", "3", "--l", "2", "--x", "7/10", "--samples", "100000", "--seed", "42"]);
    schema_check("mc.schema.json", &doc);
    assert!(doc["z_score"].as_f64().unwrap().abs() <= 4.0);
    let doc = json(&["mc", "euler", "--n", "1", "--m", "1", "--l", "0", "--x", "1/2", "--samples", "10"]);
    schema_check("mc.schema.json", &doc);
    assert_eq!(doc["z_score"], 0.0);
    assert_eq!(doc["exact"], "0");
}

#[test]
fn json_outputs_match_schemas() {
    let doc = json(&["family", "mixed", "--max-n", "3", "--m", "1/2", "--format", "json"]);
    schema_check("family.schema.json", &doc);
    assert_eq!(doc["members"][0]["polynomial"], "1");
    let doc = json(&["eval", "euler", "--n", "3", "--x", "1/2", "--format", "json"]);
    schema_check("eval.schema.json", &doc);
    assert_eq!(doc["value"], "0");
    let doc = json(&["table", "mixed", "--max-n", "2", "--format", "json"]);
    schema_check("table.schema.json", &doc);
    assert_eq!(doc["rows"][1]["coefficients"][0], "-1/2*m - 1/2*l");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| appell(args).status.code();
    assert_eq!(code(&["verify", "--identity", "no-such-name"]), Some(2));
    assert_eq!(code(&["mc", "bernoulli", "--l", "5", "--m", "3", "--n", "2"]), Some(2));
    assert_eq!(code(&["family", "banana", "--n", "1"]), Some(2));
    assert_eq!(code(&["family", "bernoulli", "--n", "1", "--m", "2"]), Some(2));
    assert_eq!(code(&["eval", "gen-euler", "--n", "2", "--x", "1"]), Some(2));
    assert_eq!(code(&["eval", "bernoulli", "--n", "2", "--x", "0.5"]), Some(2));
    assert_eq!(code(&["family", "bernoulli", "--n", "2", "--format", "csv"]), Some(2));
    assert_eq!(code(&["family", "bernoulli", "--n", "30"]), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_appell"))
        .args(["family", "bernoulli", "--n", "6"])
        .env("APPELL_NMAX", "5")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    let bad_env = Command::new(env!("CARGO_BIN_EXE_appell"))
        .args(["family", "bernoulli", "--n", "1"])
        .env("APPELL_NMAX", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn mc_exit_status_follows_threshold() {
    // With two fair bits, equal draws give a constant sample that misses the reference.
    let mut seen = [false; 2];
    for seed in 0..16 {
        let seed = seed.to_string();
        let out = appell(&["mc", "euler", "--n", "1", "--m", "1", "--l", "1", "--samples", "2", "--seed", &seed]);
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        schema_check("mc.schema.json", &doc);
        let within = doc["z_score"].as_f64().is_some_and(|z| z.abs() <= 4.0);
        assert_eq!(out.status.code(), Some(if within { 0 } else { 1 }), "{doc}");
        seen[within as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}
