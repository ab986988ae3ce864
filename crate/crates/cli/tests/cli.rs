use std::process::{Command, Output};

use serde_json::Value;

fn umbral(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umbral")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn run_ok(args: &[&str]) -> Value {
    let out = umbral(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

fn coeffs(v: &Value) -> Vec<String> {
    v["coeffs"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn binomial_forward_difference() {
    let v = run_ok(&["binomial", "--op", "forward_difference", "--level", "3"]);
    assert_eq!(v["level"], 3);
    assert_eq!(coeffs(&v["components"][2]), ["0", "-1", "1"]);
    assert_eq!(coeffs(&v["components"][3]), ["0", "2", "-3", "1"]);
}

#[test]
fn deviation_methods_agree() {
    let v = run_ok(&["deviation", "--op", "forward_difference", "--level", "2", "--method", "all"]);
    let results = v["results"].as_array().unwrap();
    let methods: Vec<&str> = results.iter().map(|r| r["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["solve", "closed", "appell"]);
    for r in results {
        assert_eq!(coeffs(&r["poly"]), ["1/2", "1", "1"]);
    }
    assert_eq!(v["agree"], true);

    let v = run_ok(&["deviation", "--op", "touchard", "--level", "3"]);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn walsh_campaign() {
    let v = run_ok(&["verify", "walsh", "--level", "6", "--trials", "1000", "--seed", "42", "--tol", "1e-7"]);
    assert_eq!(v["trials"], 1000);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["seed"], 42);
    assert!(v["worst_margin"].as_f64().unwrap() >= -1e-7);
}

#[test]
fn other_campaigns() {
    let v = run_ok(&["verify", "deviation-line", "--level", "12"]);
    assert_eq!(v["violations"], 0);
    let v = run_ok(&["verify", "grace", "--level", "3", "--trials", "50", "--seed", "1"]);
    assert_eq!(v["trials"], 50);
    let p = r#"{"coeffs":["-1","1","1"]}"#;
    let q = r#"{"coeffs":["0","0","1"]}"#;
    let v = run_ok(&["verify", "grace", "--level", "2", "--poly", p, "--poly", q]);
    assert_eq!(v["violations"], 0);
}

#[test]
fn compute_commands() {
    let v = run_ok(&["appell", "--op", "forward_difference", "--level", "2"]);
    assert_eq!(coeffs(&v["family"][2]), ["1/3", "-1", "1"]);

    let a = r#"{"coeffs":["0","0","1"]}"#;
    let b = r#"{"coeffs":["0","-1","1"]}"#;
    let v = run_ok(&["pairing", "--op", "forward_difference", "--level", "2", "--poly", a, "--poly", b]);
    assert_eq!(v["constant"], true);
    assert!(v["value"].is_string());

    let v = run_ok(&["convolve", "--op", "forward_difference", "--level", "2", "--poly", a, "--poly", a]);
    assert_eq!(coeffs(&v), ["1/2", "1", "1"]);
    let v = run_ok(&["convolve", "--op", "derivative", "--level", "2", "--poly", b, "--invert"]);
    assert_eq!(coeffs(&v), ["1/2", "1", "1"]);

    let s = r#"{"level":2,"entries":["1","1","1"]}"#;
    let v = run_ok(&["convolve", "--seq", s, "--invert"]);
    assert_eq!(v["entries"], serde_json::json!(["1", "-1", "1"]));

    let v = run_ok(&["roots", "--poly", r#"{"coeffs":["1/2","1","1"]}"#]);
    assert_eq!(v["degree"], 2);
    assert!((v["strip"]["lo"].as_f64().unwrap() + 0.5).abs() < 1e-14);

    let v = run_ok(&["sheffer", "--op", "derivative", "--seq", s]);
    assert_eq!(coeffs(&v["components"][2]), ["1", "2", "1"]);
    let curve = v.to_string();
    let v = run_ok(&["sheffer", "--curve", &curve]);
    assert_eq!(v["sheffer"], true);

    let v = run_ok(&["dual", "--op", "derivative", "--seq", s]);
    assert_eq!(v["inverse"]["entries"], serde_json::json!(["1", "-1", "1"]));
}

#[test]
fn outputs_are_accepted_back() {
    let curve = run_ok(&["binomial", "--op", "backward_difference", "--level", "3"]).to_string();
    let dual = run_ok(&["dual", "--op", "backward_difference", "--curve", &curve]);
    assert_eq!(dual.to_string(), curve);
    let w = run_ok(&["wronskian", "--op", "backward_difference", "--curve", &curve]);
    assert_eq!(w["columns"].as_array().unwrap().len(), 4);

    let v = run_ok(&[
        "vandermonde",
        "--op",
        "forward_difference",
        "--curve",
        &run_ok(&["binomial", "--op", "forward_difference", "--level", "3"]).to_string(),
        "--t",
        "-2/3",
        "--seq",
        r#"{"level":3,"entries":["1","0","2","-1"]}"#,
    ]);
    assert_eq!(v["holds"], true);
    let v = run_ok(&["vandermonde", "--curve", &curve, "--points", "0,1,-1,1/2"]);
    assert_eq!(v["holds"], true);
}

#[test]
fn table_matches_json() {
    let args = ["deviation", "--op", "forward_difference", "--level", "4"];
    let json = run_ok(&args);
    let mut table_args = args.to_vec();
    table_args.extend(["--output", "table"]);
    let out = umbral(&table_args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for (i, r) in json["results"].as_array().unwrap().iter().enumerate() {
        let line = format!("results[{i}].poly.coeffs");
        let row = text.lines().find(|l| l.starts_with(&line)).unwrap();
        assert_eq!(row[line.len()..].trim(), coeffs(&r["poly"]).join(", "));
    }
}

#[test]
fn exit_codes_and_error_objects() {
    let out = umbral(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "usage");

    let out = umbral(&["binomial", "--op", "forward_difference"]);
    assert_eq!(out.status.code(), Some(1));

    let out = umbral(&["binomial", "--op", "no_such_op", "--level", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "unknown_operator");

    let out = umbral(&["convolve", "--seq", r#"{"level":1,"entries":["0","1"]}"#, "--invert"]);
    assert_eq!(out.status.code(), Some(2));
    let err = json_of(&out);
    assert_eq!(err["error"], "not_invertible_seq");
    assert!(err["detail"].is_string());

    let out = umbral(&["verify", "grace", "--level", "2", "--poly", r#"{"coeffs":["1","0","1"]}"#, "--poly", r#"{"coeffs":["1","0","1"]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"], "not_apolar");

    // a zero tolerance cannot be met
    let out = umbral(&["verify", "deviation-line", "--level", "3", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json_of(&out)["violations"].as_u64().unwrap() > 0);

    let out = umbral(&["--output", "table", "convolve", "--seq", r#"{"level":1,"entries":["0","1"]}"#, "--invert"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
