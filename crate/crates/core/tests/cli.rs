use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chainforge").chain(args.iter().copied());
    let code = chainforge::cli::run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn weights_json() {
    let (code, v) = json(&[
        "weights", "--d", "2", "--n", "6", "--k", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "weights");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["payload"]["n"], 6);
    assert!(v["payload"]["entries"].as_array().unwrap().len() > 10);
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn weights_csv() {
    let (code, out, _) = run(&["weights", "--n", "3", "--k", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,d,k,owner,W,width,count,per_chain"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn certify_passes() {
    let (code, v) = json(&["certify", "--d", "2", "--n", "3", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["status"], "PASS");
    assert_eq!(v["payload"]["unique"], true);
}

#[test]
fn certify_fails_on_degenerate_k() {
    let (code, v) = json(&["certify", "--d", "2", "--n", "2", "--k", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["maximum_sets"], 6);
}

#[test]
fn lemma_failures_exit_one() {
    let (code, v) = json(&["verify-lemmas", "--n", "10", "--k", "3", "--lemma", "all"]);
    assert_eq!(code, 1);
    let failing: Vec<&str> = v["payload"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["lemma"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["S_diff_positive", "F_symmetry"]);
    let (code, _) = json(&[
        "verify-lemmas",
        "--n",
        "8",
        "--k",
        "2",
        "--lemma",
        "inner_W_eq_U_diff",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn unknown_lemma_is_usage_error() {
    let (code, _, err) = run(&["verify-lemmas", "--n", "4", "--lemma", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let (code, _, err) = run(&["weights", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
}

#[test]
fn budget_needs_acknowledgment() {
    let (code, _, err) = run(&["certify", "--n", "5", "--k", "2", "--budget", "300"]);
    assert_eq!(code, 2);
    assert!(err.contains("acknowledge"));
    let (code, v) = json(&[
        "certify",
        "--n",
        "5",
        "--k",
        "2",
        "--budget",
        "300",
        "--acknowledge-budget",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["mis"], 53);
}

#[test]
fn over_budget_is_incomplete() {
    let (code, v) = json(&["certify", "--n", "5", "--k", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "incomplete");
}

#[test]
fn verify_induced_both_modes() {
    let (code, v) = json(&[
        "verify-induced",
        "--n",
        "4",
        "--mode",
        "both",
        "--jobs",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"].as_array().unwrap().len(), 8);
}

#[test]
fn anti_basic_point_mode_is_rejected() {
    let (code, _, _) = run(&[
        "verify-induced",
        "--n",
        "3",
        "--k",
        "2",
        "--family",
        "anti-basic",
        "--mode",
        "point",
    ]);
    assert_eq!(code, 2);
    let (code, v) = json(&["weights", "--n", "2", "--k", "2", "--family", "anti-basic"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["negative"][0]["W"], "-1/1");
}

#[test]
fn conjecture_is_labelled() {
    let (_, v) = json(&["conjecture", "--n", "2", "--d", "3", "--k", "1"]);
    assert_eq!(v["payload"]["label"], "UNPROVEN");
}

#[test]
fn sperner_small() {
    let (code, v) = json(&["sperner", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["total_weight"], "6/1");
    assert_eq!(v["payload"]["oracle_mis"], 6);
}

#[test]
fn diagram_svg_is_deterministic() {
    let args = [
        "diagram",
        "--n",
        "9",
        "--k",
        "2",
        "--kind",
        "footprint",
        "--a",
        "5",
        "--c",
        "1",
    ];
    let (code, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert!(a.starts_with("<?xml"));
    assert_eq!(a.matches("#6fa8dc").count(), 5);
}

#[test]
fn diagram_csv_rejected() {
    let (code, _, _) = run(&["diagram", "--n", "3", "--format", "csv"]);
    assert_eq!(code, 2);
}

#[test]
fn asymptotics_rows() {
    let (code, v) = json(&["asymptotics", "--k", "1", "--n", "3,10"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"][0]["ratio_exact"], "1/3");
    assert_eq!(v["payload"][1]["deviation_sci"], "0");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("chainforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    let (code, out, _) = run(&[
        "weights",
        "--n",
        "2",
        "--k",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "pass");
    std::fs::remove_dir_all(dir).unwrap();
}
