use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levelraise"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json from {:?}: {}\n{}",
            args,
            e,
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (v, code)
}

fn expected(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/expected")
        .join(format!("{}.json", name));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn all_passed(v: &Value) -> bool {
    v["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["passed"] == Value::Bool(true))
}

#[test]
fn tree_verify_shells() {
    let (v, code) = report(&["tree", "verify", "--l", "2", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["shells"], serde_json::json!([1, 9, 18, 144]));
    assert!(all_passed(&v));
}

#[test]
fn tree_radius_zero_is_trivially_true() {
    let (v, code) = report(&["tree", "verify", "--l", "2", "--radius", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["values_compared"], 0);
}

#[test]
fn tree_rejects_composite_l() {
    let out = run(&["tree", "verify", "--l", "4", "--radius", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn tree_budget_is_enforced() {
    let out = run(&[
        "tree", "verify", "--l", "3", "--radius", "4", "--budget", "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_k39_with_prime() {
    let (v, code) = report(&["graph", "analyze", "fixtures/k39.graph", "--prime", "3"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["old_dim"], 11);
    assert_eq!(r["new_dim"], 16);
    assert_eq!(
        r["t_l_spectrum"],
        serde_json::json!([
            { "eigenvalue": 18, "multiplicity": 1 },
            { "eigenvalue": -9, "multiplicity": 2 }
        ])
    );
    assert_eq!(r["ihara"]["kernel_dim"], 1);
    let cands = r["level_raising"]["candidates"].as_array().unwrap();
    assert!(!cands.is_empty());
    assert!(cands
        .iter()
        .all(|c| c["rational_lifts"] == serde_json::json!([-9])));
}

#[test]
fn graph_parse_error_has_line_number() {
    let dir = std::env::temp_dir().join(format!("levelraise-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.graph");
    std::fs::write(&path, "coset-graph l=2\nv0 1\nv1 3\ne 0 zero\n").unwrap();
    let out = run(&["graph", "analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.graph:4:"), "{}", err);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn graph_random_uses_seed() {
    let args = |seed: &'static str| ["graph", "congruence", "--random", "2", "--seed", seed];
    let (a, code) = report(&args("7"));
    assert_eq!(code, 0);
    let (b, _) = report(&args("7"));
    assert_eq!(a, b);
    assert_eq!(a["results"]["graph"]["v1"], 6);
}

#[test]
fn satake_classify_steinberg() {
    let (v, code) = report(&["satake", "classify", "--alpha", "4", "--l", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["classification"], "CharacterPlusSteinberg");
    assert_eq!(v["results"]["lambda"], "18");
}

#[test]
fn satake_ve_rejection_exits_nonzero() {
    let (v, code) = report(&[
        "satake", "ve-check", "--q", "2", "--t1", "7", "--t2", "6", "--t3", "1", "--psi", "1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["very_eisenstein"], false);
}

#[test]
fn moduli_components_gl3() {
    let (v, code) = report(&[
        "moduli",
        "components",
        "--diag",
        "l^2,l,1",
        "--l",
        "2",
        "--group",
        "gl3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"]["partitions"],
        serde_json::json!(["(1,1,1)", "(2,1)", "(3)"])
    );
}

#[test]
fn moduli_group_size_mismatch() {
    let out = run(&[
        "moduli",
        "components",
        "--diag",
        "l,1",
        "--l",
        "2",
        "--group",
        "gl3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moduli_witness_rejects_non_solution() {
    let out = run(&[
        "moduli", "witness", "--diag", "1,1", "--l", "2", "--n", "0,1;0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn slope_factor_example() {
    let (v, code) = report(&[
        "slope", "factor", "--poly", "1,-4,3", "--p", "3", "--h", "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["q"], "1 - T");
    assert_eq!(v["results"]["s"], "1 - 3*T");
}

#[test]
fn slope_matrix_file() {
    let dir = std::env::temp_dir().join(format!("levelraise-slope-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("u.txt");
    std::fs::write(&path, "# planted slopes 0 and 2\n1 1\n0 4\n").unwrap();
    let (v, code) = report(&[
        "slope",
        "decompose",
        "--matrix",
        path.to_str().unwrap(),
        "--p",
        "2",
        "--h",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["q_part_dim"], 1);
    std::fs::write(&path, "1 1\n0\n").unwrap();
    let out = run(&[
        "slope",
        "series",
        "--matrix",
        path.to_str().unwrap(),
        "--p",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("u.txt:2:"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn analytic_rank_table() {
    let (v, code) = report(&["analytic", "ihara", "--p", "3", "--m", "1", "--degree", "3"]);
    assert_eq!(code, 0);
    let rows = v["results"]["rank_table"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["rank"], 20);
}

#[test]
fn table_format_lists_verdicts() {
    let out = run(&[
        "satake", "classify", "--alpha", "-l", "--l", "2", "--format", "table",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("TwoUnramifiedFactors"));
    assert!(text.contains("PASS dictionary_value"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["graph", "analyze", "fixtures/k39.graph", "--prime", "3"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let seq = run(&[
        "graph",
        "analyze",
        "fixtures/k39.graph",
        "--prime",
        "3",
        "--sequential",
    ]);
    let (pa, ps): (Value, Value) = (
        serde_json::from_slice(&a).unwrap(),
        serde_json::from_slice(&seq.stdout).unwrap(),
    );
    assert_eq!(pa["results"], ps["results"]);
}

#[test]
fn expected_reports_match() {
    let cases: [(&str, &[&str]); 8] = [
        (
            "tree_l2_r3",
            &["tree", "verify", "--l", "2", "--radius", "3"],
        ),
        (
            "graph_k39_p3",
            &["graph", "analyze", "fixtures/k39.graph", "--prime", "3"],
        ),
        (
            "congruence_k39",
            &["graph", "congruence", "fixtures/k39.graph"],
        ),
        (
            "congruence_m13",
            &["graph", "congruence", "fixtures/m13.graph"],
        ),
        (
            "satake_alpha4",
            &["satake", "classify", "--alpha", "4", "--l", "2"],
        ),
        (
            "moduli_gl3",
            &[
                "moduli",
                "components",
                "--diag",
                "l^2,l,1",
                "--l",
                "2",
                "--group",
                "gl3",
            ],
        ),
        (
            "slope_factor",
            &[
                "slope", "factor", "--poly", "1,-4,3", "--p", "3", "--h", "0",
            ],
        ),
        (
            "analytic_p2",
            &["analytic", "ihara", "--p", "2", "--m", "1", "--degree", "3"],
        ),
    ];
    for (name, args) in cases {
        let (v, code) = report(args);
        assert_eq!(code, 0, "{}", name);
        assert_eq!(v, expected(name), "{}", name);
        assert!(all_passed(&v), "{}", name);
    }
}
