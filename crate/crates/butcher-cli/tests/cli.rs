//! End-to-end tests of the `butcher` binary: output shapes, round-trips,
//! determinism, and the exit-code contract (0 ok, 2 parse, 3 contract,
//! 4 selftest failure).

use std::path::PathBuf;
use std::process::{Command, Output};

fn butcher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_butcher"))
        .args(args)
        .env_remove("BUTCHER_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn trees_lists_the_graded_enumeration() {
    let out = butcher(&["trees", "--max-order", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(
        lines,
        vec![
            "[]",
            "[[]]",
            "[[[]]]",
            "[[][]]",
            "[[[[]]]]",
            "[[[][]]]",
            "[[][[]]]",
            "[[][][]]"
        ]
    );
}

#[test]
fn trees_honors_the_environment_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_butcher"))
        .args(["trees"])
        .env("BUTCHER_MAX_ORDER", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn butcher_product_matches_the_pictured_identity() {
    let out = butcher(&["bprod", "[]", "[[]]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[[[]]]\n");
}

#[test]
fn decomposition_listings_are_deterministic() {
    let first = butcher(&["ost", "[[][]]"]);
    let second = butcher(&["ost", "[[][]]"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("kept=[[]] removed=[] mult=2"));

    let parts = butcher(&["partitions", "[[]]"]);
    assert_eq!(
        stdout(&parts),
        "kept=[] removed=[[]] mult=1\nkept=[[]] removed=[] [] mult=1\n"
    );

    let splits = butcher(&["splittings", "[[][]]"]);
    assert_eq!(stdout(&splits), "kept=[[]] removed=[] mult=2\n");
}

#[test]
fn exp_of_the_zero_element_is_the_identity_file() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_temp(&dir, "zero.elem", "order 4\n");
    let out = butcher(&["exp", zero.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "order 4\n");
}

#[test]
fn writer_outputs_reparse_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(&dir, "a.elem", "order 4\n[] 2/4\n[[][]] -6/2\n");
    let b = write_temp(&dir, "b.elem", "order 4\n[] 1/3\n[[[]]] 5/1\n");

    let product = butcher(&["mul", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(product.status.success());
    let text = stdout(&product);
    let echo = write_temp(&dir, "echo.elem", &text);
    let identity = write_temp(&dir, "e.elem", "order 4\n");

    // multiplying by the identity re-emits the exact same bytes
    let round = butcher(&["mul", echo.to_str().unwrap(), identity.to_str().unwrap()]);
    assert!(round.status.success());
    assert_eq!(stdout(&round), text);

    // identical inputs give byte-identical outputs
    let again = butcher(&["mul", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(again.stdout, product.stdout);
}

#[test]
fn exp_and_log_are_inverse_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(&dir, "a.elem", "order 5\n[] 1/1\n[[][]] -2/3\n");
    let dir_out = dir.path().join("ea.elem");
    let out = butcher(&[
        "exp",
        a.to_str().unwrap(),
        "--output",
        dir_out.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let back = butcher(&["log", dir_out.to_str().unwrap()]);
    assert!(back.status.success());
    assert_eq!(stdout(&back), "order 5\n[] 1/1\n[[][]] -2/3\n");
}

#[test]
fn evolve_integrates_the_ramp_curve() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write_temp(&dir, "ramp.curve", "order 3\n[] 0/1 1/1\n");
    let out = butcher(&["evolve", curve.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("order 3\n"));
    assert!(text.contains("[] 1/2"));

    let full = butcher(&["evolve", curve.to_str().unwrap(), "--full-curve"]);
    assert!(full.status.success());
    assert!(stdout(&full).contains("[] 0/1 0/1 1/2"));
}

#[test]
fn dtrans_matches_the_splitting_formula() {
    let dir = tempfile::tempdir().unwrap();
    let b = write_temp(&dir, "b.elem", "order 2\n[] 1/2\n");
    let a = write_temp(&dir, "a.elem", "order 2\n[] 3/1\n[[]] 1/4\n");
    let out = butcher(&["dtrans", b.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(out.status.success());
    // result(chain) = a(chain) + b(leaf) a(leaf) = 1/4 + 3/2
    assert_eq!(stdout(&out), "order 2\n[] 3/1\n[[]] 7/4\n");
}

#[test]
fn symplectic_check_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let euler = write_temp(&dir, "euler.elem", "order 2\n[] 1/1\n");
    let out = butcher(&["symplectic-check", euler.to_str().unwrap(), "--witness"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "symplectic: false\nwitness: u=[] v=[] defect=-1/1\n"
    );

    let tangent = write_temp(&dir, "x.elem", "order 3\n[[[]]] 1/1\n[[][]] -1/1\n");
    let out = butcher(&["symplectic-check", tangent.to_str().unwrap(), "--tangent"]);
    assert_eq!(stdout(&out), "tangent-symplectic: true\n");

    // restricting the order can turn a failing check vacuous
    let restricted = butcher(&[
        "symplectic-check",
        euler.to_str().unwrap(),
        "--order",
        "1",
    ]);
    assert_eq!(stdout(&restricted), "symplectic: true\n");
}

#[test]
fn rk_weights_for_the_known_tableaus() {
    let dir = tempfile::tempdir().unwrap();
    let euler = write_temp(&dir, "euler.json", r#"{"A": [["0"]], "b": ["1"], "c": ["0"]}"#);
    let out = butcher(&["rk-weights", euler.to_str().unwrap(), "--max-order", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "order 4\n[] 1/1\n");

    let midpoint = write_temp(
        &dir,
        "mid.json",
        r#"{"A": [["1/2"]], "b": ["1"], "c": ["1/2"]}"#,
    );
    let out = butcher(&["rk-weights", midpoint.to_str().unwrap(), "--max-order", "3"]);
    assert_eq!(
        stdout(&out),
        "order 3\n[] 1/1\n[[]] 1/2\n[[[]]] 1/4\n[[][]] 1/4\n"
    );
    assert!(stderr(&out).is_empty());

    let crooked = write_temp(
        &dir,
        "crooked.json",
        r#"{"A": [["1/2"]], "b": ["1"], "c": ["1/3"]}"#,
    );
    let out = butcher(&["rk-weights", crooked.to_str().unwrap(), "--max-order", "2"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("row sums"));
}

#[test]
fn parse_errors_exit_with_code_two() {
    let out = butcher(&["bprod", "[x]", "[]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unexpected character `x`"));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.elem", "order 2\n[] 1/0\n");
    let out = butcher(&["inv", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("1/0"));

    let bad_header = write_temp(&dir, "head.elem", "orden 2\n");
    let out = butcher(&["inv", bad_header.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn order_mismatch_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(&dir, "a.elem", "order 2\n[] 1/1\n");
    let b = write_temp(&dir, "b.elem", "order 3\n[] 1/1\n");
    let out = butcher(&["mul", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("incompatible truncations"));

    // a tree beyond the declared header order is a contract violation too
    let deep = write_temp(&dir, "deep.elem", "order 2\n[[[]]] 1/1\n");
    let out = butcher(&["inv", deep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn float_mode_refuses_exact_verbs_without_allow_approx() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(&dir, "a.elem", "order 2\n[] 1/1\n");
    let refused = butcher(&["--arithmetic", "float", "exp", a.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(stderr(&refused).contains("--allow-approx"));

    let allowed = butcher(&[
        "--arithmetic",
        "float",
        "--allow-approx",
        "exp",
        a.to_str().unwrap(),
    ]);
    assert!(allowed.status.success());
    assert!(stdout(&allowed).contains("[[]] 0.5"));

    // mul runs in float mode without the escape hatch
    let product = butcher(&[
        "--arithmetic",
        "float",
        "mul",
        a.to_str().unwrap(),
        a.to_str().unwrap(),
    ]);
    assert!(product.status.success());
    assert_eq!(stdout(&product), "order 2\n[] 2\n[[]] 1\n");
}

#[test]
fn selftest_passes_at_a_small_order() {
    let out = butcher(&["selftest", "--max-order", "3", "--samples", "3"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS tree census"));
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("0 failed, order 3"));
}
