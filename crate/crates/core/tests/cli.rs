use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_jacobian-hd")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).expect("valid json"))
}

#[test]
fn exp_prints_generator_images() {
    let (code, out, _) = run(&["exp", "--p", "3", "x - y^3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "phi(x) = x + t^3\nphi(y) = y + t\n");
}

#[test]
fn exp_reports_undefined_index() {
    let (code, out, _) = run(&["exp", "--p", "3", "x*y"]);
    assert_eq!(code, 1);
    assert!(out.contains("l = 3"), "{out}");
}

#[test]
fn table_golden() {
    let (code, out, _) = run(&["table", "--p", "3", "x - y^3"]);
    assert_eq!(code, 0);
    let block: Vec<&str> = out.lines().take(6).collect();
    assert_eq!(block[0], "generator x");
    let cells: Vec<Vec<&str>> = block[2..].iter().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(cells[0], ["1", "3^0*1", "3*y^2", "0"]);
    assert_eq!(cells[2], ["3", "3^1*2", "6", "1"]);
    assert_eq!(cells[3], [">=4", "-", "0", "0"]);
}

#[test]
fn check_variable_golden() {
    let (code, out, _) = run(&["check-variable", "--p", "3", "x - y^3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("answer: yes\n"));
    assert!(out.contains("x = F + S^3\ny = S\n"), "{out}");
}

#[test]
fn check_variable_json_keys() {
    let (code, v) = json(&["check-variable", "--p", "3", "x - y^3"]);
    assert_eq!(code, 0);
    for key in ["answer", "budgets", "certificate", "diagnostics", "input", "kernel_in_powers", "witness"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["answer"], "yes");
    assert_eq!(v["certificate"]["expressions"]["x"], "F + S^3");
    assert_eq!(v["budgets"]["seed"], 0);
}

#[test]
fn univariate_answers() {
    let (code, v) = json(&["check-univariate", "--p", "3", "x*y"]);
    assert_eq!(code, 1);
    assert_eq!(v["answer"], "no");

    let (code, out, _) = run(&["check-univariate", "--p", "3", "(x - y^3)^2 + (x - y^3)"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("G^2"), "{out}");
}

#[test]
fn unknown_exits_two() {
    let (code, v) = json(&["check-extendable", "--p", "3", "x^2"]);
    assert_eq!(code, 2);
    assert_eq!(v["answer"], "unknown");
    assert!(v["diagnostics"].is_object());
}

#[test]
fn three_variable_tuple() {
    let (code, out, _) = run(&["check-extendable", "--p", "2", "--vars", "x,y,z", "x + y^2", "z"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn kernel_dimension() {
    let (code, out, _) = run(&["kernel", "--p", "3", "--dmax", "6", "--trunc", "10", "x - y^3"]);
    assert_eq!(code, 0);
    assert!(out.contains("dimension 3"), "{out}");
}

#[test]
fn verify_hd_fixtures() {
    let (code, _, _) = run(&["verify-hd", &data("geometric_f2.json"), "x*y"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["verify-hd", &data("translation_f5.json")]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["verify-hd", &data("tampered_square.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("Leibniz rule breaks at t^2"), "{out}");
    let (code, _, _) = run(&["verify-hd", &data("bad_identity.json")]);
    assert_eq!(code, 1);
}

#[test]
fn conjugate_passes() {
    let args = ["conjugate", "--p", "3", "x - y^3", "--sigma", "x", "--sigma", "y + x", "--sigma-inv", "x", "--sigma-inv", "y - x"];
    let (code, _, _) = run(&args);
    assert_eq!(code, 0);
}

#[test]
fn conjugate_rejects_non_inverse() {
    let args = ["conjugate", "--p", "3", "x - y^3", "--sigma", "x", "--sigma", "y + x", "--sigma-inv", "x", "--sigma-inv", "y"];
    let (code, _, _) = run(&args);
    assert_eq!(code, 3);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["table", "--p", "3"]).0, 3);
    assert_eq!(run(&["table", "--p", "4", "x"]).0, 3);
    assert_eq!(run(&["exp", "--p", "3", "x +* y"]).0, 3);
    assert_eq!(run(&["no-such-command"]).0, 3);
    assert_eq!(run(&["verify-hd", "/nonexistent.json"]).0, 3);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check-variable"));
}

#[test]
fn seeded_runs_are_identical() {
    let args = ["check-extendable", "--json", "--p", "5", "--seed", "7", "x^2 + y"];
    assert_eq!(run(&args), run(&args));
}
