//! End-to-end CLI behavior through the dispatcher: text and JSON renderings,
//! error objects, and the worked examples.

use superline::io::cli::run_with_input;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["superline".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    run_with_input(full, None)
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = cli(args);
    assert_eq!(code, 0, "args {:?} failed: {}", args, err);
    out
}

#[test]
fn mul_expands_noncommutatively() {
    assert_eq!(ok(&["mul", "D - 4*xi", "D - xi"]), "D^2 - 3*xi*D - 1\n");
    assert_eq!(ok(&["mul", "D", "x"]), "x*D + xi\n");
}

#[test]
fn apply_and_mphi() {
    assert_eq!(ok(&["apply", "D^2", "exp(3*x)"]), "3*exp(3*x)\n");
    assert_eq!(ok(&["mphi", "exp(x)"]), "D - xi\n");
    assert_eq!(
        ok(&["--odd-consts", "1", "mphi", "1 + xi*theta1"]),
        "D - theta1\n"
    );
}

#[test]
fn divmod_both_sides() {
    assert_eq!(
        ok(&["divmod", "--side", "right", "D^2", "D - xi"]),
        "Q = D - xi\nR = 1\n"
    );
    assert_eq!(
        ok(&["divmod", "--side", "left", "D^2 - 1", "D - xi"]),
        "Q = D - xi\nR = 0\n"
    );
}

#[test]
fn eigencheck_with_odd_constant() {
    assert_eq!(
        ok(&["--odd-consts", "1", "eigencheck", "D", "1 + xi*theta1"]),
        "lambda = theta1\n"
    );
}

#[test]
fn transform_and_errors() {
    assert_eq!(ok(&["transform", "D^2", "D - xi"]), "D^2\n");
    let (code, _, err) = cli(&["transform", "D^2", "D - x*xi"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["code"], "NoDarbouxTransform");
}

#[test]
fn factor_subcommand() {
    assert_eq!(
        ok(&["factor", "D^2 - 1", "--kernel", "exp(x), xi*exp(x)"]),
        "a = 1\nfactors = D - xi, D - xi\n"
    );
}

#[test]
fn factor_chain_with_explicit_kernel() {
    let out = ok(&[
        "factor-chain",
        "D^2",
        "D^2 - 3*xi*D - 1",
        "--kernel",
        "exp(x),xi*exp(4*x)",
    ]);
    assert!(out.starts_with("steps = 2\n"), "got: {out}");
    assert!(out.contains("step 1: phi = exp(x); lambda = 1; M = D - xi"));
    assert!(out.contains("step 2: phi = exp(4*x); lambda = 4; M = D - 4*xi"));
    assert!(out.contains("composed = D^2 - 3*xi*D - 1\n"));
    assert!(out.ends_with("target = D^2\n"));
}

#[test]
fn factor_chain_first_order_without_kernel() {
    let out = ok(&["factor-chain", "D^2", "D - xi"]);
    assert!(out.starts_with("steps = 1\n"));
    assert!(out.contains("phi = exp(x)"));
}

#[test]
fn verify_intertwine_answers() {
    assert_eq!(ok(&["verify-intertwine", "D - xi", "D^2", "D^2"]), "true\n");
    let (code, out, _) = cli(&["verify-intertwine", "D - xi", "D^2", "D^2 - 1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "false\n");
}

#[test]
fn json_format_is_machine_readable() {
    let out = ok(&["--format", "json", "kernel", "D^3"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["dims"], "2|1");
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);

    let out = ok(&["--format", "json", "elementary", "D^2", "exp(x)"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["m"]["text"], "D - xi");
    assert_eq!(v["lambda"]["text"], "1");
    assert_eq!(v["l1"]["text"], "D^2");
}

#[test]
fn parse_errors_carry_location() {
    let (code, _, err) = cli(&["kernel", "D^2 + $"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["code"], "SyntaxError");
    assert_eq!(v["location"], 6);

    let (code, _, err) = cli(&["apply", "D", "theta1"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["code"], "UnknownGenerator");
}

#[test]
fn missing_kernel_is_reported() {
    let (code, _, err) = cli(&["factor-chain", "D^2", "D^2 - 3*xi*D - 1"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["code"], "MissingKernel");
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, err) = cli(&["divmod", "D^2", "D"]);
    assert_eq!(code, 2, "missing --side should be a usage error: {err}");
}

#[test]
fn odd_consts_is_capped() {
    let (code, _, err) = cli(&["--odd-consts", "64", "kernel", "D"]);
    assert_eq!(code, 2);
    assert!(err.contains("--odd-consts must be at most"));
}
