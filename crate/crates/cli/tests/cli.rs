use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn ultra(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ultra")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, out) = ultra(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn claims(r: &Value) -> Vec<&str> {
    r["certificates"].as_array().unwrap().iter().map(|c| c["claim"].as_str().unwrap()).collect()
}

fn all_hold(r: &Value) -> bool {
    r["certificates"].as_array().unwrap().iter().all(|c| c["holds"] == Value::Bool(true))
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ultra-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn norm_of_one_over_twenty_five() {
    let (code, r) = report(&["padic", "norm", "--prime", "5", "--value", "1/25"]);
    assert_eq!(code, 0);
    assert_eq!(r["outcome"], "pass");
    assert_eq!(r["result"]["norm"], "5^(2)");
    assert_eq!(r["result"]["valuation"], "-2");
    let c = &r["certificates"][0];
    assert_eq!((c["lhs"].as_str(), c["rhs"].as_str(), c["holds"].as_bool()), (Some("5^(2)"), Some("5^(2)"), Some(true)));
}

#[test]
fn eval_bound_is_an_equality_for_a_shifted_root() {
    let (code, r) =
        report(&["poly", "roots-bound", "--part", "1", "--prime", "5", "--f", "X - 1", "--g", "X - 6", "--alpha", "1"]);
    assert_eq!(code, 0);
    let c = &r["certificates"][0];
    assert_eq!(c["claim"], "continuity-of-roots/eval-bound");
    assert_eq!(c["lhs"], "5^(-1)");
    assert_eq!(c["lhs"], c["rhs"]);
}

#[test]
fn root_distance_bound_in_the_tower() {
    let (code, r) = report(&[
        "poly",
        "roots-bound",
        "--part",
        "2",
        "--prime",
        "2",
        "--f-roots",
        "pi @ level 2; 1",
        "--g-roots",
        "pi + pi^3 @ level 4; 1",
        "--alpha",
        "pi @ level 2",
    ]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["certificates"][0]["witness"], "1*pi + 1*pi^3 @ level 4");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let (code, out) = ultra(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(ultra(&["padic", "norm", "--prime", "5"]).0, 2);
    assert_eq!(ultra(&["poly", "roots-bound", "--part", "3", "--alpha", "1"]).0, 2);
}

#[test]
fn errors_are_reported_with_exit_two() {
    let (code, r) = report(&["padic", "norm", "--value", "1/25"]);
    assert_eq!(code, 2);
    assert_eq!(r["outcome"], "error");
    assert!(r["error"].as_str().unwrap().contains("--prime"));
    let (code, r) = report(&["padic", "norm", "--prime", "6", "--value", "1"]);
    assert_eq!((code, r["outcome"].as_str()), (2, Some("error")));
    // f'(a0) vanishes modulo p and f(a0) is not small enough
    let (code, r) = report(&["poly", "hensel", "--prime", "2", "--f", "X^2 - 3", "--a0", "1", "--target", "8"]);
    assert_eq!((code, r["outcome"].as_str()), (2, Some("error")));
}

#[test]
fn hensel_lift_of_a_square_root_of_two() {
    let (code, r) = report(&["poly", "hensel", "--prime", "7", "--f", "X^2 - 2", "--a0", "3", "--target", "12"]);
    assert_eq!(code, 0, "{r}");
    assert!(all_hold(&r));
    let vals = r["result"]["residual_valuations"].as_array().unwrap();
    assert!(vals.last().unwrap().as_u64().unwrap() >= 12);
    // the printed root squares to 2 to the stated precision
    let root = r["result"]["root"].as_str().unwrap().to_string();
    let (_, sq) = report(&["padic", "arith", "--prime", "7", "--op", "mul", "--a", &root, "--b", &root]);
    assert_eq!(sq["result"]["value"], "7^0 * (2) [prec 12]");
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "all", "--seed", "7", "--trials", "3"];
    let (c1, a) = ultra(&args);
    let (c2, b) = ultra(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, other) = ultra(&["verify", "all", "--seed", "8", "--trials", "3"]);
    assert_ne!(a, other);
}

#[test]
fn printed_values_reparse() {
    let (code, r) = report(&["padic", "arith", "--prime", "3", "--op", "div", "--a", "7/9", "--b", "-5"]);
    assert_eq!(code, 0);
    let v = r["result"]["value"].as_str().unwrap();
    let (code, back) = report(&["padic", "norm", "--prime", "3", "--value", v]);
    assert_eq!(code, 0);
    assert_eq!(back["inputs"]["value"], v);
    assert_eq!(back["result"]["norm"], "3^(2)");
    let (code, r) = report(&["eis", "arith", "--prime", "2", "--op", "mul", "--a", "1 + pi @ level 3", "--b", "pi^2 @ level 3"]);
    assert_eq!(code, 0);
    let z = r["result"]["value"].as_str().unwrap();
    let (code, back) = report(&["eis", "valuation", "--prime", "2", "--value", z]);
    assert_eq!(code, 0);
    assert_eq!(back["result"]["valuation"], "2/3");
    assert!(claims(&back).contains(&"report/round-trip/value"));
}

#[test]
fn default_chain_passes_every_check() {
    let (code, r) = report(&["witness", "schikhof", "--p", "2", "--steps", "10"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["steps"].as_array().unwrap().len(), 10);
    for claim in ["chain/nested", "chain/excludes-previous-point", "chain/radii-above-half", "chain/final-ball-avoids-sequence"] {
        assert!(claims(&r).contains(&claim), "{claim} missing");
    }
    assert!(r["result"]["max_level"].as_u64().unwrap() <= 1024);
}

#[test]
fn chain_radii_must_stay_above_half() {
    let (code, r) = report(&["witness", "schikhof", "--radii", "1, 3/4, 1/2"]);
    assert_eq!(code, 2);
    assert!(r["error"].as_str().unwrap().contains("r_0/2"));
}

#[test]
fn norm_dense_witness_in_an_interval() {
    let (code, r) = report(&["witness", "norm-dense", "--prime", "2", "--a", "17/20", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["exponent"], "1/5");
    assert_eq!(r["result"]["norm"], "2^(-1/5)");
}

#[test]
fn tree_balls_from_a_file() {
    let f = temp_file("tree.balls", "tree (1 (1/5 a b) (1/5 c))\n# three balls\nball 1 a\nball 1/5 b\nball 1/5 c\n");
    let (code, r) = report(&["balls", "check", "--space", "tree", "--file", f.to_str().unwrap()]);
    std::fs::remove_file(&f).ok();
    assert_eq!(code, 0, "{r}");
    // B(b, 1/5) and B(c, 1/5) are disjoint, so the balls are not a chain
    assert_eq!(r["result"]["nested"], false);
    assert!(claims(&r).contains(&"balls/pairwise-meeting-family-has-common-point"));
    assert!(!claims(&r).contains(&"balls/nested-chain-has-common-point"));
}

#[test]
fn padic_balls_from_a_file() {
    let f = temp_file("qp.balls", "ball 1 3\nball 1/5 8\nball 1/25 3\n");
    let (code, r) = report(&["balls", "check", "--space", "qp", "--prime", "5", "--file", f.to_str().unwrap()]);
    std::fs::remove_file(&f).ok();
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["nested"], true);
    assert!(claims(&r).contains(&"balls/nested-chain-has-common-point"));
}

#[test]
fn linalg_commands() {
    let (code, r) = report(&["linalg", "dist", "--prime", "5", "--x", "1, 2", "--span", "1, 1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["distance"], "5^(0)");
    let (code, r) = report(&["linalg", "orth", "--prime", "5", "--x", "1, 0", "--y", "0, 1"]);
    assert_eq!((code, r["result"]["orthogonal"].as_bool()), (0, Some(true)));
    let (code, r) = report(&["linalg", "project", "--prime", "3", "--span", "1, 1, 0; 0, 3, 1", "--x", "1, 2, 3"]);
    assert_eq!(code, 0, "{r}");
    assert!(all_hold(&r));
    let (code, r) = report(&["linalg", "hahn-banach", "--prime", "3", "--span", "1, 1, 0; 0, 3, 1", "--values", "2; 5"]);
    assert_eq!(code, 0, "{r}");
    let (code, r) = report(&["linalg", "immediate", "--prime", "3", "--matrix", "1, 0; 0, 1; 1, 1"]);
    assert_eq!((code, r["result"]["immediate"].as_bool()), (0, Some(false)));
    let (code, r) = report(&["linalg", "immediate", "--prime", "3", "--matrix", "1, 1; 0, 1"]);
    assert_eq!((code, r["result"]["immediate"].as_bool()), (0, Some(true)));
    // entries of norm > 1 make the map non-isometric
    let (code, _) = report(&["linalg", "immediate", "--prime", "3", "--matrix", "1/3, 0; 0, 1"]);
    assert_eq!(code, 2);
}

#[test]
fn sequence_commands() {
    let (code, r) = report(&["seq", "quotient-norm", "--prime", "5", "--seq", "[(1, 1/5), (25, 0) | (5, 0)]"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["quotient_norm"], "5^(-1)");
    assert_eq!(r["result"]["sup_norm"], "5^(1)");
    assert_eq!(r["result"]["null_sequence"], false);
    let (code, r) = report(&["seq", "embed", "--prime", "5", "--x", "1/5, 3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["sequence"], "[| (1/5, 3)]");
}
