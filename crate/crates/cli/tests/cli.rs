use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(rel).to_string_lossy().into_owned()
}

fn zeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeta")).args(args).env_remove("ZETA_ENUM_BUDGET").output().unwrap()
}

fn decomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decomp")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn riemann_and_mobius_coefficients() {
    let out = zeta(&["riemann", "--terms", "5"]);
    assert!(out.status.success());
    assert_eq!(strings(&json(&out)), ["1/1"; 5]);

    let out = zeta(&["mobius", "--terms", "6"]);
    assert_eq!(strings(&json(&out)), ["1/1", "-1/1", "-1/1", "0/1", "-1/1", "1/1"]);
}

#[test]
fn config_is_echoed_to_stderr() {
    let out = zeta(&["--threads", "2", "riemann", "--terms", "3"]);
    let err = String::from_utf8(out.stderr).unwrap();
    let config: Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(config["config"]["threads"], 2);
    assert_eq!(config["config"]["command"]["terms"], 3);
}

#[test]
fn csv_output() {
    let out = zeta(&["--format", "csv", "mobius", "--terms", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,coefficient\n1,1/1\n2,-1/1\n3,-1/1\n4,0/1\n");
}

#[test]
fn dedekind_gaussian_integers() {
    // ζ_{ℚ(i)}: a_n counts ideals of norm n
    let out = zeta(&["dedekind", "--disc", "-4", "--terms", "10"]);
    assert_eq!(
        strings(&json(&out)),
        ["1/1", "1/1", "0/1", "1/1", "2/1", "0/1", "0/1", "1/1", "1/1", "2/1"]
    );
}

#[test]
fn variety_reconstruction_and_functional_equation() {
    let input = fixture("varieties/elliptic_curve.json");
    let out = zeta(&[
        "variety", "--q", "2", "--input", &input, "--order", "6", "--reconstruct", "2,2", "--check-functional", "1,0",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(strings(&v["reconstruction"]["numerator"]), ["1", "0", "2"]);
    assert_eq!(strings(&v["reconstruction"]["denominator"]), ["1", "-3", "2"]);
    assert_eq!(v["functional_equation"]["holds"], true);

    // the wrong dimension makes the check fail with exit code 1
    let out = zeta(&[
        "variety", "--q", "2", "--input", &input, "--order", "6", "--reconstruct", "2,2", "--check-functional", "1,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn variety_from_flags() {
    let out = zeta(&["variety", "--q", "3", "--ambient", "projective:1", "--order", "3"]);
    let v = json(&out);
    assert_eq!(strings(&v["counts"]), ["4/1", "10/1", "28/1"]);
}

#[test]
fn poset_interval() {
    let out = zeta(&["poset", "--kind", "divisibility", "--from", "1", "--to", "30"]);
    assert_eq!(json(&out)["value"], "-1/1");
    let out = zeta(&["poset", "--kind", "file", "--file", &fixture("posets/pentagon.json"), "--from", "0", "--to", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // the pentagon has μ(0̂, 1̂) = 1
    assert_eq!(json(&out)["value"], "1/1");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(zeta(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(zeta(&["riemann", "--terms", "0"]).status.code(), Some(2));
    assert_eq!(zeta(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(decomp(&["check", "--input", "/nonexistent.json", "--level", "2"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    assert_eq!(zeta(&["--budget", "10", "verify", "cycles"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_zeta"))
        .args(["variety", "--q", "7", "--ambient", "affine:3", "--poly", "x*y*z - 1", "--order", "2"])
        .env("ZETA_ENUM_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_is_deterministic_across_threads() {
    let one = zeta(&["--threads", "1", "verify", "arith"]);
    let many = zeta(&["--threads", "4", "verify", "arith"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(json(&one)["passed"], true);
}

#[test]
fn boundary_matches_fixture() {
    let out = decomp(&["boundary", "--dim", "3", "--level", "3"]);
    assert!(out.status.success());
    let generated: Value = serde_json::from_slice(&out.stdout).unwrap();
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(fixture("simplicial/boundary_delta3.json")).unwrap()).unwrap();
    assert_eq!(generated, stored);
}

#[test]
fn decomposition_check_verdicts() {
    let out = decomp(&["check", "--input", &fixture("simplicial/boundary_delta3.json"), "--level", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["witness"]["defect"]["kind"], "missing");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nerve.json");
    let path = path.to_str().unwrap();
    let out = decomp(&["nerve", "--divisors", "12", "--level", "3", "--out", path]);
    assert!(out.status.success());
    let out = decomp(&["check", "--input", path, "--level", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn convolution_and_laws() {
    let nerve = tempfile::NamedTempFile::new().unwrap();
    let path = nerve.path().to_str().unwrap();
    assert!(decomp(&["nerve", "--chain", "3", "--level", "2", "--out", path]).status.success());
    let out = decomp(&["convolve", "--input", path, "--phi", "zeta", "--psi", "mobius"]);
    assert!(out.status.success());
    let v = json(&out);
    for (edge, value) in v.as_object().unwrap() {
        let ends: Vec<String> = serde_json::from_str(edge).unwrap();
        let expected = if ends[0] == ends[1] { "1/1" } else { "0/1" };
        assert_eq!(value, expected, "{edge}");
    }
    let mu = json(&decomp(&["mobius", "--input", path]));
    assert_eq!(mu["[\"0\",\"1\"]"], "-1/1");
    assert_eq!(mu["[\"0\",\"2\"]"], "0/1");
    assert_eq!(json(&decomp(&["laws", "--input", path]))["lawful"], true);

    let out = decomp(&["laws", "--input", &fixture("simplicial/doubled_triangle.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violation"]["law"], "left_unit");
}
