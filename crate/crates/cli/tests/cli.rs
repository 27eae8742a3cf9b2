//! End-to-end tests of the command-line interface: exit codes, output
//! schemas, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> PathBuf {
    let mut path = PathBuf::from(env!("CARGO_BIN_EXE_ppcf"));
    assert!(path.exists(), "{path:?}");
    path = path.canonicalize().unwrap();
    path
}

fn write_program(name: &str, source: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("ppcf-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, source).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().expect("spawn ppcf")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn dist_on_geometric_matches_the_law() {
    let p = write_program("geom.pcf", "fix g. if bernoulli(1/2) then 0 else 1 + g\n");
    let out = run(&["dist", p.to_str().unwrap(), "--seed", "42", "--samples", "20000", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let atoms = json["atoms"].as_array().unwrap();
    // first atom is value 0 with mass near one half
    assert_eq!(atoms[0]["value"], "0/1");
    let mass = atoms[0]["mass"].as_str().unwrap();
    let (n, d) = mass.split_once('/').unwrap();
    let p0 = n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap();
    assert!((p0 - 0.5).abs() < 0.02, "{p0}");
    assert_eq!(json["meta"]["seed"], 42);
}

#[test]
fn run_on_forced_pair_yields_identical_members() {
    let p = write_program("forced.pcf", "eval uniform(0, 1) as x in L (x, x)\n");
    let out = run(&["run", p.to_str().unwrap(), "--seed", "7", "--json"]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let pair = json["value"]["L"]["pair"].as_array().unwrap();
    assert_eq!(pair[0], pair[1]);
}

#[test]
fn dist_on_divergence_reports_bottom_one() {
    let p = write_program("bot.pcf", "fix x. x\n");
    let out =
        run(&["dist", p.to_str().unwrap(), "--seed", "1", "--samples", "200", "--fuel", "100"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("bottom\t200/200") || text.contains("bottom\t1/1"), "{text}");
}

#[test]
fn denote_geometric_is_exact() {
    let p = write_program("geom2.pcf", "fix g. if bernoulli(1/2) then 0 else 1 + g\n");
    let out = run(&["denote", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("0/1\t1/2\n1/1\t1/4\n"), "{text}");
}

#[test]
fn compare_geometric_passes() {
    let p = write_program("geom3.pcf", "fix g. if bernoulli(1/2) then 0 else 1 + g\n");
    let out = run(&["compare", p.to_str().unwrap(), "--seed", "9", "--samples", "20000"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).trim_end().ends_with("PASS"));
}

#[test]
fn exit_code_1_on_failed_comparison() {
    // an absurd agreement threshold makes honest sampling noise a failure
    let p = write_program("tight.pcf", "bernoulli(1/2)\n");
    let out = run(&[
        "compare",
        p.to_str().unwrap(),
        "--seed",
        "5",
        "--samples",
        "20000",
        "--z-sigma",
        "0.000001",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn exit_code_2_on_parse_error() {
    let p = write_program("broken.pcf", "\\x. (x,,)\n");
    let out = run(&["denote", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn exit_code_3_on_type_error() {
    let p = write_program("illtyped.pcf", "eval (\\x. x) as y in y\n");
    let out = run(&["denote", p.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn exit_code_3_on_function_typed_sampling() {
    let p = write_program("fun.pcf", "\\x. x + 1\n");
    let out = run(&["dist", p.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code(&out), 3);
    let out = run(&["run", p.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn exit_code_4_on_missing_seed_and_bad_flags() {
    let p = write_program("coin.pcf", "bernoulli(1/2)\n");
    let out = run(&["dist", p.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 4);
    let out = run(&["denote", p.to_str().unwrap(), "--fix-tol", "0"]);
    assert_eq!(code(&out), 4);
    let out = run(&["laws", "nonsense"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn exit_code_5_on_continuous_denotation() {
    let p = write_program("cont.pcf", "normal(0, 1)\n");
    let out = run(&["denote", p.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
}

#[test]
fn exit_code_6_on_unconverged_fix() {
    let p = write_program("slow.pcf", "fix g. if bernoulli(1/2) then 0 else 1 + g\n");
    // an iteration budget too small for the tolerance cannot converge
    let out = run(&["denote", p.to_str().unwrap(), "--fix-max-iter", "3"]);
    assert_eq!(code(&out), 6);
}

#[test]
fn byte_identical_reruns() {
    let p = write_program("det.pcf", "fix g. if bernoulli(1/3) then 0 else 1 + g\n");
    let args = ["dist", p.to_str().unwrap(), "--seed", "5", "--samples", "5000", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "sampling output must be reproducible");
    let c = run(&["denote", p.to_str().unwrap(), "--json"]);
    let d = run(&["denote", p.to_str().unwrap(), "--json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn paper_checks_pass_with_json_schema() {
    let out = run(&["paper-checks", "--json"]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["pass"], true);
    let checks = json["checks"].as_array().unwrap();
    assert!(checks.len() >= 8);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn shipped_programs_parse_and_sample() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs");
    for entry in std::fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("pcf") {
            continue;
        }
        let out = run(&[
            "dist",
            path.to_str().unwrap(),
            "--seed",
            "3",
            "--samples",
            "500",
            "--fuel",
            "300",
        ]);
        assert_eq!(code(&out), 0, "{path:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn laws_suites_all_pass() {
    for suite in ["convex", "exponential"] {
        let out = run(&["laws", suite]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    }
}
