use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn eqbase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqbase")).args(args).current_dir(root()).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_corpus_section() {
    let o = eqbase(&["check", "corpus/section2.eqp", "--axioms", "axioms/johnson.eqb"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("PASS"), "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn check_reports_a_broken_step() {
    let dir = tempfile::tempdir().unwrap();
    let ax = dir.path().join("c.eqb");
    std::fs::write(&ax, "C: x ^ y = y ^ x\n").unwrap();
    let bad = dir.path().join("bad.eqp");
    std::fs::write(&bad, "lemma L from C: x ^ y = y ^ x\n  x ^ y\n  = x ^ y by C -> at []\n").unwrap();
    let o = eqbase(&["check", bad.to_str().unwrap(), "--axioms", ax.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let good = dir.path().join("good.eqp");
    std::fs::write(&good, "lemma L from C: x ^ y = y ^ x\n  x ^ y\n  = y ^ x by C -> at []\n").unwrap();
    let o = eqbase(&["check", good.to_str().unwrap(), "--axioms", ax.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["steps"], 1);
}

#[test]
fn models_prints_the_all_zero_algebra() {
    let o = eqbase(&["models", "--axioms", "axioms/a9-j5.eqb", "--size", "2", "--violates", "J4", "--limit", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("size 2\nmeet:\n0 0\n0 0\ncomp:\n0 0\n"), "{out}");
    assert!(out.contains("# 1 model(s)"), "{out}");
    let o = eqbase(&["models", "--axioms", "axioms/a9-j5.eqb", "--size", "2", "--violates", "J4", "--up-to-iso"]);
    assert!(stdout(&o).contains("# 4 model(s)"), "{}", stdout(&o));
}

#[test]
fn prove_writes_a_checkable_script() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = eqbase(&["prove", "--axioms", "axioms/johnson-4.eqb", "--goal", "J3: x ^ x = x", "--emit-proofs", d]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let script = dir.path().join("J3.eqp");
    assert!(stdout(&o).contains("wrote"));
    let c = eqbase(&["check", script.to_str().unwrap(), "--axioms", "axioms/johnson-4.eqb"]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
}

#[test]
fn prove_refuted_goal_exits_one() {
    let o = eqbase(&["prove", "--axioms", "axioms/a9-j5.eqb", "--goal", "x'' = x", "--max-seconds", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("fails in this model"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(eqbase(&["prove"]).status.code(), Some(2));
    assert_eq!(eqbase(&["no-such-command"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.eqb");
    std::fs::write(&bad, "A: x ^ y ^ z = x\n").unwrap();
    let o = eqbase(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = eqbase(&["models", "--axioms", "axioms/missing.eqb", "--size", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn models_respects_limit() {
    let dir = tempfile::tempdir().unwrap();
    let ax = dir.path().join("free.eqb");
    std::fs::write(&ax, "T: x = x\n").unwrap();
    let o = eqbase(&["models", "--axioms", ax.to_str().unwrap(), "--size", "5", "--limit", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# 3 model(s)"));
}

#[test]
fn prover_out_of_time_exits_three() {
    let o = eqbase(&["prove", "--axioms", "axioms/a6-j5p.eqb", "--goal", "x ^ x' = y ^ y'", "--max-seconds", "0.05"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn parse_normalizes_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("u.eqb");
    std::fs::write(&f, "# header\nJ5':  x ≈ (x′ ∧ y)′∧(x′∧y′)′\n").unwrap();
    let o = eqbase(&["parse", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# header\nJ5': x = (x' ^ y)' ^ (x' ^ y')'\n");
}

#[test]
fn classify_lists_fourteen_classes() {
    let o = eqbase(&["classify-assoc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("14 classes"));
    let o = eqbase(&["classify-assoc", "--goal", "a ^ (b ^ c) = (c ^ b) ^ a", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["label"], "A10");
}

#[test]
fn verify_base_section_seven() {
    let o = eqbase(&["verify-base", "{A9, J4, J5}", "--size", "3", "--staged", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["soundness"]["pass"], true);
    assert_eq!(v["completeness"]["verdict"], "pass");
    assert_eq!(v["spectrum"], serde_json::json!([1, 1, 0]));
}

#[test]
fn replicate_one_section_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out/report.json");
    let o = eqbase(&["replicate", "--section", "7", "--size", "3", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["hard_failures"], serde_json::json!([]));
    assert!(v["corpus"]["pass"].as_bool().unwrap());
    let names: Vec<&str> = v["bases"].as_array().unwrap().iter().map(|b| b["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"{A9, J4, J5}"), "{names:?}");
    for b in v["bases"].as_array().unwrap() {
        assert!(b["provenance"]["citation"].is_string());
        assert!(b.get("elapsed").is_none());
    }
    // Same options, same bytes.
    let again = dir.path().join("again.json");
    eqbase(&["replicate", "--section", "7", "--size", "3", "--report", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&report).unwrap(), std::fs::read(&again).unwrap());
}
