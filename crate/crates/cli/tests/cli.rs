use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn mfw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    mfw(&args)
}

#[test]
fn json_is_byte_identical_across_runs_and_jobs() {
    for name in ["a1.mfw", "a2.mfw"] {
        let base = run(name, &[]);
        assert!(base.status.success());
        for extra in [
            &[][..],
            &["--jobs", "1"],
            &["--jobs", "4"],
            &["--jobs", "2", "--format", "json"],
        ] {
            let again = run(name, extra);
            assert_eq!(again.stdout, base.stdout, "{name} {extra:?}");
        }
    }
}

#[test]
fn json_schema_fields() {
    let out = run("a1.mfw", &[]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 4);
    for r in records {
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["convention", "kind", "params", "query", "result", "version"]
        );
    }
    let theorem = &records[0];
    assert_eq!(theorem["kind"], "verify-theorem");
    assert_eq!(theorem["convention"]["delta"], "quotient");
    let row = theorem["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["shift"] == 0 && r["twist"] == 0)
        .unwrap();
    assert_eq!(row["lhs"], 2);
    assert_eq!(row["summands"], serde_json::json!([1, 1]));
    assert_eq!(records[2]["result"]["module_dim"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run("a1.mfw", &[]).status.code(), Some(0));
    assert_eq!(run("unbalanced.mfw", &[]).status.code(), Some(1));
    assert_eq!(run("invalid.mfw", &[]).status.code(), Some(2));
    let fail = run("ambient.mfw", &[]);
    assert_eq!(fail.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&fail.stderr).contains("FAIL"));
    assert_eq!(mfw(&["run"]).status.code(), Some(1));
    assert_eq!(mfw(&["run", "/nonexistent/x.mfw"]).status.code(), Some(1));
    assert_eq!(run("a1.mfw", &["--format", "yaml"]).status.code(), Some(1));
    assert_eq!(run("a1.mfw", &["--field", "GF:4"]).status.code(), Some(1));
}

#[test]
fn diagnostics_go_to_stderr() {
    let out = run("unbalanced.mfw", &[]);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2:45"), "{err}");
    let out = run("invalid.mfw", &[]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("psi"));
}

#[test]
fn check_validates_without_running() {
    let out = mfw(&["check", fixture("a2.mfw").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok: 5 queries\n");
    let out = mfw(&["check", fixture("invalid.mfw").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // A failing verify query is only detected by running it.
    let out = mfw(&["check", fixture("ambient.mfw").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn empty_program() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.mfw");
    std::fs::write(&path, "# nothing\n").unwrap();
    let out = mfw(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"[]\n");
}

#[test]
fn corpus_programs_run() {
    let out = mfw(&["corpus", "A2", "--c", "3", "--a", "1"]);
    assert!(out.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.mfw");
    std::fs::write(&path, &out.stdout).unwrap();
    let res = mfw(&["run", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(res.status.code(), Some(0));
    let csv = String::from_utf8(res.stdout).unwrap();
    assert!(csv.starts_with("index,kind,field,value\n"));
    assert!(csv.contains(",verify-theorem,result.pass,true\n"));
    assert!(!csv.contains(",verify-theorem,result.pass,false\n"));
    assert_eq!(
        mfw(&["corpus", "A3", "--c", "3", "--a", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        mfw(&["corpus", "D4", "--c", "2", "--a", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn field_override() {
    let q = run("a2.mfw", &[]);
    let p = run("a2.mfw", &["--field", "GF:32003"]);
    assert!(p.status.success());
    let dims = |o: &Output| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v[3]["result"].clone()
    };
    assert_eq!(dims(&q), dims(&p));
}

#[test]
fn text_format() {
    let out = run("chain.mfw", &["--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[1] query transpose (P, x^2*y + y^3);\n"));
    assert!(text.contains("  transpose = x^2 + x*y^3\n"));
}
