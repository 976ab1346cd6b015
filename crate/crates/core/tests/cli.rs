use std::process::Command;

fn spa(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_spa")).args(args).output().unwrap()
}

#[test]
fn generate_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.spa");
    let out = spa(&["generate", "-n", "2000", "--seed", "3", "-o", graph.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = dir.path().join("report");
    let out = spa(&["analyze", graph.to_str().unwrap(), "-o", report.to_str().unwrap(), "--split", "log:1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(report.join("trajectory.csv").exists());
}

#[test]
fn exit_codes() {
    assert_eq!(spa(&["generate", "--bogus"]).status.code(), Some(1));
    assert_eq!(spa(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.spa");
    let bad_p = spa(&["generate", "-n", "10", "--p", "1.5", "-o", g.to_str().unwrap()]);
    assert_eq!(bad_p.status.code(), Some(2));
    let missing = spa(&["analyze", "/nonexistent/graph.spa", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn selftest_succeeds() {
    let out = spa(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).lines().all(|l| l.starts_with("PASS")));
}
