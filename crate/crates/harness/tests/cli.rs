use std::path::Path;
use std::process::{Command, Output};

fn verify(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .arg("--config")
        .arg(&cfg)
        .args(args)
        .env_remove("VERIFY_WORKERS")
        .output()
        .unwrap()
}

fn fixtures() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/weil_fixtures.txt").display().to_string()
}

#[test]
fn empty_suite_list_is_a_pass() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let out = verify(dir.path(), "seed = 3\n", &["--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["suites"], serde_json::json!([]));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in ["colour = red\n", "prime = 4\n", "suites = nope\n", "seed\n"] {
        assert_eq!(verify(dir.path(), cfg, &[]).status.code(), Some(2), "{cfg}");
    }
    assert_eq!(verify(dir.path(), "", &["--suite", "nope"]).status.code(), Some(2));
    let missing = Command::new(env!("CARGO_BIN_EXE_verify")).args(["--config", "/nonexistent/cfg"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let cfg = dir.path().join("run.cfg");
    let zero = Command::new(env!("CARGO_BIN_EXE_verify"))
        .arg("--config")
        .arg(&cfg)
        .env("VERIFY_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn command_line_suites_replace_the_config_list() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let out = verify(dir.path(), "suites = weil\n", &["--suite", "isomorphism", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "isomorphism");
    assert!(report["timing"]["isomorphism"].is_number());
}

#[test]
fn broken_fixtures_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let fx = dir.path().join("fx.txt");
    std::fs::write(&fx, "torsion5.n 5\n").unwrap();
    let out = verify(dir.path(), &format!("weil_fixture_path = {}\n", fx.display()), &["--suite", "weil"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL weil / fixtures"));
}

#[test]
fn missing_fixtures_are_searched_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = verify(dir.path(), "weil_fixture_path = fx.txt\nworkers = 2\n", &["--suite", "weil"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let written = std::fs::read_to_string(dir.path().join("fx.txt")).unwrap();
    assert_eq!(written, std::fs::read_to_string(fixtures()).unwrap());
}
