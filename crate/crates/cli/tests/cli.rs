//! End-to-end runs of the `nfold` binary.

use nfold_cli::run::Report;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn nfold(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nfold"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn nfold");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

const IDENTITY: &str = r#"{"omega": [["1","0","0"],["0","1","0"],["0","0","1"]], "f": "z^3", "checks": ["preservation"]}"#;

#[test]
fn minimal_config_passes() {
    let out = nfold(&["-", "--format", "json"], IDENTITY);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r.checks.len(), 1);
    assert_eq!(r.checks[0].name, "preservation");
    assert_eq!(r.systems.len(), 1);
}

#[test]
fn reads_config_from_a_file() {
    let path = std::env::temp_dir().join(format!("nfold-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, IDENTITY).unwrap();
    let out = nfold(&[path.to_str().unwrap()], "");
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS preservation[0]"));
}

#[test]
fn json_is_deterministic_modulo_timing() {
    let cfg = r#"{"f": "formal", "checks": ["preservation", "abc-covariance", "adjoint", "embedding"], "seed": 9, "random-trials": 2}"#;
    let a = report(&nfold(&["-", "--format", "json"], cfg)).without_timing();
    let b = report(&nfold(&["-", "--format", "json"], cfg)).without_timing();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = report(&nfold(&["-", "--format", "json", "--seed", "10"], cfg)).without_timing();
    assert_ne!(a.systems, c.systems);
}

#[test]
fn check_flag_overrides_the_config_list() {
    let out = nfold(&["-", "--format", "json", "--check", "conditions", "--check", "transvectants"], IDENTITY);
    let names: Vec<String> = report(&out).checks.into_iter().map(|c| c.name).collect();
    assert_eq!(names, ["conditions", "transvectants"]);
}

#[test]
fn trials_flag_sets_the_instance_count() {
    let out = nfold(&["-", "--format", "json", "--trials", "4"], r#"{"f": "z^2", "checks": ["preservation"]}"#);
    assert_eq!(report(&out).checks.len(), 4);
}

#[test]
fn exit_codes() {
    let failing = nfold(&["-", "--max-jet-order", "2"], r#"{"f": "formal", "checks": ["preservation"]}"#);
    assert_eq!(failing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&failing.stdout).contains("FAIL preservation"));

    for bad in [
        r#"{"f": "z + 1"}"#,
        r#"{"omega": "symbolic", "extra": 1}"#,
        r#"{"checks": ["nope"]}"#,
        r#"{"lambda": [["1","2","3"],["2","4","6"],["0","0","1"]]}"#,
        "{",
    ] {
        let out = nfold(&["-"], bad);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(nfold(&["/nonexistent/config.json"], "").status.code(), Some(2));
    assert_eq!(nfold(&["-", "--format", "yaml"], IDENTITY).status.code(), Some(2));
}

#[test]
fn latex_renders_potentials() {
    let cfg = r#"{"omega": [["1","2","0"],["0","-1","3"],["2","0","1/2"]], "f": "z^3", "checks": ["preservation"]}"#;
    let tex = String::from_utf8(nfold(&["-", "--format", "latex"], cfg).stdout).unwrap();
    assert!(tex.contains("V^{+}(q)") && tex.contains("V^{-}(q)"));
    assert!(tex.contains("\\begin{pmatrix}"));
    // A ≡ 0 has no q-space form: the note replaces the potentials.
    let tex = String::from_utf8(nfold(&["-", "--format", "latex"], IDENTITY).stdout).unwrap();
    assert!(!tex.contains("V^{+}(q)") && tex.contains("A ≡ 0"));
}
