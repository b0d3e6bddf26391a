use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn hoforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoforms"))
        .args(args)
        .env("HOFORMS_FIXTURES", fixtures())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn enumerate_counts() {
    let o = hoforms(&["enumerate", "--t", "2", "--k", "2", "--g", "1", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("# J t=2 k=2: 4 entries"), "{out}");
    assert!(out.contains("# I t=2 k=2: 3 entries"), "{out}");
    assert!(out.contains("excluded"), "{out}");

    let o = hoforms(&["enumerate", "--t", "1", "--k", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("# basis M_4"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&hoforms(&["enumerate"])), 2);
    assert_eq!(code(&hoforms(&["enumerate", "--t", "0"])), 2);
    assert_eq!(code(&hoforms(&["enumerate", "--t", "2", "--k", "3"])), 2);
    assert_eq!(code(&hoforms(&["no-such-command"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hoforms(&["verify-numeric", "--group", "missing.json", "--out", out]);
    assert_eq!(code(&o), 2);
}

#[test]
fn construct_single_entry() {
    let o = hoforms(&["construct", "--entry", "[-1,1];f1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("Z' ([-1,1]; f1) residual=zero"), "{out}");
    assert!(out.contains("  fe: "), "{out}");
}

#[test]
fn symbolic_pass_and_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hoforms(&["verify-symbolic", "--t", "3", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(dir.path().join("symbolic.json").exists());

    let o = hoforms(&[
        "verify-symbolic",
        "--t",
        "3",
        "--k",
        "2",
        "--inject-fault",
        "Z':[1,-1];f1",
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL Z' ([1,-1]; f1): residual in-a"), "{}", stdout(&o));
}

#[test]
fn numeric_on_level_11() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hoforms(&["verify-numeric", "--t", "2", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    for check in ["modular-symbols", "path-lemma", "s-function", "shuffle", "period-cocycle"] {
        assert!(stdout(&o).contains(check), "{check}");
    }

    // the identities as printed fail at order 2
    let o = hoforms(&["verify-numeric", "--t", "2", "--printed", "--out", out]);
    assert_eq!(code(&o), 1);

    let o = hoforms(&["verify-numeric", "--t", "1", "--tol", "1e-15", "--qn", "50", "--out", out]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("precision error"), "{}", stdout(&o));
}

#[test]
fn report_consolidates_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&hoforms(&["report", "--out", out])), 1);

    assert_eq!(code(&hoforms(&["verify-symbolic", "--t", "2", "--out", out])), 0);
    assert_eq!(code(&hoforms(&["verify-numeric", "--t", "2", "--out", out])), 0);
    let o = hoforms(&["report", "--t", "2", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let json = std::fs::read(dir.path().join("report.json")).unwrap();
    let txt = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(txt.contains("symbolic verification: PASS"), "{txt}");
    assert!(txt.contains("numeric verification"), "{txt}");

    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    let row = v["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["t"] == 2 && d["k"] == 2)
        .unwrap();
    assert_eq!(row["implemented"], 6);
    assert_eq!(row["paper_formula"], 14);

    let o = hoforms(&["report", "--t", "2", "--out", out]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(dir.path().join("report.json")).unwrap(), json);
    assert_eq!(std::fs::read_to_string(dir.path().join("report.txt")).unwrap(), txt);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"t_max": 2, "weights": [2], "genus": 1, "cusps": 2}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = hoforms(&["enumerate", "--config", c, "--t", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("k=2") && !out.contains("k=4"), "{out}");

    // the flag wins over the file
    let o = hoforms(&["enumerate", "--config", c, "--t", "2", "--k", "4"]);
    assert!(stdout(&o).contains("k=4"));

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(code(&hoforms(&["enumerate", "--config", c, "--t", "2"])), 2);
}
