use std::path::Path;
use std::process::{Command, Output};

fn finvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finvar"))
        .args(args)
        .env_remove("FINVAR_BUDGET")
        .output()
        .expect("spawn finvar")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_star_square_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let s = dir.path().join("s.json");
    let c = dir.path().join("c.json");
    assert!(finvar(&["build-action", "--symmetric", "3", "-o", p(&a)]).status.success());
    assert!(finvar(&["star", p(&a), "-o", p(&s)]).status.success());
    assert!(finvar(&["square", p(&s), "-o", p(&c)]).status.success());
    let orig: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let back: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(orig["sorts"], back["sorts"]);
}

#[test]
fn check_id_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let s = dir.path().join("s.json");
    assert!(finvar(&["build-action", "--symmetric", "3", "-o", p(&a)]).status.success());
    assert!(finvar(&["star", p(&a), "-o", p(&s)]).status.success());
    let holds = finvar(&["check-id", p(&s), "d(x0, x0) =~ x0"]);
    assert_eq!(holds.status.code(), Some(0), "{}", stdout(&holds));
    let fails = finvar(&["check-id", p(&s), "d(x0, x1) =~ x0"]);
    assert_eq!(fails.status.code(), Some(1), "{}", stdout(&fails));
    let bad = finvar(&["check-id", p(&s), "d(x0, =~"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn coset_enum_reports_order() {
    let o = finvar(&["coset-enum", "gens: a b; rels: a^2, b^2, (a*b)^3;"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("order 6"), "{}", stdout(&o));
}

#[test]
fn budget_overflow_is_an_error() {
    let o = finvar(&["--budget", "cosets=5", "coset-enum", "gens: a b; rels: a^2, b^2, (a*b)^5;"]);
    assert_eq!(o.status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_finvar"))
        .args(["coset-enum", "gens: a b; rels: a^2, b^2, (a*b)^5;"])
        .env("FINVAR_BUDGET", "cosets=5")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn verify_paper_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = finvar(&["verify-paper", "--scenario", "s3-sizes", "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", stdout(&o));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("s3-sizes"));
    assert!(report.contains("summary: 1 passed, 0 failed, 0 skipped"), "{report}");
}

#[test]
fn verify_paper_lists_and_rejects() {
    let o = finvar(&["verify-paper", "--list"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("delta-psi"));
    let bad = finvar(&["verify-paper", "--scenario", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn automatic_growth_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = finvar(&[
        "growth", "--flavor", "automatic", "--ell", "4", "--no-bounded", "--full-rows", "0", "--out",
        p(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("growth.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,d,ell,size,c,generated,full,structural,bounded,level"));
    assert_eq!(lines.next(), Some("2,6,4,328,1,true,-,pass,-,structural"));
}
