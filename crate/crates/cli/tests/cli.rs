use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn oasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oasp")).args(args).output().expect("run oasp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn solve_finds_witness() {
    let o = oasp(&["solve", "--pred", "q", "--max-extra", "1", &path("pprog.oasp")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "SAT");
    let atoms = v["witness"]["atoms"].as_array().unwrap();
    assert!(atoms.iter().any(|a| a.as_str().unwrap().starts_with("q(")));
}

#[test]
fn guardcheck_reports_class() {
    let o = oasp(&["--format", "json", "guardcheck", &path("infinity.oasp")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["class"], "GgP");
    let o = oasp(&["guardcheck", &path("infinity.oasp")]);
    assert!(stdout(&o).starts_with("class: GgP\n"));
}

#[test]
fn empty_file_is_an_error() {
    let dir = std::env::temp_dir().join(format!("oasp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.oasp");
    std::fs::write(&empty, "").unwrap();
    let o = oasp(&["solve", "--pred", "q", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(oasp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(oasp(&["parse", &path("kripke.json")]).status.code(), Some(2));
    assert_eq!(oasp(&["solve", "--pred", "nope", &path("pprog.oasp")]).status.code(), Some(2));
}

#[test]
fn unsat_up_to_bound_exit_code() {
    let o = oasp(&["ctl", "sat", "--max-states", "2", "AG p & EF ~p"]);
    assert_eq!(o.status.code(), Some(10));
    let v = json(&o);
    assert_eq!(v["oracle"]["status"], "UNSAT_UP_TO_BOUND");
    assert_eq!(v["agree"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a proof"));
}

#[test]
fn budget_exhaustion_exit_code() {
    let o = oasp(&["--budget", "1", "solve", "--pred", "restore", "--max-extra", "3", &path("restore.oasp")]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn check_reports_depths() {
    let o = oasp(&["check", "--universe", "a,x", "--model", "s(x), r(a), q(x)", &path("pprog.oasp")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["answer_set"], true);
    assert_eq!(v["depths"]["q(x)"], 2);
    assert_eq!(v["depths"]["r(a)"], 1);
}

#[test]
fn ground_prints_instances() {
    let o = oasp(&["ground", "--universe", "a,b", &path("gcomp.oasp")]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn complete_round_trips_through_fpl_eval() {
    let o = oasp(&["complete", "--kind", "comp", &path("fixpoint.oasp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[LFP W(X1)."));
    let dir = std::env::temp_dir().join(format!("oasp-fpl-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("comp.fpl");
    std::fs::write(&f, &o.stdout).unwrap();
    let v = json(&oasp(&["--format", "json", "fpl-eval", "--domain", "2", f.to_str().unwrap()]));
    assert_eq!(v["models"].as_array().unwrap().len(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn transform_writes_mapping() {
    let dir = std::env::temp_dir().join(format!("oasp-map-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("map.json");
    let o = oasp(&["transform", "--op", "pprog", "--mapping", m.to_str().unwrap(), &path("pprog.oasp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("#p("));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(v["mapping"]["predicate"], "#p");
    assert_eq!(v["mapping"]["arity"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn datalog_query() {
    let o = oasp(&["datalog", "eval", "--input", &path("facts.dl"), "--query", "t", &path("reach.dl")]);
    assert_eq!(stdout(&o), "t(a, b)\nt(a, c)\nt(b, c)\n");
}

#[test]
fn ctl_model_check_and_sat() {
    let o = oasp(&["ctl", "mc", &path("kripke.json"), "s0", "EX p"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = oasp(&["ctl", "sat", "EX p & AF q & ~q"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["oracle"]["status"], "SAT");
    assert_eq!(v["program"]["status"], "SAT");
}

#[test]
fn outputs_are_deterministic() {
    let args = ["--format", "json", "answersets", "--extra", "1", &path("fixpoint2.oasp")];
    let a = oasp(&args);
    let b = oasp(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["answer_sets"].as_array().unwrap().len(), 2);
}

#[test]
fn selftest_runs_one_criterion() {
    let o = oasp(&["selftest", "--only", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS") && stdout(&o).contains("selftest: 0 failed"));
}
