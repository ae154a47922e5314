use std::io::Write;
use std::process::Command;

use setlog::engine::Engine;
use setlog_cli::batch::{self, parse_expectations, BatchOptions, Expectation};
use setlog_cli::invariants::{self, parse_manifest};
use setlog_cli::repl::{self, Session};
use setlog_cli::{ERROR_PREFIX, PROMPT};

const BB: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/examples/bb.slog");

fn transcript(input: &str) -> String {
    let mut session = Session::new(Engine::new());
    session.golden = true;
    let mut out = Vec::new();
    repl::run(&mut session, input.as_bytes(), &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

fn batch_output(goals: &[&str], expect: &[Expectation], opts: &BatchOptions) -> (String, Vec<batch::GoalReport>) {
    let goals: Vec<String> = goals.iter().map(|g| g.to_string()).collect();
    let mut out = Vec::new();
    let reports = batch::run(&mut Engine::new(), &goals, expect, opts, &mut out).unwrap();
    (String::from_utf8(out).unwrap(), reports)
}

#[test]
fn repl_prints_prompt_answer_and_no() {
    let out = transcript("X = {1}.\nn\n1 in {}.\nhalt.\n");
    assert!(out.starts_with(PROMPT), "{}", out);
    assert!(out.contains("X = {1}"), "{}", out);
    assert!(out.contains("Another solution? (y/n)"), "{}", out);
    assert!(out.contains("no\n"), "{}", out);
    assert_eq!(out.matches(PROMPT).count(), 3, "{}", out);
}

#[test]
fn repl_stops_at_halt() {
    let out = transcript("halt.\nX = 1.\n");
    assert_eq!(out.matches(PROMPT).count(), 1);
    assert!(!out.contains("X = 1"));
}

#[test]
fn repl_reads_queries_over_several_lines() {
    let out = transcript("X = % comment\n  {a,\n b}.\nn\n");
    assert!(out.contains("X = {a,b}"), "{}", out);
}

#[test]
fn repl_enumerates_on_request() {
    let out = transcript("X in {1,2}.\ny\ny\n");
    assert!(out.contains("X = 1") && out.contains("X = 2"), "{}", out);
    assert!(out.contains("no\n"), "{}", out);
}

#[test]
fn repl_reports_errors_and_continues() {
    let out = transcript("X = {1,2.\nX = 3.\nn\n");
    assert!(out.contains(ERROR_PREFIX), "{}", out);
    assert!(out.contains("X = 3"), "{}", out);
}

#[test]
fn repl_consults_programs() {
    let out = transcript(&format!("consult('{}').\nbirthdayBookInit(K,B).\nn\n", BB));
    assert!(!out.contains(ERROR_PREFIX), "{}", out);
    assert!(out.contains("K = {}") && out.contains("B = {}"), "{}", out);
}

#[test]
fn batch_checks_expectations() {
    let opts = BatchOptions::default();
    let (_, reports) = batch_output(
        &["X in {1,2}.", "1 in {}.", "X in {1,2}."],
        &[Expectation::Sat, Expectation::Unsat, Expectation::Answers(2)],
        &opts,
    );
    assert!(reports.iter().all(|r| r.met == Some(true)), "{:?}", reports);
    let (out, reports) = batch_output(&["1 in {}."], &[Expectation::Sat], &opts);
    assert_eq!(reports[0].met, Some(false));
    assert!(out.contains("expectation sat not met"), "{}", out);
}

#[test]
fn batch_limits_answers() {
    let (_, r) = batch_output(&["X in {1,2,3}."], &[], &BatchOptions::default());
    assert_eq!(r[0].answers, 1);
    let all = BatchOptions { all_solutions: true, ..Default::default() };
    assert_eq!(batch_output(&["X in {1,2,3}."], &[], &all).1[0].answers, 3);
    let two = BatchOptions { max_solutions: Some(2), ..Default::default() };
    assert_eq!(batch_output(&["X in {1,2,3}."], &[], &two).1[0].answers, 2);
}

#[test]
fn batch_rejects_mismatched_expectations() {
    let goals = vec!["X = 1.".to_string()];
    let err = batch::run(&mut Engine::new(), &goals, &[Expectation::Sat, Expectation::Sat], &BatchOptions::default(), &mut Vec::new());
    assert!(err.is_err());
}

#[test]
fn expectation_files_parse() {
    let e = parse_expectations("sat\n% skip\n\nunsat\nanswers=3 % three\n").unwrap();
    assert_eq!(e, vec![Expectation::Sat, Expectation::Unsat, Expectation::Answers(3)]);
    assert!(parse_expectations("maybe\n").is_err());
}

#[test]
fn batch_and_repl_agree_on_first_answers() {
    let goals = ["X = {1,2} & un(X,{3},Y).", "dom({[a,1],[b,2]},D).", "1 in {}.", "Y is 2+3."];
    for g in goals {
        let (b, _) = batch_output(&[g], &[], &BatchOptions { golden: true, ..Default::default() });
        let body = b.lines().nth(1).unwrap().to_string();
        let r = transcript(&format!("{}\nn\n", g));
        assert!(r.contains(&body), "batch {:?} not in repl {:?}", body, r);
    }
}

#[test]
fn manifest_obligations_are_discharged() {
    let mut e = Engine::new();
    e.consult_file(BB).unwrap();
    let m = parse_manifest(
        "m.toml",
        r#"
[[obligation]]
invariant = "birthdayBookInv"
operation = "addBirthday"

[[obligation]]
name = "init"
goal = "birthdayBookInit(K,B) & ndom(B,K)"

[[obligation]]
name = "bad"
goal = "X in {1}"
expect = "counterexample"
"#,
    )
    .unwrap();
    let mut out = Vec::new();
    let rows = invariants::check(&mut e, &m, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.expected), "{}", text);
    assert_eq!(rows[0].verdict, "THEOREM");
    assert!(text.contains("counterexample for bad"), "{}", text);
    assert!(parse_manifest("m.toml", "[[obligation]]\nbogus = 1\n").is_err());
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_setlog"))
}

#[test]
fn missing_file_fails_with_error_prefix() {
    let out = binary().args(["--consult", "/nonexistent/x.slog", "--goal", "X = 1."]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with(ERROR_PREFIX));
}

#[test]
fn binary_runs_goals_and_proofs() {
    let out = binary().args(["--goal", "X = 1.", "--expect", "sat"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("X = 1"));
    let out = binary().args(["--goal", "1 in {}.", "--expect", "sat"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = binary().args(["prove", "X in {} & true."]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("THEOREM"));
}

#[test]
fn binary_checks_a_manifest() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "[[obligation]]\ninvariant = \"birthdayBookInv\"\noperation = \"addBirthday\"").unwrap();
    let out = binary()
        .args(["check-invariants", BB, f.path().to_str().unwrap()])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{}", stdout);
    assert!(stdout.contains("addBirthday preserves birthdayBookInv"), "{}", stdout);
}
