use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use cbd_core::io::report_from_json;
use cbd_core::rational::{int, ratio};

fn cbd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cbd"));
    cmd.env_remove("CBD_ATOM_CAP");
    cmd
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn run_with_stdin(cmd: &mut Command, input: &[u8]) -> Output {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn system_delta_line(o: &Output) -> String {
    stdout(o)
        .lines()
        .find(|l| l.starts_with("system delta:"))
        .expect("report has a system delta line")
        .to_string()
}

#[test]
fn liar_piped_into_analyze_is_contextual() {
    let liar = run(cbd().args(["liar", "4"]));
    assert_eq!(liar.status.code(), Some(0));
    let out = run_with_stdin(cbd().args(["analyze", "-", "--json"]), &liar.stdout);
    assert_eq!(out.status.code(), Some(3));
    let report = report_from_json(&stdout(&out)).unwrap();
    assert_eq!(report.cnt, int(1));
    assert!(report.consistent);
}

#[test]
fn deterministic_file_takes_fast_path() {
    let out = run(cbd().args(["analyze", &fixture("four_names.json")]));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("noncontextual (deterministic fast path)"));
    assert!(stdout(&out).contains("system delta:           4 "));
}

#[test]
fn json_report_round_trips_exact_values() {
    let out = run(cbd().args(["analyze", &fixture("consistent_pair.json"), "--json", "--witness"]));
    assert_eq!(out.status.code(), Some(3));
    let report = report_from_json(&stdout(&out)).unwrap();
    assert_eq!(report.system_delta, ratio(1, 2));
    assert_eq!(report.delta_sum, int(0));
    assert!(!report.witness.atoms.is_empty());
    let again = cbd_core::io::report_to_json(&report, true);
    assert_eq!(again.trim(), stdout(&out).trim());
}

#[test]
fn analyze_and_oracle_agree_on_small_systems() {
    let liar = tempfile::NamedTempFile::new().unwrap();
    let path = liar.path().display().to_string();
    assert!(run(cbd().args(["liar", "2", "-o", &path])).status.success());
    for file in [
        fixture("consistent_pair.json"),
        fixture("inconsistent_pair.json"),
        path.clone(),
    ] {
        let a = run(cbd().args(["analyze", &file]));
        let o = run(cbd().args(["oracle", &file]));
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(system_delta_line(&a), system_delta_line(&o), "{file}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(cbd().args(["analyze", "--bogus", "x"])).status.code(), Some(2));
    assert_eq!(run(cbd().args(["liar", "1"])).status.code(), Some(2));
    assert_eq!(run(&mut cbd()).status.code(), Some(2));
    assert_eq!(run(cbd().args(["delta", &fixture("consistent_pair.json")])).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one_and_name_the_context() {
    let out = run(cbd().args(["analyze", &fixture("bad_sum.json")]));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("only") && err.contains("99/100"), "{err}");
    assert_eq!(run(cbd().args(["analyze", "/nonexistent/system.json"])).status.code(), Some(1));
}

#[test]
fn atom_cap_from_flag_and_environment() {
    let file = fixture("consistent_pair.json");
    assert_eq!(run(cbd().args(["analyze", &file, "--atom-cap", "8"])).status.code(), Some(1));
    assert_eq!(run(cbd().args(["analyze", &file]).env("CBD_ATOM_CAP", "8")).status.code(), Some(1));
    assert_eq!(
        run(cbd().args(["analyze", &file, "--atom-cap", "16"]).env("CBD_ATOM_CAP", "8")).status.code(),
        Some(3)
    );
    assert_eq!(run(cbd().args(["analyze", &file]).env("CBD_ATOM_CAP", "many")).status.code(), Some(2));
}

#[test]
fn delta_lists_connection_pairs() {
    let out = run(cbd().args(["delta", &fixture("inconsistent_pair.json"), "--content", "q2"]));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("delta(c1, c2) = 1/4"), "{}", stdout(&out));
    let missing = run(cbd().args(["delta", &fixture("inconsistent_pair.json"), "--content", "zz"]));
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn cyclic_reports_structure_and_criterion() {
    let out = run(cbd().args(["cyclic", &fixture("consistent_pair.json")]));
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("rank 2"));
    assert!(text.contains("margin:                 1 "));
    let four = run(cbd().args(["cyclic", &fixture("four_names.json")]));
    assert_eq!(four.status.code(), Some(0));
    assert!(stdout(&four).contains("rank 4"));
}
