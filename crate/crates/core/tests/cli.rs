use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_godpuzzle")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("godpuzzle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn export(name: &str) -> PathBuf {
    let o = run(&["export", name]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    scratch(&format!("{name}.strategy"), &stdout(&o))
}

#[test]
fn solvable_reports_criterion_and_search() {
    let o = run(&["solvable", "3", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "(3,1,1): yes\ncriterion: 1 random < 2 non-random\nsearch: yes (agrees)\n"
    );
    let o = run(&["solvable", "4", "2", "1"]);
    assert_eq!(o.status.code(), Some(0), "a correct 'no' is still a successful check");
    assert!(stdout(&o).starts_with("(4,2,1): no\ncriterion: 2 random is not < 2 non-random\n"));
}

#[test]
fn template_check_passes() {
    let o = run(&["template-check"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9);
    assert_eq!(text.lines().last(), Some("8/8 pass"));
}

#[test]
fn exported_builtins_verify() {
    let o = run(&["verify", export("five_gods").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("correct = yes\nworst case = 5\nexpected = 83/20 = 4.15\n"), "{text}");
    assert!(text.contains("  RRTTT  {1/4:4, 1/4:5, 1/2:5}\n"), "{text}");

    let o = run(&["verify", "--mode", "reliable", export("three_nonrandom").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("expected = 8/3 ≈ 2.67"));
}

#[test]
fn wrong_strategy_fails_verification() {
    let text = "format godpuzzle-strategy/1\nspec 3 1 1\nroot leaf declare=TFR\n";
    let o = run(&["verify", scratch("wrong.strategy", text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("correct = no"));
}

#[test]
fn malformed_file_is_a_usage_error() {
    let text = "format godpuzzle-strategy/1\nspec 3 1 1\nroot node god=1 question=\"g1=\"\n";
    let o = run(&["verify", scratch("broken.strategy", text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = run(&["verify", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["export", "no_such_strategy"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_emits_verified_strategies() {
    for args in [
        vec!["solve", "3", "1", "1", "--optimal", "worst"],
        vec!["solve", "4", "1", "2"],
        vec!["solve", "3", "1", "1", "--optimal", "expected"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let path = scratch("solved.strategy", &stdout(&o));
        let v = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{args:?}");
    }
    let o = run(&["solve", "3", "1", "1", "--optimal", "worst"]);
    assert!(stdout(&o).contains("# verified worst case = 3\n"));
    let o = run(&["solve", "4", "2", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_is_seeded() {
    let path = export("three_bottom_up");
    let args = ["simulate", path.to_str().unwrap(), "--episodes", "500", "--seed", "3"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(stdout(&first).contains("success = 500/500 (100.00%)"));
    assert!(stdout(&first).contains("max questions = 3"));
    assert_eq!(stdout(&run(&args)), stdout(&first));
}
