use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov-compose")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_phil_has_four_states() {
    let o = run(&["eval", "builtin:phil", "--name", "Phil"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["states"].as_array().unwrap().len(), 4);
    assert_eq!(j["transitions"].as_array().unwrap().len(), 8);
}

#[test]
fn eval_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fork.json");
    let o = run(&["eval", "builtin:fork", "--name", "Fork", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let printed = stdout(&run(&["eval", "builtin:fork", "--name", "Fork"]));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    // the serialized form loads back
    let again = run(&["eval", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), printed);
}

#[test]
fn missing_name_is_a_domain_failure() {
    let o = run(&["eval", "builtin:phil", "--name", "Nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown reference"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "builtin:dining", "--mode", "fuzzy"]).status.code(), Some(2));
}

#[test]
fn analyze_dining_series() {
    let o = run(&["analyze", "builtin:dining", "--name", "DF2", "--initial", "(1,1,1,1)", "--steps", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for line in ["reachable_states 8", "deadlocks (2,3,2,3)", "k=2 p=23/48", "k=3 p=341/576", "k=4 p=4415/6912"] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
}

#[test]
fn analyze_party_eating() {
    let o = run(&["analyze", "builtin:sofia", "--name", "Sofia3_2", "--steps", "5", "--target", "pred:eating"]);
    let text = stdout(&o);
    for line in ["k=1 p=0 ", "k=2 p=19/60", "k=3 p=98/225", "k=4 p=49133/108000", "k=5 p=1473023/3240000"] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
    let f = run(&["analyze", "builtin:sofia", "--steps", "100", "--target", "pred:eating", "--mode", "float"]);
    assert!(stdout(&f).trim_end().ends_with("k=100 p=0.3768058221"));
}

#[test]
fn analyze_rejects_open_automaton() {
    let o = run(&["analyze", "builtin:phil", "--name", "Phil", "--initial", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_is_deterministic() {
    let a = stdout(&run(&["export-dot", "builtin:phil", "--name", "Phil"]));
    let b = stdout(&run(&["export-dot", "builtin:phil", "--name", "Phil"]));
    assert_eq!(a, b);
    assert_eq!(a.matches(" -> ").count(), 8);
    assert_eq!(a.matches("[label=\"").count(), 4 + 8);
}

#[test]
fn reproduce_suites_pass() {
    for which in ["df2", "sofia", "lemmas"] {
        let o = run(&["reproduce", which]);
        let text = stdout(&o);
        assert!(o.status.success(), "{which}:\n{text}");
        assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
    }
    let seeded = run(&["reproduce", "lemmas", "--seed", "7"]);
    assert!(seeded.status.success());
}
