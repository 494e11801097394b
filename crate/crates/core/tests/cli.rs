use std::path::PathBuf;
use std::process::{Command, Output};

fn epsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsolve"))
        .args(args)
        .env_remove("EPSOLVE_CAP_ELEMS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/counterexample.json")
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("epsolve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_lift_writes_json_and_csv() {
    let (j1, j2, csv) = (scratch("a.json"), scratch("b.json"), scratch("a.csv"));
    for j in [&j1, &j2] {
        let o = epsolve(&["solve", "D = lift(D)", "--depth", "4", "--json", j.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let a = std::fs::read(&j1).unwrap();
    assert_eq!(a, std::fs::read(&j2).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let sizes: Vec<u64> = report["stages"].as_array().unwrap().iter().map(|s| s["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![1, 2, 3, 4, 5]);
    assert_eq!(report["stabilized_at"], serde_json::Value::Null);
    assert_eq!(report["defect_matrix"][4], serde_json::json!([4, 3, 2, 1, 0]));

    let csv = std::fs::read_to_string(&csv).unwrap();
    let defects: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(csv.lines().next(), Some("n,size,canonical_form,defect"));
    assert_eq!(defects, vec!["4", "3", "2", "1", "0"]);
}

#[test]
fn solve_table_and_stabilization() {
    let o = epsolve(&["solve", "D = fun(D, D)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("stabilized at 0"), "{text}");
    assert!(text.contains("PASS colimit_ld"));

    let o = epsolve(&["solve", "D = lift(unit + D)", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let sizes: Vec<String> = stdout(&o)
        .lines()
        .skip(2)
        .take(4)
        .map(|l| l.split_whitespace().nth(1).unwrap().to_owned())
        .collect();
    assert_eq!(sizes, ["1", "4", "7", "10"]);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let o = epsolve(&["solve", "D = lift("]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 10"));
    assert_eq!(epsolve(&["solve"]).status.code(), Some(2));
    assert_eq!(epsolve(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(epsolve(&["check-ld", "--cocone", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(epsolve(&["solve", "D = lift(D)", "--depth", "9"]).status.code(), Some(2));
}

#[test]
fn element_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_epsolve"))
        .args(["solve", "D = lift(D)", "--depth", "6"])
        .env("EPSOLVE_CAP_ELEMS", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage 5"));
    let o = epsolve(&["--cap-elems", "5", "solve", "D = lift(D)", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_ld_on_counterexample() {
    let out = scratch("ld.json");
    let o = epsolve(&["check-ld", "--cocone", &fixture(), "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict false"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["ld"]["defects"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["colimiting"], false);
}

#[test]
fn preserve_single_functor_and_family() {
    let o = epsolve(&["preserve", "--cocone", &fixture(), "--functor", "const(2)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = epsolve(&["preserve", "--cocone", &fixture(), "--functor", "lift(D)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = epsolve(&["preserve", "--cocone", &fixture(), "--depth", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 42);
}

#[test]
fn yoneda_demo_counts() {
    let o = epsolve(&["yoneda-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("|Nat(y 1, y 2)| = 2"));
    assert!(text.contains("|Nat(y 2, y 1)| = 1"));
    assert!(text.contains("fully faithful: true"));
}

#[test]
fn verify_theorems_small_run() {
    let out = scratch("suite.json");
    let o = epsolve(&["verify-theorems", "--seed", "7", "--max-size", "3", "--max-len", "4", "--chains", "8", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for id in ["P1", "P2", "P3", "P4", "P5", "P6", "P7"] {
        assert!(text.contains(&format!("PASS {id}:")), "{text}");
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 7);
}
