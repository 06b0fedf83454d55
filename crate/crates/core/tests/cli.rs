use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bellrelax::{chsh_bound, HiddenVariableModel, RelaxationProfile};

fn bellrelax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellrelax")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bound_reduces_to_chsh() {
    let o = bellrelax(&["bound", "--i2", "0", "--s12", "0", "--m2", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2.000000 SubGap\n");
}

#[test]
fn bound_matches_library_display() {
    let b = chsh_bound(0.123, 0.456, 0.789).unwrap();
    let o = bellrelax(&["bound", "--i2", "0.123", "--s12", "0.456", "--m2", "0.789"]);
    assert_eq!(stdout(&o), format!("{:.6} {}\n", b.value, b.regime));
}

#[test]
fn singlet_infeasible_below_gap() {
    let o = bellrelax(&["feasible", "--i2", "0.333", "--s12", "0.333", "--m2", "0", "--v", "0.828"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn out_of_range_flag_exits_two() {
    let o = bellrelax(&["bound", "--i2", "0.9", "--s12", "0", "--m2", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("i2"));
    assert_eq!(bellrelax(&["bound"]).status.code(), Some(2));
    assert_eq!(bellrelax(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn saturate_metrics_bound_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("model.json");
    let o = bellrelax(&[
        "saturate", "--kind", "combined", "--i2", "0.2", "--s12", "0.6", "--m2", "0.4", "--out",
        path_str(&model_path),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let model = HiddenVariableModel::from_json(&fs::read_to_string(&model_path).unwrap()).unwrap();
    let o = bellrelax(&["metrics", "--model", path_str(&model_path), "--json"]);
    let p: RelaxationProfile = serde_json::from_str(&stdout(&o)).unwrap();
    let bound = chsh_bound(p.i2, p.s12, p.m2).unwrap();
    assert!((bound.value - model.chsh()).abs() < 1e-9);

    let o = bellrelax(&["metrics", "--model", path_str(&model_path)]);
    let text = stdout(&o);
    assert!(text.contains("m2  0.400000"), "{text}");
    assert!(text.contains("s21 0.000000"));
}

#[test]
fn saturate_kinds_need_their_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = bellrelax(&["saturate", "--kind", "table1", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = bellrelax(&["saturate", "--kind", "table1", "--p", "0.5", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "chsh 3.000000\n");
    let o = bellrelax(&["saturate", "--kind", "mi", "--i2", "0.2", "--s12", "0.1", "--out", path_str(&out)]);
    assert_eq!(stdout(&o), "chsh 2.400000\n");
}

#[test]
fn malformed_model_exits_four_and_names_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let d = r#"{"m":0.2,"n":0.3,"c":0.4}"#;
    fs::write(
        &bad,
        format!(
            r#"{{"lambdas":["a"],"weights":{{"xy":[1.0],"xy'":[1.0],"x'y":[1.0],"x'y'":[1.0]}},
               "decompositions":{{"xy":[{d}],"xy'":[{d}],"x'y":[{d}],"x'y'":[{d}]}}}}"#
        ),
    )
    .unwrap();
    let o = bellrelax(&["metrics", "--model", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("min{m, n}"));

    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(bellrelax(&["simulate", "--model", path_str(&bad), "--runs", "10"]).status.code(), Some(4));
}

#[test]
fn oracle_writes_argmax_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("argmax.json");
    let o = bellrelax(&["oracle", "--i2", "0.2", "--s12", "0.6", "--m2", "0.4", "--resolution", "16", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("best_chsh   3.360000\n"), "{text}");
    assert!(text.contains("sound       true"));
    let model = HiddenVariableModel::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((model.chsh() - 3.36).abs() < 1e-9);
}

#[test]
fn tradeoff_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = bellrelax(&["tradeoff", "--figure", "3", "--resolution", "100", "--out", path_str(path)]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("m2,v\n"));
    let near_singlet = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .min_by(|x, y| (x[0] - 0.828).abs().total_cmp(&(y[0] - 0.828).abs()))
        .unwrap();
    assert!((near_singlet[1] - 0.828).abs() < 0.02);
}

#[test]
fn simulate_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("t1.json");
    bellrelax(&["saturate", "--kind", "table1", "--p", "0.5", "--out", path_str(&model)]);
    let run = |seed: &str| stdout(&bellrelax(&["simulate", "--model", path_str(&model), "--runs", "20000", "--seed", seed]));
    assert_eq!(run("5"), run("5"));
    let estimate: f64 = run("5").trim().parse().unwrap();
    assert!((estimate - 3.0).abs() < 0.1);
}

#[test]
fn unwritable_output_exits_one() {
    let o = bellrelax(&["tradeoff", "--figure", "1", "--resolution", "4", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}
