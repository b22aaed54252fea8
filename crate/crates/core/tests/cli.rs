//! End-to-end runs of the binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylplane")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let head = lines.next().unwrap().split(',').map(str::to_string).collect();
    let data = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (head, data)
}

#[test]
fn f0_grid_has_all_rows_and_error_columns() {
    let o = run(&["f0", "--model", "dd-te", "--omega-l", "1e-3:1e3:61"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# cylplane "));
    assert!(text.contains("# omega_l = 1e-3:1e3:61"));
    let (head, data) = rows(&text);
    assert_eq!(head, ["omega_l", "omega_pl", "f0", "f0_err"]);
    assert_eq!(data.len(), 61);
    assert!(data.windows(2).all(|w| w[1][2] > w[0][2]));
}

#[test]
fn weak_coupling_tm_f1() {
    let o = run(&["f1", "--model", "dd-tm", "--omega-l", "1e-4"]);
    assert!(o.status.success());
    let v = rows(&stdout(&o)).1[0][2];
    assert!((v / 0.0092 - 1.0).abs() < 0.05, "{v}");
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["f0", "--model", "ed-tm", "--omega-l", "0.01:100:9", "--lambda", "10"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    let strip = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("# threads")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(stdout(&a), stdout(&run(&[&args[..], &["--threads", "1"]].concat())));
}

#[test]
fn every_value_has_an_error_column() {
    let o = run(&["energy", "--model", "ed-te", "--radius", "10", "--gap", "1", "--omega", "2", "--plasma-freq", "3"]);
    assert!(o.status.success());
    let (head, _) = rows(&stdout(&o));
    for v in ["f0", "f1", "e_pfa", "e_total"] {
        assert!(head.iter().any(|h| h == &format!("{v}_err")), "{v}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["f0", "--model", "nope", "--omega-l", "1"]).status.code(), Some(2));
    assert_eq!(run(&["energy", "--omega-l", "1"]).status.code(), Some(2));
    assert_eq!(run(&["f0", "--omega-l", "5:1"]).status.code(), Some(2));
    // a fixed truncation far too small for the geometry cannot converge
    let o = run(&["oracle", "--radius", "20", "--gap", "1", "--omega", "1", "--max-m", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert_eq!(run(&["verify", "--suite", "specfun"]).status.code(), Some(0));
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("cylplane-{}.csv", std::process::id()));
    let o = run(&["f0", "--omega-l", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(rows(&text).1.len(), 1);
}
