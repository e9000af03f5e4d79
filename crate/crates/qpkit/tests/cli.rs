use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn qpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_a2_prints_six_rows() {
    let o = qpkit(&["seed", "table-a2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("t2\t(-1,0)\t(0,-1)\tu1*u2+u1+1\tu2+1\t(-1,0)\t(0,-1)"));
}

#[test]
fn seed_walk_formats() {
    let m = data("a2.mat");
    let m = m.to_str().unwrap();
    let o = qpkit(&["seed", "walk", "--matrix", m, "--word", "2,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("t=2,1,2 l=1\ttrue\tg=(-1,0) F=u1*u2+u1+1 h=(-1,0)"));
    let o = qpkit(&["seed", "walk", "--matrix", m, "--word", "2,1", "--format", "json"]);
    let report = qpkit::harness::read_report(&o.stdout).unwrap();
    assert_eq!(report.campaign, "seed-walk");
    assert_eq!(report.count("seed"), 6);
}

#[test]
fn input_errors_exit_with_two() {
    let m = data("a2.mat");
    let m = m.to_str().unwrap();
    assert_eq!(qpkit(&["seed", "walk", "--matrix", m, "--word", "1,1"]).status.code(), Some(2));
    assert_eq!(qpkit(&["seed", "walk", "--matrix", m, "--word", "3"]).status.code(), Some(2));
    assert_eq!(qpkit(&["seed", "walk", "--matrix", "/nonexistent", "--word", "1"]).status.code(), Some(2));
    assert_eq!(qpkit(&["seed", "walk", "--matrix", m, "--word", "1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(qpkit(&["nothing"]).status.code(), Some(2));
}

#[test]
fn qp_mutate_three_cycle() {
    let q = data("cycle.quiver");
    let s = data("cycle.pot");
    let o = qpkit(&["qp", "mutate", "--quiver", q.to_str().unwrap(), "--potential", s.to_str().unwrap(), "--at", "2", "--truncation", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let quiver = qpkit::pathalg::Quiver::parse(text.split("# potential").next().unwrap()).unwrap();
    assert_eq!(quiver.to_matrix(), vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]);
    assert!(text.trim_end().ends_with("# potential"));
    let o = qpkit(&["qp", "mutate", "--quiver", q.to_str().unwrap(), "--potential", s.to_str().unwrap(), "--at", "4", "--truncation", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rep_build_matches_recurrence() {
    let m = data("cycle.mat");
    let s = data("cycle.pot");
    let o = qpkit(&["rep", "build", "--matrix", m.to_str().unwrap(), "--potential", s.to_str().unwrap(), "--word", "1,2", "--ell", "2", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# g [0, -1, 0]\n"));
    assert!(text.contains("dims 1 1 0"));
}

#[test]
fn verify_all_small_config() {
    let dir = std::env::temp_dir().join(format!("qpkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 7, "instances": 8, "pairs": 6, "walk_samples": 8, "walk_len": 2}"#).unwrap();
    let out = dir.join("report.json");
    let run = || qpkit(&["verify", "all", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(run().status.code(), Some(0));
    let first = std::fs::read(&out).unwrap();
    assert_eq!(run().status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), first);
    let report = qpkit::harness::read_report(&first).unwrap();
    assert_eq!(report.config.as_ref().unwrap().seed, 7);
    assert!(report.passed());
    std::fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(run().status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
