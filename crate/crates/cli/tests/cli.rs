use std::path::Path;
use std::process::{Command, Output};

use linewalker_cli::artifacts::{
    load_csv, load_json, FitHeader, FitRow, FractionRow, SnapshotRow, SuiteHeader, SuiteRow, Target, TaseRow,
    TraceFile,
};

const BIN: &str = env!("CARGO_BIN_EXE_linewalker");

fn linewalker(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn out_dir(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

#[test]
fn single_run_writes_round_tripping_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = linewalker(&["run", "--algo", "full", "--fn", "shekel", "--budget", "30", "--out", out_dir(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("solved="), "{stdout}");
    assert!(stdout.contains("best_f="), "{stdout}");

    let trace_path = dir.path().join("shekel_full_30.trace.json");
    let trace: TraceFile = load_json(&trace_path).unwrap();
    assert_eq!(trace.evaluations.len(), 30);
    assert_eq!(trace.target, Target::Function { name: "shekel".into() });
    assert!(trace.solved.is_some() && trace.tase.is_some());
    let mut again = serde_json::to_vec_pretty(&trace).unwrap();
    again.push(b'\n');
    assert_eq!(again, std::fs::read(&trace_path).unwrap());

    let (header, rows): (FitHeader, Vec<FitRow>) = load_csv(&dir.path().join("shekel_full_30.fit.csv")).unwrap();
    assert_eq!(header.config, trace.config);
    assert_eq!(rows.len(), 5000);
    assert_eq!(rows.iter().filter(|r| r.sampled).count(), 30);
    assert!(rows.iter().all(|r| r.f_true.is_some()));
}

#[test]
fn snapshots_hold_one_fit_per_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let o = linewalker(&[
        "run", "--algo", "pure", "--fn", "rastrigin", "--budget", "50", "--n", "1000", "--snapshots", "--out",
        out_dir(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace: TraceFile = load_json(&dir.path().join("rastrigin_pure_50.trace.json")).unwrap();
    let (_, rows): (FitHeader, Vec<SnapshotRow>) =
        load_csv(&dir.path().join("rastrigin_pure_50.snapshots.csv")).unwrap();
    assert_eq!(rows.len(), 1000 * trace.iterations);
    let first: Vec<usize> = rows.iter().step_by(1000).map(|r| r.iteration).collect();
    assert_eq!(first, (1..=trace.iterations).collect::<Vec<_>>());
}

#[test]
fn oracle_runs_receive_points_on_the_segment() {
    let dir = tempfile::tempdir().unwrap();
    let serve = format!("{BIN} serve --fn plateau");
    let o = linewalker(&[
        "run", "--oracle", &serve, "--dim", "2", "--from", "-2,-7", "--to", "4,5", "--budget", "20", "--out",
        out_dir(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace: TraceFile = load_json(&dir.path().join("oracle_full_20.trace.json")).unwrap();
    let first = &trace.evaluations[0];
    assert_eq!(first.x, vec![-2.0, -7.0]);
    assert_eq!(first.f, 9.0);
    assert_eq!(trace.evaluations.len(), 20);
    assert_eq!(trace.solved, None);
}

#[cfg(unix)]
#[test]
fn shell_oracle_finds_the_bottom_of_a_parabola() {
    let dir = tempfile::tempdir().unwrap();
    let sim = r#"while read -r x; do awk -v x="$x" 'BEGIN { printf "%.17g\n", (x - 0.3) * (x - 0.3) }'; done"#;
    let o = linewalker(&[
        "run", "--oracle", sim, "--from", "-1", "--to", "2", "--n", "301", "--budget", "15", "--out",
        out_dir(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace: TraceFile = load_json(&dir.path().join("oracle_full_15.trace.json")).unwrap();
    let best = trace.best.unwrap();
    assert!((best.x[0] - 0.3).abs() <= 0.05, "{:?}", best.x);
    assert!(best.f < 2.5e-3);
}

#[cfg(unix)]
#[test]
fn failing_oracle_keeps_the_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let sim = "read x; echo 1.5; read x; echo 2.5; read x; echo nan";
    let o = linewalker(&["run", "--oracle", sim, "--from", "0", "--to", "1", "--budget", "20", "--out", out_dir(dir.path())]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nan"));
    let partial: TraceFile = load_json(&dir.path().join("oracle_full_20.partial.json")).unwrap();
    let values: Vec<f64> = partial.evaluations.iter().map(|e| e.f).collect();
    assert_eq!(values, vec![1.5, 2.5]);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&linewalker(&["run", "--bogus"])), 1);
    assert_eq!(code(&linewalker(&["run", "--fn", "no-such-function"])), 1);
    assert_eq!(code(&linewalker(&["run", "--oracle", "cat", "--from", "0,0", "--to", "1,1", "--dim", "3"])), 1);
    assert_eq!(code(&linewalker(&["--help"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let o = linewalker(&["run", "--fn", "shekel", "--n", "40", "--budget", "50", "--out", out_dir(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn suite_subset_tables_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = linewalker(&["suite", "--only", "shekel,rastrigin", "--budgets", "20,50", "--out", out_dir(dir.path())]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (header, rows): (SuiteHeader, Vec<SuiteRow>) = load_csv(&a.path().join("results.csv")).unwrap();
    assert_eq!(header.functions, vec!["shekel", "rastrigin"]);
    assert_eq!(rows.len(), 2 * 3 * 2);
    assert!(rows.iter().all(|r| r.error.is_none() && r.tase.is_some()));
    let (_, fractions): (SuiteHeader, Vec<FractionRow>) = load_csv(&a.path().join("fraction_solved.csv")).unwrap();
    assert_eq!(fractions.len(), 6);
    let (_, tases): (SuiteHeader, Vec<TaseRow>) = load_csv(&a.path().join("mean_tase.csv")).unwrap();
    assert!(tases.iter().all(|t| t.count == 2));

    let mut names: Vec<_> = std::fs::read_dir(a.path().join("traces"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 12);
    for name in &names {
        let x = std::fs::read(a.path().join("traces").join(name)).unwrap();
        let y = std::fs::read(b.path().join("traces").join(name)).unwrap();
        assert_eq!(x, y, "{name:?}");
    }
    for table in ["results.csv", "fraction_solved.csv", "mean_tase.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(table)).unwrap(),
            std::fs::read(b.path().join(table)).unwrap()
        );
    }
}

#[test]
fn seedless_double_run_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = linewalker(&["suite", "--only", "plateau", "--budgets", "30", "--seedless", "--out", out_dir(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn list_names_every_function() {
    let o = linewalker(&["list"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 21);
    assert!(text.contains("easom_schaffer2A"));
}
