use std::process::{Command, Output};

use serde_json::Value;
use simroots::cli::{
    cmd_check, cmd_compare, cmd_solve, exit, Initial, JobSpec, MethodChoice, OutputFormat,
};
use simroots::oracle::run_checks;
use simroots::{solve, Method, MonicPolynomial, RootVector, SolverConfig, C64};

fn simroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simroots"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const QUARTIC: &str = "6 0 -5 0";

#[test]
fn solve_trace_prints_first_newton_row() {
    let o = simroots(&[
        "solve",
        "--coeffs",
        QUARTIC,
        "--start",
        "1.2 1.8 -1.2 -1.8",
        "--method",
        "wdk",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let text = stdout(&o);
    let first = text
        .lines()
        .find(|l| l.trim_start().starts_with("1 "))
        .unwrap();
    assert!(first.contains("1.402222222222222E+000"), "{first}");
    assert!(first.contains("1.754074074074074E+000"), "{first}");
}

#[test]
fn solve_prints_sorted_roots() {
    let o = simroots(&[
        "solve",
        "--coeffs",
        QUARTIC,
        "--start",
        "1.2 1.8 -1.2 -1.8",
        "--method",
        "chebyshev",
    ]);
    let text = stdout(&o);
    let roots: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "roots:")
        .skip(1)
        .collect();
    assert_eq!(roots.len(), 4);
    assert!(roots[0].trim_start().starts_with("-1.732050807568877"));
    assert!(roots[3].trim_start().starts_with("1.732050807568877"));
}

#[test]
fn degree_one_input() {
    let o = simroots(&["solve", "--coeffs=-7", "--method", "wdk"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(stdout(&o).contains("7.000000000000000E+000 +0.000000000000000E+000i"));
}

#[test]
fn exit_codes() {
    let collision = simroots(&["solve", "--coeffs", "1 2 3", "--start", "1 1 2"]);
    assert_eq!(collision.status.code(), Some(exit::COLLISION));
    let max_iter = simroots(&["solve", "--coeffs", QUARTIC, "--max-iter", "3"]);
    assert_eq!(max_iter.status.code(), Some(exit::MAX_ITER));
    let garbage = simroots(&["solve", "--coeffs", "1 x"]);
    assert_eq!(garbage.status.code(), Some(exit::USAGE));
    let wrong_start = simroots(&["solve", "--coeffs", QUARTIC, "--start", "1 2"]);
    assert_eq!(wrong_start.status.code(), Some(exit::USAGE));
    let bad_tol = simroots(&["solve", "--coeffs", QUARTIC, "--tol", "-1"]);
    assert_eq!(bad_tol.status.code(), Some(exit::USAGE));
    let bad_check = simroots(&["check", "--degree", "0"]);
    assert_eq!(bad_check.status.code(), Some(exit::USAGE));
}

#[test]
fn coefficient_file_with_comments() {
    let dir = std::env::temp_dir().join(format!("simroots-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quartic.txt");
    std::fs::write(&path, "# t^4 - 5t^2 + 6, a0 first\n6\n0\n-5  # a2\n0\n").unwrap();
    let from_file = simroots(&[
        "solve",
        "--coeffs-file",
        path.to_str().unwrap(),
        "--format",
        "jsonl",
    ]);
    let inline = simroots(&["solve", "--coeffs", QUARTIC, "--format", "jsonl"]);
    assert_eq!(from_file.status.code(), Some(exit::OK));
    assert_eq!(stdout(&from_file), stdout(&inline));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn jsonl_round_trips_roots() {
    let o = simroots(&[
        "solve",
        "--coeffs",
        "6+1i 0 -5 2-0.5i",
        "--circle-seed",
        "3",
        "--method",
        "wdk",
        "--format",
        "jsonl",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let records: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let summary = records.last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["status"], "converged");
    assert_eq!(records[0]["m"], 1);
    assert_eq!(
        records.len() as u64 - 1,
        summary["iterations"].as_u64().unwrap()
    );

    let printed: Vec<C64> = summary["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| C64::new(z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
        .collect();
    let p = MonicPolynomial::new(vec![
        C64::new(6.0, 1.0),
        C64::new(0.0, 0.0),
        C64::new(-5.0, 0.0),
        C64::new(2.0, -0.5),
    ])
    .unwrap();
    let direct = solve(
        &p,
        &simroots::default_initial_guess(&p, 3),
        &SolverConfig::new(Method::WeierstrassKerner),
    )
    .unwrap();
    assert_eq!(printed, simroots::cli::canonical_order(&direct.roots));
}

#[test]
fn identical_jobs_give_identical_bytes() {
    let args = [
        "compare",
        "--coeffs",
        "1 5 10 10 5",
        "--start",
        "1 2 3 4 5",
        "--format",
        "jsonl",
    ];
    let (a, b) = (simroots(&args), simroots(&args));
    assert_eq!(a.stdout, b.stdout);
    let mut spec = JobSpec::new(vec![C64::new(-2.0, 0.0)]);
    spec.initial = Initial::Circle(11);
    spec.output_format = OutputFormat::JsonLines;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    cmd_solve(&spec, &mut x).unwrap();
    cmd_solve(&spec, &mut y).unwrap();
    assert_eq!(x, y);
}

#[test]
fn compare_reports_both_methods() {
    let mut spec = JobSpec::new(
        QUARTIC
            .split(' ')
            .map(|s| C64::new(s.parse().unwrap(), 0.0))
            .collect(),
    );
    spec.initial = Initial::Explicit(vec![
        C64::new(1.0, 1.0),
        C64::new(20.0, 30.0),
        C64::new(30.0, 50.0),
        C64::new(-40.0, 30.0),
    ]);
    spec.method = MethodChoice::Wdk;
    spec.output_format = OutputFormat::JsonLines;
    let mut out = Vec::new();
    assert_eq!(cmd_compare(&spec, &mut out).unwrap(), exit::OK);
    let summaries: Vec<Value> = String::from_utf8(out)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["kind"] == "summary")
        .collect();
    assert_eq!(summaries.len(), 2);
    assert_eq!(summaries[0]["method"], "wdk");
    assert_eq!(summaries[1]["method"], "chebyshev");
    let newton = summaries[0]["iterations"].as_i64().unwrap();
    let chebyshev = summaries[1]["iterations"].as_i64().unwrap();
    assert!(
        (newton - 20).abs() <= 2 && (chebyshev - 16).abs() <= 2,
        "{newton} {chebyshev}"
    );
    assert!(summaries[0]["order"].as_f64().unwrap() > 1.9);
}

#[test]
fn compare_flags_linear_convergence_at_multiple_root() {
    let o = simroots(&["compare", "--coeffs", "1 5 10 10 5", "--start", "1 2 3 4 5"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(stdout(&o).contains("linear convergence"));
    let o = simroots(&[
        "compare",
        "--coeffs",
        QUARTIC,
        "--start",
        "1.2 1.8 -1.2 -1.8",
    ]);
    assert!(!stdout(&o).contains("linear convergence"));
}

#[test]
fn check_passes_on_default_degree() {
    let mut out = Vec::new();
    assert_eq!(
        cmd_check(6, 100, 0, OutputFormat::Text, &mut out).unwrap(),
        exit::OK
    );
    let report = run_checks(6..=6, 100, 0).unwrap();
    for suite in &report.suites {
        assert!(
            suite.max_deviation < 1e-9,
            "{}: {}",
            suite.name,
            suite.max_deviation
        );
    }
}

#[test]
fn check_is_deterministic() {
    let run = || {
        let mut out = Vec::new();
        cmd_check(8, 500, 42, OutputFormat::JsonLines, &mut out).unwrap();
        out
    };
    assert_eq!(run(), run());
    let o = simroots(&[
        "check", "--degree", "3", "--trials", "10", "--seed", "7", "--format", "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert!(stdout(&o)
        .lines()
        .all(|l| serde_json::from_str::<Value>(l).is_ok()));
}

#[test]
fn explicit_start_is_used_verbatim() {
    let mut spec = JobSpec::new(vec![
        C64::new(6.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-5.0, 0.0),
        C64::new(0.0, 0.0),
    ]);
    spec.initial = Initial::Explicit(RootVector::from_real(&[1.2, 1.8, -1.2, -1.8]).into_inner());
    let (_, x0) = spec.prepare().unwrap();
    assert_eq!(&x0[..], &RootVector::from_real(&[1.2, 1.8, -1.2, -1.8])[..]);
}
