use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use parrondo_cli::{rerun_config_line, run_command, CliError};

fn parrondo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parrondo"))
        .args(args)
        .env_remove("PARRONDO_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = parrondo(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert!(parrondo(&["--help"]).status.success());
    assert!(parrondo(&["--version"]).status.success());
    assert!(parrondo(&["simulate", "--help"]).status.success());
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["simulate", "--policy", "periodic"], "--pattern"),
        (&["simulate", "--policy", "random", "--gamma", "1.5"], "--gamma"),
        (&["simulate", "--policy", "chaotic", "--map", "cubic"], "--map"),
        (&["simulate", "--policy", "periodic", "--pattern", "ABC"], "--pattern"),
        (&["simulate", "--preset", "nope"], "--preset"),
        (&["simulate"], "--policy"),
        (&["sweep-ab", "--map", "tent"], "--map"),
        (&["exact-rate", "--preset", "headline"], "exact-rate"),
        (&["detect-period", "--policy", "random"], "random"),
        (&["simulate", "--policy", "allA", "--threads", "0"], "--threads"),
        (&["frobnicate"], "frobnicate"),
    ];
    for (args, needle) in cases {
        let out = parrondo(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn diverged_source_is_a_runtime_error() {
    let out = parrondo(&["simulate", "--policy", "chaotic", "--map", "logistic", "--a", "5", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
}

#[test]
fn library_entry_point_maps_errors() {
    let err = run_command(["parrondo", "simulate", "--policy", "periodic"]).unwrap_err();
    assert!(matches!(err, CliError::Usage(_)));
    assert_eq!(err.exit_code(), 2);
    assert!(run_command(["parrondo", "--help"]).is_ok());
}

fn round_trip(args: &[&str], dir: &Path) {
    let first = dir.join("first.csv");
    let mut argv = vec!["parrondo"];
    argv.extend_from_slice(args);
    argv.extend(["--out", first.to_str().unwrap()]);
    run_command(argv).unwrap();
    let text = fs::read_to_string(&first).unwrap();
    let config = text.lines().next().unwrap();
    assert!(config.starts_with("# config: "));
    let second = dir.join("second.csv");
    rerun_config_line(config, &second).unwrap();
    assert_eq!(text, fs::read_to_string(&second).unwrap(), "{args:?}");
}

#[test]
fn config_line_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["simulate", "--preset", "headline", "--trials", "500"],
        &["simulate", "--policy", "random", "--seed", "9", "--trials", "300", "--games", "40"],
        &["sweep-gx", "--coarse", "--trials", "20", "--games", "30"],
        &["sweep-ab", "--map", "lozi", "--a-values", "1.5,1.7", "--b-values", "0,0.2", "--trials", "50"],
        &["bifurcation", "--map", "tent", "--a-step", "0.25", "--samples", "20"],
        &["histogram", "--map", "henon", "--samples", "2000", "--bins", "10", "--normalize", "true"],
        &["phase", "--map", "sinusoidal", "--samples", "50"],
        &["phase", "--uniform", "true", "--seed", "4", "--samples", "50"],
        &["proportion", "--gamma-values", "0.3,0.6", "--games", "500", "--trials", "50"],
        &["exact-rate", "--policy", "periodic", "--pattern", "[2,1]"],
        &["exact-traj", "--preset", "fig9-lozi", "--games", "60"],
        &["detect-period", "--preset", "headline"],
    ];
    for args in cases {
        round_trip(args, dir.path());
    }
}

#[test]
fn compare_writes_one_file_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp");
    run_command([
        "parrondo", "compare", "--trials", "200", "--games", "20", "--out-dir", out.to_str().unwrap(),
    ])
    .unwrap();
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let labels: Vec<&str> = summary.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(labels.len(), 11);
    for label in &labels {
        assert!(out.join(format!("{label}.csv")).exists(), "{label}");
    }
    assert!(labels.contains(&"allB") && labels.contains(&"periodic-AABB"));

    let again = dir.path().join("again");
    rerun_config_line(summary.lines().next().unwrap(), &again).unwrap();
    assert_eq!(summary, fs::read_to_string(again.join("summary.csv")).unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let runs: &[&[&str]] = &[
        &["simulate", "--policy", "random", "--trials", "3000"],
        &["sweep-gx", "--coarse", "--trials", "40", "--games", "50"],
        &["sweep-ab", "--coarse", "--trials", "20", "--games", "50"],
        &["proportion", "--gamma-values", "0.5", "--games", "200", "--trials", "100"],
        &["bifurcation", "--a-step", "0.5", "--samples", "10"],
    ];
    for args in runs {
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut many = args.to_vec();
        many.extend(["--threads", "7"]);
        assert_eq!(stdout(&one), stdout(&many), "{args:?}");
    }
}

#[test]
fn simulate_summary_matches_exact_oracle() {
    let text = stdout(&["simulate", "--policy", "allA", "--trials", "10"]);
    let summary = text.lines().nth(1).unwrap();
    let field = |name: &str| -> f64 {
        let rest = &summary[summary.find(&format!("{name}=")).unwrap() + name.len() + 1..];
        rest.split(',').next().unwrap().parse().unwrap()
    };
    assert!((field("exact_final") + 1.0).abs() < 1e-12, "{summary}");
    assert_eq!(field("proportion_A"), 1.0);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 102);
}

#[test]
fn detect_period_reports_none_for_aperiodic_orbits() {
    let text = stdout(&["detect-period", "--preset", "fig9-logistic", "--games", "400"]);
    assert!(text.lines().nth(2).unwrap().starts_with("none,none,"), "{text}");
}
