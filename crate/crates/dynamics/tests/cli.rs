use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use discord_core::{CMatrix, C64};
use discord_dynamics::config::{Overrides, Scenario, ScenarioConfig};
use discord_dynamics::initial::format_initial;
use discord_dynamics::run_scenario;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discord-dynamics")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn short() -> Vec<&'static str> {
    vec!["--t-max", "2", "--steps", "5"]
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn args_of(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn validation_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["fig1a", "--gamma", "0"],
        &["fig1a", "--steps", "1"],
        &["custom", "--initial", "bell"],
        &["fig3", "--t-range", "0:1:0.5"],
        &["fig3", "--d-range", "1:0:0.1"],
        &["fig1a", "--J", "-1"],
        &["fig1a", "--method", "euler"],
        &["fig9"],
        &["fig1a", "--emit-gnuplot"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invariant_violation_exits_3() {
    // With ω = 3 the |00⟩ level lies below the Bell-like level.
    assert_eq!(code(&args_of(&with(&["fig1a", "--omega", "3", "--D", "0"], &short()))), 3);
}

#[test]
fn stdout_csv() {
    let out = run(&args_of(&with(&["fig1b"], &short())));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,u,x,y,v,re_z,im_z,I,C,Q,E,theta_opt,phi_opt,trace_err,min_eig");
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("2.00000000000e+00,"));
}

#[test]
fn files_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "j = 0.5\nd = 0.7\nsteps = 4\nt_max = 1.0\nmethod = \"both\"\n").unwrap();
    let out = dir.path().join("run.csv");
    let args = ["custom", "--config", cfg.to_str().unwrap(), "--J", "0.8", "--out", out.to_str().unwrap(), "--emit-gnuplot"];
    assert_eq!(code(&args), 0);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["model"]["j"], 0.8);
    assert_eq!(meta["model"]["d"], 0.7);
    assert_eq!(meta["time_grid"]["steps"], 4);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.lines().next().unwrap().ends_with(",backend_resid"));
    assert_eq!(csv.lines().count(), 5);
    assert!(fs::read_to_string(dir.path().join("run.csv.gp")).unwrap().contains("'run.csv'"));

    fs::write(&cfg, "jj = 1\n").unwrap();
    assert_eq!(code(&["custom", "--config", cfg.to_str().unwrap()]), 2);
}

fn write_state(path: &Path, m: &CMatrix) {
    fs::write(path, format_initial(m)).unwrap();
}

#[test]
fn initial_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.txt");
    let init = format!("file:{}", path.display());
    let half = C64::new(0.5, 0.0);

    let mut bell = CMatrix::zeros(4, 4);
    for (r, c) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        bell[(r, c)] = half;
    }
    write_state(&path, &bell);
    let out = run(&args_of(&with(&["custom", "--initial", &init], &short())));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[9], "1.00000000000e+00");
    assert_eq!(first[10], "1.00000000000e+00");

    // Coherence between |00⟩ and |11⟩ is outside the X pattern used here, so E is left blank.
    let mut ghz = CMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        ghz[(r, c)] = half;
    }
    write_state(&path, &ghz);
    let out = run(&args_of(&with(&["custom", "--initial", &init], &short())));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(10) == Some("")));

    let mut negative = CMatrix::zeros(4, 4);
    negative[(0, 0)] = C64::new(1.5, 0.0);
    negative[(1, 1)] = C64::new(-0.5, 0.0);
    write_state(&path, &negative);
    assert_eq!(code(&["custom", "--initial", &init]), 2);

    fs::write(&path, "1 0 0\n").unwrap();
    assert_eq!(code(&["custom", "--initial", &init]), 2);

    let missing = format!("file:{}", dir.path().join("absent.txt").display());
    assert_ne!(code(&["custom", "--initial", &missing]), 0);
    assert_eq!(code(&["fig1b", "--initial", "ground"]), 2);
}

#[test]
fn serial_and_parallel_output_match() {
    let o = Overrides { t_max: Some(3.0), steps: Some(31), ..Default::default() };
    let cfgs = [
        ScenarioConfig::resolve(Scenario::Fig1a, o.clone()).unwrap(),
        ScenarioConfig::resolve(Scenario::Fig2, o).unwrap(),
        ScenarioConfig::resolve(
            Scenario::Fig3,
            Overrides { t_range: Some("0.5:1.5:0.5".into()), d_range: Some("0:2:0.25".into()), ..Default::default() },
        )
        .unwrap(),
    ];
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let (serial, parallel) = (pool(1), pool(4));
    for cfg in &cfgs {
        let a = serial.install(|| run_scenario(cfg).unwrap().to_csv());
        let b = parallel.install(|| run_scenario(cfg).unwrap().to_csv());
        let c = parallel.install(|| run_scenario(cfg).unwrap().to_csv());
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["failed"].as_array().unwrap().len(), 0);
}
