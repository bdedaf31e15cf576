use std::process::Command;

use qhmetric::cli::main_with;
use qhmetric::experiments::{parse_report, ReportFormat};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qhm").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn dist_matches_closed_form() {
    let (code, out, _) = run(&["dist", "--a", "1,0", "--b", "1,1"]);
    assert_eq!(code, 0);
    let v = field(&out, "value");
    let exact = 2.0 * 0.5f64.asinh();
    assert!((v - exact).abs() / exact < 1e-2);
    assert!(out.contains("converged = true"));
}

#[test]
fn dist_accepts_negative_coordinates_and_domains() {
    let (code, out, _) = run(&["dist", "--domain", "disc", "--a", "-0.5,0", "--b", "0,0"]);
    assert_eq!(code, 0);
    assert!((field(&out, "value") - std::f64::consts::LN_2).abs() < 1e-6);
}

#[test]
fn bad_input_exits_with_one() {
    let (code, _, err) = run(&["dist", "--a", "0,1", "--b", "1,1"]);
    assert_eq!(code, 1);
    assert!(err.contains("not inside"), "{err}");
    let (code, _, _) = run(&["dist", "--domain", "torus", "--a", "1,0", "--b", "1,1"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn geodesic_writes_csv() {
    let (code, out, _) = run(&["geodesic", "--a", "1,-1", "--b", "1,1"]);
    assert_eq!(code, 0);
    let mut lines = out.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("x0,x1"));
    let pts: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(pts.len() > 10);
    // the geodesic is the arc of radius sqrt 2 about the origin
    for p in &pts {
        assert!((p[0].hypot(p[1]) - 2f64.sqrt()).abs() < 1e-2);
    }
}

#[test]
fn verify_suites() {
    for suite in ["modulus", "ghm"] {
        let (code, _, err) = run(&["verify", "--suite", suite, "--domain", "disc"]);
        assert_eq!(code, 0, "{suite}: {err}");
    }
    let (code, out, _) = run(&["verify", "--suite", "jacobian", "--domain", "paraboloid"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("PASS").count(), 2);
    let (code, _, err) = run(&["verify", "--suite", "jacobian", "--domain", "disc"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn asymptotics_output_is_deterministic_and_parses() {
    let args = [
        "asymptotics",
        "--domain",
        "disc",
        "-K",
        "3",
        "--format",
        "json",
    ];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let rep = parse_report(&first, ReportFormat::Json).unwrap();
    assert_eq!(rep.rows.len(), 4);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("ladder.csv");
    std::fs::write(
        &cfg,
        "[domain]\nkind = \"disc\"\n\n[experiment]\nmode = \"normal\"\nlevels = 2\n",
    )
    .unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let (code, _, err) = run(&[
        "--config",
        cfg_s,
        "asymptotics",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let rep = parse_report(&std::fs::read_to_string(&out).unwrap(), ReportFormat::Csv).unwrap();
    assert_eq!(rep.rows.len(), 3);
    assert!(rep.metadata.mode.unwrap().starts_with("normal"));

    // flags win over the file
    let (_, text, _) = run(&[
        "--config",
        cfg_s,
        "asymptotics",
        "-K",
        "1",
        "--mode",
        "tangential",
    ]);
    let rep = parse_report(&text, ReportFormat::Csv).unwrap();
    assert_eq!(rep.rows.len(), 2);
    assert!(rep.metadata.mode.unwrap().starts_with("tangential"));

    std::fs::write(&cfg, "[domain]\nkind = \"disc\"\nshape = 3\n").unwrap();
    let (code, _, err) = run(&["--config", cfg_s, "asymptotics"]);
    assert_eq!(code, 1);
    assert!(err.contains("shape"), "{err}");
}

#[test]
fn flatten_check_runs() {
    let (code, out, _) = run(&["flatten-check", "--domain", "paraboloid", "--kappa", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&[
        "flatten-check",
        "--domain",
        "paraboloid",
        "--point",
        "0.1,0",
    ]);
    assert_eq!(code, 0);
    assert!((field(&out, "sigma_min") - 0.9).abs() < 1e-4);
}

#[test]
fn help_lists_subcommands_and_defaults() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["dist", "geodesic", "verify", "asymptotics", "flatten-check"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
    let (_, out, _) = run(&["asymptotics", "--help"]);
    assert!(out.contains("[default: 0.125]"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qhm");
    let ok = Command::new(bin)
        .args(["verify", "--suite", "modulus"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS"));
    let bad = Command::new(bin)
        .args(["dist", "--a", "1,0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
