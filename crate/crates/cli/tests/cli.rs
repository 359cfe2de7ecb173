//! End-to-end tests of the `tank` binary: exit codes, output determinism,
//! file formats, config precedence.

use std::fs;
use std::io::BufReader;
use std::process::{Command, Output};

fn tank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tank"))
        .args(args)
        .output()
        .expect("failed to run tank")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_benchmark_reports_roots() {
    let out = tank(&["solve"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("xi1           = 0.112285"), "{text}");
    assert!(text.contains("xi2           = 2.024079"));
    assert!(text.contains("omega_p       = 0.387151"));
}

#[test]
fn solve_flags_rank_limit() {
    let out = tank(&["solve", "--set", "lambda_h=0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("RANK limit"));
}

#[test]
fn validation_failure_exits_one() {
    let out = tank(&["solve", "--set", "lambda_h=1.0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("lambda_h must be < 1"));
}

#[test]
fn indeterminate_exits_two() {
    let out = tank(&["solve", "--set", "lambda_h=0.9", "--set", "eta_p=50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("indeterminate"));
}

#[test]
fn unknown_set_key_exits_one() {
    let out = tank(&["solve", "--set", "sigma=2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_and_set_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.cfg");
    fs::write(&cfg, "# test config\nphi_taylor = 4\neta_p = 10\n").unwrap();
    // --set overrides the file
    let out = tank(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "eta_p=5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("phi_taylor  = 4"));
    assert!(text.contains("eta_p       = 5"));
}

#[test]
fn config_unknown_key_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.cfg");
    fs::write(&cfg, "sigma = 1\n").unwrap();
    let out = tank(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_config_exits_three() {
    let out = tank(&["solve", "--config", "/nonexistent/params.cfg"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn irf_outputs_are_byte_identical_across_runs() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = tank(&[
            "irf",
            "--shock",
            "monetary",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for name in ["irf_monetary_simple.csv", "irf_monetary_simple.svg"] {
        let a = fs::read(d1.path().join(name)).unwrap();
        let b = fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across runs");
    }
}

#[test]
fn irf_csv_round_trips_through_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&[
        "irf",
        "--shock",
        "technology",
        "--horizon",
        "25",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let file = dir.path().join("irf_technology_simple.csv");
    let panel =
        tank_core::csvio::read_panel_csv(BufReader::new(fs::File::open(&file).unwrap())).unwrap();
    assert_eq!(panel.horizon(), 25);
    let expect = tank_core::irf::irf_technology(
        &tank_core::params::Params::benchmark(),
        &tank_core::irf::ShockSpec::new(tank_core::irf::ShockKind::Technology, 0.01, 25).unwrap(),
    )
    .unwrap();
    assert_eq!(panel.max_abs_diff(&expect), 0.0);
}

#[test]
fn irf_vary_renders_three_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&[
        "irf",
        "--vary",
        "phi_taylor=1.5,3,6",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("irf_monetary_simple.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 27); // 9 panels x 3 lines
    assert!(svg_is_selfcontained(&svg));
    for v in ["1.5", "3", "6"] {
        assert!(dir
            .path()
            .join(format!("irf_monetary_simple_phi_taylor_{v}.csv"))
            .exists());
    }
}

#[test]
fn sweep_writes_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&[
        "sweep",
        "--param",
        "lambda_h",
        "--grid",
        "0,0.2,0.4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("sweep_lambda_h.csv")).unwrap();
    assert!(text.starts_with(
        "lambda_h,xi1,xi2,omega_p,omega_x,omega_p_inf,omega_x_inf,determinate,ad_condition,prop1_condition,error"
    ));
    assert_eq!(text.lines().count(), 4);
    assert!(stdout(&out).contains("holds"));
}

#[test]
fn sweep_range_syntax() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&[
        "sweep",
        "--param",
        "phi_taylor",
        "--grid",
        "1.5:6:10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("sweep_phi_taylor.csv")).unwrap();
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn welfare_writes_loss_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&["welfare", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("welfare.csv")).unwrap();
    assert!(text.starts_with("regime,lambda_h,loss,gap_term,wage_term,price_term,surcharge"));
    assert!(text.contains("taylor"));
    assert!(text.contains("discretion"));
    assert!(text.contains("commitment"));
}

#[test]
fn check_prints_margins() {
    let out = tank(&["check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("phi - 1 - 1/kappa2 = 1.750000"));
    assert!(text.contains("determinacy"));
    // conditions are reported, not enforced: indeterminate params still exit 0
    let out = tank(&["check", "--set", "lambda_h=0.9", "--set", "eta_p=50"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("-> false"));
}

#[test]
fn check_flags_prop1_violation_at_extreme_rigidity() {
    let out = tank(&[
        "check",
        "--set",
        "eta_p=500",
        "--set",
        "eta_w=500",
        "--set",
        "psi_p=1",
        "--set",
        "psi_w=1",
        "--set",
        "lambda_h=0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let prop1 = text
        .lines()
        .find(|l| l.contains("prop1_condition"))
        .unwrap();
    assert!(prop1.contains("false"), "{prop1}");
}

#[test]
fn check_dump_system_writes_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&[
        "check",
        "--dump-system",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for name in [
        "re_system_a.csv",
        "re_system_b.csv",
        "re_system_c.csv",
        "re_eigenvalues.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let eig = fs::read_to_string(dir.path().join("re_eigenvalues.csv")).unwrap();
    assert!(eig.starts_with("alpha_re,alpha_im,beta,modulus,stable"));
}

#[test]
fn compare_reports_both_variants() {
    let dir = tempfile::tempdir().unwrap();
    let out = tank(&["compare", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("irf_monetary_simple.csv").exists());
    assert!(dir.path().join("irf_monetary_general.csv").exists());
    let svg = fs::read_to_string(dir.path().join("compare_monetary.svg")).unwrap();
    assert!(svg_is_selfcontained(&svg));
    assert_eq!(svg.matches("<polyline").count(), 18);
}

fn svg_is_selfcontained(svg: &str) -> bool {
    svg.starts_with("<svg")
        && svg.trim_end().ends_with("</svg>")
        && !svg.contains("href")
        && !svg.contains("url(")
        && !svg.contains("<image")
}
