use std::fs;
use std::process::{Command, Output};

fn qspeed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspeed")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn fig1_quick_prints_csv() {
    let o = qspeed(&["--quick", "fig1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l == "tau,bound_opt,ratio_opt,bound_h0h1,ratio_h0h1"));
    let rows = data_rows(&text);
    assert!(!rows.is_empty());
    for r in rows {
        assert!((r[2] - 1.0).abs() < 1e-3);
        assert!(r[4] < 1.0);
    }
}

#[test]
fn fig2_single_point_on_the_ridge() {
    let o = qspeed(&["fig2", "--lambda0", "0.2", "--lambda1", "0.4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] - 0.4).abs() < 1e-12);
    assert!((rows[0][2] - 1.0).abs() < 1e-3);
}

#[test]
fn invalid_parameters_exit_with_one() {
    assert_eq!(qspeed(&["fig1", "--mu", "1"]).status.code(), Some(1));
    assert_eq!(
        qspeed(&["fig2", "--lambda0", "0.9", "--lambda1", "0.5"]).status.code(),
        Some(1)
    );
    assert_eq!(qspeed(&["--grid", "10", "nonmarkov"]).status.code(), Some(1));
    assert_eq!(qspeed(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(qspeed(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_and_svg_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nm.csv");
    let o = qspeed(&[
        "--quick",
        "--format",
        "csv+svg",
        "--out",
        out.to_str().unwrap(),
        "nonmarkov",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("tau,gamma_tau,ratio"));
    let svg = fs::read_to_string(dir.path().join("nm.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    assert_eq!(qspeed(&["--format", "csv+svg", "nonmarkov"]).status.code(), Some(1));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# fixed point\nlambda0 = 0.1\nlambda1 = 0.2\n").unwrap();
    let o = qspeed(&["--config", cfg.to_str().unwrap(), "fig2", "--lambda1", "0.45"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("lambda0 = 0.1"));
    let rows = data_rows(&text);
    assert!((rows[0][0] - 0.45).abs() < 1e-12);
    fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        qspeed(&["--config", cfg.to_str().unwrap(), "fig2"]).status.code(),
        Some(1)
    );
}

#[test]
fn distance_of_orthogonal_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pair.txt");
    fs::write(&f, "# dim 2\n1 0\n0 0\n# dim 2\n0 0\n0 1\n").unwrap();
    let o = qspeed(&["distance", f.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o);
    let permuted: f64 = line
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("permuted="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((permuted - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    fs::write(&f, "# dim 2\n0.5 0.1\n0.2 0.5\n# dim 2\n1 0\n0 0\n").unwrap();
    let o = qspeed(&["distance", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0, 1)"));
}

#[test]
fn quick_verify_reports_every_check() {
    let o = qspeed(&["--quick", "--seed", "3", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("check=")).count() >= 40);
    assert!(text.contains("blocking=false"));
}

#[test]
fn tau_alpha_dephasing_warns_about_mixed_start() {
    let o = qspeed(&[
        "tau-alpha",
        "--dynamics",
        "dephasing",
        "--lambda0",
        "0.3",
        "--lambda1",
        "0.3",
        "--lambda20",
        "0.1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("# warning:"));
}
