use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn magpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magpt"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_SWEEP: &str = r#"
units = "units_of_Gamma"

[sweep]
coupling = 1.0
prefactor = 0.01
omega2 = 1.0
axis = "detuning"
times = [2.0, 5.0]
grid = { min = 2.0, max = 4.0, count = 40, open_min = true }
inputs = [{ kind = "vacuum" }, { kind = "thermal", temperature = 1.0 }]
"#;

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sweep.toml", SMALL_SWEEP);
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for out in [&a, &b] {
            let o = magpt(&[
                "sweep-precision",
                "--config",
                &cfg,
                "--format",
                format,
                "--out",
                out.to_str().unwrap(),
            ]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# magpt-table v1 kind=sweep-precision"));
    assert!(lines.next().unwrap().starts_with("input,t,detuning,"));
    assert_eq!(lines.count(), 2 * 2 * 40);
}

#[test]
fn config_hash_is_in_header_and_tracks_content() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toml", SMALL_SWEEP);
    let b = write(dir.path(), "b.toml", &SMALL_SWEEP.replace("count = 40", "count = 41"));
    let header = |cfg: &str| {
        let o = magpt(&["sweep-precision", "--optima", "--config", cfg]);
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap().lines().next().unwrap().to_string()
    };
    let (ha, hb) = (header(&a), header(&b));
    assert!(ha.contains("config_sha256="));
    assert_ne!(ha, hb);
    // formatting-only edits resolve to the same config
    let c = write(dir.path(), "c.toml", &format!("# comment\n{SMALL_SWEEP}"));
    assert_eq!(ha, header(&c));
}

#[test]
fn empty_grid_is_a_structural_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "empty.toml",
        &SMALL_SWEEP.replace("count = 40", "count = 0"),
    );
    let o = magpt(&["sweep-precision", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid is empty"));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_errors_point_at_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "typo.toml", &SMALL_SWEEP.replace("prefactor", "prefacter"));
    let o = magpt(&["sweep-precision", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("typo.toml"), "{err}");
    assert!(err.contains("line 6"), "{err}");
    assert!(err.contains("prefacter"), "{err}");
}

#[test]
fn units_flag_must_match_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sweep.toml", SMALL_SWEEP);
    assert_eq!(
        magpt(&["sweep-precision", "--config", &cfg, "--units", "si"])
            .status
            .code(),
        Some(2)
    );
    assert!(
        magpt(&["sweep-precision", "--optima", "--config", &cfg, "--units", "gamma"])
            .status
            .success()
    );
    assert_eq!(magpt(&["sensitivity", "--units", "gamma"]).status.code(), Some(2));
}

#[test]
fn validate_defaults_pass() {
    let o = magpt(&["validate"]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(out.lines().filter(|l| l.ends_with(",pass")).count(), 6, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn validate_reports_failures_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "v.toml",
        "oracle_grid = 3\nclosed_form_grid = 3\nfull_detunings = [3.0]\nfull_times = [1.0]\n[tolerances]\nfull_model = 0.0\n",
    );
    let o = magpt(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("full_model,"));
    let bad = write(dir.path(), "bad.toml", "[tolerances]\nfull_modle = 0.1\n");
    assert_eq!(magpt(&["validate", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn figures_write_one_file_each_plus_script() {
    let dir = tempfile::tempdir().unwrap();
    let dump = magpt(&["figures", "--dump-config"]);
    assert!(dump.status.success());
    let small = String::from_utf8(dump.stdout)
        .unwrap()
        .replace("count = 400", "count = 8")
        .replace("count = 500", "count = 8");
    let cfg = write(dir.path(), "figs.toml", &small);
    let out = dir.path().join("figs");
    let o = magpt(&["figures", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for (name, header) in [
        ("fig1.csv", "detuning,t,delta2_omega1"),
        ("fig2.csv", "omega1,T,t,delta2_omega1"),
        ("fig3.csv", "omega1,T,t,delta2_omega1"),
        ("fig4.csv", "detuning,t,nu_minus,log_negativity"),
    ] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        assert_eq!(text.lines().nth(1), Some(header), "{name}");
    }
    assert!(fs::read_to_string(out.join("figures.gp")).unwrap().contains("fig4.csv"));
    assert_eq!(magpt(&["figures"]).status.code(), Some(2));
}

#[test]
fn sensitivity_report_exposes_intermediates() {
    let o = magpt(&["sensitivity", "--convention", "cyclic"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for q in [
        "Gamma,",
        "photon_number,",
        "variance,",
        "dN_domega1,",
        "delta2_omega1,",
        "delta_B,",
        "sensitivity,",
    ] {
        assert!(text.lines().any(|l| l.starts_with(q)), "missing {q}");
    }
    let db: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("delta_B,"))
        .and_then(|v| v.split(',').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((db / 1.786e-18 - 1.0).abs() < 1e-3, "{db}");
}

#[test]
fn si_trajectory_with_fock_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "si.toml",
        r#"
[model]
units = "rad_per_s"
omega1 = 2.0e6
omega2 = -2.0e6
omega3 = 0.0
g13 = 1.0e7
g23 = 1.0e7
gamma1 = 1.0e6
gamma2 = 1.0e6
kappa = 1.0e8

[input]
kind = "fock"
a = 0
b = 1

[times]
min = 0.0
max = 5.0e-6
count = 6
"#,
    );
    let o = magpt(&["photon-number", "--config", &cfg, "--units", "si", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"units\": \"rad_per_s\""));
    assert!(text.contains("\"photon_number\""));
    let q = magpt(&["qfi", "--config", &cfg]);
    assert_eq!(q.status.code(), Some(2));
}
