//! End-to-end runs of the `qheat` binary.

use std::process::{Command, Output};

fn qheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qheat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn single_point_report() {
    let o = qheat(&[
        "single", "--w0", "1", "--ga", "1", "--gb", "1", "--ta", "2", "--tb", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("q_A       0.153598"), "{text}");
    assert!(text.contains("second    pass"));
}

#[test]
fn equilibrium_point_is_not_applicable() {
    let o = qheat(&["coupled", "--mode", "redfield", "--ta", "1.3", "--tb", "1.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("second    n/a"));
}

#[test]
fn strict_positivity_flags_redfield_pathology() {
    let args = [
        "coupled", "--mode", "redfield", "--g", "1", "--ta", "10.5", "--tb", "0.5",
    ];
    assert_eq!(qheat(&args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.push("--strict-positivity");
    assert_eq!(qheat(&strict).status.code(), Some(2));
    let lindblad = [
        "coupled",
        "--mode",
        "lindblad",
        "--ta",
        "10.5",
        "--tb",
        "0.5",
        "--strict-positivity",
    ];
    assert_eq!(qheat(&lindblad).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(qheat(&[]).status.code(), Some(1));
    assert_eq!(qheat(&["coupled", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(qheat(&["coupled", "--lambda", "3"]).status.code(), Some(1));
    assert_eq!(qheat(&["single", "--ga", "0", "--gb", "0"]).status.code(), Some(1));
    assert_eq!(
        qheat(&["sweep", "--var", "w0", "--range", "1:2:5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qheat(&["sweep", "--var", "ta", "--range", "2:1:5"]).status.code(),
        Some(1)
    );
    let o = qheat(&["sweep", "--var", "ta"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--range"));
}

#[test]
fn sweep_writes_csv_with_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lambda.csv");
    let o = qheat(&[
        "sweep",
        "--model",
        "coupled",
        "--var",
        "lambda",
        "--range",
        "0:2:5",
        "--ta",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# qheat "));
    assert!(lines[1].starts_with("lambda,rho_11,rho_22,rho_33,rho_44,re_rho_23"));
    assert_eq!(lines.len(), 7);
    // λ = 1.5 and 2 exceed √2
    assert!(lines[5].ends_with(']') && lines[5].contains("error["));
    assert!(lines[4].ends_with(",ok"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "model = \"single\"\n[params]\nw0 = 2.0\nta = 3.0\n[sweep]\nvar = \"tb\"\nrange = \"0.5:1.5:3\"\n",
    )
    .unwrap();
    let from_file = stdout(&qheat(&["sweep", "--config", cfg.to_str().unwrap(), "--no-header"]));
    assert!(from_file.starts_with("tb,rho_11,rho_22,q_A"));
    assert_eq!(from_file.lines().count(), 4);
    let overridden = stdout(&qheat(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--no-header",
        "--range",
        "0.5:1.5:5",
    ]));
    assert_eq!(overridden.lines().count(), 6);
    let report = stdout(&qheat(&["single", "--config", cfg.to_str().unwrap(), "--w0", "1"]));
    assert!(report.contains("w0=1 ga=1 gb=1 ta=3 tb=1"), "{report}");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "temperature = 3\n").unwrap();
    assert_eq!(
        qheat(&["single", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(
        qheat(&["single", "--config", "/nonexistent/x.toml"]).status.code(),
        Some(1)
    );
}

#[test]
fn unwritable_output_fails() {
    let o = qheat(&["preset", "fig4", "--out", "/nonexistent/dir/fig4.csv"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn presets_are_deterministic() {
    for name in ["fig3", "fig4", "fig5"] {
        let a = qheat(&["preset", name]);
        let b = qheat(&["preset", name]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}
