//! Command-line behavior, driven in-process and through the built binary.

use std::path::Path;
use std::process::Command;

use nsch::cli::{run, CSV_HEADER, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use nsch::snapshot::Snapshot;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["nsch"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn spinodal_run(dir: &Path) -> std::path::PathBuf {
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "nx = 24\nny = 24\ndt = 0.0002\nt_end = 0.004\nsnapshot_every = 10\n",
    )
    .unwrap();
    let out = dir.join("out");
    let (code, _, err) = call(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    out
}

#[test]
fn verify_is_deterministic() {
    let (c1, a, _) = call(&["verify", "--seed", "42"]);
    let (c2, b, _) = call(&["verify", "--seed", "42"]);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    assert!(a.starts_with('#'));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(call(&["verify", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify", "--rho1", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&[]).0, EXIT_USAGE);
    let (code, _, err) = call(&["simulate", "--config", "/nonexistent/run.cfg"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("/nonexistent/run.cfg"), "{err}");
}

#[test]
fn simulate_writes_monotone_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinodal_run(dir.path());
    let csv = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let energy: Vec<f64> = lines
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(energy.len(), 21);
    assert!(energy.windows(2).all(|w| w[1] <= w[0]), "{energy:?}");
    for step in [0, 10, 20] {
        assert!(out.join(format!("snapshot_{step:06}.txt")).exists());
    }
    let echo = std::fs::read_to_string(out.join("config.echo.txt")).unwrap();
    assert!(echo.contains("nx = 24\n"));
}

#[test]
fn transform_identity_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinodal_run(dir.path());
    let snap = out.join("snapshot_000020.txt");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let cv = dir.path().join("cv.txt");
    let (code, _, err) = call(&[
        "transform",
        "--in",
        &s(&snap),
        "--pressure-from",
        "phi-volume",
        "--pressure-to",
        "c-volume",
        "--out",
        &s(&cv),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");

    // c-volume to c-volume leaves the snapshot unchanged
    let same = dir.path().join("same.txt");
    let (code, _, err) = call(&[
        "transform",
        "--in",
        &s(&cv),
        "--pressure-from",
        "c-volume",
        "--pressure-to",
        "c-volume",
        "--out",
        &s(&same),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(Snapshot::read(&same).unwrap(), Snapshot::read(&cv).unwrap());

    // and back to where it started
    let back = dir.path().join("back.txt");
    let (code, _, _) = call(&[
        "transform",
        "--in",
        &s(&cv),
        "--pressure-from",
        "c-volume",
        "--pressure-to",
        "phi-volume",
        "--out",
        &s(&back),
    ]);
    assert_eq!(code, EXIT_OK);
    let (a, b) = (
        Snapshot::read(&snap).unwrap(),
        Snapshot::read(&back).unwrap(),
    );
    let gap = a.field("p").unwrap().sub(b.field("p").unwrap()).max_abs();
    assert!(gap < 1e-10, "{gap}");
    let level_gap = a.meta_f64("p_level").unwrap() - b.meta_f64("p_level").unwrap();
    assert!(level_gap.abs() < 1e-10);

    // the stored choice must match --pressure-from
    let (code, _, err) = call(&[
        "transform",
        "--in",
        &s(&snap),
        "--pressure-from",
        "c-mass",
        "--pressure-to",
        "phi-mass",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("phi-volume"), "{err}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nsch");
    let ok = Command::new(bin)
        .args(["verify", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["transform"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    // a rejected step fails the run
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(
        &cfg,
        "nx = 16\nny = 16\nu_amplitude = 5\ndt = 0.5\nt_end = 1\n",
    )
    .unwrap();
    let failed = Command::new(bin)
        .args([
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().join("o").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(failed.status.code(), Some(EXIT_FAILED));
    assert!(String::from_utf8_lossy(&failed.stderr).contains("step rejected"));
}
