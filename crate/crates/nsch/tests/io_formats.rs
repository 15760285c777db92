//! Config and snapshot formats.

use nsch::config::{parse_config, RunConfig};
use nsch::snapshot::Snapshot;
use nsch::solver::Solver;

/// The sample config from the module documentation.
fn doc_sample() -> String {
    let src = include_str!("../src/config.rs");
    let mut inside = false;
    let mut out = String::new();
    for line in src.lines().take_while(|l| l.starts_with("//!")) {
        let body = line
            .trim_start_matches("//!")
            .strip_prefix(' ')
            .unwrap_or("");
        if body.starts_with("```") {
            inside = !inside;
            continue;
        }
        if inside {
            out.push_str(body);
            out.push('\n');
        }
    }
    out
}

#[test]
fn documented_sample_round_trips_through_echo() {
    let sample = doc_sample();
    assert!(sample.lines().count() > 30);
    let cfg = parse_config(&sample).unwrap();
    assert_eq!(cfg, RunConfig::default());
    let without_comments: String = sample
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(cfg.echo(), without_comments);
    assert_eq!(parse_config(&cfg.echo()).unwrap(), cfg);
}

#[test]
fn unknown_keys_are_listed() {
    let err = parse_config("nx = 8\nfoo = 1\nbar = 2\n")
        .unwrap_err()
        .to_string();
    assert!(err.contains("foo") && err.contains("bar"), "{err}");
}

#[test]
fn state_snapshot_round_trip_is_exact() {
    let cfg = parse_config("nx = 12\nny = 10\nrho1 = 3\nm0 = 0.2\nu_amplitude = 0.4\n").unwrap();
    let grid = cfg.grid().unwrap();
    let physics = cfg.physics().unwrap();
    let solver = Solver::new(grid, physics, cfg.numerics()).unwrap();
    let st = solver
        .initial_state(
            cfg.scenario.phi(grid, physics.energy.epsilon),
            cfg.scenario.velocity(grid),
        )
        .unwrap();
    let st = solver.step(&st, 1e-4).unwrap().0;
    let snap = Snapshot::from_state(&st, &physics);
    let back = Snapshot::from_text(&snap.to_text()).unwrap();
    assert_eq!(back, snap);
    assert_eq!(back.field("phi").unwrap(), &st.phi);
    assert!(back.field("p").unwrap().mean().abs() < 1e-14);
    assert_eq!(back.meta_f64("p_level"), Some(st.p_level));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    snap.write(&path).unwrap();
    assert_eq!(Snapshot::read(&path).unwrap(), snap);
}

#[test]
fn missing_snapshot_names_the_path() {
    let err = Snapshot::read(std::path::Path::new("/nonexistent/snap.txt")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/snap.txt"));
}
