//! Writes a state snapshot, reads it back and moves its pressure to another
//! modeling choice.

use nsch::config::parse_config;
use nsch::energy::{transform_pressure, Choice, TransformFields};
use nsch::snapshot::Snapshot;
use nsch::solver::Solver;

fn main() -> nsch::Result<()> {
    let cfg = parse_config("nx = 16\nny = 16\nrho1 = 4\nscenario = drop\nu_amplitude = 0.3\n")?;
    let grid = cfg.grid()?;
    let physics = cfg.physics()?;
    let solver = Solver::new(grid, physics, cfg.numerics())?;
    let mut st = solver.initial_state(
        cfg.scenario.phi(grid, physics.energy.epsilon),
        cfg.scenario.velocity(grid),
    )?;
    for _ in 0..5 {
        st = solver.step(&st, cfg.dt)?.0;
    }

    let path = std::env::temp_dir().join("nsch_snapshot_example.txt");
    let snap = Snapshot::from_state(&st, &physics);
    snap.write(&path)?;
    let back = Snapshot::read(&path)?;
    println!(
        "wrote {} ({} fields), read back identical: {}",
        path.display(),
        back.field_names().count(),
        back == snap
    );
    println!(
        "p mean {:.1e}, p_level {}",
        back.field("p").unwrap().mean(),
        back.meta("p_level").unwrap()
    );

    let p = st.pressure();
    let fields = TransformFields {
        phi: &st.phi,
        mu_hat: &st.mu,
    };
    let p_cm = transform_pressure(
        Choice::PhiVolume,
        Choice::CMass,
        &p,
        fields,
        &physics.energy,
        &physics.k,
    )?;
    println!(
        "c-mass pressure mean {:.5} (phi-volume {:.5})",
        p_cm.mean(),
        p.mean()
    );
    std::fs::remove_file(&path).map_err(|e| nsch::Error::Io {
        path: path.clone(),
        source: e,
    })?;
    Ok(())
}
