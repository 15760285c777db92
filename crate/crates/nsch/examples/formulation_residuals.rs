//! A drop at density ratio 10 stepped in the volume-averaged form, with the
//! mass-averaged and concentration-form residuals under refinement.

use nsch::constitutive::ConstitutiveParams;
use nsch::energy::EnergyParams;
use nsch::scenario::{Scenario, ScenarioKind};
use nsch::solver::{lt_residual, vform_residuals, Numerics, Physics, Solver};
use nsch::{make_constants, Grid};

fn main() -> nsch::Result<()> {
    let physics = Physics {
        k: make_constants(10.0, 1.0)?,
        energy: EnergyParams::new(1.0, 0.04)?,
        constitutive: ConstitutiveParams {
            nu1: 0.01,
            nu2: 0.01,
            ..Default::default()
        },
        g: 0.0,
    };
    let sc = Scenario {
        kind: ScenarioKind::Drop,
        u_amplitude: 0.2,
        ..Default::default()
    };
    let t_end = 20.0 / 1024.0;
    println!(
        "{:>5} {:>10} {:>12} {:>14} {:>12}",
        "n", "dt", "v-form phase", "LT continuity", "LT phase"
    );
    for n in [32usize, 64, 128] {
        let grid = Grid::unit_square(n)?;
        let solver = Solver::new(grid, physics, Numerics::default())?;
        let dt = 1.0 / (32.0 * n as f64);
        let mut prev = solver.initial_state(sc.phi(grid, 0.04), sc.velocity(grid))?;
        let mut next = prev.clone();
        for _ in 0..(t_end / dt).round() as usize {
            prev = next;
            next = solver.step(&prev, dt)?.0;
        }
        let v = vform_residuals(&prev, &next, dt, &physics);
        let lt = lt_residual(&prev, &next, dt, &physics)?;
        println!(
            "{n:>5} {dt:>10.2e} {:>12.3e} {:>14.3e} {:>12.3e}",
            v.phase, lt.continuity, lt.phase
        );
    }
    Ok(())
}
