//! At matched density the unified stepper and the classical reference model
//! take the same steps.

use nsch::constitutive::ConstitutiveParams;
use nsch::energy::EnergyParams;
use nsch::scenario::{Scenario, ScenarioKind};
use nsch::solver::{ModelH, Numerics, Physics, Solver};
use nsch::{make_constants, Grid};

fn main() -> nsch::Result<()> {
    let grid = Grid::unit_square(32)?;
    let rho = 1.2;
    let physics = Physics {
        k: make_constants(rho, rho)?,
        energy: EnergyParams::new(1.0, 0.05)?,
        constitutive: ConstitutiveParams {
            m_big: 1e-2,
            ..Default::default()
        },
        g: 0.0,
    };
    let numerics = Numerics {
        linear_tol: 1e-13,
        ..Default::default()
    };
    let unified = Solver::new(grid, physics, numerics)?;
    let c = physics.constitutive;
    let reference = ModelH::new(
        grid,
        rho,
        1.0,
        0.05,
        (c.nu1, c.nu2),
        c.m_big,
        0.0,
        numerics.stabilization,
        1e-13,
    );

    let sc = Scenario {
        kind: ScenarioKind::Drop,
        u_amplitude: 0.5,
        ..Default::default()
    };
    let (phi, u) = (sc.phi(grid, 0.05), sc.velocity(grid));
    let mut a = unified.initial_state(phi.clone(), u.clone())?;
    let mut b = reference.initial_state(phi, u)?;
    for step in 1..=20 {
        a = unified.step(&a, 1e-3)?.0;
        b = reference.step(&b, 1e-3)?;
        if step % 5 == 0 {
            println!(
                "step {step:>2}: |phi - c| {:.1e}  |u - u_H| {:.1e}  |mu - mu_H| {:.1e}",
                a.phi.sub(&b.c).max_abs(),
                a.u.sub(&b.u).max_norm(),
                a.mu.sub(&b.mu).max_abs()
            );
        }
    }
    Ok(())
}
