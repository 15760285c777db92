//! Spinodal decomposition at density ratio 2, printing the energy budget.
//!
//! ```text
//! cargo run --release --example spinodal -- [nx] [steps]
//! ```

use nsch::constitutive::ConstitutiveParams;
use nsch::energy::EnergyParams;
use nsch::scenario::Scenario;
use nsch::solver::{Numerics, Physics, Solver};
use nsch::{make_constants, Grid};

fn main() -> nsch::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let steps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);

    let grid = Grid::unit_square(n)?;
    let physics = Physics {
        k: make_constants(2.0, 1.0)?,
        energy: EnergyParams::new(1.0, 0.02)?,
        constitutive: ConstitutiveParams::default(),
        g: 0.0,
    };
    let solver = Solver::new(grid, physics, Numerics::default())?;
    let sc = Scenario::default();
    let state = solver.initial_state(sc.phi(grid, physics.energy.epsilon), sc.velocity(grid))?;
    let (m0, e0) = (state.mass(), state.energy(&physics).total);
    println!(
        "{:>6} {:>10} {:>12} {:>12} {:>10} {:>10}",
        "step", "t", "E_total", "E_kin", "dmass", "div"
    );
    let every = (steps / 10).max(1);
    let mut count = 0;
    let last = solver.run(state, 2e-4, steps, |s, d| {
        count += 1;
        if count % every == 0 {
            println!(
                "{count:>6} {:>10.4} {:>12.6} {:>12.3e} {:>10.1e} {:>10.1e}",
                s.t,
                d.energy.total,
                d.energy.kinetic,
                (d.mass - m0) / m0,
                d.div_residual
            );
        }
    })?;
    println!(
        "energy fell to {:.3} of its start; phase range [{:.3}, {:.3}]",
        last.energy(&physics).total / e0,
        last.phi.min(),
        last.phi.max()
    );
    Ok(())
}
