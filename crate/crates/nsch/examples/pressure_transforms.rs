//! Pressure of one state expressed in all four modeling choices, plus the
//! p* variable.

use nsch::energy::{chemical_potential, transform_pressure, Choice, EnergyParams, TransformFields};
use nsch::solver::shokrpour_pressure;
use nsch::{make_constants, Grid, ScalarField};

fn main() -> nsch::Result<()> {
    let k = make_constants(2.0, 1.0)?;
    let params = EnergyParams::new(1.0, 0.05)?;
    let grid = Grid::unit_square(32)?;
    let tau = std::f64::consts::TAU;
    let phi = ScalarField::from_fn(grid, |x, y| 0.8 * (tau * x).sin() * (tau * y).cos());
    let p = ScalarField::from_fn(grid, |x, y| (tau * (x + y)).cos());
    let mu = chemical_potential(Choice::PhiVolume, &phi, &params, &k);
    let fields = TransformFields {
        phi: &phi,
        mu_hat: &mu,
    };

    for to in Choice::ALL {
        let q = transform_pressure(Choice::PhiVolume, to, &p, fields, &params, &k)?;
        // around the cycle and back
        let back = transform_pressure(to, Choice::PhiVolume, &q, fields, &params, &k)?;
        println!(
            "{:>10}: mean {:>9.5}  range [{:>8.4}, {:>8.4}]  cycle gap {:.1e}",
            to.name(),
            q.mean(),
            q.min(),
            q.max(),
            back.sub(&p).max_abs()
        );
    }

    let p_star = shokrpour_pressure(&phi, &p, &k)?;
    println!(
        "\np* = p (1 - alpha phi): range [{:.4}, {:.4}]",
        p_star.min(),
        p_star.max()
    );
    Ok(())
}
