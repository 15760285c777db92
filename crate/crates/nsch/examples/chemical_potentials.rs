//! The four chemical potentials of one smooth field, and how they map into
//! each other.

use nsch::audit::random::RandomField;
use nsch::energy::{self, c_field, chemical_potential, relate_mu, Choice, EnergyParams};
use nsch::{make_constants, Grid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nsch::Result<()> {
    let k = make_constants(3.0, 1.0)?;
    let params = EnergyParams::new(1.0, 0.05)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shape = RandomField::new(&mut rng, 2, 0.8);

    for n in [32, 64, 128] {
        let grid = Grid::unit_square(n)?;
        let phi = shape.sample(grid);
        let c = c_field(&phi, &k);
        let mu_hat = chemical_potential(Choice::PhiVolume, &phi, &params, &k);
        print!("{n:>4}^2  max|mu_hat| {:8.3}", mu_hat.max_abs());
        for choice in [Choice::PhiMass, Choice::CVolume, Choice::CMass] {
            let order = if choice.uses_c() { &c } else { &phi };
            let direct = chemical_potential(choice, order, &params, &k);
            let mapped = relate_mu(Choice::PhiVolume, choice, &phi, &mu_hat, &params, &k)?;
            print!("  {}: {:.2e}", choice, direct.sub(&mapped).max_abs());
        }
        println!();
    }
    println!("(gaps between the closed form and the mapped potential shrink like dx^2)");

    // the closed forms are exact gradients of their own discrete functionals
    let grid = Grid::unit_square(12)?;
    let phi = shape.sample(grid);
    for choice in Choice::ALL {
        let order = if choice.uses_c() {
            c_field(&phi, &k)
        } else {
            phi.clone()
        };
        let exact = chemical_potential(choice, &order, &params, &k);
        let fd = energy::chemical_potential_fd(choice, &order, &params, &k, 1e-5);
        println!(
            "{choice:>10}: closed form vs finite-difference gradient {:.2e}",
            exact.sub(&fd).max_abs()
        );
    }
    Ok(())
}
