//! Time-stepper behavior on small grids.

use nsch::constitutive::ConstitutiveParams;
use nsch::energy::EnergyParams;
use nsch::scenario::{Scenario, ScenarioKind};
use nsch::solver::residuals::{pressure_from_pstar, pstar_flux_gap};
use nsch::solver::{reconstruct_v_form, shokrpour_pressure, Numerics, Physics, Solver};
use nsch::{make_constants, Error, Grid, ScalarField, VectorField};

fn physics(rho: (f64, f64), m0: f64) -> Physics {
    Physics {
        k: make_constants(rho.0, rho.1).unwrap(),
        energy: EnergyParams::new(1.0, 0.04).unwrap(),
        constitutive: ConstitutiveParams {
            m_small: m0,
            ..Default::default()
        },
        g: 0.0,
    }
}

#[test]
fn pure_phase_at_rest_is_a_fixed_point() {
    let grid = Grid::unit_square(16).unwrap();
    let solver = Solver::new(grid, physics((2.0, 1.0), 0.3), Numerics::default()).unwrap();
    let mut st = solver
        .initial_state(ScalarField::constant(grid, 1.0), VectorField::zeros(grid))
        .unwrap();
    let start = st.clone();
    for _ in 0..5 {
        st = solver.step(&st, 1e-3).unwrap().0;
    }
    assert!(st.phi.sub(&start.phi).max_abs() < 1e-13);
    assert!(st.u.max_norm() < 1e-13);
    assert!(st.p.max_abs() < 1e-13);
}

#[test]
fn one_step_commutes_with_periodic_shifts() {
    let grid = Grid::new_2d(16, 12, 1.0, 0.75).unwrap();
    let solver = Solver::new(
        grid,
        physics((3.0, 1.0), 0.2),
        Numerics {
            linear_tol: 1e-13,
            ..Default::default()
        },
    )
    .unwrap();
    let sc = Scenario {
        kind: ScenarioKind::Drop,
        u_amplitude: 0.3,
        ..Default::default()
    };
    let st = solver
        .initial_state(sc.phi(grid, 0.04), sc.velocity(grid))
        .unwrap();
    let (a, _) = solver.step(&st.shifted(5, -3), 5e-4).unwrap();
    let (b, _) = solver.step(&st, 5e-4).unwrap();
    let b = b.shifted(5, -3);
    assert!(a.phi.sub(&b.phi).max_abs() < 1e-11);
    assert!(a.u.sub(&b.u).max_norm() < 1e-9);
    assert!(a.p.sub(&b.p).max_abs() < 1e-8 * (1.0 + b.p.max_abs()));
}

#[test]
fn matched_density_velocities_coincide() {
    let grid = Grid::unit_square(16).unwrap();
    let ph = physics((1.3, 1.3), 0.0);
    let solver = Solver::new(grid, ph, Numerics::default()).unwrap();
    let sc = Scenario {
        u_amplitude: 0.5,
        ..Default::default()
    };
    let st = solver
        .initial_state(sc.phi(grid, 0.04), sc.velocity(grid))
        .unwrap();
    let st = solver.step(&st, 1e-4).unwrap().0;
    let vf = reconstruct_v_form(&st, &ph).unwrap();
    assert_eq!(vf.v, st.u);
    assert_eq!(st.jtilde.max_norm(), 0.0);
}

#[test]
fn oversized_step_is_rejected_with_the_limit() {
    let grid = Grid::unit_square(16).unwrap();
    let solver = Solver::new(grid, physics((1.0, 1.0), 0.0), Numerics::default()).unwrap();
    let sc = Scenario {
        u_amplitude: 2.0,
        ..Default::default()
    };
    let st = solver
        .initial_state(sc.phi(grid, 0.04), sc.velocity(grid))
        .unwrap();
    match solver.step(&st, 1.0) {
        Err(Error::StepRejected { dt, max_dt }) => {
            assert_eq!(dt, 1.0);
            assert!(max_dt > 0.0 && max_dt < 1.0);
            assert!(solver.step(&st, 0.5 * max_dt).is_ok());
        }
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn pstar_values_and_round_trip() {
    let grid = Grid::unit_square(8).unwrap();
    let k = make_constants(2.0, 1.0).unwrap();
    let one = ScalarField::constant(grid, 1.0);
    let p_star = shokrpour_pressure(&one, &one, &k).unwrap();
    assert!(p_star.data().iter().all(|&x| (x - 4.0 / 3.0).abs() < 1e-15));
    let zero = ScalarField::zeros(grid);
    assert_eq!(shokrpour_pressure(&zero, &one, &k).unwrap(), one);

    let phi = ScalarField::from_fn(grid, |x, y| 0.9 * (6.0 * x).sin() * (4.0 * y).cos());
    let p = ScalarField::from_fn(grid, |x, y| 3.0 * (2.0 * x + y).cos());
    let back = pressure_from_pstar(&phi, &shokrpour_pressure(&phi, &p, &k).unwrap(), &k).unwrap();
    assert!(back.sub(&p).max_abs() < 1e-14 * 3.0);
    let mu = ScalarField::from_fn(grid, |x, y| (3.0 * x).cos() - y);
    let gap = pstar_flux_gap(&phi, &mu, &p, &k, &ConstitutiveParams::default()).unwrap();
    assert!(gap.max_abs() < 1e-12);
}

#[test]
fn general_density_with_mass_transfer_stays_stable() {
    let grid = Grid::unit_square(32).unwrap();
    let ph = physics((2.0, 1.0), 0.5);
    let solver = Solver::new(grid, ph, Numerics::default()).unwrap();
    let st = solver
        .initial_state(
            Scenario::default().phi(grid, 0.04),
            VectorField::zeros(grid),
        )
        .unwrap();
    let e0 = st.energy(&ph).total;
    let mut prev = e0;
    solver
        .run(st, 2e-4, 100, |s, _| {
            let e = s.energy(&ph).total;
            assert!(e <= prev + 1e-8 * e0, "energy rose from {prev} to {e}");
            prev = e;
        })
        .unwrap();
}
