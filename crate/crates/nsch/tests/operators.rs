//! Discrete operator properties: summation by parts, convergence, exactness
//! of the finite-difference functional derivative, dissipation signs.

use nsch::audit::random::RandomField;
use nsch::constitutive::{dissipation, viscous_dissipation, ConstitutiveParams, StressInput};
use nsch::fields::ops::{
    div_face, grad_face, integrate, laplacian, laplacian_compact, variational_derivative_fd,
};
use nsch::{make_constants, Grid, ScalarField, VectorField};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(seed: u64, grid: Grid, amp: f64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RandomField::new(&mut rng, grid.dims(), amp).sample(grid)
}

fn vector(seed: u64, grid: Grid) -> VectorField {
    let comps = (0..grid.dims())
        .map(|d| field(seed * 7 + d as u64, grid, 2.0))
        .collect();
    VectorField::from_components(comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn face_operators_sum_by_parts(seed in 0u64..1000, n in 8usize..40) {
        let grid = Grid::new_2d(n, n + 3, 1.0, 1.7).unwrap();
        let f = field(seed, grid, 1.0);
        let w = vector(seed + 1, grid);
        let lhs = integrate(&f.mul(&div_face(&w)));
        let rhs = -integrate(&grad_face(&f).dot(&w));
        prop_assert!((lhs - rhs).abs() < 1e-11 * (1.0 + lhs.abs()));
    }

    #[test]
    fn periodic_shift_commutes_with_operators(seed in 0u64..1000, di in -5isize..5, dj in -5isize..5) {
        let grid = Grid::unit_square(16).unwrap();
        let f = field(seed, grid, 1.0);
        let a = laplacian_compact(&f.shifted(di, dj));
        let b = laplacian_compact(&f).shifted(di, dj);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn viscous_dissipation_is_nonnegative(seed in 0u64..1000, lambda_frac in 0.0f64..=1.0, dims in 1usize..=2) {
        let grid = if dims == 1 { Grid::new_1d(32, 1.0).unwrap() } else { Grid::unit_square(16).unwrap() };
        // from the bound lambda = -2/d upward
        let floor = -2.0 / dims as f64;
        let params = ConstitutiveParams {
            nu1: 0.3,
            nu2: 1.7,
            lambda: floor + 3.0 * lambda_frac,
            ..Default::default()
        };
        let phi = field(seed, grid, 0.9);
        let v = vector(seed + 3, grid);
        let d = viscous_dissipation(&v, &phi, &params);
        prop_assert!(d.min() >= -1e-12 * (1.0 + d.max_abs()));
    }
}

#[test]
fn laplacians_converge_at_second_order() {
    let errors = |op: fn(&ScalarField) -> ScalarField| -> Vec<f64> {
        [32usize, 64, 128]
            .iter()
            .map(|&n| {
                let grid = Grid::new_1d(n, 2.0).unwrap();
                let k = std::f64::consts::PI;
                let f = ScalarField::from_fn(grid, |x, _| (k * x).sin());
                op(&f).add(&f.scale(k * k)).max_abs()
            })
            .collect()
    };
    for e in [errors(laplacian), errors(laplacian_compact)] {
        for w in e.windows(2) {
            assert!((w[0] / w[1]).log2() > 1.95, "{e:?}");
        }
    }
}

#[test]
fn fd_derivative_of_quadratic_functional_is_exact() {
    // E = int (f^2/2 + |grad f|^2/2) has derivative f - lap_compact f
    let grid = Grid::new_2d(12, 10, 1.0, 0.8).unwrap();
    let f = field(5, grid, 1.0);
    let energy = |g: &ScalarField| {
        integrate(&g.mul(g).scale(0.5)) + 0.5 * integrate(&grad_face(g).norm_sq())
    };
    let fd = variational_derivative_fd(&energy, &f, 1e-3);
    let exact = f.sub(&laplacian_compact(&f));
    assert!(
        fd.sub(&exact).max_abs() < 1e-8 * exact.max_abs(),
        "{}",
        fd.sub(&exact).max_abs()
    );
}

#[test]
fn fickian_and_reactive_dissipation_are_nonnegative() {
    let grid = Grid::unit_square(24).unwrap();
    let k = make_constants(3.0, 1.0).unwrap();
    let params = ConstitutiveParams {
        m_small: 0.7,
        lambda: -1.0,
        ..Default::default()
    };
    for seed in 0..10 {
        let phi = field(seed, grid, 0.95);
        let mu = field(seed + 100, grid, 5.0);
        let p = field(seed + 200, grid, 3.0);
        let v = vector(seed + 300, grid);
        let input = StressInput {
            phi: &phi,
            mu: &mu,
            p: &p,
            v: &v,
        };
        let d = dissipation(&input, &k, &params).unwrap();
        for part in [&d.viscous, &d.fickian, &d.reactive] {
            assert!(part.min() >= -1e-12 * (1.0 + part.max_abs()));
        }
    }
}
