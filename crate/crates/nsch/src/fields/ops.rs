//! Periodic finite-difference operators.
//!
//! Two families live here. The centered family (`grad`, `div`, `laplacian`,
//! `sym_grad`, `div_tensor`) keeps every quantity at cell centers; `laplacian`
//! is the wide stencil `div(grad f)`, so composition holds to round-off. The
//! face family (`grad_face`, `div_face`, `laplacian_compact`) stores fluxes on
//! faces `i + 1/2`; its Laplacian is the compact 3-point stencil that damps the
//! grid-scale mode the wide stencil cannot see. Both pairs satisfy summation
//! by parts: `sum(f * div F) = -sum(grad f . F)`.

use super::{Grid, ScalarField, TensorField, VectorField};
use crate::error::{Error, Result};

fn central(f: &ScalarField, d: usize) -> ScalarField {
    let g = *f.grid();
    let inv = 0.5 / g.spacing(d);
    let src = f.data();
    let data = (0..g.len())
        .map(|n| (src[g.neighbor(n, d, 1)] - src[g.neighbor(n, d, -1)]) * inv)
        .collect();
    ScalarField::from_vec(g, data).expect("same grid")
}

fn forward(f: &ScalarField, d: usize) -> ScalarField {
    let g = *f.grid();
    let inv = 1.0 / g.spacing(d);
    let src = f.data();
    let data = (0..g.len())
        .map(|n| (src[g.neighbor(n, d, 1)] - src[n]) * inv)
        .collect();
    ScalarField::from_vec(g, data).expect("same grid")
}

fn backward(f: &ScalarField, d: usize) -> ScalarField {
    let g = *f.grid();
    let inv = 1.0 / g.spacing(d);
    let src = f.data();
    let data = (0..g.len())
        .map(|n| (src[n] - src[g.neighbor(n, d, -1)]) * inv)
        .collect();
    ScalarField::from_vec(g, data).expect("same grid")
}

/// Centered derivative along axis `d`.
pub fn partial(f: &ScalarField, d: usize) -> ScalarField {
    central(f, d)
}

pub fn grad(f: &ScalarField) -> VectorField {
    let comps = (0..f.grid().dims()).map(|d| central(f, d)).collect();
    VectorField::from_components(comps).expect("consistent components")
}

pub fn div(v: &VectorField) -> ScalarField {
    let mut out = ScalarField::zeros(*v.grid());
    for d in 0..v.dims() {
        out = out.add(&central(v.comp(d), d));
    }
    out
}

/// Wide-stencil Laplacian, identical to `div(grad f)`.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    div(&grad(f))
}

/// `(grad F + grad F^T)/2` with centered differences.
#[allow(clippy::needless_range_loop)]
pub fn sym_grad(v: &VectorField) -> TensorField {
    let g = *v.grid();
    let d = g.dims();
    let mut t = TensorField::zeros(g);
    let partials: Vec<Vec<ScalarField>> = (0..d)
        .map(|i| (0..d).map(|j| central(v.comp(i), j)).collect())
        .collect();
    for i in 0..d {
        for j in 0..d {
            *t.comp_mut(i, j) = partials[i][j].add(&partials[j][i]).scale(0.5);
        }
    }
    t
}

/// Full velocity gradient `(grad F)_ij = dF_i/dx_j`.
pub fn grad_vector(v: &VectorField) -> TensorField {
    let g = *v.grid();
    let d = g.dims();
    let mut t = TensorField::zeros(g);
    for i in 0..d {
        for j in 0..d {
            *t.comp_mut(i, j) = central(v.comp(i), j);
        }
    }
    t
}

/// Row-wise divergence `(div A)_i = dA_ik/dx_k`.
pub fn div_tensor(t: &TensorField) -> VectorField {
    let g = *t.grid();
    let d = g.dims();
    let comps = (0..d)
        .map(|i| {
            let mut s = ScalarField::zeros(g);
            for k in 0..d {
                s = s.add(&central(t.comp(i, k), k));
            }
            s
        })
        .collect();
    VectorField::from_components(comps).expect("consistent components")
}

/// Forward differences, component `d` located at face `i + 1/2` along `d`.
pub fn grad_face(f: &ScalarField) -> VectorField {
    let comps = (0..f.grid().dims()).map(|d| forward(f, d)).collect();
    VectorField::from_components(comps).expect("consistent components")
}

/// Divergence of a face-located flux back to cell centers.
pub fn div_face(v: &VectorField) -> ScalarField {
    let mut out = ScalarField::zeros(*v.grid());
    for d in 0..v.dims() {
        out = out.add(&backward(v.comp(d), d));
    }
    out
}

/// Compact Laplacian `div_face(grad_face f)`.
pub fn laplacian_compact(f: &ScalarField) -> ScalarField {
    div_face(&grad_face(f))
}

/// Arithmetic average of the two cells adjacent to each face.
pub fn face_average(f: &ScalarField) -> VectorField {
    let g = *f.grid();
    let src = f.data();
    let comps = (0..g.dims())
        .map(|d| {
            let data = (0..g.len())
                .map(|n| 0.5 * (src[n] + src[g.neighbor(n, d, 1)]))
                .collect();
            ScalarField::from_vec(g, data).expect("same grid")
        })
        .collect();
    VectorField::from_components(comps).expect("consistent components")
}

/// Normal face velocities: component `d` of a cell field averaged onto the
/// face `i + 1/2` along axis `d`.
pub fn face_normal(v: &VectorField) -> VectorField {
    let g = *v.grid();
    let comps = (0..v.dims())
        .map(|d| {
            let src = v.comp(d).data();
            let data = (0..g.len())
                .map(|n| 0.5 * (src[n] + src[g.neighbor(n, d, 1)]))
                .collect();
            ScalarField::from_vec(g, data).expect("same grid")
        })
        .collect();
    VectorField::from_components(comps).expect("consistent components")
}

/// Average of a face field back onto cell centers.
pub fn face_to_center(v: &VectorField) -> VectorField {
    let g = *v.grid();
    let comps = (0..v.dims())
        .map(|d| {
            let src = v.comp(d).data();
            let data = (0..g.len())
                .map(|n| 0.5 * (src[n] + src[g.neighbor(n, d, -1)]))
                .collect();
            ScalarField::from_vec(g, data).expect("same grid")
        })
        .collect();
    VectorField::from_components(comps).expect("consistent components")
}

/// Cell average of the squared face differences along each axis:
/// `sum_d ((D+ f)^2 + (D- f)^2)/2`. Summed over cells it equals the face sum
/// of `|grad_face f|^2`.
pub fn face_gradient_sq(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let mut out = ScalarField::zeros(g);
    for d in 0..g.dims() {
        let fw = forward(f, d);
        let src = fw.data();
        let data: Vec<f64> = (0..g.len())
            .map(|n| {
                let a = src[n];
                let b = src[g.neighbor(n, d, -1)];
                0.5 * (a * a + b * b)
            })
            .collect();
        out = out.add(&ScalarField::from_vec(g, data).expect("same grid"));
    }
    out
}

/// Cell-volume-weighted sum.
pub fn integrate(f: &ScalarField) -> f64 {
    f.sum() * f.grid().cell_volume()
}

/// `sum(a * b) * cell volume`, failing on grid mismatch.
pub fn inner(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    a.same_grid(b)?;
    Ok(a.dot(b) * a.grid().cell_volume())
}

pub fn check_grids(fields: &[&ScalarField]) -> Result<Grid> {
    let g = *fields.first().ok_or(Error::GridMismatch)?.grid();
    if fields.iter().any(|f| *f.grid() != g) {
        return Err(Error::GridMismatch);
    }
    Ok(g)
}

/// Brute-force Fréchet derivative: central perturbation of each cell value,
/// scaled by `1/(2 h cell_volume)`.
pub fn variational_derivative_fd(
    energy: &dyn Fn(&ScalarField) -> f64,
    f: &ScalarField,
    h: f64,
) -> ScalarField {
    let vol = f.grid().cell_volume();
    let mut work = f.clone();
    let mut out = ScalarField::zeros(*f.grid());
    for n in 0..f.len() {
        let x = f[n];
        work[n] = x + h;
        let ep = energy(&work);
        work[n] = x - h;
        let em = energy(&work);
        work[n] = x;
        out[n] = (ep - em) / (2.0 * h * vol);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn wavy(g: Grid) -> ScalarField {
        ScalarField::from_fn(g, |x, y| {
            (2.0 * PI * x).sin() + 0.3 * (2.0 * PI * (x + 2.0 * y)).cos()
        })
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let g = Grid::unit_square(8).unwrap();
        let f = ScalarField::constant(g, 3.5);
        assert_eq!(grad(&f).max_norm(), 0.0);
        assert_eq!(laplacian(&f).max_abs(), 0.0);
        assert_eq!(laplacian_compact(&f).max_abs(), 0.0);
    }

    #[test]
    fn sine_laplacian_converges_second_order() {
        let mut errs = vec![];
        for n in [32, 64, 128] {
            let g = Grid::new_1d(n, 1.0).unwrap();
            let f = ScalarField::from_fn(g, |x, _| (2.0 * PI * x).sin());
            let exact = f.scale(-(2.0 * PI).powi(2));
            errs.push(laplacian(&f).sub(&exact).max_abs());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 1.95, "order {order}");
        }
    }

    #[test]
    fn face_pair_is_adjoint() {
        let g = Grid::new_2d(12, 8, 1.0, 0.7).unwrap();
        let f = wavy(g);
        let v = VectorField::from_fn(g, |x, y| [(3.0 * x).cos() + y, (x * y).sin()]);
        let lhs = f.dot(&div_face(&v));
        let rhs = -grad_face(&f).dot(&v).sum();
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn integrate_unit_constant() {
        let g = Grid::unit_square(6).unwrap();
        assert!((integrate(&ScalarField::constant(g, 1.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fd_derivative_of_quadratic() {
        let g = Grid::new_1d(16, 2.0).unwrap();
        let f = wavy(g);
        let e = |x: &ScalarField| integrate(&x.mul(x)) * 0.5;
        let d = variational_derivative_fd(&e, &f, 1e-4);
        assert!(d.sub(&f).max_abs() < 1e-9);
    }
}
