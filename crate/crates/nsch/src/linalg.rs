//! Preconditioned conjugate gradients on grid fields.
//!
//! Both solves in a time step are symmetric positive (semi)definite in the
//! plain cell-sum inner product. The pressure operator has the constants as
//! its kernel; `Nullspace::Constants` keeps every iterate mean-free so CG
//! works on the complement.

use crate::error::{Error, Result};
use crate::fields::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nullspace {
    None,
    Constants,
}

#[derive(Debug, Clone, Copy)]
pub struct CgOptions {
    /// Relative residual target `|r| / |b|`.
    pub tol: f64,
    pub max_iter: usize,
    pub nullspace: Nullspace,
    /// Name reported on failure.
    pub label: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Relative residual after each iteration, starting with the initial one.
    pub history: Vec<f64>,
}

impl SolveStats {
    pub fn final_residual(&self) -> f64 {
        self.history.last().copied().unwrap_or(0.0)
    }
}

fn deflate(f: &mut ScalarField, ns: Nullspace) {
    if ns == Nullspace::Constants {
        f.remove_mean();
    }
}

/// Solves `A x = b` starting from `x0`.
pub fn pcg(
    apply: impl Fn(&ScalarField) -> ScalarField,
    precond: impl Fn(&ScalarField) -> ScalarField,
    b: &ScalarField,
    x0: &ScalarField,
    opts: CgOptions,
) -> Result<(ScalarField, SolveStats)> {
    b.same_grid(x0)?;
    let mut b = b.clone();
    deflate(&mut b, opts.nullspace);
    let bnorm = b.dot(&b).sqrt();
    let mut x = x0.clone();
    deflate(&mut x, opts.nullspace);
    if bnorm == 0.0 {
        return Ok((
            ScalarField::zeros(*b.grid()),
            SolveStats {
                iterations: 0,
                history: vec![0.0],
            },
        ));
    }
    let mut r = b.sub(&apply(&x));
    deflate(&mut r, opts.nullspace);
    let mut history = vec![r.dot(&r).sqrt() / bnorm];
    if history[0] <= opts.tol {
        return Ok((
            x,
            SolveStats {
                iterations: 0,
                history,
            },
        ));
    }
    let mut z = precond(&r);
    deflate(&mut z, opts.nullspace);
    let mut d = z.clone();
    let mut rz = r.dot(&z);
    for it in 1..=opts.max_iter {
        let ad = apply(&d);
        let dad = d.dot(&ad);
        if dad.is_nan() || dad <= 0.0 {
            return Err(Error::LinearSolver {
                solver: opts.label,
                history,
            });
        }
        let a = rz / dad;
        x.axpy(a, &d);
        r.axpy(-a, &ad);
        deflate(&mut r, opts.nullspace);
        let rel = r.dot(&r).sqrt() / bnorm;
        history.push(rel);
        if !rel.is_finite() {
            break;
        }
        if rel <= opts.tol {
            deflate(&mut x, opts.nullspace);
            return Ok((
                x,
                SolveStats {
                    iterations: it,
                    history,
                },
            ));
        }
        z = precond(&r);
        deflate(&mut z, opts.nullspace);
        let rz_new = r.dot(&z);
        let beta = rz_new / rz;
        rz = rz_new;
        d = z.add(&d.scale(beta));
    }
    Err(Error::LinearSolver {
        solver: opts.label,
        history,
    })
}
