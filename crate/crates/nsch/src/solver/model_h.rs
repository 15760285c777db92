//! Reference stepper for the classical matched-density model:
//!
//! ```text
//! rho d_t u + rho (u.grad) u - div(2 nu D) + grad p = -sigma eps div(grad c (x) grad c)
//! div u = 0
//! d_t c + u.grad c = div(m(c) grad mu)
//! mu = (sigma/eps) W'(c) - sigma eps lap c
//! ```
//!
//! Written directly against the grid operators, without the mixture machinery,
//! to serve as an oracle for the unified stepper at `rho1 = rho2`, `m0 = 0`,
//! `lambda = 0`. It uses the same operator choices (conservative advection,
//! stabilized splitting, face-based projection) so the two agree to solver
//! tolerance. Its pressure absorbs the isotropic capillary term.

use crate::error::Result;
use crate::fields::ops::{
    div_face, div_tensor, face_average, face_normal, face_to_center, grad, grad_face, sym_grad,
};
use crate::fields::{Fourier, Grid, ScalarField, TensorField, VectorField};
use crate::linalg::{pcg, CgOptions, Nullspace};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelHState {
    pub t: f64,
    pub c: ScalarField,
    pub u: VectorField,
    pub u_face: VectorField,
    pub p: ScalarField,
    pub mu: ScalarField,
}

pub struct ModelH {
    pub grid: Grid,
    pub rho: f64,
    pub sigma: f64,
    pub epsilon: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Mobility `m(c) = m_big (1 - c^2)_+`.
    pub m_big: f64,
    pub g: f64,
    pub stabilization: f64,
    pub tol: f64,
    fourier: Fourier,
}

impl ModelH {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        grid: Grid,
        rho: f64,
        sigma: f64,
        epsilon: f64,
        nu: (f64, f64),
        m_big: f64,
        g: f64,
        stabilization: f64,
        tol: f64,
    ) -> Self {
        ModelH {
            grid,
            rho,
            sigma,
            epsilon,
            nu1: nu.0,
            nu2: nu.1,
            m_big,
            g,
            stabilization,
            tol,
            fourier: Fourier::new(grid),
        }
    }

    fn opts(&self, label: &'static str, nullspace: Nullspace) -> CgOptions {
        CgOptions {
            tol: self.tol,
            max_iter: 5000,
            nullspace,
            label,
        }
    }

    /// `-div_face(grad_face q / rho) = -div_face(w)/dt`, then `w -= dt grad q / rho`.
    fn project(
        &self,
        u: &VectorField,
        w: &VectorField,
        dt: f64,
    ) -> Result<(VectorField, VectorField, ScalarField)> {
        let fo = &self.fourier;
        let r = self.rho;
        let mut rhs = div_face(w).scale(-1.0 / dt);
        rhs.remove_mean();
        let (q, _) = pcg(
            |x: &ScalarField| div_face(&grad_face(x)).scale(-1.0 / r),
            |b: &ScalarField| {
                fo.apply_real(b, |mx, my| {
                    let e = fo.compact_laplacian_eig(mx, my);
                    if e == 0.0 {
                        0.0
                    } else {
                        r / e
                    }
                })
            },
            &rhs,
            &ScalarField::zeros(self.grid),
            self.opts("model H projection", Nullspace::Constants),
        )?;
        let corr = grad_face(&q).scale(dt / r);
        Ok((u.sub(&face_to_center(&corr)), w.sub(&corr), q))
    }

    pub fn initial_state(&self, c: ScalarField, u: VectorField) -> Result<ModelHState> {
        let (se, s) = (self.sigma * self.epsilon, self.sigma / self.epsilon);
        let lap = div_face(&grad_face(&c));
        let mu = c.map(|x| s * x * (x * x - 1.0)).sub(&lap.scale(se));
        let w = face_normal(&u);
        let (u, u_face, _) = self.project(&u, &w, 1.0)?;
        Ok(ModelHState {
            t: 0.0,
            c,
            u,
            u_face,
            p: ScalarField::zeros(self.grid),
            mu,
        })
    }

    pub fn step(&self, st: &ModelHState, dt: f64) -> Result<ModelHState> {
        let fo = &self.fourier;
        let (se, s) = (self.sigma * self.epsilon, self.sigma / self.epsilon);
        let stab = self.stabilization;
        let m_big = self.m_big;
        let mf = face_average(&st.c.map(|x| m_big * (1.0 - x * x).max(0.0)));
        let kop =
            |x: &ScalarField| div_face(&grad_face(x).zip_comps(&mf, |g, m| g.mul(m))).scale(-1.0);
        let bsym = |mx: i64, my: i64| s * stab + se * fo.compact_laplacian_eig(mx, my);
        let mbar = mf.components().iter().map(|c| c.mean()).sum::<f64>() / self.grid.dims() as f64;
        let a = st.c.map(|x| s * (x * (x * x - 1.0) - stab * x));
        let c_star = st
            .c
            .sub(&div_face(&face_average(&st.c).zip_comps(&st.u_face, |a, b| a.mul(b))).scale(dt));
        let rhs = c_star.sub(&kop(&a).scale(dt));
        let (z, _) = pcg(
            |x: &ScalarField| {
                fo.apply_real(x, |mx, my| 1.0 / bsym(mx, my))
                    .add(&kop(x).scale(dt))
            },
            |r: &ScalarField| {
                fo.apply_real(r, |mx, my| {
                    1.0 / (1.0 / bsym(mx, my) + dt * mbar * fo.compact_laplacian_eig(mx, my))
                })
            },
            &rhs,
            &st.mu.sub(&a),
            self.opts("model H phase solve", Nullspace::None),
        )?;
        let mu = a.add(&z);
        let c = c_star.sub(&kop(&mu).scale(dt));

        let r = self.rho;
        let nu = st.c.map(|x| {
            let w = 0.5 * (1.0 + x.clamp(-1.0, 1.0));
            w * self.nu1 + (1.0 - w) * self.nu2
        });
        let gc = grad(&c);
        let stress = sym_grad(&st.u)
            .scale(2.0)
            .scale_by(&nu)
            .sub(&TensorField::outer(se, &gc, &gc))
            .sub(&TensorField::outer(r, &st.u, &st.u));
        let mut force = div_tensor(&stress);
        if self.g != 0.0 {
            let last = self.grid.dims() - 1;
            *force.comp_mut(last) = force.comp(last).map(|f| f - r * self.g);
        }
        let u_star = st.u.add(&force.scale(dt / r));
        let w = face_normal(&u_star);
        let (u, u_face, p) = self.project(&u_star, &w, dt)?;
        Ok(ModelHState {
            t: st.t + dt,
            c,
            u,
            u_face,
            p,
            mu,
        })
    }
}
