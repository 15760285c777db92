//! Time stepping of the volume-averaged formulation.
//!
//! One step runs:
//!
//! 1. a linear implicit Cahn-Hilliard solve for `(phi, mu)` with the stabilized
//!    splitting `mu = (sigma/eps)(W'(phi_n) + S (phi - phi_n)) - sigma eps lap phi`,
//!    coefficients lagged at `phi_n` and the phase equation kept in
//!    conservative form `d_t phi + div(phi u + h^u) = zeta gamma`;
//! 2. an explicit predictor for the momentum `q = rho u + Jtilde`;
//! 3. a variable-coefficient projection onto `div u = beta gamma`.
//!
//! The mass-averaged formulation is not stepped. It is recovered through
//! `v = u + Jtilde/rho` and certified by the residuals in [`residuals`].

mod model_h;
pub mod residuals;
mod state;

pub use model_h::{ModelH, ModelHState};
pub use residuals::{
    lt_residual, reconstruct_v_form, shokrpour_pressure, vform_residuals, LtResiduals, VForm,
    VFormResiduals,
};
pub use state::State;

use crate::constitutive::{self, ConstitutiveParams};
use crate::energy::{self, Choice, EnergyParams, EnergyReport};
use crate::error::{Error, Result};
use crate::fields::ops::{
    self, div_face, div_tensor, face_average, face_normal, face_to_center, grad_face,
};
use crate::fields::{Fourier, Grid, ScalarField, TensorField, VectorField};
use crate::linalg::{pcg, CgOptions, Nullspace};
use crate::mixture::MixtureConstants;

/// Physical parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub k: MixtureConstants,
    pub energy: EnergyParams,
    pub constitutive: ConstitutiveParams,
    /// Gravitational acceleration along the last axis (force `-rho g e_last`).
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub cfl: f64,
    /// Stabilization constant `S` of the splitting; needs `S >= max|W''|/2`.
    pub stabilization: f64,
    pub linear_tol: f64,
    pub max_iter: usize,
    /// Allowed `|phi| - 1` before a step is rejected.
    pub overshoot_tol: f64,
    /// `false` freezes the velocity and solves only the phase subsystem.
    pub evolve_flow: bool,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            cfl: 0.4,
            stabilization: 2.0,
            linear_tol: 1e-10,
            max_iter: 5000,
            overshoot_tol: 0.05,
            evolve_flow: true,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::param(
                "cfl",
                format!("must lie in (0, 1], got {}", self.cfl),
            ));
        }
        if !(self.stabilization.is_finite() && self.stabilization >= 0.0) {
            return Err(Error::param(
                "S",
                format!("must be >= 0, got {}", self.stabilization),
            ));
        }
        if !(self.linear_tol > 0.0 && self.linear_tol < 1.0) {
            return Err(Error::param(
                "linear_tol",
                format!("must lie in (0, 1), got {}", self.linear_tol),
            ));
        }
        if !(self.overshoot_tol.is_finite() && self.overshoot_tol >= 0.0) {
            return Err(Error::param("overshoot_tol", "must be >= 0"));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter", "must be positive"));
        }
        Ok(())
    }
}

/// Per-step diagnostics, all evaluated on the new state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub energy: EnergyReport,
    pub mass: f64,
    pub phase: f64,
    /// `max |div_face(u_face) - beta gamma|`.
    pub div_residual: f64,
    /// RMS of the mass-averaged phase-equation residual on reconstructed fields.
    pub vform_residual: f64,
    /// `(int phi_{n+1} - int phi_n)/dt`.
    pub phase_rate: f64,
    /// `int zeta gamma` with `gamma` re-evaluated from the new state.
    pub source_integral: f64,
    pub overshoot: f64,
    pub ch_iterations: usize,
    pub poisson_iterations: usize,
}

pub struct Solver {
    grid: Grid,
    physics: Physics,
    numerics: Numerics,
    fourier: Fourier,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("grid", &self.grid)
            .field("physics", &self.physics)
            .field("numerics", &self.numerics)
            .finish()
    }
}

/// Unit vector of gravity scaled by `-g`, along the last axis.
fn gravity_force(rho: &ScalarField, g: f64) -> VectorField {
    let grid = *rho.grid();
    let mut f = VectorField::zeros(grid);
    if g != 0.0 {
        *f.comp_mut(grid.dims() - 1) = rho.scale(-g);
    }
    f
}

/// Right-hand side of the divergence constraint.
enum Source<'a> {
    Given(&'a ScalarField),
    Implicit {
        m: &'a ScalarField,
        mu: &'a ScalarField,
    },
}

struct Projected {
    u: VectorField,
    u_face: VectorField,
    p: ScalarField,
    iterations: usize,
}

impl Solver {
    pub fn new(grid: Grid, physics: Physics, numerics: Numerics) -> Result<Self> {
        physics.constitutive.validate(grid.dims())?;
        numerics.validate()?;
        if !physics.g.is_finite() {
            return Err(Error::param("g", "must be finite"));
        }
        Ok(Solver {
            grid,
            physics,
            numerics,
            fourier: Fourier::new(grid),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn physics(&self) -> &Physics {
        &self.physics
    }

    pub fn numerics(&self) -> &Numerics {
        &self.numerics
    }

    fn density(&self, phi: &ScalarField) -> ScalarField {
        let k = self.physics.k;
        phi.map(|x| k.density_linear(x))
    }

    fn check_phase(&self, phi: &ScalarField) -> Result<()> {
        let tol = self.numerics.overshoot_tol;
        match phi
            .data()
            .iter()
            .find(|x| !x.is_finite() || x.abs() > 1.0 + tol)
        {
            Some(&value) => Err(Error::OutOfRange { value, tol }),
            None => Ok(()),
        }
    }

    fn cg_options(&self, label: &'static str, nullspace: Nullspace) -> CgOptions {
        CgOptions {
            tol: self.numerics.linear_tol,
            max_iter: self.numerics.max_iter,
            nullspace,
            label,
        }
    }

    /// Level making `int m (mu + alpha (p + level)) = 0`; zero when pressure
    /// does not enter the mass flux.
    fn explicit_level(&self, phi: &ScalarField, mu: &ScalarField, p: &ScalarField) -> f64 {
        let k = self.physics.k;
        let m = constitutive::reaction_mobility(phi, &self.physics.constitutive);
        let msum = m.sum();
        if k.alpha == 0.0 || msum <= 0.0 {
            return 0.0;
        }
        -m.dot(&mu.zip_map(p, |a, b| a + k.alpha * b)) / (k.alpha * msum)
    }

    /// Volume-frame face flux `h^u = -(rho/{rho}) M grad(mu + alpha p)` on faces.
    fn face_flux(&self, phi: &ScalarField, drive: &ScalarField) -> VectorField {
        let mf = face_average(&constitutive::mobility_u(
            phi,
            &self.physics.constitutive,
            &self.physics.k,
        ));
        grad_face(drive).zip_comps(&mf, |g, m| g.mul(m).scale(-1.0))
    }

    fn jtilde_of(&self, h_face: &VectorField) -> VectorField {
        face_to_center(h_face).scale(self.physics.k.jump())
    }

    /// Builds a consistent state from `phi`, a velocity and a pressure: the
    /// chemical potential, fluxes and density are derived, and the velocity is
    /// projected onto the discrete constraint.
    pub fn prepare(&self, phi: ScalarField, u: VectorField, p: ScalarField) -> Result<State> {
        ops::check_grids(&[&phi, u.comp(0), &p])?;
        if *phi.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        self.check_phase(&phi)?;
        let k = self.physics.k;
        let mu = energy::chemical_potential(Choice::PhiVolume, &phi, &self.physics.energy, &k);
        let mut p = p;
        p.remove_mean();
        let p_level = self.explicit_level(&phi, &mu, &p);
        let drive = mu.zip_map(&p, |m, q| m + k.alpha * (q + p_level));
        let gamma = constitutive::reaction_mobility(&phi, &self.physics.constitutive)
            .zip_map(&drive, |m, d| -m * d);
        let jtilde = self.jtilde_of(&self.face_flux(&phi, &drive));
        let rho = self.density(&phi);
        let pr = self.project(&u, &face_normal(&u), &rho, Source::Given(&gamma), 1.0, None)?;
        let (u, u_face) = (pr.u, pr.u_face);
        Ok(State {
            t: 0.0,
            phi,
            u,
            u_face,
            p,
            p_level,
            mu,
            rho,
            jtilde,
            gamma,
        })
    }

    pub fn initial_state(&self, phi: ScalarField, u: VectorField) -> Result<State> {
        let p = ScalarField::zeros(self.grid);
        self.prepare(phi, u, p)
    }

    /// Largest step accepted for `state`: advective CFL and explicit viscous limit.
    pub fn max_stable_dt(&self, state: &State) -> f64 {
        if !self.numerics.evolve_flow {
            return f64::INFINITY;
        }
        let h = self.grid.min_spacing();
        let umax = state.u.max_norm().max(state.mass_velocity().max_norm());
        let adv = if umax > 0.0 {
            self.numerics.cfl * h / umax
        } else {
            f64::INFINITY
        };
        let c = &self.physics.constitutive;
        let nu = c.max_viscosity();
        let rho_min = state.rho.min();
        let visc = if nu > 0.0 {
            let spread = 2.0 + c.lambda.abs();
            self.numerics.cfl * rho_min * h * h / (nu * spread * self.grid.dims() as f64)
        } else {
            f64::INFINITY
        };
        adv.min(visc)
    }

    /// Projects `(u, u_face)` so that `div_face(u_face) = beta gamma`.
    ///
    /// The face correction is `w grad_face p` with `w = (dt + lag)/rho_f`,
    /// where `lag` is the implicit pressure part of `Jtilde`. With
    /// `Source::Implicit` the pressure inside `gamma = -m (mu + alpha p)` is the
    /// unknown too; the returned `p` then carries its level (and
    /// `int gamma = 0` follows from the mean of the equation). With
    /// `Source::Given` the returned `p` is mean-free.
    fn project(
        &self,
        u: &VectorField,
        u_face: &VectorField,
        rho: &ScalarField,
        source: Source<'_>,
        dt: f64,
        lag: Option<&VectorField>,
    ) -> Result<Projected> {
        let k = self.physics.k;
        let rho_f = face_average(rho);
        let weight = match lag {
            Some(lag) => lag.zip_comps(&rho_f, |l, r| l.zip_map(r, |l, r| (dt + l) / r)),
            None => rho_f.map_comps(|r| r.map(|r| dt / r)),
        };
        let div_star = div_face(u_face);
        let (rhs, react, nullspace) = match source {
            Source::Given(gamma) => {
                let mut rhs = div_star.sub(&gamma.scale(k.beta)).scale(-1.0);
                rhs.remove_mean();
                (rhs, None, Nullspace::Constants)
            }
            Source::Implicit { m, mu } => {
                let rhs = div_star.add(&m.mul(mu).scale(k.beta)).scale(-1.0);
                let react = m.scale(k.beta * k.alpha);
                if react.sum() > 0.0 {
                    (rhs, Some(react), Nullspace::None)
                } else {
                    let mut rhs = rhs;
                    rhs.remove_mean();
                    (rhs, None, Nullspace::Constants)
                }
            }
        };
        let wbar =
            weight.components().iter().map(|c| c.mean()).sum::<f64>() / self.grid.dims() as f64;
        let rbar = react.as_ref().map_or(0.0, |r| r.mean());
        let fo = &self.fourier;
        let apply = |x: &ScalarField| {
            let lap = div_face(&grad_face(x).zip_comps(&weight, |g, c| g.mul(c))).scale(-1.0);
            match &react {
                Some(r) => lap.add(&r.mul(x)),
                None => lap,
            }
        };
        let precond = |r: &ScalarField| {
            fo.apply_real(r, |mx, my| {
                let e = wbar * fo.compact_laplacian_eig(mx, my) + rbar;
                if e == 0.0 {
                    0.0
                } else {
                    1.0 / e
                }
            })
        };
        let (p, stats) = pcg(
            apply,
            precond,
            &rhs,
            &ScalarField::zeros(self.grid),
            self.cg_options("pressure projection", nullspace),
        )?;
        let corr = grad_face(&p).zip_comps(&weight, |g, c| g.mul(c));
        Ok(Projected {
            u_face: u_face.sub(&corr),
            u: u.sub(&face_to_center(&corr)),
            p,
            iterations: stats.iterations,
        })
    }

    /// Advances `state` by `dt`.
    pub fn step(&self, state: &State, dt: f64) -> Result<(State, StepDiagnostics)> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {dt}")));
        }
        if *state.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let max_dt = self.max_stable_dt(state);
        if dt > max_dt {
            return Err(Error::StepRejected { dt, max_dt });
        }
        let k = self.physics.k;
        let en = self.physics.energy;
        let cp = self.physics.constitutive;
        let phi_n = &state.phi;

        // (1) phase field
        let mob_f = face_average(&constitutive::mobility_u(phi_n, &cp, &k));
        let m_n = constitutive::reaction_mobility(phi_n, &cp);
        let react = m_n.scale(k.zeta);
        let kop = |x: &ScalarField| {
            div_face(&grad_face(x).zip_comps(&mob_f, |g, m| g.mul(m)))
                .scale(-1.0)
                .add(&react.mul(x))
        };
        let s = self.numerics.stabilization;
        let b0 = en.bulk() * s;
        let fo = &self.fourier;
        let b_symbol = |mx: i64, my: i64| b0 + en.gradient() * fo.compact_laplacian_eig(mx, my);
        let b_inv = |x: &ScalarField| fo.apply_real(x, |mx, my| 1.0 / b_symbol(mx, my));
        let mbar =
            mob_f.components().iter().map(|c| c.mean()).sum::<f64>() / self.grid.dims() as f64;
        let rbar = react.mean();
        let precond = |r: &ScalarField| {
            fo.apply_real(r, |mx, my| {
                1.0 / (1.0 / b_symbol(mx, my)
                    + dt * (mbar * fo.compact_laplacian_eig(mx, my) + rbar))
            })
        };
        let apply = |z: &ScalarField| b_inv(z).add(&kop(z).scale(dt));

        let advect = div_face(&face_average(phi_n).zip_comps(&state.u_face, |a, b| a.mul(b)));
        let phi_star = phi_n.sub(&advect.scale(dt));
        let a = phi_n.map(|x| en.bulk() * (en.well.derivative(x) - s * x));
        let p_n = &state.p;
        let base_drive = a.zip_map(p_n, |m, q| m + k.alpha * q);
        let rhs0 = phi_star.sub(&kop(&base_drive).scale(dt));
        let opts = self.cg_options("phase-field solve", Nullspace::None);
        let guess = a.scale(-1.0).add(&state.mu);
        let (z0, st0) = pcg(apply, precond, &rhs0, &guess, opts)?;
        let mut ch_iterations = st0.iterations;
        let msum = m_n.sum();
        let mut level = 0.0;
        let mut z = z0.clone();
        if k.alpha != 0.0 && msum > 0.0 {
            let rhs1 = react.scale(-dt * k.alpha);
            let (z1, st1) = pcg(apply, precond, &rhs1, &ScalarField::zeros(self.grid), opts)?;
            ch_iterations += st1.iterations;
            let num = m_n.dot(&a.add(&z0).zip_map(p_n, |m, q| m + k.alpha * q));
            let den = m_n.dot(&z1.map(|x| x + k.alpha));
            if den.abs() > 1e-300 {
                level = -num / den;
                z = z0.add(&z1.scale(level));
            }
        }
        let mu = a.add(&z);
        let drive = mu.zip_map(p_n, |m, q| m + k.alpha * (q + level));
        let mut gamma = m_n.zip_map(&drive, |m, d| -m * d);
        let h_face = grad_face(&drive).zip_comps(&mob_f, |g, m| g.mul(m).scale(-1.0));
        let phi = phi_star
            .sub(&div_face(&h_face).scale(dt))
            .add(&gamma.scale(dt * k.zeta));
        self.check_phase(&phi)?;
        let rho = self.density(&phi);
        let mut jtilde = self.jtilde_of(&h_face);

        // (2) momentum predictor and (3) projection
        let (u, u_face, p, poisson_iterations) = if self.numerics.evolve_flow {
            let rho_n = &state.rho;
            let q_n = state.u.scale_by(rho_n).add(&state.jtilde);
            let v_n = state.mass_velocity();
            let conv = TensorField::outer(
                1.0,
                &q_n,
                &q_n.map_comps(|c| c.zip_map(rho_n, |q, r| q / r)),
            );
            let stress = constitutive::korteweg_stress(&phi, &en)
                .add(&constitutive::viscous_stress(&v_n, phi_n, &cp))
                .sub(&conv);
            let force = div_tensor(&stress).add(&gravity_force(rho_n, self.physics.g));
            let q_star = q_n.add(&force.scale(dt));
            // The pressure part of Jtilde is taken at the new time inside the
            // projection; lagging it feeds back on p and blows up for small dt.
            let jt_mu =
                self.jtilde_of(&grad_face(&mu).zip_comps(&mob_f, |g, m| g.mul(m).scale(-1.0)));
            let lag = mob_f.scale(-k.jump() * k.alpha);
            let u_star = q_star
                .sub(&jt_mu)
                .map_comps(|c| c.zip_map(&rho, |q, r| q / r));
            // isotropic capillary part (mu phi - Psi) goes through the face gradient like p
            let iso = mu.mul(&phi).sub(&energy::gl_energy_density(&phi, &en));
            let inv_rho_f = face_average(&rho).map_comps(|c| c.map(|r| 1.0 / r));
            let iso_corr = grad_face(&iso)
                .zip_comps(&inv_rho_f, |g, c| g.mul(c))
                .scale(dt);
            let u_star = u_star.sub(&face_to_center(&iso_corr));
            let uf_star = face_normal(
                &q_star
                    .sub(&jt_mu)
                    .map_comps(|c| c.zip_map(&rho, |q, r| q / r)),
            )
            .sub(&iso_corr);
            let lag = (k.alpha != 0.0).then_some(&lag);
            let pr = self.project(
                &u_star,
                &uf_star,
                &rho,
                Source::Implicit { m: &m_n, mu: &mu },
                dt,
                lag,
            )?;
            let mut p = pr.p;
            if k.alpha != 0.0 {
                // pressure at the new time in Jtilde and gamma
                let drive_new = mu.zip_map(&p, |m, q| m + k.alpha * q);
                jtilde = self.jtilde_of(
                    &grad_face(&drive_new).zip_comps(&mob_f, |g, m| g.mul(m).scale(-1.0)),
                );
                gamma = m_n.zip_map(&drive_new, |m, d| -m * d);
                level = p.mean();
                p.remove_mean();
            }
            (pr.u, pr.u_face, p, pr.iterations)
        } else {
            (state.u.clone(), state.u_face.clone(), state.p.clone(), 0)
        };

        let next = State {
            t: state.t + dt,
            phi,
            u,
            u_face,
            p,
            p_level: level,
            mu,
            rho,
            jtilde,
            gamma,
        };
        if !next.is_finite() {
            return Err(Error::LinearSolver {
                solver: "step produced non-finite values",
                history: vec![f64::NAN],
            });
        }
        let diag = self.diagnostics(state, &next, dt, ch_iterations, poisson_iterations);
        Ok((next, diag))
    }

    fn diagnostics(
        &self,
        prev: &State,
        next: &State,
        dt: f64,
        ch_iterations: usize,
        poisson_iterations: usize,
    ) -> StepDiagnostics {
        let k = self.physics.k;
        let div_residual = div_face(&next.u_face)
            .sub(&next.gamma.scale(k.beta))
            .max_abs();
        let vform = vform_residuals(prev, next, dt, &self.physics);
        StepDiagnostics {
            energy: next.energy(&self.physics),
            mass: next.mass(),
            phase: next.phase(),
            div_residual,
            vform_residual: vform.phase,
            phase_rate: (next.phase() - prev.phase()) / dt,
            source_integral: k.zeta * ops::integrate(&self.recomputed_gamma(next)),
            overshoot: next.overshoot(),
            ch_iterations,
            poisson_iterations,
        }
    }

    /// `gamma` from the closed-form potential and the pressure of `state`,
    /// without the lag used inside the step.
    pub fn recomputed_gamma(&self, state: &State) -> ScalarField {
        let k = self.physics.k;
        let mu =
            energy::chemical_potential(Choice::PhiVolume, &state.phi, &self.physics.energy, &k);
        let p = state.pressure();
        constitutive::reaction_mobility(&state.phi, &self.physics.constitutive)
            .zip_map(&mu.zip_map(&p, |m, q| m + k.alpha * q), |m, d| -m * d)
    }

    /// Runs `steps` steps of size `dt`, handing each diagnostics record to `observe`.
    pub fn run(
        &self,
        mut state: State,
        dt: f64,
        steps: usize,
        mut observe: impl FnMut(&State, &StepDiagnostics),
    ) -> Result<State> {
        for _ in 0..steps {
            let (next, diag) = self.step(&state, dt)?;
            observe(&next, &diag);
            state = next;
        }
        Ok(state)
    }
}
