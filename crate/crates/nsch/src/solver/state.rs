use crate::energy::{total_energy, EnergyReport, Velocity};
use crate::fields::{Grid, ScalarField, VectorField};

use super::Physics;

/// Unknowns of the volume-averaged formulation at one time level.
///
/// `u` lives at cell centers; `u_face` holds the normal face velocities that
/// satisfy the discrete constraint `div_face(u_face) = beta gamma` and carry
/// the phase flux. `p` is stored with zero mean; the level `p_level` is
/// physical only when mass transfer couples to pressure (`alpha != 0`,
/// `m0 > 0`), where it is chosen so that `int gamma = 0` as a periodic box
/// requires.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub phi: ScalarField,
    pub u: VectorField,
    pub u_face: VectorField,
    pub p: ScalarField,
    pub p_level: f64,
    /// phi-volume chemical potential.
    pub mu: ScalarField,
    pub rho: ScalarField,
    /// `Jtilde^u = [rho] h^u` at cell centers.
    pub jtilde: VectorField,
    pub gamma: ScalarField,
}

impl State {
    pub fn grid(&self) -> &Grid {
        self.phi.grid()
    }

    /// Pressure including its level.
    pub fn pressure(&self) -> ScalarField {
        self.p.map(|q| q + self.p_level)
    }

    /// Mass-averaged velocity `v = u + Jtilde/rho`.
    pub fn mass_velocity(&self) -> VectorField {
        self.u.add(
            &self
                .jtilde
                .map_comps(|c| c.zip_map(&self.rho, |j, r| j / r)),
        )
    }

    pub fn mass(&self) -> f64 {
        crate::fields::integrate(&self.rho)
    }

    pub fn phase(&self) -> f64 {
        crate::fields::integrate(&self.phi)
    }

    pub fn energy(&self, physics: &Physics) -> EnergyReport {
        total_energy(
            &self.phi,
            Velocity::Volume {
                u: &self.u,
                jtilde: &self.jtilde,
            },
            &physics.energy,
            &physics.k,
            physics.g,
            self.t,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite()
            && self.u.is_finite()
            && self.u_face.is_finite()
            && self.p.is_finite()
            && self.mu.is_finite()
            && self.p_level.is_finite()
    }

    /// Largest `|phi| - 1`, negative when strictly inside.
    pub fn overshoot(&self) -> f64 {
        self.phi.max_abs() - 1.0
    }

    /// Periodic shift of every field (used to check equivariance).
    pub fn shifted(&self, di: isize, dj: isize) -> State {
        State {
            t: self.t,
            phi: self.phi.shifted(di, dj),
            u: self.u.shifted(di, dj),
            u_face: self.u_face.shifted(di, dj),
            p: self.p.shifted(di, dj),
            p_level: self.p_level,
            mu: self.mu.shifted(di, dj),
            rho: self.rho.shifted(di, dj),
            jtilde: self.jtilde.shifted(di, dj),
            gamma: self.gamma.shifted(di, dj),
        }
    }
}
