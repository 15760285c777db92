//! Ginzburg-Landau free energy, the four chemical potentials and the
//! pressure transforms between modeling choices.
//!
//! The discrete free energy uses face differences for the gradient term,
//! `E = sum_cells (sigma/eps) W(phi) vol + sum_faces (sigma eps / 2)|D phi|^2 vol`,
//! and every closed-form chemical potential below is the exact gradient of its
//! own discrete functional. Volume choices differentiate with respect to the
//! volume measure; mass choices with respect to `rho dx` with `rho` frozen.
//!
//! In `c`, the same physical energy is written `Psi(c, grad c) = Psi(phi(c), phi'(c) grad c)`
//! and discretized directly in `c`, so `c`-based and `phi`-based potentials agree
//! only up to second-order truncation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fields::ops::{self, face_average, face_gradient_sq, grad_face};
use crate::fields::{ScalarField, VectorField};
use crate::mixture::{c_from_phi, phi_from_c, phi_prime, phi_second, MixtureConstants};

/// Homogeneous part of the free energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Well {
    /// `W(x) = (1 - x^2)^2 / 4`
    #[default]
    Quartic,
}

impl Well {
    #[inline]
    pub fn value(self, x: f64) -> f64 {
        match self {
            Well::Quartic => {
                let s = 1.0 - x * x;
                0.25 * s * s
            }
        }
    }

    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Well::Quartic => x * (x * x - 1.0),
        }
    }

    /// Bound on `|W''|` over [-1, 1].
    pub fn curvature_bound(self) -> f64 {
        match self {
            Well::Quartic => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Well::Quartic => "quartic",
        }
    }
}

impl FromStr for Well {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quartic" => Ok(Well::Quartic),
            other => Err(format!("unknown well `{other}` (expected quartic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    pub sigma: f64,
    pub epsilon: f64,
    pub well: Well,
}

impl EnergyParams {
    pub fn new(sigma: f64, epsilon: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::param(
                "sigma",
                format!("must be positive, got {sigma}"),
            ));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::param(
                "epsilon",
                format!("must be positive, got {epsilon}"),
            ));
        }
        Ok(EnergyParams {
            sigma,
            epsilon,
            well: Well::Quartic,
        })
    }

    /// Coefficient `sigma/eps` of the well.
    pub fn bulk(&self) -> f64 {
        self.sigma / self.epsilon
    }

    /// Coefficient `sigma eps` of the gradient term.
    pub fn gradient(&self) -> f64 {
        self.sigma * self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyReport {
    pub free: f64,
    pub kinetic: f64,
    pub gravitational: f64,
    pub total: f64,
    pub time: f64,
}

/// Order parameter and free-energy measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    PhiVolume,
    PhiMass,
    CVolume,
    CMass,
}

impl Choice {
    pub const ALL: [Choice; 4] = [
        Choice::PhiVolume,
        Choice::PhiMass,
        Choice::CVolume,
        Choice::CMass,
    ];

    pub fn uses_c(self) -> bool {
        matches!(self, Choice::CVolume | Choice::CMass)
    }

    pub fn is_mass(self) -> bool {
        matches!(self, Choice::PhiMass | Choice::CMass)
    }

    pub fn name(self) -> &'static str {
        match self {
            Choice::PhiVolume => "phi-volume",
            Choice::PhiMass => "phi-mass",
            Choice::CVolume => "c-volume",
            Choice::CMass => "c-mass",
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Choice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Choice::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownChoice(s.to_string()))
    }
}

/// A chemical potential together with the order parameter and pressure of the
/// same modeling choice.
#[derive(Debug, Clone, PartialEq)]
pub struct ChemState {
    pub choice: Choice,
    /// `phi` for phi-based choices, `c` for c-based ones.
    pub order: ScalarField,
    pub mu: ScalarField,
    pub p: ScalarField,
}

/// `Psi = (sigma/eps) W(phi) + (sigma eps / 2)|grad phi|^2` per cell.
pub fn gl_energy_density(phi: &ScalarField, params: &EnergyParams) -> ScalarField {
    let w = phi.map(|x| params.bulk() * params.well.value(x));
    w.add(&face_gradient_sq(phi).scale(0.5 * params.gradient()))
}

/// `phi` field converted to `c`, or back.
pub fn c_field(phi: &ScalarField, k: &MixtureConstants) -> ScalarField {
    phi.map(|x| c_from_phi(x.clamp(-1.0, 1.0), k))
}

pub fn phi_field(c: &ScalarField, k: &MixtureConstants) -> ScalarField {
    c.map(|x| phi_from_c(x.clamp(-1.0, 1.0), k))
}

pub fn density_field(phi: &ScalarField, k: &MixtureConstants) -> ScalarField {
    phi.map(|x| k.density(x))
}

/// Face weights `(phi'(c_L)^2 + phi'(c_R)^2)/2` of the c-gradient energy.
fn c_face_weights(c: &ScalarField, k: &MixtureConstants) -> VectorField {
    face_average(&c.map(|x| {
        let p = phi_prime(x, k);
        p * p
    }))
}

fn c_gradient_density(c: &ScalarField, k: &MixtureConstants) -> ScalarField {
    let g = *c.grid();
    let weighted = grad_face(c).zip_comps(&c_face_weights(c, k), |dc, a| dc.mul(dc).mul(a));
    let mut out = ScalarField::zeros(g);
    for d in 0..g.dims() {
        let src = weighted.comp(d).data();
        let data: Vec<f64> = (0..g.len())
            .map(|n| 0.5 * (src[n] + src[g.neighbor(n, d, -1)]))
            .collect();
        out = out.add(&ScalarField::from_vec(g, data).expect("same grid"));
    }
    out
}

/// Free energy per unit volume in the variables of `choice`.
///
/// For phi-based choices `order` is `phi`; for c-based choices it is `c`.
pub fn volume_energy_density(
    choice: Choice,
    order: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> ScalarField {
    if choice.uses_c() {
        let bulk =
            order.map(|c| params.bulk() * params.well.value(phi_from_c(c.clamp(-1.0, 1.0), k)));
        bulk.add(&c_gradient_density(order, k).scale(0.5 * params.gradient()))
    } else {
        gl_energy_density(order, params)
    }
}

/// Density of the measure the choice differentiates against: 1 or `rho`.
pub fn measure(choice: Choice, order: &ScalarField, k: &MixtureConstants) -> ScalarField {
    match choice {
        Choice::PhiVolume | Choice::CVolume => ScalarField::constant(*order.grid(), 1.0),
        Choice::PhiMass => density_field(order, k),
        Choice::CMass => density_field(&phi_field(order, k), k),
    }
}

/// Specific free energy `psi = Psi / rho` of a mass-based choice.
pub fn specific_energy(
    choice: Choice,
    order: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> ScalarField {
    let rho = if choice.uses_c() {
        density_field(&phi_field(order, k), k)
    } else {
        density_field(order, k)
    };
    volume_energy_density(choice, order, params, k).zip_map(&rho, |a, r| a / r)
}

/// Total free energy `int Psi` (equivalently `int rho psi`).
pub fn free_energy(
    choice: Choice,
    order: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> f64 {
    ops::integrate(&volume_energy_density(choice, order, params, k))
}

/// Closed-form chemical potential of `choice`.
pub fn chemical_potential(
    choice: Choice,
    order: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> ScalarField {
    let s = params.gradient();
    match choice {
        Choice::PhiVolume => {
            let bulk = order.map(|x| params.bulk() * params.well.derivative(x));
            bulk.sub(&ops::laplacian_compact(order).scale(s))
        }
        Choice::PhiMass => {
            let rho = density_field(order, k);
            let psi_vol = gl_energy_density(order, params);
            // d psi / d phi with psi = Psi / rho(phi)
            let dpsi = order
                .map(|x| params.bulk() * params.well.derivative(x))
                .zip_map(&rho, |a, r| a / r)
                .sub(&psi_vol.zip_map(&rho, |a, r| a * k.jump() / (r * r)));
            // rho * d psi / d grad phi on faces
            let rho_f = face_average(&rho);
            let flux = grad_face(order)
                .zip_comps(&rho_f, |g, r| g.zip_map(r, |g, r| s * g / r))
                .zip_comps(&rho_f, |f, r| f.mul(r));
            dpsi.sub(&ops::div_face(&flux).zip_map(&rho, |d, r| d / r))
        }
        Choice::CVolume => c_volume_mu(order, params, k),
        Choice::CMass => {
            let rho = density_field(&phi_field(order, k), k);
            let psi_vol = volume_energy_density(Choice::CVolume, order, params, k);
            let dpsi = c_volume_local(order, params, k)
                .zip_map(&rho, |a, r| a / r)
                .add(&psi_vol.scale(k.beta));
            let rho_f = face_average(&rho);
            let flux = grad_face(order)
                .zip_comps(&c_face_weights(order, k), |g, a| g.mul(a).scale(s))
                .zip_comps(&rho_f, |f, r| f.zip_map(r, |f, r| f / r))
                .zip_comps(&rho_f, |f, r| f.mul(r));
            dpsi.sub(&ops::div_face(&flux).zip_map(&rho, |d, r| d / r))
        }
    }
}

/// `dPsi/dc` without the divergence part.
fn c_volume_local(c: &ScalarField, params: &EnergyParams, k: &MixtureConstants) -> ScalarField {
    let g2 = face_gradient_sq(c);
    let local = c.map(|x| {
        let x = x.clamp(-1.0, 1.0);
        params.bulk() * params.well.derivative(phi_from_c(x, k)) * phi_prime(x, k)
    });
    let curv = c.map(|x| phi_prime(x, k) * phi_second(x, k));
    local.add(&curv.mul(&g2).scale(params.gradient()))
}

fn c_volume_mu(c: &ScalarField, params: &EnergyParams, k: &MixtureConstants) -> ScalarField {
    let flux = grad_face(c).zip_comps(&c_face_weights(c, k), |g, a| g.mul(a));
    c_volume_local(c, params, k).sub(&ops::div_face(&flux).scale(params.gradient()))
}

/// Finite-difference gradient of the choice's own discrete functional with
/// respect to its measure (test oracle).
pub fn chemical_potential_fd(
    choice: Choice,
    order: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
    h: f64,
) -> ScalarField {
    let weight = measure(choice, order, k);
    let functional = |f: &ScalarField| {
        let dens = if choice.is_mass() {
            weight.mul(&specific_energy(choice, f, params, k))
        } else {
            volume_energy_density(choice, f, params, k)
        };
        ops::integrate(&dens)
    };
    ops::variational_derivative_fd(&functional, order, h).zip_map(&weight, |d, w| d / w)
}

/// Chemical potential of `to` predicted from that of `from` by the pointwise
/// relations, all routed through the phi-volume potential.
pub fn relate_mu(
    from: Choice,
    to: Choice,
    phi: &ScalarField,
    mu_from: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> Result<ScalarField> {
    phi.same_grid(mu_from)?;
    let hat = to_phi_volume_mu(from, phi, mu_from, params, k);
    Ok(from_phi_volume_mu(to, phi, &hat, params, k))
}

fn frame_psi(
    choice: Choice,
    phi: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> ScalarField {
    if choice.uses_c() {
        specific_energy(choice, &c_field(phi, k), params, k)
    } else {
        specific_energy(choice, phi, params, k)
    }
}

fn to_phi_volume_mu(
    from: Choice,
    phi: &ScalarField,
    mu: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> ScalarField {
    let rho = density_field(phi, k);
    let jac = rho.map(|r| r * r / k.product());
    match from {
        Choice::PhiVolume => mu.clone(),
        Choice::PhiMass => {
            let psi = frame_psi(Choice::PhiMass, phi, params, k);
            rho.mul(mu).add(&psi.scale(k.jump()))
        }
        Choice::CVolume => mu.zip_map(&jac, |m, j| m / j),
        Choice::CMass => {
            let psi = frame_psi(Choice::CMass, phi, params, k);
            let check = rho.mul(mu).sub(&rho.mul(&rho).mul(&psi).scale(k.beta));
            check.zip_map(&jac, |m, j| m / j)
        }
    }
}

fn from_phi_volume_mu(
    to: Choice,
    phi: &ScalarField,
    hat: &ScalarField,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> ScalarField {
    let rho = density_field(phi, k);
    let jac = rho.map(|r| r * r / k.product());
    match to {
        Choice::PhiVolume => hat.clone(),
        Choice::PhiMass => {
            let psi = frame_psi(Choice::PhiMass, phi, params, k);
            hat.sub(&psi.scale(k.jump())).zip_map(&rho, |m, r| m / r)
        }
        Choice::CVolume => hat.mul(&jac),
        Choice::CMass => {
            let psi = frame_psi(Choice::CMass, phi, params, k);
            let check = hat.mul(&jac);
            check
                .add(&rho.mul(&rho).mul(&psi).scale(k.beta))
                .zip_map(&rho, |m, r| m / r)
        }
    }
}

/// Fields that fix the pressure transforms: the phi-volume chemical potential
/// enters the change of order parameter.
#[derive(Debug, Clone, Copy)]
pub struct TransformFields<'a> {
    pub phi: &'a ScalarField,
    pub mu_hat: &'a ScalarField,
}

/// Maps the pressure of `from` to that of `to`:
/// `p_hat = p_hathat + psi {rho}`, `p_check = p_checkcheck + rho psi`,
/// `p_check = p_hat + mu_hat phi`.
pub fn transform_pressure(
    from: Choice,
    to: Choice,
    p: &ScalarField,
    fields: TransformFields<'_>,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> Result<ScalarField> {
    ops::check_grids(&[p, fields.phi, fields.mu_hat])?;
    let phi = fields.phi;
    let rho = density_field(phi, k);
    let shift = fields.mu_hat.mul(phi);
    let hat = match from {
        Choice::PhiVolume => p.clone(),
        Choice::PhiMass => p.add(&frame_psi(Choice::PhiMass, phi, params, k).scale(k.mean())),
        Choice::CVolume => p.sub(&shift),
        Choice::CMass => p
            .add(&rho.mul(&frame_psi(Choice::CMass, phi, params, k)))
            .sub(&shift),
    };
    Ok(match to {
        Choice::PhiVolume => hat,
        Choice::PhiMass => hat.sub(&frame_psi(Choice::PhiMass, phi, params, k).scale(k.mean())),
        Choice::CVolume => hat.add(&shift),
        Choice::CMass => hat
            .add(&shift)
            .sub(&rho.mul(&frame_psi(Choice::CMass, phi, params, k))),
    })
}

/// Transform by choice names, as used by the command line.
pub fn transform_pressure_named(
    from: &str,
    to: &str,
    p: &ScalarField,
    fields: TransformFields<'_>,
    params: &EnergyParams,
    k: &MixtureConstants,
) -> Result<ScalarField> {
    transform_pressure(from.parse()?, to.parse()?, p, fields, params, k)
}

/// Velocity data of either formulation.
#[derive(Debug, Clone, Copy)]
pub enum Velocity<'a> {
    /// Mass-averaged velocity `v`.
    Mass(&'a VectorField),
    /// Volume-averaged velocity `u` with the flux `Jtilde`, so `rho v = rho u + Jtilde`.
    Volume {
        u: &'a VectorField,
        jtilde: &'a VectorField,
    },
    Rest,
}

/// Free, kinetic and gravitational energy. Gravity `g` acts along the last
/// axis, so the potential is `rho g x_last`.
pub fn total_energy(
    phi: &ScalarField,
    velocity: Velocity<'_>,
    params: &EnergyParams,
    k: &MixtureConstants,
    g: f64,
    time: f64,
) -> EnergyReport {
    let grid = *phi.grid();
    let rho = density_field(phi, k);
    let free = ops::integrate(&gl_energy_density(phi, params));
    let kinetic = match velocity {
        Velocity::Mass(v) => 0.5 * ops::integrate(&rho.mul(&v.norm_sq())),
        Velocity::Volume { u, jtilde } => {
            let m = u.scale_by(&rho).add(jtilde);
            0.5 * ops::integrate(&m.norm_sq().zip_map(&rho, |q, r| q / r))
        }
        Velocity::Rest => 0.0,
    };
    let gravitational = if g == 0.0 {
        0.0
    } else {
        let last = grid.dims() - 1;
        let height = ScalarField::from_fn(grid, |x, y| if last == 0 { x } else { y });
        g * ops::integrate(&rho.mul(&height))
    };
    EnergyReport {
        free,
        kinetic,
        gravitational,
        total: free + kinetic + gravitational,
        time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;
    use crate::mixture::make_constants;

    fn params() -> EnergyParams {
        EnergyParams::new(1.5, 0.1).unwrap()
    }

    #[test]
    fn flat_states() {
        let g = Grid::unit_square(8).unwrap();
        let p = params();
        let one = ScalarField::constant(g, 1.0);
        assert_eq!(gl_energy_density(&one, &p).max_abs(), 0.0);
        let zero = ScalarField::zeros(g);
        let psi = gl_energy_density(&zero, &p);
        assert!((psi.max() - p.sigma / (4.0 * p.epsilon)).abs() < 1e-14);
        assert_eq!(
            chemical_potential(
                Choice::PhiVolume,
                &zero,
                &p,
                &make_constants(1.0, 1.0).unwrap()
            )
            .max_abs(),
            0.0
        );
    }

    #[test]
    fn choice_names_round_trip() {
        for c in Choice::ALL {
            assert_eq!(c.name().parse::<Choice>().unwrap(), c);
        }
        assert!(matches!(
            "phi-vol".parse::<Choice>(),
            Err(Error::UnknownChoice(_))
        ));
    }

    #[test]
    fn total_energy_of_mixed_rest_state() {
        let g = Grid::unit_square(6).unwrap();
        let k = make_constants(1.0, 1.0).unwrap();
        let p = params();
        let e = total_energy(&ScalarField::zeros(g), Velocity::Rest, &p, &k, 0.0, 0.0);
        assert!((e.total - p.sigma / (4.0 * p.epsilon)).abs() < 1e-13);
    }
}
