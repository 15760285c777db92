//! Constitutive closures: viscosity, mobilities, the Fickian and reactive
//! fluxes and the Cauchy stress.
//!
//! Mobilities are scalar multiples of the identity. The degenerate model
//! `M0 (1 - phi^2)_+` vanishes in the pure phases; the constant model does not
//! and is kept only for comparisons (it lets a pure phase diffuse, which is
//! not compatible with single-fluid flow).

use std::str::FromStr;

use crate::energy::{gl_energy_density, EnergyParams};
use crate::error::{Error, Result};
use crate::fields::ops::{self, grad, sym_grad};
use crate::fields::{ScalarField, TensorField, VectorField};
use crate::mixture::MixtureConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MobilityModel {
    #[default]
    Degenerate,
    Constant,
}

impl FromStr for MobilityModel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "degenerate" => Ok(Self::Degenerate),
            "constant" => Ok(Self::Constant),
            other => Err(format!(
                "unknown mobility model `{other}` (expected degenerate or constant)"
            )),
        }
    }
}

impl MobilityModel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Degenerate => "degenerate",
            Self::Constant => "constant",
        }
    }
}

/// How `nu(phi)` interpolates between the pure-phase viscosities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ViscosityMean {
    #[default]
    Arithmetic,
    Harmonic,
}

impl FromStr for ViscosityMean {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "arithmetic" => Ok(Self::Arithmetic),
            "harmonic" => Ok(Self::Harmonic),
            other => Err(format!(
                "unknown viscosity mean `{other}` (expected arithmetic or harmonic)"
            )),
        }
    }
}

impl ViscosityMean {
    pub fn name(self) -> &'static str {
        match self {
            Self::Arithmetic => "arithmetic",
            Self::Harmonic => "harmonic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstitutiveParams {
    pub nu1: f64,
    pub nu2: f64,
    /// Bulk-viscosity ratio, at least `-2/d`.
    pub lambda: f64,
    pub mobility_model: MobilityModel,
    /// Fickian mobility magnitude `M0`.
    pub m_big: f64,
    /// Mass-transfer mobility magnitude `m0`.
    pub m_small: f64,
    pub viscosity_mean: ViscosityMean,
}

impl Default for ConstitutiveParams {
    fn default() -> Self {
        ConstitutiveParams {
            nu1: 0.1,
            nu2: 0.1,
            lambda: 0.0,
            mobility_model: MobilityModel::Degenerate,
            m_big: 1e-3,
            m_small: 0.0,
            viscosity_mean: ViscosityMean::Arithmetic,
        }
    }
}

impl ConstitutiveParams {
    /// Checks the admissibility conditions for dimension `dims`.
    pub fn validate(&self, dims: usize) -> Result<()> {
        let nonneg = |name, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ))
            }
        };
        nonneg("nu1", self.nu1)?;
        nonneg("nu2", self.nu2)?;
        nonneg("M0", self.m_big)?;
        nonneg("m0", self.m_small)?;
        let floor = -2.0 / dims as f64;
        if !self.lambda.is_finite() || self.lambda < floor {
            return Err(Error::param(
                "lambda",
                format!("must be >= -2/d = {floor}, got {}", self.lambda),
            ));
        }
        if self.viscosity_mean == ViscosityMean::Harmonic && (self.nu1 == 0.0 || self.nu2 == 0.0) {
            return Err(Error::param(
                "viscosity_mean",
                "harmonic mean needs positive nu1 and nu2",
            ));
        }
        Ok(())
    }

    pub fn nu_at(&self, phi: f64) -> f64 {
        let a = 0.5 * (1.0 + phi.clamp(-1.0, 1.0));
        let nu = match self.viscosity_mean {
            ViscosityMean::Arithmetic => a * self.nu1 + (1.0 - a) * self.nu2,
            ViscosityMean::Harmonic => 1.0 / (a / self.nu1 + (1.0 - a) / self.nu2),
        };
        nu.max(0.0)
    }

    pub fn max_viscosity(&self) -> f64 {
        self.nu1.max(self.nu2)
    }

    fn shape(&self, phi: f64) -> f64 {
        match self.mobility_model {
            MobilityModel::Degenerate => (1.0 - phi * phi).max(0.0),
            MobilityModel::Constant => 1.0,
        }
    }

    /// `M(phi)` in the mass-averaged frame.
    pub fn mobility_at(&self, phi: f64) -> f64 {
        self.m_big * self.shape(phi)
    }

    /// `m(phi) = m0 (1 - phi^2)_+`; always degenerate.
    pub fn reaction_at(&self, phi: f64) -> f64 {
        self.m_small * (1.0 - phi * phi).max(0.0)
    }
}

pub fn viscosity(phi: &ScalarField, params: &ConstitutiveParams) -> ScalarField {
    phi.map(|x| params.nu_at(x))
}

pub fn mobility(phi: &ScalarField, params: &ConstitutiveParams) -> ScalarField {
    phi.map(|x| params.mobility_at(x))
}

/// Mobility in the volume-averaged frame, `(rho/{rho}) M`.
pub fn mobility_u(
    phi: &ScalarField,
    params: &ConstitutiveParams,
    k: &MixtureConstants,
) -> ScalarField {
    phi.map(|x| k.density(x) / k.mean() * params.mobility_at(x))
}

pub fn reaction_mobility(phi: &ScalarField, params: &ConstitutiveParams) -> ScalarField {
    phi.map(|x| params.reaction_at(x))
}

/// `mu + alpha p`, the potential that drives both fluxes.
pub fn driving_potential(
    mu: &ScalarField,
    p: &ScalarField,
    k: &MixtureConstants,
) -> Result<ScalarField> {
    mu.same_grid(p)?;
    Ok(mu.zip_map(p, |m, q| m + k.alpha * q))
}

/// `h^v = -M(phi) grad(mu + alpha p)` at cell centers.
pub fn diffusive_flux(
    mu: &ScalarField,
    p: &ScalarField,
    phi: &ScalarField,
    k: &MixtureConstants,
    params: &ConstitutiveParams,
) -> Result<VectorField> {
    ops::check_grids(&[mu, p, phi])?;
    let drive = driving_potential(mu, p, k)?;
    Ok(grad(&drive).scale_by(&mobility(phi, params)).scale(-1.0))
}

/// `gamma = -m(phi)(mu + alpha p)`.
pub fn mass_flux(
    mu: &ScalarField,
    p: &ScalarField,
    phi: &ScalarField,
    k: &MixtureConstants,
    params: &ConstitutiveParams,
) -> Result<ScalarField> {
    ops::check_grids(&[mu, p, phi])?;
    let drive = driving_potential(mu, p, k)?;
    Ok(reaction_mobility(phi, params).zip_map(&drive, |m, d| -m * d))
}

/// Inputs of the stress: `v` must be the mass-averaged velocity.
#[derive(Debug, Clone, Copy)]
pub struct StressInput<'a> {
    pub phi: &'a ScalarField,
    pub mu: &'a ScalarField,
    pub p: &'a ScalarField,
    pub v: &'a VectorField,
}

/// Korteweg part `-sigma eps grad phi (x) grad phi`.
pub fn korteweg_stress(phi: &ScalarField, energy: &EnergyParams) -> TensorField {
    let g = grad(phi);
    TensorField::outer(-energy.gradient(), &g, &g)
}

/// Newtonian part `nu (2D + lambda (div v) I)`.
pub fn viscous_stress(
    v: &VectorField,
    phi: &ScalarField,
    params: &ConstitutiveParams,
) -> TensorField {
    let nu = viscosity(phi, params);
    let d = sym_grad(v);
    let tr = d.trace();
    d.scale(2.0)
        .add(&TensorField::isotropic(&tr.scale(params.lambda)))
        .scale_by(&nu)
}

/// Full Cauchy stress
/// `T = -grad phi (x) dPsi/dgrad phi - (mu phi - Psi + p) I + nu (2D + lambda div v I)`.
pub fn stress_tensor(
    input: &StressInput<'_>,
    energy: &EnergyParams,
    params: &ConstitutiveParams,
) -> Result<TensorField> {
    ops::check_grids(&[input.phi, input.mu, input.p, input.v.comp(0)])?;
    let psi = gl_energy_density(input.phi, energy);
    let iso = input.mu.mul(input.phi).sub(&psi).add(input.p);
    Ok(korteweg_stress(input.phi, energy)
        .sub(&TensorField::isotropic(&iso))
        .add(&viscous_stress(input.v, input.phi, params)))
}

/// `2 nu |D|^2 + nu lambda (tr D)^2`, nonnegative for `lambda >= -2/d`.
pub fn viscous_dissipation(
    v: &VectorField,
    phi: &ScalarField,
    params: &ConstitutiveParams,
) -> ScalarField {
    let nu = viscosity(phi, params);
    let d = sym_grad(v);
    let tr = d.trace();
    d.contract(&d)
        .scale(2.0)
        .add(&tr.mul(&tr).scale(params.lambda))
        .mul(&nu)
}

/// Pointwise dissipation split into its viscous, Fickian and reactive parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Dissipation {
    pub viscous: ScalarField,
    pub fickian: ScalarField,
    pub reactive: ScalarField,
}

pub fn dissipation(
    input: &StressInput<'_>,
    k: &MixtureConstants,
    params: &ConstitutiveParams,
) -> Result<Dissipation> {
    let drive = driving_potential(input.mu, input.p, k)?;
    let h = diffusive_flux(input.mu, input.p, input.phi, k, params)?;
    let gamma = mass_flux(input.mu, input.p, input.phi, k, params)?;
    Ok(Dissipation {
        viscous: viscous_dissipation(input.v, input.phi, params),
        fickian: grad(&drive).dot(&h).scale(-1.0),
        reactive: drive.mul(&gamma).scale(-1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;
    use crate::mixture::make_constants;

    #[test]
    fn viscosity_endpoints() {
        let p = ConstitutiveParams {
            nu1: 10.0,
            nu2: 2.0,
            ..Default::default()
        };
        assert_eq!(p.nu_at(1.0), 10.0);
        assert_eq!(p.nu_at(-1.0), 2.0);
        assert_eq!(p.nu_at(0.0), 6.0);
    }

    #[test]
    fn mobility_models() {
        let mut p = ConstitutiveParams {
            m_big: 1.0,
            ..Default::default()
        };
        assert_eq!(p.mobility_at(1.0), 0.0);
        assert_eq!(p.mobility_at(-1.0), 0.0);
        assert_eq!(p.mobility_at(0.0), 1.0);
        p.mobility_model = MobilityModel::Constant;
        assert_eq!(p.mobility_at(0.7), 1.0);
        assert_eq!(p.reaction_at(1.0), 0.0);
    }

    #[test]
    fn lambda_floor_is_enforced() {
        let p = ConstitutiveParams {
            lambda: -1.0,
            ..Default::default()
        };
        assert!(p.validate(2).is_ok());
        assert!(p.validate(1).is_ok());
        let p = ConstitutiveParams {
            lambda: -1.01,
            ..Default::default()
        };
        assert!(matches!(
            p.validate(2),
            Err(Error::InvalidParameter { name: "lambda", .. })
        ));
    }

    #[test]
    fn shear_viscous_part() {
        let g = Grid::unit_square(8).unwrap();
        let s = 0.3;
        let p = ConstitutiveParams {
            nu1: 2.0,
            nu2: 2.0,
            ..Default::default()
        };
        // y is linear inside the periodic box only away from the seam; test an interior cell
        let v = VectorField::from_fn(g, |_, y| [s * y, 0.0]);
        let phi = ScalarField::constant(g, 1.0);
        let t = viscous_stress(&v, &phi, &p);
        let n = g.idx(3, 4);
        assert!((t.comp(0, 1)[n] - 2.0 * s).abs() < 1e-13);
        assert!((t.comp(1, 0)[n] - 2.0 * s).abs() < 1e-13);
        assert!(t.comp(0, 0)[n].abs() < 1e-13);
    }

    #[test]
    fn pure_phase_has_no_fluxes() {
        let g = Grid::unit_square(8).unwrap();
        let k = make_constants(2.0, 1.0).unwrap();
        let p = ConstitutiveParams {
            m_small: 1.0,
            ..Default::default()
        };
        let phi = ScalarField::constant(g, 1.0);
        let q = ScalarField::from_fn(g, |x, y| (6.0 * x).sin() * y);
        assert_eq!(
            diffusive_flux(&q, &q, &phi, &k, &p).unwrap().max_norm(),
            0.0
        );
        assert_eq!(mass_flux(&q, &q, &phi, &k, &p).unwrap().max_abs(), 0.0);
    }
}
