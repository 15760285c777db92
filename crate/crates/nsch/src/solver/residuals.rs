//! Certification of the stepped trajectory against other formulations.
//!
//! Residuals are evaluated with centered cell operators, independently of the
//! face discretization used by the stepper, so they measure truncation error
//! and vanish only under refinement.

use crate::constitutive;
use crate::energy::{self, Choice, TransformFields};
use crate::error::{Error, Result};
use crate::fields::ops::{div, grad};
use crate::fields::{ScalarField, VectorField};
use crate::mixture::MixtureConstants;

use super::{Physics, State};

/// Mass-averaged fields reconstructed from a volume-averaged state.
#[derive(Debug, Clone, PartialEq)]
pub struct VForm {
    /// `v = u + Jtilde/rho`
    pub v: VectorField,
    /// `h^v = -M grad(mu + alpha p)`
    pub h_v: VectorField,
    /// phi-volume pressure including its level.
    pub p_hat: ScalarField,
    /// c-volume pressure `p_hat + mu phi`.
    pub p_check: ScalarField,
    /// c-volume chemical potential `(rho^2/(rho1 rho2)) mu_hat`.
    pub mu_check: ScalarField,
}

pub fn reconstruct_v_form(state: &State, physics: &Physics) -> Result<VForm> {
    let k = physics.k;
    let p_hat = state.pressure();
    let h_v =
        constitutive::diffusive_flux(&state.mu, &p_hat, &state.phi, &k, &physics.constitutive)?;
    let fields = TransformFields {
        phi: &state.phi,
        mu_hat: &state.mu,
    };
    let p_check = energy::transform_pressure(
        Choice::PhiVolume,
        Choice::CVolume,
        &p_hat,
        fields,
        &physics.energy,
        &k,
    )?;
    let mu_check = energy::relate_mu(
        Choice::PhiVolume,
        Choice::CVolume,
        &state.phi,
        &state.mu,
        &physics.energy,
        &k,
    )?;
    Ok(VForm {
        v: state.mass_velocity(),
        h_v,
        p_hat,
        p_check,
        mu_check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VFormResiduals {
    /// RMS of `d_t rho + div(rho v)`.
    pub mass: f64,
    /// RMS of `d_t phi + div(phi v + h^v) - zeta gamma`.
    pub phase: f64,
}

/// Mass-averaged balance residuals between two consecutive states.
pub fn vform_residuals(prev: &State, next: &State, dt: f64, physics: &Physics) -> VFormResiduals {
    let k = physics.k;
    let v = next.mass_velocity();
    let p_hat = next.pressure();
    let drive = next.mu.zip_map(&p_hat, |m, q| m + k.alpha * q);
    let h_v = grad(&drive)
        .scale_by(&constitutive::mobility(&next.phi, &physics.constitutive))
        .scale(-1.0);
    let rho_rate = next.rho.sub(&prev.rho).scale(1.0 / dt);
    let mass = rho_rate.add(&div(&v.scale_by(&next.rho)));
    let phi_rate = next.phi.sub(&prev.phi).scale(1.0 / dt);
    let phase = phi_rate
        .add(&div(&v.scale_by(&next.phi).add(&h_v)))
        .sub(&next.gamma.scale(k.zeta));
    VFormResiduals {
        mass: mass.rms(),
        phase: phase.rms(),
    }
}

/// Residuals of the concentration-based form with `rho c_dot` as unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtResiduals {
    /// RMS of `div v - beta rho c_dot`.
    pub continuity: f64,
    /// RMS of `rho c_dot - div((M/zeta^2) grad(mu_cc + beta p_cc))`.
    pub phase: f64,
}

/// Maps the trajectory step to `c`, the c-mass potential and pressure, and
/// evaluates the continuity and phase equations of the concentration form.
/// The concentration form has no mass transfer; it applies to `gamma = 0` runs.
pub fn lt_residual(prev: &State, next: &State, dt: f64, physics: &Physics) -> Result<LtResiduals> {
    let k = physics.k;
    let c_prev = energy::c_field(&prev.phi, &k);
    let c_next = energy::c_field(&next.phi, &k);
    let v = next.mass_velocity();
    let c_dot = c_next
        .sub(&c_prev)
        .scale(1.0 / dt)
        .add(&v.dot(&grad(&c_next)));
    let rho_cdot = next.rho.mul(&c_dot);
    let continuity = div(&v).sub(&rho_cdot.scale(k.beta));

    let p_hat = next.pressure();
    let fields = TransformFields {
        phi: &next.phi,
        mu_hat: &next.mu,
    };
    let mu_cc = energy::relate_mu(
        Choice::PhiVolume,
        Choice::CMass,
        &next.phi,
        &next.mu,
        &physics.energy,
        &k,
    )?;
    let p_cc = energy::transform_pressure(
        Choice::PhiVolume,
        Choice::CMass,
        &p_hat,
        fields,
        &physics.energy,
        &k,
    )?;
    let pot = mu_cc.zip_map(&p_cc, |m, q| m + k.beta * q);
    let mob =
        constitutive::mobility(&next.phi, &physics.constitutive).scale(1.0 / (k.zeta * k.zeta));
    let phase = rho_cdot.sub(&div(&grad(&pot).scale_by(&mob)));
    Ok(LtResiduals {
        continuity: continuity.rms(),
        phase: phase.rms(),
    })
}

/// `p* = p_hat (1 - alpha phi) = p_hat rho/{rho}`.
pub fn shokrpour_pressure(
    phi: &ScalarField,
    p_hat: &ScalarField,
    k: &MixtureConstants,
) -> Result<ScalarField> {
    phi.same_grid(p_hat)?;
    let factor = phi.map(|x| 1.0 - k.alpha * x);
    if let Some(&bad) = factor.data().iter().find(|&&f| f.is_nan() || f <= 0.0) {
        return Err(Error::Singular(bad));
    }
    Ok(p_hat.mul(&factor))
}

/// Inverse map `p_hat = p* / (1 - alpha phi)`.
pub fn pressure_from_pstar(
    phi: &ScalarField,
    p_star: &ScalarField,
    k: &MixtureConstants,
) -> Result<ScalarField> {
    phi.same_grid(p_star)?;
    let factor = phi.map(|x| 1.0 - k.alpha * x);
    if let Some(&bad) = factor.data().iter().find(|&&f| f.is_nan() || f <= 0.0) {
        return Err(Error::Singular(bad));
    }
    Ok(p_star.zip_map(&factor, |p, f| p / f))
}

/// Pointwise gap between `div(M grad(mu - p* [rho]/rho))` and
/// `div(M grad(mu + alpha p_hat))`.
pub fn pstar_flux_gap(
    phi: &ScalarField,
    mu: &ScalarField,
    p_hat: &ScalarField,
    k: &MixtureConstants,
    params: &constitutive::ConstitutiveParams,
) -> Result<ScalarField> {
    let p_star = shokrpour_pressure(phi, p_hat, k)?;
    let rho = phi.map(|x| k.density(x));
    let star_pot = mu.sub(&p_star.zip_map(&rho, |p, r| p * k.jump() / r));
    let std_pot = mu.zip_map(p_hat, |m, p| m + k.alpha * p);
    let m = constitutive::mobility(phi, params);
    let a = div(&grad(&star_pot).scale_by(&m));
    let b = div(&grad(&std_pot).scale_by(&m));
    Ok(a.sub(&b))
}
