//! Pointwise algebra of a binary mixture of incompressible constituents.
//!
//! Jump and average follow the convention `[a] = (a1 - a2)/2`, `{a} = (a1 + a2)/2`.
//! The order parameter `phi` is the volume-fraction difference `phi1 - phi2`, the
//! order parameter `c` the mass-fraction difference `c1 - c2`.

use crate::error::{Error, Result};

/// Overshoot past |phi| = 1 that is clamped instead of rejected.
pub const OVERSHOOT_TOL: f64 = 1e-8;

/// Specific densities of the two constituents and the derived constants.
///
/// * `alpha = (rho2 - rho1)/(rho1 + rho2) = -[rho]/{rho}`
/// * `beta  = (rho2 - rho1)/(2 rho1 rho2) = -[rho]/(rho1 rho2)`
/// * `zeta  = (rho1 + rho2)/(2 rho1 rho2) = {rho}/(rho1 rho2)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureConstants {
    pub rho1: f64,
    pub rho2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
}

pub fn make_constants(rho1: f64, rho2: f64) -> Result<MixtureConstants> {
    if !(rho1.is_finite() && rho1 > 0.0) {
        return Err(Error::param(
            "rho1",
            format!("must be positive, got {rho1}"),
        ));
    }
    if !(rho2.is_finite() && rho2 > 0.0) {
        return Err(Error::param(
            "rho2",
            format!("must be positive, got {rho2}"),
        ));
    }
    let prod = 2.0 * rho1 * rho2;
    Ok(MixtureConstants {
        rho1,
        rho2,
        alpha: (rho2 - rho1) / (rho1 + rho2),
        beta: (rho2 - rho1) / prod,
        zeta: (rho1 + rho2) / prod,
    })
}

impl MixtureConstants {
    pub fn new(rho1: f64, rho2: f64) -> Result<Self> {
        make_constants(rho1, rho2)
    }

    /// `[rho] = (rho1 - rho2)/2`
    pub fn jump(&self) -> f64 {
        0.5 * (self.rho1 - self.rho2)
    }

    /// `{rho} = (rho1 + rho2)/2`
    pub fn mean(&self) -> f64 {
        0.5 * (self.rho1 + self.rho2)
    }

    pub fn product(&self) -> f64 {
        self.rho1 * self.rho2
    }

    pub fn is_matched(&self) -> bool {
        self.rho1 == self.rho2
    }

    /// Density as a function of `phi` after clamping to [-1, 1]; never fails.
    #[inline]
    pub fn density(&self, phi: f64) -> f64 {
        let p = phi.clamp(-1.0, 1.0);
        self.mean() + self.jump() * p
    }

    /// Density extended linearly past [-1, 1]; positive for `|phi| < {rho}/|[rho]|`.
    /// The time stepper uses it so that `int rho` stays an exact linear image of `int phi`.
    #[inline]
    pub fn density_linear(&self, phi: f64) -> f64 {
        self.mean() + self.jump() * phi
    }

    /// `rho / (rho1 rho2)`: the phase-equation source coefficient in the
    /// volume-averaged frame, equal to `zeta - beta*phi`.
    #[inline]
    pub fn volume_frame_source(&self, phi: f64) -> f64 {
        self.density(phi) / self.product()
    }
}

fn check_range(x: f64, tol: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + tol {
        return Err(Error::OutOfRange { value: x, tol });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Mixture density from the volume-fraction difference.
pub fn rho_of_phi(phi: f64, k: &MixtureConstants) -> Result<f64> {
    rho_of_phi_tol(phi, k, OVERSHOOT_TOL)
}

pub fn rho_of_phi_tol(phi: f64, k: &MixtureConstants, tol: f64) -> Result<f64> {
    let phi = check_range(phi, tol)?;
    Ok(k.rho1 * 0.5 * (1.0 + phi) + k.rho2 * 0.5 * (1.0 - phi))
}

/// Mixture density from the concentration difference (harmonic law).
pub fn rho_of_c(c: f64, k: &MixtureConstants) -> Result<f64> {
    let c = check_range(c, OVERSHOOT_TOL)?;
    Ok(rho_check(c, k))
}

#[inline]
fn rho_check(c: f64, k: &MixtureConstants) -> f64 {
    1.0 / ((1.0 + c) / (2.0 * k.rho1) + (1.0 - c) / (2.0 * k.rho2))
}

pub fn c_of_phi(phi: f64, k: &MixtureConstants) -> Result<f64> {
    let phi = check_range(phi, OVERSHOOT_TOL)?;
    Ok(c_from_phi(phi, k))
}

pub fn phi_of_c(c: f64, k: &MixtureConstants) -> Result<f64> {
    let c = check_range(c, OVERSHOOT_TOL)?;
    Ok(phi_from_c(c, k))
}

/// `c'(phi) = rho1 rho2 / rho^2`
pub fn dc_dphi(phi: f64, k: &MixtureConstants) -> Result<f64> {
    let rho = rho_of_phi(phi, k)?;
    Ok(k.product() / (rho * rho))
}

/// `phi'(c) = rho^2 / (rho1 rho2)`
pub fn dphi_dc(c: f64, k: &MixtureConstants) -> Result<f64> {
    let rho = rho_of_c(c, k)?;
    Ok(rho * rho / k.product())
}

// Unchecked kernels used on whole fields.

#[inline]
pub(crate) fn c_from_phi(phi: f64, k: &MixtureConstants) -> f64 {
    (k.jump() + k.mean() * phi) / (k.mean() + k.jump() * phi)
}

#[inline]
pub(crate) fn phi_from_c(c: f64, k: &MixtureConstants) -> f64 {
    (-k.jump() + k.mean() * c) / (k.mean() - k.jump() * c)
}

#[inline]
pub(crate) fn density_of_c(c: f64, k: &MixtureConstants) -> f64 {
    rho_check(c.clamp(-1.0, 1.0), k)
}

/// `phi'(c)` without range checks.
#[inline]
pub(crate) fn phi_prime(c: f64, k: &MixtureConstants) -> f64 {
    let r = density_of_c(c, k);
    r * r / k.product()
}

/// `phi''(c) = -2 beta rho^3 / (rho1 rho2)`, from `rho'(c) = -beta rho^2`.
#[inline]
pub(crate) fn phi_second(c: f64, k: &MixtureConstants) -> f64 {
    let r = density_of_c(c, k);
    -2.0 * k.beta * r * r * r / k.product()
}

/// `xi(x) = x^2 - 1`, the degeneracy factor of the slip relations.
#[inline]
pub fn xi(x: f64) -> f64 {
    x * x - 1.0
}

pub type Vector<const D: usize> = [f64; D];
pub type Tensor<const D: usize> = [[f64; D]; D];

fn lin<const D: usize>(a: f64, x: &Vector<D>, b: f64, y: &Vector<D>) -> Vector<D> {
    std::array::from_fn(|i| a * x[i] + b * y[i])
}

fn scaled<const D: usize>(a: f64, x: &Vector<D>) -> Vector<D> {
    std::array::from_fn(|i| a * x[i])
}

fn outer<const D: usize>(a: f64, x: &Vector<D>, y: &Vector<D>) -> Tensor<D> {
    std::array::from_fn(|i| std::array::from_fn(|j| a * x[i] * y[j]))
}

/// Constituent velocities together with every mean velocity and diffusive flux
/// derived from them by definition.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxBundle<const D: usize> {
    pub phi1: f64,
    pub phi2: f64,
    pub v1: Vector<D>,
    pub v2: Vector<D>,
    /// Partial densities `rho_j phi_j`.
    pub rho_t1: f64,
    pub rho_t2: f64,
    pub rho: f64,
    pub c1: f64,
    pub c2: f64,
    /// Mass-averaged velocity.
    pub v: Vector<D>,
    /// Volume-averaged velocity.
    pub u: Vector<D>,
    pub w1: Vector<D>,
    pub w2: Vector<D>,
    pub omega1: Vector<D>,
    pub omega2: Vector<D>,
    pub h_v: Vector<D>,
    pub j_v: Vector<D>,
    pub h_u: Vector<D>,
    pub j_u: Vector<D>,
    pub jtilde_u: Vector<D>,
}

pub fn flux_bundle<const D: usize>(
    phi1: f64,
    v1: Vector<D>,
    v2: Vector<D>,
    k: &MixtureConstants,
) -> FluxBundle<D> {
    let phi2 = 1.0 - phi1;
    let rho_t1 = k.rho1 * phi1;
    let rho_t2 = k.rho2 * phi2;
    let rho = rho_t1 + rho_t2;
    let (c1, c2) = (rho_t1 / rho, rho_t2 / rho);

    let v = lin(c1, &v1, c2, &v2);
    let u = lin(phi1, &v1, phi2, &v2);
    let w1 = lin(1.0, &v1, -1.0, &v);
    let w2 = lin(1.0, &v2, -1.0, &v);
    let omega1 = lin(1.0, &v1, -1.0, &u);
    let omega2 = lin(1.0, &v2, -1.0, &u);

    FluxBundle {
        phi1,
        phi2,
        v1,
        v2,
        rho_t1,
        rho_t2,
        rho,
        c1,
        c2,
        h_v: lin(phi1, &w1, -phi2, &w2),
        j_v: lin(rho_t1, &w1, -rho_t2, &w2),
        h_u: lin(phi1, &omega1, -phi2, &omega2),
        j_u: lin(rho_t1, &omega1, -rho_t2, &omega2),
        jtilde_u: lin(rho_t1, &omega1, rho_t2, &omega2),
        v,
        u,
        w1,
        w2,
        omega1,
        omega2,
    }
}

impl<const D: usize> FluxBundle<D> {
    /// `phi = phi1 - phi2`
    pub fn phi(&self) -> f64 {
        self.phi1 - self.phi2
    }

    /// `c = c1 - c2`
    pub fn c(&self) -> f64 {
        self.c1 - self.c2
    }

    /// `[v] = (v1 - v2)/2`
    pub fn velocity_jump(&self) -> Vector<D> {
        lin(0.5, &self.v1, -0.5, &self.v2)
    }
}

/// Fluxes predicted from `h_u` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelatedFluxes<const D: usize> {
    pub jtilde_u: Vector<D>,
    pub j_u: Vector<D>,
    pub h_v: Vector<D>,
    pub j_v: Vector<D>,
}

pub fn relate_fluxes<const D: usize>(
    h_u: Vector<D>,
    rho: f64,
    k: &MixtureConstants,
) -> RelatedFluxes<D> {
    RelatedFluxes {
        jtilde_u: scaled(k.jump(), &h_u),
        j_u: scaled(k.mean(), &h_u),
        h_v: scaled(k.mean() / rho, &h_u),
        j_v: scaled(k.product() / rho, &h_u),
    }
}

/// Peculiar-velocity tensor relative to `v` minus its expression through the
/// peculiar velocities relative to `u`. Zero for every valid bundle.
pub fn kinetic_tensor_gap<const D: usize>(b: &FluxBundle<D>) -> Tensor<D> {
    let (lhs, rhs) = kinetic_tensor_sides(b);
    std::array::from_fn(|i| std::array::from_fn(|j| lhs[i][j] - rhs[i][j]))
}

/// Both sides of the peculiar-velocity tensor identity.
pub fn kinetic_tensor_sides<const D: usize>(b: &FluxBundle<D>) -> (Tensor<D>, Tensor<D>) {
    let l1 = outer(b.rho_t1, &b.w1, &b.w1);
    let l2 = outer(b.rho_t2, &b.w2, &b.w2);
    let r1 = outer(b.rho_t1, &b.omega1, &b.omega1);
    let r2 = outer(b.rho_t2, &b.omega2, &b.omega2);
    let r3 = outer(1.0 / b.rho, &b.jtilde_u, &b.jtilde_u);
    let lhs = std::array::from_fn(|i| std::array::from_fn(|j| l1[i][j] + l2[i][j]));
    let rhs = std::array::from_fn(|i| std::array::from_fn(|j| r1[i][j] + r2[i][j] - r3[i][j]));
    (lhs, rhs)
}

/// Largest entry magnitude among the individual terms of the tensor identity,
/// used to make the gap relative.
pub fn kinetic_tensor_scale<const D: usize>(b: &FluxBundle<D>) -> f64 {
    let mut s: f64 = 0.0;
    for t in [
        outer(b.rho_t1, &b.w1, &b.w1),
        outer(b.rho_t2, &b.w2, &b.w2),
        outer(b.rho_t1, &b.omega1, &b.omega1),
        outer(b.rho_t2, &b.omega2, &b.omega2),
        outer(1.0 / b.rho, &b.jtilde_u, &b.jtilde_u),
    ] {
        for row in t.iter() {
            for x in row {
                s = s.max(x.abs());
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_hand_arithmetic() {
        let k = make_constants(2.0, 1.0).unwrap();
        assert!((k.alpha + 1.0 / 3.0).abs() < 1e-15);
        assert!((k.beta + 0.25).abs() < 1e-15);
        assert!((k.zeta - 0.75).abs() < 1e-15);

        let k = make_constants(1000.0, 1.0).unwrap();
        assert!((k.alpha + 999.0 / 1001.0).abs() < 1e-15);
        assert!((k.beta + 0.4995).abs() < 1e-15);
        assert!((k.zeta - 0.5005).abs() < 1e-15);

        let k = make_constants(1.0, 1.0).unwrap();
        assert_eq!((k.alpha, k.beta, k.zeta), (0.0, 0.0, 1.0));
    }

    #[test]
    fn non_positive_density_is_rejected() {
        assert!(matches!(
            make_constants(0.0, 1.0),
            Err(Error::InvalidParameter { name: "rho1", .. })
        ));
        assert!(make_constants(1.0, -2.0).is_err());
        assert!(make_constants(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn density_clamps_small_overshoot_only() {
        let k = make_constants(2.0, 1.0).unwrap();
        assert_eq!(rho_of_phi(1.0 + 5e-9, &k).unwrap(), 2.0);
        assert!(matches!(
            rho_of_phi(1.0 + 1e-6, &k),
            Err(Error::OutOfRange { .. })
        ));
        assert_eq!(rho_of_phi(0.0, &k).unwrap(), 1.5);
        assert_eq!(rho_of_phi(-1.0, &k).unwrap(), 1.0);
    }

    #[test]
    fn order_parameter_examples() {
        let k = make_constants(2.0, 1.0).unwrap();
        // phi = 0: phi1 = phi2 = 1/2, partial densities 1 and 1/2, so c = 2/3 - 1/3.
        assert!((c_of_phi(0.0, &k).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((dc_dphi(0.0, &k).unwrap() - 8.0 / 9.0).abs() < 1e-15);
        assert!((rho_of_c(1.0 / 3.0, &k).unwrap() - 1.5).abs() < 1e-14);
        assert_eq!(c_of_phi(1.0, &k).unwrap(), 1.0);
        assert_eq!(c_of_phi(-1.0, &k).unwrap(), -1.0);
    }

    #[test]
    fn bundle_hand_example() {
        let k = make_constants(2.0, 1.0).unwrap();
        let b = flux_bundle(0.25, [1.0, 0.0], [0.0, 0.0], &k);
        // rho_t = (0.5, 0.75), rho = 1.25
        assert!((b.u[0] - 0.25).abs() < 1e-15);
        assert!((b.v[0] - 0.4).abs() < 1e-15);
        assert!((b.jtilde_u[0] - 0.1875).abs() < 1e-15);
        assert!((b.h_u[0] - 0.375).abs() < 1e-15);
        assert_eq!(b.u[1], 0.0);
        let r = relate_fluxes(b.h_u, b.rho, &k);
        assert!((r.jtilde_u[0] - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn pure_constituent_has_no_fluxes() {
        let k = make_constants(3.0, 1.0).unwrap();
        let b = flux_bundle(1.0, [0.3, -0.2], [5.0, 7.0], &k);
        assert_eq!(b.omega1, [0.0, 0.0]);
        assert_eq!(b.h_u, [0.0, 0.0]);
        assert_eq!(b.jtilde_u, [0.0, 0.0]);
        assert_eq!(b.u, b.v1);
        assert_eq!(b.v, b.v1);
    }
}
