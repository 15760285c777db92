//! The individual checks of the registry.
//!
//! Every check compares two independently assembled sides of one identity.
//! Pointwise checks return the largest relative error over their samples;
//! discretization checks return one error per refinement level.

use crate::constitutive::{self, korteweg_stress, reaction_mobility};
use crate::energy::{
    c_field, chemical_potential, density_field, gl_energy_density, relate_mu, specific_energy,
    transform_pressure, volume_energy_density, Choice, TransformFields,
};
use crate::fields::ops::{div, div_face, grad, grad_face};
use crate::fields::{Fourier, Grid, ScalarField, TensorField, VectorField};
use crate::mixture::{
    self, c_of_phi, dc_dphi, dphi_dc, flux_bundle, kinetic_tensor_gap, kinetic_tensor_scale,
    kinetic_tensor_sides, phi_of_c, relate_fluxes, rho_of_c, rho_of_phi, xi, FluxBundle,
};
use crate::solver::residuals::{pressure_from_pstar, pstar_flux_gap, shokrpour_pressure};

use super::random::{constituents, RandomField};
use super::{Ctx, Outcome};

const D: usize = 3;

/// Running maximum of relative errors.
#[derive(Default)]
struct Tally {
    max_err: f64,
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    let d = (a - b).abs();
    let s = a.abs().max(b.abs()).max(scale);
    let e = if s > 0.0 { d / s } else { d };
    if e.is_nan() {
        f64::INFINITY
    } else {
        e
    }
}

impl Tally {
    fn cmp(&mut self, a: f64, b: f64, scale: f64) {
        self.max_err = self.max_err.max(rel(a, b, scale));
    }

    fn cmp_vec<const N: usize>(&mut self, a: &[f64; N], b: &[f64; N], scale: f64) {
        for i in 0..N {
            self.cmp(a[i], b[i], scale);
        }
    }

    /// `max|a - b|` relative to the largest magnitude among `a`, `b` and `terms`.
    fn cmp_fields(&mut self, a: &ScalarField, b: &ScalarField, terms: &[&ScalarField]) {
        let mut s = a.max_abs().max(b.max_abs());
        for t in terms {
            s = s.max(t.max_abs());
        }
        let d = a.sub(b).max_abs();
        let e = if s > 0.0 { d / s } else { d };
        self.max_err = self.max_err.max(if e.is_nan() { f64::INFINITY } else { e });
    }

    fn pointwise(self, samples: usize) -> Outcome {
        Outcome::Pointwise {
            samples,
            max_err: self.max_err,
        }
    }
}

fn vmax<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter()
        .chain(b.iter())
        .fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn scaled<const N: usize>(s: f64, a: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| s * a[i])
}

fn bundle(cx: &mut Ctx) -> FluxBundle<D> {
    let (phi1, v1, v2) = constituents::<D>(&mut cx.rng);
    flux_bundle(phi1, v1, v2, &cx.k)
}

pub(super) fn constants_identity(cx: &mut Ctx) -> Outcome {
    let k = cx.k;
    let (r1, r2) = (k.rho1, k.rho2);
    let jump = 0.5 * (r1 - r2);
    let mean = 0.5 * (r1 + r2);
    let prod = r1 * r2;
    let mut t = Tally::default();
    t.cmp(k.alpha, -jump / mean, 0.0);
    t.cmp(k.beta, -jump / prod, 0.0);
    t.cmp(k.zeta, cx.sign() * mean / prod, 0.0);
    t.cmp(k.beta, k.alpha * k.zeta, 0.0);
    for _ in 0..cx.samples {
        let phi: f64 = cx.uniform(-1.0, 1.0);
        let rho = rho_of_phi(phi, &k).unwrap_or(f64::NAN);
        t.cmp(rho, mean + jump * phi, mean.max(jump.abs()));
        t.cmp(k.density(phi), rho, 0.0);
        t.cmp(
            k.volume_frame_source(phi),
            k.zeta - k.beta * phi,
            k.zeta + k.beta.abs(),
        );
    }
    t.pointwise(cx.samples)
}

pub(super) fn order_parameter_maps(cx: &mut Ctx) -> Outcome {
    let k = cx.k;
    let (r1, r2) = (k.rho1, k.rho2);
    let (j, m) = (0.5 * (r1 - r2), 0.5 * (r1 + r2));
    let mut t = Tally::default();
    for _ in 0..cx.samples {
        let phi = cx.uniform(-1.0, 1.0);
        let (phi1, phi2) = (0.5 * (1.0 + phi), 0.5 * (1.0 - phi));
        let rho = r1 * phi1 + r2 * phi2;
        let c_direct = (r1 * phi1 - r2 * phi2) / rho;
        let c = c_of_phi(phi, &k).unwrap_or(f64::NAN);
        t.cmp(c, c_direct, 1.0);
        t.cmp(phi_of_c(c, &k).unwrap_or(f64::NAN), phi, 1.0);
        t.cmp(rho_of_c(c, &k).unwrap_or(f64::NAN), rho, 0.0);
        // quotient rule on c = (j + m phi)/(m + j phi)
        let den = m + j * phi;
        let slope = (m * den - j * (j + m * phi)) / (den * den);
        t.cmp(dc_dphi(phi, &k).unwrap_or(f64::NAN), slope, 0.0);
        let prod = dc_dphi(phi, &k).unwrap_or(f64::NAN) * dphi_dc(c, &k).unwrap_or(f64::NAN);
        t.cmp(prod, cx.sign(), 0.0);
    }
    t.pointwise(cx.samples)
}

pub(super) fn flux_relations(cx: &mut Ctx) -> Outcome {
    let rm = cx.k.rho1.max(cx.k.rho2);
    let mut t = Tally::default();
    for _ in 0..cx.samples {
        let b = bundle(cx);
        let r = relate_fluxes(b.h_u, b.rho, &cx.k);
        let vm = vmax(&b.v1, &b.v2);
        t.cmp_vec(&b.jtilde_u, &r.jtilde_u, rm * vm);
        t.cmp_vec(&b.j_u, &scaled(cx.sign(), &r.j_u), rm * vm);
        t.cmp_vec(&b.h_v, &r.h_v, vm);
        t.cmp_vec(&b.j_v, &r.j_v, rm * vm);
    }
    t.pointwise(cx.samples)
}

pub(super) fn slip_relations(cx: &mut Ctx) -> Outcome {
    let rm = cx.k.rho1.max(cx.k.rho2);
    let mut t = Tally::default();
    for _ in 0..cx.samples {
        let b = bundle(cx);
        let vm = vmax(&b.v1, &b.v2);
        let jump = b.velocity_jump();
        let x = xi(b.phi());
        t.cmp_vec(&b.h_u, &scaled(-cx.sign() * x, &jump), vm);
        t.cmp_vec(&b.jtilde_u, &scaled(-x * cx.k.jump(), &jump), rm * vm);
    }
    t.pointwise(cx.samples)
}

pub(super) fn momentum_identity(cx: &mut Ctx) -> Outcome {
    let rm = cx.k.rho1.max(cx.k.rho2);
    let mut t = Tally::default();
    for _ in 0..cx.samples {
        let b = bundle(cx);
        let vm = vmax(&b.v1, &b.v2);
        let lhs = scaled(b.rho, &b.v);
        let rhs: [f64; D] = std::array::from_fn(|i| cx.sign() * b.rho * b.u[i] + b.jtilde_u[i]);
        t.cmp_vec(&lhs, &rhs, rm * vm);
    }
    t.pointwise(cx.samples)
}

fn outer_sum(terms: &[(f64, [f64; D])]) -> [[f64; D]; D] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| terms.iter().map(|(a, x)| a * x[i] * x[j]).sum())
    })
}

pub(super) fn peculiar_sums(cx: &mut Ctx) -> Outcome {
    let rm = cx.k.rho1.max(cx.k.rho2);
    let mut t = Tally::default();
    for _ in 0..cx.samples {
        let b = bundle(cx);
        let vm = vmax(&b.v1, &b.v2);
        let scale = rm * vm * vm;
        let constituent = outer_sum(&[(b.rho_t1, b.v1), (b.rho_t2, b.v2), (-b.rho, b.v)]);
        let about_v = outer_sum(&[(b.rho_t1, b.w1), (b.rho_t2, b.w2)]);
        let about_u = outer_sum(&[(b.rho_t1, b.omega1), (b.rho_t2, b.omega2)]);
        let jj = outer_sum(&[(1.0 / b.rho, b.jtilde_u)]);
        for i in 0..D {
            for j in 0..D {
                t.cmp(about_v[i][j], cx.sign() * constituent[i][j], scale);
                t.cmp(about_u[i][j], constituent[i][j] + jj[i][j], scale);
            }
        }
    }
    t.pointwise(cx.samples)
}

pub(super) fn kinetic_tensor(cx: &mut Ctx) -> Outcome {
    let mut t = Tally::default();
    for _ in 0..cx.samples {
        let b = bundle(cx);
        let scale = kinetic_tensor_scale(&b);
        let (lhs, rhs) = kinetic_tensor_sides(&b);
        let gap = kinetic_tensor_gap(&b);
        for i in 0..D {
            for j in 0..D {
                t.cmp(cx.sign() * lhs[i][j], rhs[i][j], scale);
                t.cmp(gap[i][j], 0.0, scale);
            }
        }
    }
    t.pointwise(cx.samples)
}

/// Solves `div_face(grad_face q) = f` for mean-free `f`.
fn inverse_compact_laplacian(fo: &Fourier, f: &ScalarField) -> ScalarField {
    fo.apply_real(f, |mx, my| {
        let e = fo.compact_laplacian_eig(mx, my);
        if e == 0.0 {
            0.0
        } else {
            -1.0 / e
        }
    })
}

fn random_vector(cx: &mut Ctx, grid: Grid, amp: f64) -> VectorField {
    let comps = (0..grid.dims())
        .map(|_| RandomField::new(&mut cx.rng, grid.dims(), amp).sample(grid))
        .collect();
    VectorField::from_components(comps).expect("same grid")
}

/// Manufactured face velocity `v`, face flux `h`, rate `phi_dot` and source
/// `gamma` that satisfy the mixture mass balance and the phase equation by
/// construction; the chain linking `div v`, `div h` and `gamma` is then
/// evaluated member by member.
pub(super) fn div_v_chain(cx: &mut Ctx) -> Outcome {
    let g = cx.grid;
    let k = cx.k;
    let dims = g.dims();
    let fo = Fourier::new(g);
    let phi = RandomField::new(&mut cx.rng, dims, 0.9).sample(g);
    let rho = phi.map(|x| k.density(x));
    let inv_rho = rho.map(|r| 1.0 / r);

    // phi_dot shifted so that the mass balance div v = -[rho] phi_dot / rho is solvable
    let rate0 = RandomField::new(&mut cx.rng, dims, 1.0).sample(g);
    let shift = rate0.mul(&inv_rho).mean() / inv_rho.mean();
    let phi_dot = rate0.map(|x| x - shift);
    let mut target = phi_dot.mul(&inv_rho).scale(-k.jump());
    target.remove_mean();

    let w = random_vector(cx, g, 1.0);
    let fix = inverse_compact_laplacian(&fo, &target.sub(&div_face(&w)));
    let v = w.add(&grad_face(&fix));
    let div_v = div_face(&v);

    let gamma0 = RandomField::new(&mut cx.rng, dims, 1.0).sample(g);
    let residual = gamma0.scale(k.zeta).sub(&phi_dot).sub(&phi.mul(&div_v));
    let gamma = gamma0.map(|x| x - residual.mean() / k.zeta);
    let mut rhs = gamma.scale(k.zeta).sub(&phi_dot).sub(&phi.mul(&div_v));
    rhs.remove_mean();
    let h = grad_face(&inverse_compact_laplacian(&fo, &rhs));
    let div_h = div_face(&h);

    let m1 = div_v.scale(-1.0);
    let m2 = phi_dot.add(&phi.mul(&div_v)).scale(-k.alpha);
    let m3 = div_h.scale(k.alpha).sub(&gamma.scale(cx.sign() * k.beta));

    // divergences are compared against the size of their stencil inputs
    let stencil = ScalarField::constant(g, v.max_norm() / g.min_spacing());
    let terms = [
        &stencil,
        &phi_dot.scale(k.alpha),
        &div_h.scale(k.alpha),
        &gamma.scale(k.beta),
    ];
    let mut t = Tally::default();
    t.cmp_fields(&m1, &m2, &terms);
    t.cmp_fields(&m2, &m3, &terms);
    t.cmp_fields(&m1, &m3, &terms);
    t.pointwise(g.len())
}

/// Random order parameter and the four potentials related pointwise to the
/// closed-form phi-volume one.
struct Frames {
    phi: ScalarField,
    c: ScalarField,
    rho: ScalarField,
    mu: [ScalarField; 4],
    psi_mass_phi: ScalarField,
    psi_mass_c: ScalarField,
}

fn frames(cx: &mut Ctx) -> Frames {
    let g = cx.grid;
    let phi = RandomField::new(&mut cx.rng, g.dims(), 0.9).sample(g);
    let (e, k) = (&cx.energy, &cx.k);
    let mu_hat = chemical_potential(Choice::PhiVolume, &phi, e, k);
    let mu = Choice::ALL
        .map(|to| relate_mu(Choice::PhiVolume, to, &phi, &mu_hat, e, k).expect("same grid"));
    let c = c_field(&phi, k);
    Frames {
        rho: density_field(&phi, k),
        psi_mass_phi: specific_energy(Choice::PhiMass, &phi, e, k),
        psi_mass_c: specific_energy(Choice::CMass, &c, e, k),
        phi,
        c,
        mu,
    }
}

fn idx(c: Choice) -> usize {
    Choice::ALL.iter().position(|&x| x == c).expect("listed")
}

pub(super) fn potential_maps(cx: &mut Ctx) -> Outcome {
    let f = frames(cx);
    let (e, k) = (&cx.energy, &cx.k);
    let mut t = Tally::default();
    for from in Choice::ALL {
        for to in Choice::ALL {
            let got = relate_mu(from, to, &f.phi, &f.mu[idx(from)], e, k).expect("same grid");
            t.cmp_fields(&got, &f.mu[idx(to)], &[]);
        }
    }
    let [hat, hathat, check, checkcheck] = [
        &f.mu[idx(Choice::PhiVolume)],
        &f.mu[idx(Choice::PhiMass)],
        &f.mu[idx(Choice::CVolume)],
        &f.mu[idx(Choice::CMass)],
    ];
    let a1 = f.rho.mul(hathat);
    let a2 = f.psi_mass_phi.scale(k.jump());
    t.cmp_fields(hat, &a1.add(&a2), &[&a1, &a2]);
    let b1 = f.rho.mul(checkcheck);
    let b2 = f.rho.mul(&f.rho).mul(&f.psi_mass_c).scale(k.beta);
    t.cmp_fields(check, &b1.sub(&b2), &[&b1, &b2]);
    let jac = f.rho.map(|r| cx.sign() * r * r / k.product());
    t.cmp_fields(check, &jac.mul(hat), &[]);
    t.pointwise(cx.grid.len())
}

fn pressures(cx: &mut Ctx, f: &Frames) -> [ScalarField; 4] {
    let g = cx.grid;
    let p_hat = RandomField::new(&mut cx.rng, g.dims(), 1.0).sample(g);
    let fields = TransformFields {
        phi: &f.phi,
        mu_hat: &f.mu[idx(Choice::PhiVolume)],
    };
    Choice::ALL.map(|to| {
        transform_pressure(Choice::PhiVolume, to, &p_hat, fields, &cx.energy, &cx.k)
            .expect("same grid")
    })
}

pub(super) fn pressure_cycle(cx: &mut Ctx) -> Outcome {
    let f = frames(cx);
    let p = pressures(cx, &f);
    let k = cx.k;
    let mu_hat = &f.mu[idx(Choice::PhiVolume)];
    let fields = TransformFields {
        phi: &f.phi,
        mu_hat,
    };
    let mut t = Tally::default();
    for from in Choice::ALL {
        for to in Choice::ALL {
            let got = transform_pressure(from, to, &p[idx(from)], fields, &cx.energy, &k)
                .expect("same grid");
            t.cmp_fields(&got, &p[idx(to)], &[]);
        }
    }
    let [hat, hathat, check, checkcheck] = [
        &p[idx(Choice::PhiVolume)],
        &p[idx(Choice::PhiMass)],
        &p[idx(Choice::CVolume)],
        &p[idx(Choice::CMass)],
    ];
    let a = f.psi_mass_phi.scale(k.mean());
    t.cmp_fields(hat, &hathat.add(&a), &[hathat, &a]);
    let b = f.rho.mul(&f.psi_mass_c);
    t.cmp_fields(check, &checkcheck.add(&b), &[checkcheck, &b]);
    let s = mu_hat.mul(&f.phi).scale(cx.sign());
    t.cmp_fields(check, &hat.add(&s), &[hat, &s]);
    t.pointwise(cx.grid.len())
}

/// The four dissipation restrictions: combined potentials, the isotropic
/// stress scalars within each order-parameter pair, and the flux and
/// mass-transfer dissipation with identified fluxes.
pub(super) fn restriction_equivalence(cx: &mut Ctx) -> Outcome {
    let f = frames(cx);
    let p = pressures(cx, &f);
    let k = cx.k;
    let (mu, rho, phi) = (&f.mu, &f.rho, &f.phi);
    let [i1, i2, i3, i4] = Choice::ALL.map(idx);

    let pot = [
        mu[i1].add(&p[i1].scale(cx.sign() * k.alpha)),
        rho.mul(&mu[i2]).add(&p[i2].scale(k.alpha)),
        mu[i3]
            .zip_map(rho, |m, r| m / r)
            .add(&p[i3].scale(k.beta))
            .scale(1.0 / k.zeta),
        mu[i4].add(&p[i4].scale(k.beta)).scale(1.0 / k.zeta),
    ];
    let mut t = Tally::default();
    let alpha_p = p[i1].scale(k.alpha);
    for q in &pot[1..] {
        t.cmp_fields(&pot[0], q, &[&mu[i1], &alpha_p]);
    }

    let psi_phi = gl_energy_density(phi, &cx.energy);
    let psi_c = volume_energy_density(Choice::CVolume, &f.c, &cx.energy, &k);
    let s1 = p[i1].add(&mu[i1].mul(phi)).sub(&psi_phi);
    let s2 = p[i2].add(&rho.mul(&mu[i2]).mul(phi));
    let s3 = p[i3].sub(&psi_c);
    let s4 = p[i4].clone();
    t.cmp_fields(&s1, &s2, &[&p[i1], &psi_phi, &p[i2]]);
    t.cmp_fields(&s3, &s4, &[&p[i3], &psi_c]);

    // identified fluxes: h^v for phi frames, J^v = h^v / zeta for c frames
    let h = constitutive::diffusive_flux(&mu[i1], &p[i1], phi, &k, &cx.constitutive)
        .expect("same grid");
    let gamma = reaction_mobility(phi, &cx.constitutive)
        .mul(&pot[0])
        .scale(-1.0);
    let dissipation = |q: &ScalarField, flux_scale: f64, source_scale: f64| {
        grad(q)
            .dot(&h)
            .scale(-flux_scale)
            .sub(&q.mul(&gamma).scale(source_scale))
    };
    let d1 = dissipation(&pot[0], 1.0, k.zeta);
    let d2 = dissipation(&pot[1], 1.0, k.zeta);
    // (mu_check/rho + beta p_check) = zeta * pot, and J^v = h / zeta
    let d3 = dissipation(&pot[2].scale(k.zeta), 1.0 / k.zeta, 1.0);
    let d4 = dissipation(&pot[3].scale(k.zeta), 1.0 / k.zeta, 1.0);
    for d in [&d2, &d3, &d4] {
        t.cmp_fields(&d1, d, &[]);
    }
    t.pointwise(cx.grid.len())
}

pub(super) fn pstar_transform(cx: &mut Ctx) -> Outcome {
    let g = cx.grid;
    let k = cx.k;
    let phi = RandomField::new(&mut cx.rng, g.dims(), 0.9).sample(g);
    let p_hat = RandomField::new(&mut cx.rng, g.dims(), 1.0).sample(g);
    let mu = chemical_potential(Choice::PhiVolume, &phi, &cx.energy, &k);
    let rho = density_field(&phi, &k);
    let mut t = Tally::default();
    let (p_star, back) = match shokrpour_pressure(&phi, &p_hat, &k)
        .and_then(|ps| pressure_from_pstar(&phi, &ps, &k).map(|b| (ps, b)))
    {
        Ok(x) => x,
        Err(_) => {
            return Outcome::Pointwise {
                samples: g.len(),
                max_err: f64::INFINITY,
            }
        }
    };
    t.cmp_fields(&back, &p_hat, &[]);
    let ratio = rho.map(|r| k.mean() / r);
    t.cmp_fields(&p_hat, &p_star.mul(&ratio), &[]);
    // momentum: p* - p* [rho] phi / rho = p* {rho} / rho
    let lhs = p_star.sub(&p_star.mul(&phi).zip_map(&rho, |x, r| x * k.jump() / r));
    t.cmp_fields(&lhs, &p_star.mul(&ratio), &[&p_star]);
    // phase: mu - p* [rho] / rho = mu + alpha p* {rho} / rho
    let a = mu.sub(&p_star.zip_map(&rho, |x, r| x * k.jump() / r));
    let b = mu.add(&p_star.mul(&ratio).scale(cx.sign() * k.alpha));
    t.cmp_fields(&a, &b, &[&mu, &p_star]);
    t.pointwise(g.len())
}

pub(super) fn pstar_flux_identity(cx: &mut Ctx) -> Outcome {
    let g = cx.grid;
    let k = cx.k;
    let phi = RandomField::new(&mut cx.rng, g.dims(), 0.9).sample(g);
    let p_hat = RandomField::new(&mut cx.rng, g.dims(), 1.0).sample(g);
    let mu = chemical_potential(Choice::PhiVolume, &phi, &cx.energy, &k);
    let Ok(gap) = pstar_flux_gap(&phi, &mu, &p_hat, &k, &cx.constitutive) else {
        return Outcome::Pointwise {
            samples: g.len(),
            max_err: f64::INFINITY,
        };
    };
    let m = constitutive::mobility(&phi, &cx.constitutive);
    let drive = mu.zip_map(&p_hat, |a, b| a + k.alpha * b);
    let reference = div(&grad(&drive).scale_by(&m));
    let star = reference.add(&gap);
    let mut t = Tally::default();
    t.cmp_fields(&star, &reference.scale(cx.sign()), &[]);
    t.pointwise(g.len())
}

/// Closed-form discrete potentials of the mass frames against the volume
/// frames: exact for the chosen discretization.
pub(super) fn chem_potential_mass_frames(cx: &mut Ctx) -> Outcome {
    let g = cx.grid;
    let (e, k) = (cx.energy, cx.k);
    let phi = RandomField::new(&mut cx.rng, g.dims(), 0.9).sample(g);
    let c = c_field(&phi, &k);
    let rho = density_field(&phi, &k);
    let hat = chemical_potential(Choice::PhiVolume, &phi, &e, &k);
    let hathat = chemical_potential(Choice::PhiMass, &phi, &e, &k);
    let check = chemical_potential(Choice::CVolume, &c, &e, &k);
    let checkcheck = chemical_potential(Choice::CMass, &c, &e, &k);
    let mut t = Tally::default();
    let a1 = rho.mul(&hathat);
    let a2 = specific_energy(Choice::PhiMass, &phi, &e, &k).scale(cx.sign() * k.jump());
    t.cmp_fields(&hat, &a1.add(&a2), &[&a1, &a2]);
    let b1 = rho.mul(&checkcheck);
    let b2 = rho
        .mul(&rho)
        .mul(&specific_energy(Choice::CMass, &c, &e, &k))
        .scale(k.beta);
    t.cmp_fields(&check, &b1.sub(&b2), &[&b1, &b2]);
    t.pointwise(g.len())
}

/// Runs `level` on three successive refinements (x2, x4, x8) of the audit
/// grid, with one smooth field shared across levels.
fn refinement(cx: &mut Ctx, level: impl Fn(&Ctx, &RandomField, Grid) -> f64) -> Outcome {
    let field = RandomField::new(&mut cx.rng, cx.grid.dims(), 0.5);
    let grids = [cx.grid.refined(2), cx.grid.refined(4), cx.grid.refined(8)];
    let errors = grids.map(|g| level(cx, &field, g));
    Outcome::Discretization {
        samples: grids.iter().map(|g| g.len()).sum(),
        errors,
        spacing: grids.map(|g| g.min_spacing()),
    }
}

fn rel_max(a: &ScalarField, b: &ScalarField) -> f64 {
    let s = a.max_abs().max(b.max_abs());
    let d = a.sub(b).max_abs();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

pub(super) fn chem_potential_frame_change(cx: &mut Ctx) -> Outcome {
    refinement(cx, |cx, field, g| {
        let (e, k) = (&cx.energy, &cx.k);
        let phi = field.sample(g);
        let c = c_field(&phi, k);
        let hat = chemical_potential(Choice::PhiVolume, &phi, e, k);
        let check = chemical_potential(Choice::CVolume, &c, e, k);
        let jac = density_field(&phi, k).map(|r| cx.sign() * r * r / k.product());
        rel_max(&check, &jac.mul(&hat))
    })
}

pub(super) fn free_energy_identification(cx: &mut Ctx) -> Outcome {
    refinement(cx, |cx, field, g| {
        let (e, k) = (&cx.energy, &cx.k);
        let phi = field.sample(g);
        let c = c_field(&phi, k);
        let by_phi = gl_energy_density(&phi, e);
        let by_c = volume_energy_density(Choice::CVolume, &c, e, k);
        let by_mass = density_field(&phi, k).mul(&specific_energy(Choice::CMass, &c, e, k));
        rel_max(&by_phi, &by_c.scale(cx.sign())).max(rel_max(&by_phi, &by_mass))
    })
}

pub(super) fn korteweg_equivalence(cx: &mut Ctx) -> Outcome {
    refinement(cx, |cx, field, g| {
        let (e, k) = (&cx.energy, &cx.k);
        let phi = field.sample(g);
        let c = c_field(&phi, k);
        let by_phi = korteweg_stress(&phi, e);
        let weight = c.map(|x| {
            let s = mixture::dphi_dc(x, k).unwrap_or(f64::NAN);
            s * s
        });
        let gc = grad(&c);
        let by_c = TensorField::outer(-cx.sign() * e.gradient(), &gc, &gc).scale_by(&weight);
        let scale = by_phi.max_abs().max(by_c.max_abs());
        let d = by_phi.sub(&by_c).max_abs();
        if scale > 0.0 {
            d / scale
        } else {
            d
        }
    })
}
