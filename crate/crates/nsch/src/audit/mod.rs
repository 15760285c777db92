//! Randomized certification of the mixture identities.
//!
//! Every entry of [`REGISTRY`] is run once per audit with its own seeded
//! random stream, so the report body is a pure function of the seed, grid and
//! density pair. Pointwise checks must stay below a relative tolerance;
//! discretization checks compare quantities that agree only in the continuum
//! and must show second-order decay over three grids instead.
//!
//! ```
//! use nsch::audit::{run_audit, Tolerances};
//! use nsch::{make_constants, Grid};
//!
//! let k = make_constants(2.0, 1.0).unwrap();
//! let report = run_audit(7, Grid::unit_square(32).unwrap(), k, Tolerances::default());
//! assert!(report.passed(), "{}", report.to_table());
//! ```

mod checks;
pub mod random;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constitutive::ConstitutiveParams;
use crate::energy::EnergyParams;
use crate::fields::Grid;
use crate::mixture::MixtureConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckClass {
    /// Exact algebra; relative error below `Tolerances::pointwise`.
    Pointwise,
    /// Agreement up to O(dx^2); empirical order at least `Tolerances::min_order`.
    Discretization,
}

impl CheckClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pointwise => "pointwise",
            Self::Discretization => "discretization",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub pointwise: f64,
    pub min_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pointwise: 1e-11,
            min_order: 1.9,
        }
    }
}

type CheckFn = fn(&mut Ctx) -> Outcome;

pub struct CheckSpec {
    pub name: &'static str,
    /// Short statement of the identity being certified.
    pub anchor: &'static str,
    pub class: CheckClass,
    run: CheckFn,
}

macro_rules! check {
    ($name:ident, $class:ident, $anchor:expr) => {
        CheckSpec {
            name: stringify!($name),
            anchor: $anchor,
            class: CheckClass::$class,
            run: checks::$name,
        }
    };
}

/// Every audited identity, in report order.
pub const REGISTRY: &[CheckSpec] = &[
    check!(
        constants_identity,
        Pointwise,
        "alpha=-[rho]/{rho}; beta=-[rho]/(rho1 rho2)=alpha zeta; zeta={rho}/(rho1 rho2); zeta-beta phi=rho/(rho1 rho2)"
    ),
    check!(
        order_parameter_maps,
        Pointwise,
        "c=(rho1 phi1-rho2 phi2)/rho; phi(c(phi))=phi; c'(phi) phi'(c)=1"
    ),
    check!(
        flux_relations,
        Pointwise,
        "Jtilde^u=[rho]h^u; J^u={rho}h^u; h^v={rho}h^u/rho; J^v=rho1 rho2 h^u/rho"
    ),
    check!(slip_relations, Pointwise, "h^u=-xi(phi)[v]; Jtilde^u=-xi(phi)[rho][v]"),
    check!(momentum_identity, Pointwise, "rho v=rho u+Jtilde^u"),
    check!(
        peculiar_sums,
        Pointwise,
        "sum rho_j w_j w_j and sum rho_j omega_j omega_j from constituent momenta"
    ),
    check!(
        kinetic_tensor,
        Pointwise,
        "sum rho_j w_j w_j=sum rho_j omega_j omega_j-Jtilde Jtilde/rho"
    ),
    check!(
        div_v_chain,
        Pointwise,
        "-div v=-alpha(phi_dot+phi div v)=alpha div h^v-beta gamma"
    ),
    check!(
        potential_maps,
        Pointwise,
        "mu_hat=rho mu_hathat+[rho]psi; mu_check=rho mu_checkcheck-beta rho^2 psi; mu_check=rho^2 mu_hat/(rho1 rho2)"
    ),
    check!(
        pressure_cycle,
        Pointwise,
        "p_hat=p_hathat+{rho}psi; p_check=p_checkcheck+rho psi; p_check=p_hat+mu_hat phi"
    ),
    check!(
        restriction_equivalence,
        Pointwise,
        "four dissipation restrictions coincide under the pressure maps"
    ),
    check!(pstar_transform, Pointwise, "p_hat=p* {rho}/rho=p*/(1-alpha phi)"),
    check!(
        pstar_flux_identity,
        Pointwise,
        "div(M grad(mu-[rho]p*/rho))=div(M grad(mu+alpha p_hat))"
    ),
    check!(
        chem_potential_mass_frames,
        Pointwise,
        "discrete mass-frame potentials vs volume-frame potentials"
    ),
    check!(
        chem_potential_frame_change,
        Discretization,
        "discrete mu_check vs rho^2 mu_hat/(rho1 rho2)"
    ),
    check!(
        free_energy_identification,
        Discretization,
        "Psi(phi, grad phi)=Psi(c, grad c)=rho psi(c, grad c)"
    ),
    check!(
        korteweg_equivalence,
        Discretization,
        "grad phi grad phi=phi'(c)^2 grad c grad c"
    ),
];

/// Per-check state handed to the check functions.
pub(crate) struct Ctx {
    rng: ChaCha8Rng,
    grid: Grid,
    k: MixtureConstants,
    energy: EnergyParams,
    constitutive: ConstitutiveParams,
    samples: usize,
    faulty: bool,
}

impl Ctx {
    /// -1 when the harness corrupts this check, else 1.
    fn sign(&self) -> f64 {
        if self.faulty {
            -1.0
        } else {
            1.0
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }
}

pub(crate) enum Outcome {
    Pointwise {
        samples: usize,
        max_err: f64,
    },
    Discretization {
        samples: usize,
        errors: [f64; 3],
        spacing: [f64; 3],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub anchor: &'static str,
    pub class: CheckClass,
    pub samples: usize,
    /// Largest relative error; for discretization checks, on the finest grid.
    pub max_err: f64,
    pub tol: f64,
    /// Discretization checks: errors on the three grids.
    pub errors: Option<[f64; 3]>,
    /// Discretization checks: smallest observed order between levels.
    pub order: Option<f64>,
    /// Discretization checks: `max_err / dx^2` on the finest grid.
    pub constant: Option<f64>,
    pub passed: bool,
}

impl CheckRecord {
    fn tol_text(&self) -> String {
        match self.class {
            CheckClass::Pointwise => format!("{:.1e}", self.tol),
            CheckClass::Discretization => match self.order {
                Some(o) if o.is_finite() => format!("order>={:.2} observed={:.3}", self.tol, o),
                _ => format!("order>={:.2} observed=exact", self.tol),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub seed: u64,
    pub grid: Grid,
    pub rho1: f64,
    pub rho2: f64,
    pub checks: Vec<CheckRecord>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn grid_text(&self) -> String {
        let g = &self.grid;
        if g.dims() == 1 {
            format!("{} (lx {})", g.nx(), g.lx())
        } else {
            format!("{}x{} (lx {}, ly {})", g.nx(), g.ny(), g.lx(), g.ly())
        }
    }

    /// Tab-separated records, one per check, after `#` header lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed\t{}", self.seed);
        let _ = writeln!(out, "# grid\t{}", self.grid_text());
        let _ = writeln!(out, "# rho\t{}\t{}", self.rho1, self.rho2);
        let _ = writeln!(out, "# name\tanchor\tsamples\tmax_err\ttol\tverdict");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.3e}\t{}\t{}",
                c.name,
                c.anchor,
                c.samples,
                c.max_err,
                c.tol_text(),
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        out
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "identity audit: seed {}, grid {}, rho1 {}, rho2 {}",
            self.seed,
            self.grid_text(),
            self.rho1,
            self.rho2
        );
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4);
        let _ = writeln!(
            out,
            "{:<w$}  {:<14}  {:>8}  {:>10}  {:<32}  verdict",
            "check", "class", "samples", "max_err", "tolerance"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<w$}  {:<14}  {:>8}  {:>10.3e}  {:<32}  {}",
                c.name,
                c.class.name(),
                c.samples,
                c.max_err,
                c.tol_text(),
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        for c in self
            .checks
            .iter()
            .filter(|c| c.class == CheckClass::Discretization)
        {
            if let (Some(e), Some(cst)) = (c.errors, c.constant) {
                let _ = writeln!(
                    out,
                    "  {}: errors {:.3e} {:.3e} {:.3e}, C = err/dx^2 = {:.3e}",
                    c.name, e[0], e[1], e[2], cst
                );
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} of {} checks passed",
            self.checks.len() - failed,
            self.checks.len()
        );
        out
    }
}

/// Configurable audit run.
#[derive(Debug, Clone)]
pub struct Audit {
    pub seed: u64,
    pub grid: Grid,
    pub k: MixtureConstants,
    pub tolerances: Tolerances,
    /// Random draws per constituent-level check.
    pub samples: usize,
    /// Name of a check whose relation is deliberately corrupted (sign flip).
    pub fault: Option<String>,
}

impl Audit {
    pub fn new(seed: u64, grid: Grid, k: MixtureConstants) -> Self {
        Audit {
            seed,
            grid,
            k,
            tolerances: Tolerances::default(),
            samples: 1000,
            fault: None,
        }
    }

    pub fn with_fault(mut self, name: &str) -> Self {
        self.fault = Some(name.to_string());
        self
    }

    pub fn run(&self) -> AuditReport {
        let energy = EnergyParams::new(1.0, 0.05).expect("valid energy parameters");
        let constitutive = ConstitutiveParams {
            m_big: 1.0,
            m_small: 1.0,
            ..ConstitutiveParams::default()
        };
        let checks = REGISTRY
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i as u64 + 1);
                let mut cx = Ctx {
                    rng,
                    grid: self.grid,
                    k: self.k,
                    energy,
                    constitutive,
                    samples: self.samples,
                    faulty: self.fault.as_deref() == Some(spec.name),
                };
                self.record(spec, (spec.run)(&mut cx))
            })
            .collect();
        AuditReport {
            seed: self.seed,
            grid: self.grid,
            rho1: self.k.rho1,
            rho2: self.k.rho2,
            checks,
        }
    }

    fn record(&self, spec: &CheckSpec, outcome: Outcome) -> CheckRecord {
        let tol = self.tolerances;
        match outcome {
            Outcome::Pointwise { samples, max_err } => CheckRecord {
                name: spec.name,
                anchor: spec.anchor,
                class: spec.class,
                samples,
                max_err,
                tol: tol.pointwise,
                errors: None,
                order: None,
                constant: None,
                passed: max_err < tol.pointwise,
            },
            Outcome::Discretization {
                samples,
                errors,
                spacing,
            } => {
                let order = (0..2)
                    .map(|i| (errors[i] / errors[i + 1]).ln() / (spacing[i] / spacing[i + 1]).ln())
                    .fold(f64::INFINITY, f64::min);
                // agreement at round-off on every level counts as exact
                let exact = errors.iter().all(|&e| e < tol.pointwise);
                let order = if exact { f64::INFINITY } else { order };
                let finest = errors[2];
                CheckRecord {
                    name: spec.name,
                    anchor: spec.anchor,
                    class: spec.class,
                    samples,
                    max_err: finest,
                    tol: tol.min_order,
                    errors: Some(errors),
                    order: Some(order),
                    constant: Some(finest / (spacing[2] * spacing[2])),
                    passed: exact || order >= tol.min_order,
                }
            }
        }
    }
}

/// Runs the full registry with the default sample count.
pub fn run_audit(
    seed: u64,
    grid: Grid,
    k: MixtureConstants,
    tolerances: Tolerances,
) -> AuditReport {
    Audit {
        tolerances,
        ..Audit::new(seed, grid, k)
    }
    .run()
}
