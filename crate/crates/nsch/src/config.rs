//! `key = value` run configuration.
//!
//! Blank lines and text after `#` are ignored. Every key is optional; missing
//! keys take the defaults below. Unknown keys are rejected as a group, and
//! parse or validation errors carry the line number of the offending key.
//!
//! ```text
//! # grid
//! dims = 2
//! nx = 64
//! ny = 64
//! lx = 1
//! ly = 1
//! # physics
//! rho1 = 1
//! rho2 = 1
//! sigma = 1
//! epsilon = 0.02
//! nu1 = 0.1
//! nu2 = 0.1
//! lambda = 0
//! g = 0
//! M0 = 0.001
//! m0 = 0
//! mobility_model = degenerate
//! well = quartic
//! viscosity_mean = arithmetic
//! # numerics
//! dt = 0.0002
//! t_end = 0.1
//! cfl = 0.4
//! S = 2
//! linear_tol = 0.0000000001
//! overshoot_tol = 0.05
//! max_iter = 5000
//! evolve_flow = true
//! # scenario
//! scenario = spinodal
//! phi_mean = 0
//! noise_amplitude = 0.05
//! seed = 1
//! radius = 0.25
//! u_amplitude = 0
//! # output
//! output_dir = out
//! snapshot_every = 0
//! diagnostics_every = 1
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::constitutive::{ConstitutiveParams, MobilityModel, ViscosityMean};
use crate::energy::{EnergyParams, Well};
use crate::error::{Error, Result};
use crate::fields::Grid;
use crate::mixture::make_constants;
use crate::scenario::Scenario;
use crate::solver::{Numerics, Physics};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dims: usize,
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,

    pub rho1: f64,
    pub rho2: f64,
    pub sigma: f64,
    pub epsilon: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub lambda: f64,
    pub g: f64,
    pub m_big: f64,
    pub m_small: f64,
    pub mobility_model: MobilityModel,
    pub well: Well,
    pub viscosity_mean: ViscosityMean,

    pub dt: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub stabilization: f64,
    pub linear_tol: f64,
    pub overshoot_tol: f64,
    pub max_iter: usize,
    pub evolve_flow: bool,

    pub scenario: Scenario,

    pub output_dir: String,
    /// Snapshot cadence in steps; 0 writes only the initial and final states.
    pub snapshot_every: usize,
    /// Diagnostics cadence in steps, at least 1.
    pub diagnostics_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = ConstitutiveParams::default();
        let n = Numerics::default();
        RunConfig {
            dims: 2,
            nx: 64,
            ny: 64,
            lx: 1.0,
            ly: 1.0,
            rho1: 1.0,
            rho2: 1.0,
            sigma: 1.0,
            epsilon: 0.02,
            nu1: c.nu1,
            nu2: c.nu2,
            lambda: c.lambda,
            g: 0.0,
            m_big: c.m_big,
            m_small: c.m_small,
            mobility_model: c.mobility_model,
            well: Well::Quartic,
            viscosity_mean: c.viscosity_mean,
            dt: 2e-4,
            t_end: 0.1,
            cfl: n.cfl,
            stabilization: n.stabilization,
            linear_tol: n.linear_tol,
            overshoot_tol: n.overshoot_tol,
            max_iter: n.max_iter,
            evolve_flow: n.evolve_flow,
            scenario: Scenario::default(),
            output_dir: "out".to_string(),
            snapshot_every: 0,
            diagnostics_every: 1,
        }
    }
}

const KEYS: &[&str] = &[
    "dims",
    "nx",
    "ny",
    "lx",
    "ly",
    "rho1",
    "rho2",
    "sigma",
    "epsilon",
    "nu1",
    "nu2",
    "lambda",
    "g",
    "M0",
    "m0",
    "mobility_model",
    "well",
    "viscosity_mean",
    "dt",
    "t_end",
    "cfl",
    "S",
    "linear_tol",
    "overshoot_tol",
    "max_iter",
    "evolve_flow",
    "scenario",
    "phi_mean",
    "noise_amplitude",
    "seed",
    "radius",
    "u_amplitude",
    "output_dir",
    "snapshot_every",
    "diagnostics_every",
];

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| Error::Config {
        line,
        msg: format!("bad value `{raw}` for {key}: {e}"),
    })
}

/// Parses configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut seen: HashMap<String, (usize, String)> = HashMap::new();
    let mut unknown = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, val) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected `key = value`, got `{body}`"),
        })?;
        let (key, val) = (key.trim(), val.trim());
        if !KEYS.contains(&key) {
            unknown.push(key.to_string());
            continue;
        }
        if val.is_empty() {
            return Err(Error::Config {
                line,
                msg: format!("missing value for {key}"),
            });
        }
        if let Some((first, _)) = seen.get(key) {
            return Err(Error::Config {
                line,
                msg: format!("duplicate key {key} (first set on line {first})"),
            });
        }
        seen.insert(key.to_string(), (line, val.to_string()));
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownKeys(unknown));
    }

    let mut c = RunConfig::default();
    let line_of = |key: &str| seen.get(key).map(|(l, _)| *l).unwrap_or(0);
    for (key, (line, raw)) in &seen {
        let l = *line;
        let k = key.as_str();
        match k {
            "dims" => c.dims = value(l, k, raw)?,
            "nx" => c.nx = value(l, k, raw)?,
            "ny" => c.ny = value(l, k, raw)?,
            "lx" => c.lx = value(l, k, raw)?,
            "ly" => c.ly = value(l, k, raw)?,
            "rho1" => c.rho1 = value(l, k, raw)?,
            "rho2" => c.rho2 = value(l, k, raw)?,
            "sigma" => c.sigma = value(l, k, raw)?,
            "epsilon" => c.epsilon = value(l, k, raw)?,
            "nu1" => c.nu1 = value(l, k, raw)?,
            "nu2" => c.nu2 = value(l, k, raw)?,
            "lambda" => c.lambda = value(l, k, raw)?,
            "g" => c.g = value(l, k, raw)?,
            "M0" => c.m_big = value(l, k, raw)?,
            "m0" => c.m_small = value(l, k, raw)?,
            "mobility_model" => c.mobility_model = value(l, k, raw)?,
            "well" => c.well = value(l, k, raw)?,
            "viscosity_mean" => c.viscosity_mean = value(l, k, raw)?,
            "dt" => c.dt = value(l, k, raw)?,
            "t_end" => c.t_end = value(l, k, raw)?,
            "cfl" => c.cfl = value(l, k, raw)?,
            "S" => c.stabilization = value(l, k, raw)?,
            "linear_tol" => c.linear_tol = value(l, k, raw)?,
            "overshoot_tol" => c.overshoot_tol = value(l, k, raw)?,
            "max_iter" => c.max_iter = value(l, k, raw)?,
            "evolve_flow" => c.evolve_flow = value(l, k, raw)?,
            "scenario" => c.scenario.kind = value(l, k, raw)?,
            "phi_mean" => c.scenario.phi_mean = value(l, k, raw)?,
            "noise_amplitude" => c.scenario.noise_amplitude = value(l, k, raw)?,
            "seed" => c.scenario.seed = value(l, k, raw)?,
            "radius" => c.scenario.radius = value(l, k, raw)?,
            "u_amplitude" => c.scenario.u_amplitude = value(l, k, raw)?,
            "output_dir" => c.output_dir = raw.clone(),
            "snapshot_every" => c.snapshot_every = value(l, k, raw)?,
            "diagnostics_every" => c.diagnostics_every = value(l, k, raw)?,
            _ => unreachable!("key list checked above"),
        }
    }
    c.validate().map_err(|e| match e {
        Error::InvalidParameter { name, reason } => Error::Config {
            line: line_of(config_key(name)),
            msg: format!("invalid {}: {reason}", config_key(name)),
        },
        other => other,
    })?;
    Ok(c)
}

/// Config key for a parameter name used in validation errors.
fn config_key(name: &str) -> &str {
    match name {
        "stabilization" => "S",
        other => other,
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        match self.dims {
            1 => Grid::new_1d(self.nx, self.lx),
            2 => Grid::new_2d(self.nx, self.ny, self.lx, self.ly),
            d => Err(Error::param("dims", format!("must be 1 or 2, got {d}"))),
        }
    }

    pub fn physics(&self) -> Result<Physics> {
        let mut energy = EnergyParams::new(self.sigma, self.epsilon)?;
        energy.well = self.well;
        Ok(Physics {
            k: make_constants(self.rho1, self.rho2)?,
            energy,
            constitutive: ConstitutiveParams {
                nu1: self.nu1,
                nu2: self.nu2,
                lambda: self.lambda,
                mobility_model: self.mobility_model,
                m_big: self.m_big,
                m_small: self.m_small,
                viscosity_mean: self.viscosity_mean,
            },
            g: self.g,
        })
    }

    pub fn numerics(&self) -> Numerics {
        Numerics {
            cfl: self.cfl,
            stabilization: self.stabilization,
            linear_tol: self.linear_tol,
            max_iter: self.max_iter,
            overshoot_tol: self.overshoot_tol,
            evolve_flow: self.evolve_flow,
        }
    }

    /// Number of steps needed to reach `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        let physics = self.physics()?;
        physics.constitutive.validate(grid.dims())?;
        self.numerics().validate()?;
        self.scenario.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param(
                "dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::param(
                "t_end",
                format!("must be positive, got {}", self.t_end),
            ));
        }
        if !self.g.is_finite() {
            return Err(Error::param("g", "must be finite"));
        }
        if self.diagnostics_every == 0 {
            return Err(Error::param("diagnostics_every", "must be at least 1"));
        }
        if self.output_dir.is_empty() {
            return Err(Error::param("output_dir", "must not be empty"));
        }
        Ok(())
    }

    /// Fully resolved configuration in parseable form, one key per line.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("dims", self.dims.to_string());
        put("nx", self.nx.to_string());
        put("ny", self.ny.to_string());
        put("lx", self.lx.to_string());
        put("ly", self.ly.to_string());
        put("rho1", self.rho1.to_string());
        put("rho2", self.rho2.to_string());
        put("sigma", self.sigma.to_string());
        put("epsilon", self.epsilon.to_string());
        put("nu1", self.nu1.to_string());
        put("nu2", self.nu2.to_string());
        put("lambda", self.lambda.to_string());
        put("g", self.g.to_string());
        put("M0", self.m_big.to_string());
        put("m0", self.m_small.to_string());
        put("mobility_model", self.mobility_model.name().to_string());
        put("well", self.well.name().to_string());
        put("viscosity_mean", self.viscosity_mean.name().to_string());
        put("dt", self.dt.to_string());
        put("t_end", self.t_end.to_string());
        put("cfl", self.cfl.to_string());
        put("S", self.stabilization.to_string());
        put("linear_tol", self.linear_tol.to_string());
        put("overshoot_tol", self.overshoot_tol.to_string());
        put("max_iter", self.max_iter.to_string());
        put("evolve_flow", self.evolve_flow.to_string());
        put("scenario", self.scenario.kind.name().to_string());
        put("phi_mean", self.scenario.phi_mean.to_string());
        put("noise_amplitude", self.scenario.noise_amplitude.to_string());
        put("seed", self.scenario.seed.to_string());
        put("radius", self.scenario.radius.to_string());
        put("u_amplitude", self.scenario.u_amplitude.to_string());
        put("output_dir", self.output_dir.clone());
        put("snapshot_every", self.snapshot_every.to_string());
        put("diagnostics_every", self.diagnostics_every.to_string());
        s
    }
}
