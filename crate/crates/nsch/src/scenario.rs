//! Named initial conditions.
//!
//! None of these reproduce published experiments; they are convenient starting
//! states for runs and tests.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScenarioKind {
    /// Uniform mean plus seeded white noise.
    #[default]
    Spinodal,
    /// Circular drop of phase 1 (`phi = 1`) in phase 2, tanh profile.
    Drop,
    /// Horizontal band of phase 1 across the domain (a 1D front pair in 1D).
    Band,
    /// `phi = phi_mean` everywhere.
    Uniform,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spinodal => "spinodal",
            Self::Drop => "drop",
            Self::Band => "band",
            Self::Uniform => "uniform",
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spinodal" => Ok(Self::Spinodal),
            "drop" => Ok(Self::Drop),
            "band" => Ok(Self::Band),
            "uniform" => Ok(Self::Uniform),
            other => Err(format!(
                "unknown scenario `{other}` (expected spinodal, drop, band or uniform)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub phi_mean: f64,
    pub noise_amplitude: f64,
    pub seed: u64,
    /// Drop radius or band half-width, as a fraction of `ly` (of `lx` in 1D).
    pub radius: f64,
    /// Amplitude of a Taylor-Green velocity added to every scenario.
    pub u_amplitude: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            kind: ScenarioKind::Spinodal,
            phi_mean: 0.0,
            noise_amplitude: 0.05,
            seed: 1,
            radius: 0.25,
            u_amplitude: 0.0,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.phi_mean.is_nan() || self.phi_mean.abs() > 1.0 {
            return Err(Error::param("phi_mean", "must lie in [-1, 1]"));
        }
        if !(self.noise_amplitude >= 0.0 && self.phi_mean.abs() + self.noise_amplitude <= 1.0) {
            return Err(Error::param(
                "noise_amplitude",
                "must be >= 0 with |phi_mean| + noise_amplitude <= 1",
            ));
        }
        if !(self.radius > 0.0 && self.radius < 0.5) {
            return Err(Error::param("radius", "must lie in (0, 0.5)"));
        }
        if !self.u_amplitude.is_finite() {
            return Err(Error::param("u_amplitude", "must be finite"));
        }
        Ok(())
    }

    /// Initial order parameter; `epsilon` sets the tanh interface width.
    pub fn phi(&self, grid: Grid, epsilon: f64) -> ScalarField {
        let w = std::f64::consts::SQRT_2 * epsilon;
        let (lx, ly) = (grid.lx(), grid.ly());
        match self.kind {
            ScenarioKind::Spinodal => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let a = self.noise_amplitude;
                let data = (0..grid.len())
                    .map(|_| self.phi_mean + if a > 0.0 { rng.gen_range(-a..=a) } else { 0.0 })
                    .collect();
                ScalarField::from_vec(grid, data).expect("grid length")
            }
            ScenarioKind::Drop => {
                let scale = if grid.dims() == 1 { lx } else { lx.min(ly) };
                let r = self.radius * scale;
                ScalarField::from_fn(grid, |x, y| {
                    let dx = x - 0.5 * lx;
                    let dy = if grid.dims() == 1 { 0.0 } else { y - 0.5 * ly };
                    ((r - (dx * dx + dy * dy).sqrt()) / w).tanh()
                })
            }
            ScenarioKind::Band => {
                let (len, axis_y) = if grid.dims() == 1 {
                    (lx, false)
                } else {
                    (ly, true)
                };
                let half = self.radius * len;
                ScalarField::from_fn(grid, |x, y| {
                    let s = if axis_y { y } else { x };
                    ((half - (s - 0.5 * len).abs()) / w).tanh()
                })
            }
            ScenarioKind::Uniform => ScalarField::constant(grid, self.phi_mean),
        }
    }

    /// Initial velocity: Taylor-Green cells of amplitude `u_amplitude` in 2D,
    /// a uniform drift in 1D.
    pub fn velocity(&self, grid: Grid) -> VectorField {
        let a = self.u_amplitude;
        if a == 0.0 {
            return VectorField::zeros(grid);
        }
        if grid.dims() == 1 {
            return VectorField::from_fn(grid, |_, _| [a, 0.0]);
        }
        let (kx, ky) = (2.0 * PI / grid.lx(), 2.0 * PI / grid.ly());
        VectorField::from_fn(grid, |x, y| {
            [
                a * (kx * x).sin() * (ky * y).cos(),
                -a * (kx / ky) * (kx * x).cos() * (ky * y).sin(),
            ]
        })
    }
}
