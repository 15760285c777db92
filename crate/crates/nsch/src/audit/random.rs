//! Seeded random inputs: smooth periodic fields and constituent samples.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fields::{Grid, ScalarField};

/// Truncated Fourier series over the lowest `MAX_MODE` modes per axis.
///
/// The coefficients are fixed at construction, so the same field can be
/// sampled on a sequence of refined grids. Normalized so that `|f| <= amp`
/// pointwise on every grid.
#[derive(Debug, Clone)]
pub struct RandomField {
    modes: Vec<(f64, f64, f64, f64)>,
    offset: f64,
}

pub const MAX_MODE: i64 = 4;

impl RandomField {
    pub fn new(rng: &mut ChaCha8Rng, dims: usize, amp: f64) -> Self {
        Self::with_offset(rng, dims, amp, 0.0)
    }

    /// Field with values in `offset +- amp`.
    pub fn with_offset(rng: &mut ChaCha8Rng, dims: usize, amp: f64, offset: f64) -> Self {
        let mut modes = Vec::new();
        let my_range = if dims == 1 {
            0..=0
        } else {
            -MAX_MODE..=MAX_MODE
        };
        for mx in 0..=MAX_MODE {
            for my in my_range.clone() {
                if mx == 0 && my <= 0 {
                    continue;
                }
                let decay = 1.0 / (1.0 + (mx * mx + my * my) as f64);
                let a = rng.gen_range(-1.0..1.0) * decay;
                let b = rng.gen_range(-1.0..1.0) * decay;
                modes.push((mx as f64, my as f64, a, b));
            }
        }
        let bound: f64 = modes.iter().map(|m| m.2.abs() + m.3.abs()).sum();
        let s = amp / bound;
        for m in &mut modes {
            m.2 *= s;
            m.3 *= s;
        }
        RandomField { modes, offset }
    }

    pub fn at(&self, x: f64, y: f64, lx: f64, ly: f64) -> f64 {
        let mut v = self.offset;
        for &(mx, my, a, b) in &self.modes {
            let th = 2.0 * PI * (mx * x / lx + my * y / ly);
            v += a * th.cos() + b * th.sin();
        }
        v
    }

    pub fn sample(&self, grid: Grid) -> ScalarField {
        let (lx, ly) = (grid.lx(), grid.ly());
        ScalarField::from_fn(grid, |x, y| self.at(x, y, lx, ly))
    }
}

/// Volume fraction of constituent 1 and two constituent velocities.
pub fn constituents<const D: usize>(rng: &mut ChaCha8Rng) -> (f64, [f64; D], [f64; D]) {
    let phi1 = rng.gen_range(0.0..=1.0);
    let v1 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let v2 = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    (phi1, v1, v2)
}
