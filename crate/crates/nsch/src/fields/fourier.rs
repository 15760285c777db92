//! FFT helpers on periodic grids: diagonal solves for constant-coefficient
//! operators and spectral differentiation.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{Grid, ScalarField, VectorField};

pub struct Fourier {
    grid: Grid,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Option<Arc<dyn Fft<f64>>>,
    inv_y: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("grid", &self.grid).finish()
    }
}

/// Signed mode index of DFT bin `k` out of `n`.
pub fn mode_index(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

impl Fourier {
    pub fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let (fwd_y, inv_y) = if grid.dims() == 2 {
            (
                Some(planner.plan_fft_forward(grid.ny())),
                Some(planner.plan_fft_inverse(grid.ny())),
            )
        } else {
            (None, None)
        };
        Fourier {
            grid,
            fwd_x: planner.plan_fft_forward(grid.nx()),
            inv_x: planner.plan_fft_inverse(grid.nx()),
            fwd_y,
            inv_y,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn transform(&self, buf: &mut [Complex<f64>], forward: bool) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let fx = if forward { &self.fwd_x } else { &self.inv_x };
        for row in buf.chunks_mut(nx) {
            fx.process(row);
        }
        let fy = if forward { &self.fwd_y } else { &self.inv_y };
        if let Some(fy) = fy {
            let mut col = vec![Complex::new(0.0, 0.0); ny];
            for i in 0..nx {
                for j in 0..ny {
                    col[j] = buf[j * nx + i];
                }
                fy.process(&mut col);
                for j in 0..ny {
                    buf[j * nx + i] = col[j];
                }
            }
        }
    }

    pub fn forward(&self, f: &ScalarField) -> Vec<Complex<f64>> {
        let mut buf: Vec<Complex<f64>> = f.data().iter().map(|&x| Complex::new(x, 0.0)).collect();
        self.transform(&mut buf, true);
        buf
    }

    /// Inverse transform keeping the real part.
    pub fn inverse(&self, mut spec: Vec<Complex<f64>>) -> ScalarField {
        self.transform(&mut spec, false);
        let scale = 1.0 / self.grid.len() as f64;
        let data = spec.iter().map(|z| z.re * scale).collect();
        ScalarField::from_vec(self.grid, data).expect("same grid")
    }

    /// Multiplies the spectrum by `symbol(mx, my)` where `mx, my` are signed
    /// mode indices.
    pub fn apply(&self, f: &ScalarField, symbol: impl Fn(i64, i64) -> Complex<f64>) -> ScalarField {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let mut spec = self.forward(f);
        for j in 0..ny {
            let my = mode_index(j, ny);
            for i in 0..nx {
                let mx = mode_index(i, nx);
                spec[j * nx + i] *= symbol(mx, my);
            }
        }
        self.inverse(spec)
    }

    pub fn apply_real(&self, f: &ScalarField, symbol: impl Fn(i64, i64) -> f64) -> ScalarField {
        self.apply(f, |mx, my| Complex::new(symbol(mx, my), 0.0))
    }

    /// Eigenvalue of `-laplacian_compact` for mode `(mx, my)`.
    pub fn compact_laplacian_eig(&self, mx: i64, my: i64) -> f64 {
        let g = &self.grid;
        let mut s = 0.0;
        let sx = (PI * mx as f64 / g.nx() as f64).sin() * 2.0 / g.dx();
        s += sx * sx;
        if g.dims() == 2 {
            let sy = (PI * my as f64 / g.ny() as f64).sin() * 2.0 / g.dy();
            s += sy * sy;
        }
        s
    }

    /// Eigenvalue of `-laplacian` (wide stencil) for mode `(mx, my)`.
    pub fn wide_laplacian_eig(&self, mx: i64, my: i64) -> f64 {
        let g = &self.grid;
        let mut s = 0.0;
        let sx = (2.0 * PI * mx as f64 / g.nx() as f64).sin() / g.dx();
        s += sx * sx;
        if g.dims() == 2 {
            let sy = (2.0 * PI * my as f64 / g.ny() as f64).sin() / g.dy();
            s += sy * sy;
        }
        s
    }

    /// Spectrally exact derivative along axis `d` (Nyquist mode dropped).
    pub fn derivative(&self, f: &ScalarField, d: usize) -> ScalarField {
        let (n, l) = if d == 0 {
            (self.grid.nx(), self.grid.lx())
        } else {
            (self.grid.ny(), self.grid.ly())
        };
        self.apply(f, |mx, my| {
            let m = if d == 0 { mx } else { my };
            if n % 2 == 0 && m.unsigned_abs() as usize == n / 2 {
                return Complex::new(0.0, 0.0);
            }
            Complex::new(0.0, 2.0 * PI * m as f64 / l)
        })
    }

    pub fn gradient(&self, f: &ScalarField) -> VectorField {
        let comps = (0..self.grid.dims())
            .map(|d| self.derivative(f, d))
            .collect();
        VectorField::from_components(comps).expect("consistent components")
    }
}
