use super::Grid;
use crate::error::{Error, Result};

/// Cell-centered scalar values on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        ScalarField {
            grid,
            data: vec![value; grid.len()],
        }
    }

    pub fn from_vec(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(ScalarField { grid, data })
    }

    /// Samples `f(x, y)` at cell centers (`y = 0` in 1D).
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let data = (0..grid.len())
            .map(|n| {
                let (x, y) = grid.center(n);
                f(x, y)
            })
            .collect();
        ScalarField { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField {
            grid: self.grid,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Pointwise combination; panics on grid mismatch (internal use).
    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        ScalarField {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|x| a * x)
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &ScalarField) {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    pub fn dot(&self, other: &ScalarField) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Root-mean-square over cells.
    pub fn rms(&self) -> f64 {
        (self.dot(self) / self.len() as f64).sqrt()
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn remove_mean(&mut self) {
        let m = self.mean();
        for x in &mut self.data {
            *x -= m;
        }
    }

    /// Periodic shift: output cell `(i, j)` takes input cell `(i - di, j - dj)`.
    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        let g = self.grid;
        let mut out = vec![0.0; g.len()];
        for (n, o) in out.iter_mut().enumerate() {
            let m = g.neighbor(
                g.neighbor(n, 0, -di),
                1,
                if g.dims() == 1 { 0 } else { -dj },
            );
            *o = self.data[m];
        }
        ScalarField { grid: g, data: out }
    }
}

impl std::ops::Index<usize> for ScalarField {
    type Output = f64;
    fn index(&self, n: usize) -> &f64 {
        &self.data[n]
    }
}

impl std::ops::IndexMut<usize> for ScalarField {
    fn index_mut(&mut self, n: usize) -> &mut f64 {
        &mut self.data[n]
    }
}

/// One [`ScalarField`] per spatial direction.
///
/// Depending on the producer the components live at cell centers or, for the
/// face operators, at the face `i + 1/2` along their own axis.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        VectorField {
            grid,
            comps: vec![ScalarField::zeros(grid); grid.dims()],
        }
    }

    pub fn from_components(comps: Vec<ScalarField>) -> Result<Self> {
        let grid = *comps.first().ok_or(Error::GridMismatch)?.grid();
        if comps.len() != grid.dims() || comps.iter().any(|c| *c.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField { grid, comps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let comps = (0..grid.dims())
            .map(|d| ScalarField::from_fn(grid, |x, y| f(x, y)[d]))
            .collect();
        VectorField { grid, comps }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dims(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, d: usize) -> &ScalarField {
        &self.comps[d]
    }

    pub fn comp_mut(&mut self, d: usize) -> &mut ScalarField {
        &mut self.comps[d]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn map_comps(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        VectorField {
            grid: self.grid,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn zip_comps(
        &self,
        other: &VectorField,
        f: impl Fn(&ScalarField, &ScalarField) -> ScalarField,
    ) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        VectorField {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> Self {
        self.zip_comps(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &VectorField) -> Self {
        self.zip_comps(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_comps(|c| c.scale(a))
    }

    /// Multiplies every component by the scalar field `s`.
    pub fn scale_by(&self, s: &ScalarField) -> Self {
        self.map_comps(|c| c.mul(s))
    }

    pub fn axpy(&mut self, a: f64, other: &VectorField) {
        for (x, y) in self.comps.iter_mut().zip(&other.comps) {
            x.axpy(a, y);
        }
    }

    /// Pointwise inner product.
    pub fn dot(&self, other: &VectorField) -> ScalarField {
        let mut out = ScalarField::zeros(self.grid);
        for (a, b) in self.comps.iter().zip(&other.comps) {
            out = out.add(&a.mul(b));
        }
        out
    }

    pub fn norm_sq(&self) -> ScalarField {
        self.dot(self)
    }

    /// Largest pointwise Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        self.norm_sq().max().max(0.0).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }

    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        self.map_comps(|c| c.shifted(di, dj))
    }
}

/// `d x d` tensor field stored as row-major component fields.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    grid: Grid,
    comps: Vec<ScalarField>,
}

impl TensorField {
    pub fn zeros(grid: Grid) -> Self {
        let d = grid.dims();
        TensorField {
            grid,
            comps: vec![ScalarField::zeros(grid); d * d],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dims(&self) -> usize {
        self.grid.dims()
    }

    pub fn comp(&self, i: usize, j: usize) -> &ScalarField {
        &self.comps[i * self.dims() + j]
    }

    pub fn comp_mut(&mut self, i: usize, j: usize) -> &mut ScalarField {
        let d = self.dims();
        &mut self.comps[i * d + j]
    }

    /// `a (x ⊗ y)` at every cell.
    pub fn outer(a: f64, x: &VectorField, y: &VectorField) -> Self {
        let mut t = TensorField::zeros(*x.grid());
        for i in 0..x.dims() {
            for j in 0..x.dims() {
                *t.comp_mut(i, j) = x.comp(i).mul(y.comp(j)).scale(a);
            }
        }
        t
    }

    /// `s I`
    pub fn isotropic(s: &ScalarField) -> Self {
        let mut t = TensorField::zeros(*s.grid());
        for i in 0..t.dims() {
            *t.comp_mut(i, i) = s.clone();
        }
        t
    }

    pub fn add(&self, other: &TensorField) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        TensorField {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TensorField) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, a: f64) -> Self {
        TensorField {
            grid: self.grid,
            comps: self.comps.iter().map(|c| c.scale(a)).collect(),
        }
    }

    pub fn scale_by(&self, s: &ScalarField) -> Self {
        TensorField {
            grid: self.grid,
            comps: self.comps.iter().map(|c| c.mul(s)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dims();
        let mut t = TensorField::zeros(self.grid);
        for i in 0..d {
            for j in 0..d {
                *t.comp_mut(i, j) = self.comp(j, i).clone();
            }
        }
        t
    }

    pub fn trace(&self) -> ScalarField {
        let mut s = ScalarField::zeros(self.grid);
        for i in 0..self.dims() {
            s = s.add(self.comp(i, i));
        }
        s
    }

    /// Pointwise double contraction `A : B`.
    pub fn contract(&self, other: &TensorField) -> ScalarField {
        let mut s = ScalarField::zeros(self.grid);
        for (a, b) in self.comps.iter().zip(&other.comps) {
            s = s.add(&a.mul(b));
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }
}
