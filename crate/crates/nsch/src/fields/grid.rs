use crate::error::{Error, Result};

/// Periodic, cell-centered structured grid in one or two dimensions.
///
/// Cell `(i, j)` has center `((i + 1/2) dx, (j + 1/2) dy)` and flat index
/// `j * nx + i` (row-major, `x` fastest). In 1D `ny = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dims: usize,
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl Grid {
    pub const MIN_CELLS: usize = 4;

    pub fn new_1d(nx: usize, lx: f64) -> Result<Self> {
        check_axis("nx", nx, "lx", lx)?;
        Ok(Grid {
            dims: 1,
            nx,
            ny: 1,
            lx,
            ly: 1.0,
        })
    }

    pub fn new_2d(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        check_axis("nx", nx, "lx", lx)?;
        check_axis("ny", ny, "ly", ly)?;
        Ok(Grid {
            dims: 2,
            nx,
            ny,
            lx,
            ly,
        })
    }

    /// Square `n x n` grid on the unit square.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new_2d(n, n, 1.0, 1.0)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    /// Domain extent in `y`; 1 in 1D so that cell volumes stay lengths.
    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Spacing along axis `d` (0 = x, 1 = y).
    pub fn spacing(&self, d: usize) -> f64 {
        if d == 0 {
            self.dx()
        } else {
            self.dy()
        }
    }

    pub fn min_spacing(&self) -> f64 {
        if self.dims == 1 {
            self.dx()
        } else {
            self.dx().min(self.dy())
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        if self.dims == 1 {
            self.dx()
        } else {
            self.dx() * self.dy()
        }
    }

    pub fn volume(&self) -> f64 {
        if self.dims == 1 {
            self.lx
        } else {
            self.lx * self.ly
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Index of the cell `offset` steps away from `n` along axis `d`, wrapping.
    #[inline]
    pub fn neighbor(&self, n: usize, d: usize, offset: isize) -> usize {
        let (i, j) = (n % self.nx, n / self.nx);
        if d == 0 {
            let i = (i as isize + offset).rem_euclid(self.nx as isize) as usize;
            j * self.nx + i
        } else {
            let j = (j as isize + offset).rem_euclid(self.ny as isize) as usize;
            j * self.nx + i
        }
    }

    /// Cell-center coordinates of flat index `n`.
    pub fn center(&self, n: usize) -> (f64, f64) {
        let (i, j) = (n % self.nx, n / self.nx);
        let x = (i as f64 + 0.5) * self.dx();
        let y = if self.dims == 1 {
            0.0
        } else {
            (j as f64 + 0.5) * self.dy()
        };
        (x, y)
    }

    /// Same grid with every axis refined by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Grid {
            nx: self.nx * factor,
            ny: if self.dims == 1 { 1 } else { self.ny * factor },
            ..*self
        }
    }
}

fn check_axis(n_name: &'static str, n: usize, l_name: &'static str, l: f64) -> Result<()> {
    if n < Grid::MIN_CELLS {
        return Err(Error::param(
            n_name,
            format!("need at least {} cells, got {n}", Grid::MIN_CELLS),
        ));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::param(l_name, format!("must be positive, got {l}")));
    }
    Ok(())
}
