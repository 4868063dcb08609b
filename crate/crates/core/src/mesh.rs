//! Uniform grids, time grids and solution containers.

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Values at `x_i = origin + i h`, `i = 0..=I`.
    Node,
    /// Values at cell midpoints `origin + (i + 1/2) h`, `i = 0..I`.
    Cell,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    origin: f64,
    length: f64,
    cells: usize,
    h: f64,
    centering: Centering,
}

impl Grid1D {
    pub fn new(origin: f64, length: f64, cells: usize, centering: Centering) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return invalid(format!("domain length must be positive, got {length}"));
        }
        if cells < 2 {
            return invalid(format!("need at least 2 cells, got {cells}"));
        }
        if !origin.is_finite() {
            return invalid("origin must be finite");
        }
        Ok(Self {
            origin,
            length,
            cells,
            h: length / cells as f64,
            centering,
        })
    }

    pub fn nodes(origin: f64, length: f64, cells: usize) -> Result<Self> {
        Self::new(origin, length, cells, Centering::Node)
    }

    pub fn cells(origin: f64, length: f64, cells: usize) -> Result<Self> {
        Self::new(origin, length, cells, Centering::Cell)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of intervals `I`.
    pub fn intervals(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    /// Number of stored values: `I + 1` for nodes, `I` for cells.
    pub fn len(&self) -> usize {
        match self.centering {
            Centering::Node => self.cells + 1,
            Centering::Cell => self.cells,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        match self.centering {
            Centering::Node => self.origin + k as f64 * self.h,
            Centering::Cell => self.origin + (k as f64 + 0.5) * self.h,
        }
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.coordinate(k)).collect()
    }

    /// Interval endpoints `origin + k h`, `k = 0..=I`. For cell grids these are the faces.
    pub fn face(&self, k: usize) -> f64 {
        if k == self.cells {
            self.origin + self.length
        } else {
            self.origin + k as f64 * self.h
        }
    }

    pub fn faces(&self) -> Vec<f64> {
        (0..=self.cells).map(|k| self.face(k)).collect()
    }

    pub fn right(&self) -> f64 {
        self.origin + self.length
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Result<Field1D> {
        let mut values = Vec::with_capacity(self.len());
        for x in self.coordinates() {
            let value = f(x);
            if !value.is_finite() {
                return Err(Error::Sampling { x, value });
            }
            values.push(value);
        }
        Ok(Field1D { values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    final_time: f64,
    steps: usize,
    tau: f64,
}

impl TimeGrid {
    /// `steps = 0` is allowed and yields a trajectory holding only the initial level.
    pub fn new(final_time: f64, steps: usize) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return invalid(format!("final time must be positive, got {final_time}"));
        }
        let tau = if steps == 0 { 0.0 } else { final_time / steps as f64 };
        Ok(Self { final_time, steps, tau })
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.final_time
        } else {
            n as f64 * self.tau
        }
    }

    pub fn mid(&self, n: usize) -> f64 {
        self.time(n) + 0.5 * self.tau
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub values: Vec<f64>,
}

impl Field1D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("non-finite value at index {k}"));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl From<Vec<f64>> for Field1D {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

/// Tensor product of two node grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Result<Self> {
        if x.centering() != Centering::Node || y.centering() != Centering::Node {
            return invalid("2D grids are node centered");
        }
        if ((x.h() - y.h()) / x.h()).abs() > 1e-12 {
            return invalid("2D grids need equal spacing in x and y");
        }
        Ok(Self { x, y })
    }

    pub fn square(origin: f64, length: f64, cells: usize) -> Result<Self> {
        let g = Grid1D::nodes(origin, length, cells)?;
        Self::new(g, g)
    }

    pub fn h(&self) -> f64 {
        self.x.h()
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Result<Field2D> {
        let (nx, ny) = (self.nx(), self.ny());
        let mut data = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = self.y.coordinate(j);
            for i in 0..nx {
                let x = self.x.coordinate(i);
                let value = f(x, y);
                if !value.is_finite() {
                    return Err(Error::Sampling2D { x, y, value });
                }
                data.push(value);
            }
        }
        Ok(Field2D { nx, ny, data })
    }
}

/// Row-major field: `data[j * nx + i]` holds the value at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<f64>,
}

impl Field2D {
    pub fn filled(nx: usize, ny: usize, value: f64) -> Self {
        Self {
            nx,
            ny,
            data: vec![value; nx * ny],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.nx + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.nx + i] = v;
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.nx..(j + 1) * self.nx]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.ny).map(|j| self.get(i, j)).collect()
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Time levels `0..=N` of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<F> {
    pub levels: Vec<F>,
}

impl<F> Trajectory<F> {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn last(&self) -> &F {
        self.levels.last().expect("trajectory holds the initial level")
    }
}
