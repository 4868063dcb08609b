//! Piecewise linear velocities, Courant numbers and sign changes.

use crate::error::{invalid, Error, Result};
use crate::mesh::{Centering, Grid1D};

/// Velocity samples at equally spaced points `x0 + k h`.
///
/// For node grids the samples sit on the nodes, for cell grids on the `I + 1` faces.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField1D {
    pub samples: Vec<f64>,
    x0: f64,
    h: f64,
}

impl VelocityField1D {
    pub fn new(samples: Vec<f64>, x0: f64, h: f64) -> Result<Self> {
        if samples.len() < 2 {
            return invalid("velocity needs at least two samples");
        }
        if !(h > 0.0) {
            return invalid("spacing must be positive");
        }
        for (k, &v) in samples.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Sampling {
                    x: x0 + k as f64 * h,
                    value: v,
                });
            }
        }
        Ok(Self { samples, x0, h })
    }

    /// Samples `v` at the nodes of a node grid or the faces of a cell grid.
    pub fn sample(grid: &Grid1D, v: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = match grid.centering() {
            Centering::Node => grid.coordinates(),
            Centering::Cell => grid.faces(),
        };
        Self::new(xs.iter().map(|&x| v(x)).collect(), grid.origin(), grid.h())
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn position(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.h
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Samples a time dependent velocity at `t^n + tau / 2`.
pub fn freeze_midtime(v: impl Fn(f64, f64) -> f64, t_n: f64, tau: f64, grid: &Grid1D) -> Result<VelocityField1D> {
    let t = t_n + 0.5 * tau;
    VelocityField1D::sample(grid, |x| v(x, t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CourantNumbers {
    pub values: Vec<f64>,
}

impl CourantNumbers {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|c| !c.is_finite()) {
            return invalid("non-finite Courant number");
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn plus(&self, k: usize) -> f64 {
        self.values[k].max(0.0)
    }

    pub fn minus(&self, k: usize) -> f64 {
        self.values[k].min(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

pub fn courant(v: &VelocityField1D, tau: f64) -> Result<CourantNumbers> {
    if !(tau > 0.0) {
        return invalid(format!("time step must be positive, got {tau}"));
    }
    let r = tau / v.h;
    CourantNumbers::new(v.samples.iter().map(|&s| s * r).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    /// `v_i < 0 < v_{i+1}`: characteristics leave the zero in both directions.
    Expanding,
    /// `v_i > 0 > v_{i+1}`.
    Converging,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCrossing {
    pub left: usize,
    pub location: f64,
    pub kind: CrossingKind,
}

/// Strict sign changes between consecutive samples. Exact zeros at samples are
/// not reported; such points are stationary and need no special treatment here.
pub fn find_zero_crossings(v: &VelocityField1D) -> Vec<ZeroCrossing> {
    let s = &v.samples;
    let mut out = Vec::new();
    for i in 0..s.len() - 1 {
        let kind = if s[i] < 0.0 && s[i + 1] > 0.0 {
            CrossingKind::Expanding
        } else if s[i] > 0.0 && s[i + 1] < 0.0 {
            CrossingKind::Converging
        } else {
            continue;
        };
        let location = v.position(i) + v.h * s[i] / (s[i] - s[i + 1]);
        out.push(ZeroCrossing {
            left: i,
            location,
            kind,
        });
    }
    out
}

/// Left indices of node pairs that need the explicit update at an expanding zero:
/// `C_i <= 0 < C_{i+1}`.
pub fn expanding_pairs(c: &CourantNumbers) -> Vec<usize> {
    let c = &c.values;
    (0..c.len().saturating_sub(1))
        .filter(|&i| c[i] <= 0.0 && c[i + 1] > 0.0)
        .collect()
}
