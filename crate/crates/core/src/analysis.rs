//! Discrete L1 errors, convergence orders, amplification factors and
//! min/mass series.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::mesh::{Field1D, Field2D, Grid1D, Grid2D, TimeGrid, Trajectory};
use crate::nonconservative::interior_row;

/// `h tau sum_n sum_i |phi_i^n - exact(x_i, t^n)|` over all levels including `n = 0`.
pub fn global_error(
    traj: &Trajectory<Field1D>,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    exact: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    check_levels(traj.len(), tgrid)?;
    let xs = grid.coordinates();
    let mut sum = 0.0;
    for (n, level) in traj.levels.iter().enumerate() {
        let t = tgrid.time(n);
        sum += level_l1(&level.values, &xs, |x| exact(x, t));
    }
    Ok(grid.h() * tgrid.tau() * sum)
}

/// `h sum_i |phi_i^N - exact(x_i)|`.
pub fn final_error(phi: &Field1D, grid: &Grid1D, exact: impl Fn(f64) -> f64) -> f64 {
    grid.h() * level_l1(&phi.values, &grid.coordinates(), exact)
}

fn level_l1(values: &[f64], xs: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
    values.iter().zip(xs).map(|(v, &x)| (v - exact(x)).abs()).sum()
}

fn check_levels(len: usize, tgrid: &TimeGrid) -> Result<()> {
    if len != tgrid.steps() + 1 {
        return invalid(format!("trajectory has {len} levels, time grid {}", tgrid.steps() + 1));
    }
    Ok(())
}

/// `h^2 sum_{i,j} |phi - exact|` for one level.
pub fn level_error_2d(phi: &Field2D, grid: &Grid2D, exact: impl Fn(f64, f64) -> f64) -> f64 {
    let h = grid.h();
    let mut sum = 0.0;
    for j in 0..phi.ny {
        let y = grid.y.coordinate(j);
        for i in 0..phi.nx {
            sum += (phi.get(i, j) - exact(grid.x.coordinate(i), y)).abs();
        }
    }
    h * h * sum
}

pub fn global_error_2d(
    traj: &Trajectory<Field2D>,
    grid: &Grid2D,
    tgrid: &TimeGrid,
    exact: impl Fn(f64, f64, f64) -> f64,
) -> Result<f64> {
    check_levels(traj.len(), tgrid)?;
    let sum: f64 = traj
        .levels
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let t = tgrid.time(n);
            level_error_2d(f, grid, |x, y| exact(x, y, t))
        })
        .sum();
    Ok(tgrid.tau() * sum)
}

/// `log2(E_coarse / E_fine)` for one halving of `h` and `tau`.
pub fn eoc(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0) || !(fine > 0.0) {
        return invalid(format!("errors must be positive, got {coarse} and {fine}"));
    }
    Ok((coarse / fine).log2())
}

/// EOC between consecutive entries; the first entry has none.
pub fn eoc_chain(errors: &[f64]) -> Result<Vec<Option<f64>>> {
    let mut out = vec![None];
    for w in errors.windows(2) {
        out.push(Some(eoc(w[0], w[1])?));
    }
    Ok(out)
}

/// Amplification factor `g(theta)` of the second order scheme with constant Courant
/// number, from the Fourier symbol of the interior row.
pub fn amplification_symbol(c: f64, alpha: f64, theta: f64) -> Result<Complex64> {
    let row = interior_row(c, Some(alpha));
    let symbol = |coefs: &[f64; 5]| -> Complex64 {
        coefs
            .iter()
            .enumerate()
            .map(|(k, &a)| a * Complex64::from_polar(1.0, (k as f64 - 2.0) * theta))
            .sum()
    };
    let lhs = symbol(&row.implicit);
    if lhs.norm() == 0.0 {
        return Err(Error::Singular);
    }
    Ok(symbol(&row.explicit) / lhs)
}

pub fn amplification_factor(c: f64, alpha: f64, theta: f64) -> Result<f64> {
    amplification_symbol(c, alpha, theta).map(|g| g.norm())
}

pub fn min_series<F: MinValue>(traj: &Trajectory<F>) -> Vec<f64> {
    traj.levels.iter().map(|f| f.min_value()).collect()
}

pub fn mass_series_1d(traj: &Trajectory<Field1D>, h: f64) -> Vec<f64> {
    traj.levels.iter().map(|f| h * f.values.iter().sum::<f64>()).collect()
}

pub fn mass_2d(phi: &Field2D, h: f64) -> f64 {
    h * h * phi.data.iter().sum::<f64>()
}

pub fn mass_series_2d(traj: &Trajectory<Field2D>, h: f64) -> Vec<f64> {
    traj.levels.iter().map(|f| mass_2d(f, h)).collect()
}

pub trait MinValue {
    fn min_value(&self) -> f64;
}

impl MinValue for Field1D {
    fn min_value(&self) -> f64 {
        self.min()
    }
}

impl MinValue for Field2D {
    fn min_value(&self) -> f64 {
        self.min()
    }
}
