//! Strang splitting in 2D: half step in x, full step in y, half step in x.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::mesh::{Field2D, Grid2D, TimeGrid, Trajectory};
use crate::nonconservative::{sweep, AlphaPolicy, BoundaryValues, Order};
use crate::velocity::{courant, VelocityField1D};

pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Fn3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FreezePolicy {
    /// All three substeps use the velocity at `t^n + tau / 2`.
    #[default]
    StepMidpoint,
    /// Each substep uses its own midpoint: `tau / 4`, `tau / 2`, `3 tau / 4`.
    SubstepMidpoint,
}

/// Time at which the inflow data of each substep is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryClock {
    /// End of the interval each substep covers: `t^n + tau / 2`, `t^{n+1}`, `t^{n+1}`.
    #[default]
    Physical,
    /// Time reached by the composed flow: `t^n + tau / 4`, `t^n + 3 tau / 4`, `t^{n+1}`.
    /// Matches the exact solution when the two directional flows commute.
    Operator,
}

#[derive(Clone)]
pub struct Problem2D {
    pub origin: f64,
    pub length: f64,
    pub final_time: f64,
    pub v1: Fn3,
    pub v2: Fn3,
    pub initial: Fn2,
    /// Inflow values `phi(x, y, t)` on the boundary.
    pub inflow: Fn3,
    pub freeze: FreezePolicy,
    pub clock: BoundaryClock,
}

impl std::fmt::Debug for Problem2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem2D")
            .field("origin", &self.origin)
            .field("length", &self.length)
            .field("final_time", &self.final_time)
            .field("freeze", &self.freeze)
            .field("clock", &self.clock)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme2D {
    pub order: Order,
    pub alpha: AlphaPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

#[allow(clippy::too_many_arguments)]
fn line_solve(
    phi: &Field2D,
    grid: &Grid2D,
    problem: &Problem2D,
    scheme: &Scheme2D,
    axis: Axis,
    dt: f64,
    t_vel: f64,
    t_bnd: f64,
) -> Result<Field2D> {
    let (lines, along) = match axis {
        Axis::X => (grid.ny(), grid.x),
        Axis::Y => (grid.nx(), grid.y),
    };
    let results: Vec<Result<Vec<f64>>> = (0..lines)
        .into_par_iter()
        .map(|k| {
            let (vals, v, bv) = match axis {
                Axis::X => {
                    let y = grid.y.coordinate(k);
                    let v = VelocityField1D::sample(&along, |x| (problem.v1)(x, y, t_vel))?;
                    let bv = BoundaryValues {
                        left: (problem.inflow)(along.origin(), y, t_bnd),
                        right: (problem.inflow)(along.right(), y, t_bnd),
                    };
                    (phi.row(k).to_vec(), v, bv)
                }
                Axis::Y => {
                    let x = grid.x.coordinate(k);
                    let v = VelocityField1D::sample(&along, |y| (problem.v2)(x, y, t_vel))?;
                    let bv = BoundaryValues {
                        left: (problem.inflow)(x, along.origin(), t_bnd),
                        right: (problem.inflow)(x, along.right(), t_bnd),
                    };
                    (phi.column(k), v, bv)
                }
            };
            let c = courant(&v, dt)?;
            Ok(match scheme.order {
                Order::First => sweep(&vals, &c, None, bv, None),
                Order::Second => {
                    let a = scheme.alpha.resolve(&c, 0, true)?;
                    sweep(&vals, &c, Some(&a), bv, None)
                }
            })
        })
        .collect();
    let mut out = phi.clone();
    for (k, r) in results.into_iter().enumerate() {
        let line = r?;
        match axis {
            Axis::X => out.data[k * out.nx..(k + 1) * out.nx].copy_from_slice(&line),
            Axis::Y => {
                for (j, v) in line.into_iter().enumerate() {
                    out.set(k, j, v);
                }
            }
        }
    }
    Ok(out)
}

pub fn strang_step(
    phi: &Field2D,
    grid: &Grid2D,
    problem: &Problem2D,
    t_n: f64,
    tau: f64,
    scheme: &Scheme2D,
) -> Result<Field2D> {
    if phi.nx != grid.nx() || phi.ny != grid.ny() {
        return invalid("field does not match the grid");
    }
    if matches!(scheme.alpha, AlphaPolicy::Field(_)) {
        return invalid("per-node alpha fields are 1D only");
    }
    let vel = match problem.freeze {
        FreezePolicy::StepMidpoint => [0.5, 0.5, 0.5],
        FreezePolicy::SubstepMidpoint => [0.25, 0.5, 0.75],
    };
    let bnd = match problem.clock {
        BoundaryClock::Physical => [0.5, 1.0, 1.0],
        BoundaryClock::Operator => [0.25, 0.75, 1.0],
    };
    let a = line_solve(
        phi,
        grid,
        problem,
        scheme,
        Axis::X,
        0.5 * tau,
        t_n + vel[0] * tau,
        t_n + bnd[0] * tau,
    )?;
    let b = line_solve(
        &a,
        grid,
        problem,
        scheme,
        Axis::Y,
        tau,
        t_n + vel[1] * tau,
        t_n + bnd[1] * tau,
    )?;
    line_solve(
        &b,
        grid,
        problem,
        scheme,
        Axis::X,
        0.5 * tau,
        t_n + vel[2] * tau,
        t_n + bnd[2] * tau,
    )
}

/// Runs the splitting and hands every level (including the initial one) to `observe`.
/// Returns the final level.
pub fn run2d(
    problem: &Problem2D,
    grid: &Grid2D,
    tgrid: &TimeGrid,
    scheme: &Scheme2D,
    mut observe: impl FnMut(usize, &Field2D),
) -> Result<Field2D> {
    let mut phi = grid.sample(|x, y| (problem.initial)(x, y))?;
    observe(0, &phi);
    for n in 0..tgrid.steps() {
        phi = strang_step(&phi, grid, problem, tgrid.time(n), tgrid.tau(), scheme)?;
        if !phi.is_finite() {
            return Err(Error::Diverged { step: n });
        }
        observe(n + 1, &phi);
    }
    Ok(phi)
}

pub fn solve2d(problem: &Problem2D, grid: &Grid2D, tgrid: &TimeGrid, scheme: &Scheme2D) -> Result<Trajectory<Field2D>> {
    let mut levels = Vec::with_capacity(tgrid.steps() + 1);
    run2d(problem, grid, tgrid, scheme, |_, f| levels.push(f.clone()))?;
    Ok(Trajectory { levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Grid1D;
    use crate::nonconservative::step_second_order;
    use crate::Field1D;

    fn shear() -> Problem2D {
        Problem2D {
            origin: 0.0,
            length: 1.0,
            final_time: 0.5,
            v1: Arc::new(|x, _, _| (6.0 * x).sin()),
            v2: Arc::new(|_, _, _| 0.0),
            initial: Arc::new(|x, y| (3.0 * x).cos() + y),
            inflow: Arc::new(|x, y, _| (3.0 * x).cos() + y),
            freeze: FreezePolicy::StepMidpoint,
            clock: BoundaryClock::Physical,
        }
    }

    #[test]
    fn x_only_velocity_reduces_to_rows() {
        let p = shear();
        let grid = Grid2D::square(0.0, 1.0, 16).unwrap();
        let scheme = Scheme2D {
            order: Order::Second,
            alpha: AlphaPolicy::Fixed(0.5),
        };
        let phi = grid.sample(|x, y| (p.initial)(x, y)).unwrap();
        let tau = 0.1;
        let out = strang_step(&phi, &grid, &p, 0.0, tau, &scheme).unwrap();
        let g = Grid1D::nodes(0.0, 1.0, 16).unwrap();
        let v = VelocityField1D::sample(&g, |x| (6.0 * x).sin()).unwrap();
        let c = courant(&v, tau / 2.0).unwrap();
        // the y sweep with zero velocity resets the first and last rows to inflow data
        for j in 1..grid.ny() - 1 {
            let y = g.coordinate(j);
            let mut line = Field1D::from(phi.row(j).to_vec());
            for t in [0.5 * tau, tau] {
                let bv = BoundaryValues {
                    left: (p.inflow)(0.0, y, t),
                    right: (p.inflow)(1.0, y, t),
                };
                line = step_second_order(&line, &c, &[0.5; 17], bv).unwrap();
            }
            for (a, b) in line.values.iter().zip(out.row(j)) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn no_steps_gives_initial_level() {
        let p = shear();
        let grid = Grid2D::square(0.0, 1.0, 8).unwrap();
        let scheme = Scheme2D {
            order: Order::First,
            alpha: AlphaPolicy::Fixed(0.0),
        };
        let t = solve2d(&p, &grid, &TimeGrid::new(0.5, 0).unwrap(), &scheme).unwrap();
        assert_eq!(t.len(), 1);
    }
}
