//! Non-conservative schemes for `d_t phi + v d_x phi = 0` on node grids.
//!
//! Both schemes are implicit but upwinded, so one forward pass over nodes with
//! `C_i > 0` and one backward pass over nodes with `C_i < 0` solve the system
//! exactly. Node pairs around an expanding zero of the velocity are updated
//! explicitly before the sweeps.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::mesh::{Field1D, Grid1D, TimeGrid, Trajectory};
use crate::velocity::{courant, expanding_pairs, CourantNumbers, VelocityField1D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Per-node, per-step values of `alpha`, indexed by step `n = 0..N` and node `i = 0..=I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaField {
    nodes: usize,
    steps: usize,
    values: Vec<f64>,
}

impl AlphaField {
    pub fn constant(nodes: usize, steps: usize, value: f64) -> Self {
        Self {
            nodes,
            steps,
            values: vec![value; nodes * steps],
        }
    }

    pub fn from_values(nodes: usize, steps: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != nodes * steps {
            return invalid(format!(
                "alpha field has {} values, expected {nodes} x {steps}",
                values.len()
            ));
        }
        if values.iter().any(|a| !a.is_finite()) {
            return invalid("alpha field holds non-finite values");
        }
        Ok(Self { nodes, steps, values })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn get(&self, i: usize, n: usize) -> f64 {
        self.values[n * self.nodes + i]
    }

    pub fn set(&mut self, i: usize, n: usize, a: f64) {
        self.values[n * self.nodes + i] = a;
    }

    pub fn step(&self, n: usize) -> &[f64] {
        &self.values[n * self.nodes..(n + 1) * self.nodes]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaPolicy {
    Fixed(f64),
    /// `alpha_i = (2 + |C_i|) / 6`.
    CourantRule,
    Field(Arc<AlphaField>),
}

impl AlphaPolicy {
    /// Raw per-node values for step `n`. Values outside `[0, 1]` are rejected
    /// unless `checked` is false.
    pub fn resolve(&self, c: &CourantNumbers, n: usize, checked: bool) -> Result<Vec<f64>> {
        let out = match self {
            AlphaPolicy::Fixed(a) => vec![*a; c.len()],
            AlphaPolicy::CourantRule => c.values.iter().map(|c| (2.0 + c.abs()) / 6.0).collect(),
            AlphaPolicy::Field(f) => {
                if f.nodes() != c.len() {
                    return invalid(format!("alpha field has {} nodes, grid has {}", f.nodes(), c.len()));
                }
                if n >= f.steps() {
                    return invalid(format!("alpha field has no step {n}"));
                }
                f.step(n).to_vec()
            }
        };
        if out.iter().any(|a| !a.is_finite()) {
            return invalid("non-finite alpha");
        }
        if checked && !matches!(self, AlphaPolicy::CourantRule) {
            if let Some(a) = out.iter().find(|a| !(0.0..=1.0).contains(*a)) {
                return invalid(format!("alpha {a} outside [0, 1]"));
            }
        }
        Ok(out)
    }
}

/// Boundary values at the target time level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValues {
    pub left: f64,
    pub right: f64,
}

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Inflow data `phi_0(t)` and `phi_L(t)`.
#[derive(Clone)]
pub struct BoundaryData1D {
    pub left: TimeFn,
    pub right: TimeFn,
}

impl BoundaryData1D {
    pub fn new(
        left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            left: Arc::new(left),
            right: Arc::new(right),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(move |_| value, move |_| value)
    }

    pub fn at(&self, t: f64) -> BoundaryValues {
        BoundaryValues {
            left: (self.left)(t),
            right: (self.right)(t),
        }
    }
}

impl std::fmt::Debug for BoundaryData1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("BoundaryData1D")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// `h d^{alpha-} phi_i` or `h d^{alpha+} phi_i`. Both neighbours must exist.
pub fn upwind_gradient(phi: &[f64], i: usize, alpha: f64, side: Side) -> Result<f64> {
    if i == 0 || i + 1 >= phi.len() {
        return Err(Error::Index {
            index: i,
            max: phi.len().saturating_sub(1),
        });
    }
    let back = phi[i] - phi[i - 1];
    let fwd = phi[i + 1] - phi[i];
    Ok(match side {
        Side::Minus => alpha * back + (1.0 - alpha) * fwd,
        Side::Plus => alpha * fwd + (1.0 - alpha) * back,
    })
}

/// Value at `i - 1`, linearly extrapolated at the left end.
fn left_of(phi: &[f64], i: usize) -> f64 {
    if i == 0 {
        2.0 * phi[0] - phi[1]
    } else {
        phi[i - 1]
    }
}

/// Value at `i + 1`, linearly extrapolated at the right end.
fn right_of(phi: &[f64], i: usize) -> f64 {
    if i + 1 == phi.len() {
        let l = phi.len();
        2.0 * phi[l - 1] - phi[l - 2]
    } else {
        phi[i + 1]
    }
}

fn grad_minus(phi: &[f64], i: usize, a: f64) -> f64 {
    a * (phi[i] - left_of(phi, i)) + (1.0 - a) * (right_of(phi, i) - phi[i])
}

fn grad_plus(phi: &[f64], i: usize, a: f64) -> f64 {
    a * (right_of(phi, i) - phi[i]) + (1.0 - a) * (phi[i] - left_of(phi, i))
}

/// One elementary update in the order it was carried out. The adjoint replays
/// these in reverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Update {
    /// Explicit pair at an expanding zero: nodes `i`, `i + 1`.
    Pair {
        i: usize,
        theta: f64,
        slope: f64,
    },
    Dirichlet {
        i: usize,
    },
    Forward {
        i: usize,
        c: f64,
        alpha: f64,
        fallback: bool,
    },
    Backward {
        i: usize,
        c: f64,
        alpha: f64,
        fallback: bool,
    },
    Forward1 {
        i: usize,
        c: f64,
    },
    Backward1 {
        i: usize,
        c: f64,
    },
}

pub(crate) fn check_lengths(phi: &[f64], c: &CourantNumbers) -> Result<()> {
    if phi.len() != c.len() {
        return invalid(format!("field has {} values, Courant numbers {}", phi.len(), c.len()));
    }
    if phi.len() < 3 {
        return invalid("need at least three nodes");
    }
    Ok(())
}

/// Core sweep shared by both orders. `alpha` is `None` for the first order scheme.
pub(crate) fn sweep(
    phi: &[f64],
    c: &CourantNumbers,
    alpha: Option<&[f64]>,
    bv: BoundaryValues,
    mut tape: Option<&mut Vec<Update>>,
) -> Vec<f64> {
    let c = &c.values;
    let last = phi.len() - 1;
    let mut new = phi.to_vec();
    let mut done = vec![false; phi.len()];
    let mut record = |u: Update| {
        if let Some(t) = tape.as_deref_mut() {
            t.push(u);
        }
    };

    for i in (0..last).filter(|&i| c[i] <= 0.0 && c[i + 1] > 0.0) {
        // x-bar splits [x_i, x_{i+1}] at theta; both rescaled Courant numbers
        // have magnitude C_{i+1} - C_i.
        let theta = c[i] / (c[i] - c[i + 1]);
        let slope = c[i + 1] - c[i];
        let star = phi[i] + theta * (phi[i + 1] - phi[i]);
        new[i] = (phi[i] + slope * star) / (1.0 + slope);
        new[i + 1] = (phi[i + 1] + slope * star) / (1.0 + slope);
        done[i] = true;
        done[i + 1] = true;
        record(Update::Pair { i, theta, slope });
    }
    if c[0] >= 0.0 {
        new[0] = bv.left;
        done[0] = true;
        record(Update::Dirichlet { i: 0 });
    }
    if c[last] <= 0.0 {
        new[last] = bv.right;
        done[last] = true;
        record(Update::Dirichlet { i: last });
    }

    for i in 1..=last {
        if done[i] || c[i] <= 0.0 {
            continue;
        }
        let ci = c[i];
        match alpha {
            None => {
                new[i] = (phi[i] + ci * new[i - 1]) / (1.0 + ci);
                record(Update::Forward1 { i, c: ci });
            }
            Some(a) => {
                let fallback = i < 2;
                let al = if fallback { 0.0 } else { a[i] };
                let far = if fallback { 0.0 } else { new[i - 2] };
                let num =
                    2.0 * phi[i] + new[i - 1] * (1.0 + 2.0 * al) * ci - far * al * ci - ci * grad_minus(phi, i, al);
                new[i] = num / (2.0 + (1.0 + al) * ci);
                record(Update::Forward {
                    i,
                    c: ci,
                    alpha: al,
                    fallback,
                });
            }
        }
        done[i] = true;
    }

    for i in (0..last).rev() {
        if done[i] || c[i] >= 0.0 {
            continue;
        }
        let ci = c[i];
        match alpha {
            None => {
                new[i] = (phi[i] - ci * new[i + 1]) / (1.0 - ci);
                record(Update::Backward1 { i, c: ci });
            }
            Some(a) => {
                let fallback = i + 2 > last;
                let al = if fallback { 0.0 } else { a[i] };
                let far = if fallback { 0.0 } else { new[i + 2] };
                let num =
                    2.0 * phi[i] - new[i + 1] * (1.0 + 2.0 * al) * ci + far * al * ci - ci * grad_plus(phi, i, al);
                new[i] = num / (2.0 - (1.0 + al) * ci);
                record(Update::Backward {
                    i,
                    c: ci,
                    alpha: al,
                    fallback,
                });
            }
        }
        done[i] = true;
    }
    new
}

pub fn step_first_order(phi: &Field1D, c: &CourantNumbers, bv: BoundaryValues) -> Result<Field1D> {
    check_lengths(&phi.values, c)?;
    Ok(Field1D::from(sweep(&phi.values, c, None, bv, None)))
}

/// Second order step with per-node `alpha` already resolved.
pub fn step_second_order(phi: &Field1D, c: &CourantNumbers, alpha: &[f64], bv: BoundaryValues) -> Result<Field1D> {
    check_lengths(&phi.values, c)?;
    if alpha.len() != phi.len() {
        return invalid("alpha length does not match the field");
    }
    Ok(Field1D::from(sweep(&phi.values, c, Some(alpha), bv, None)))
}

/// Coefficients of one interior equation `sum implicit[k] phi^{n+1}_{i+k} = sum explicit[k] phi^n_{i+k}`
/// for offsets `k = -2..=2` (stored at index `k + 2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowStencil {
    pub implicit: [f64; 5],
    pub explicit: [f64; 5],
}

/// Interior row of the second order scheme written out term by term, with
/// `alpha = None` giving the first order scheme.
pub fn interior_row(c: f64, alpha: Option<f64>) -> RowStencil {
    let unit = |k: i32| {
        let mut e = [0.0; 5];
        e[(k + 2) as usize] = 1.0;
        e
    };
    let axpy = |acc: &mut [f64; 5], s: f64, e: [f64; 5]| {
        for (a, b) in acc.iter_mut().zip(e) {
            *a += s * b;
        }
    };
    // h d^{a-} at offset k and h d^{a+} at offset k as coefficient vectors.
    let dm = |k: i32, a: f64| {
        let mut d = [0.0; 5];
        axpy(&mut d, a, unit(k));
        axpy(&mut d, -a, unit(k - 1));
        axpy(&mut d, 1.0 - a, unit(k + 1));
        axpy(&mut d, -(1.0 - a), unit(k));
        d
    };
    let dp = |k: i32, a: f64| {
        let mut d = [0.0; 5];
        axpy(&mut d, a, unit(k + 1));
        axpy(&mut d, -a, unit(k));
        axpy(&mut d, 1.0 - a, unit(k));
        axpy(&mut d, -(1.0 - a), unit(k - 1));
        d
    };
    let cp = c.max(0.0);
    let cm = c.min(0.0);
    let mut lhs = unit(0);
    let mut rhs = unit(0);
    axpy(&mut lhs, cp, unit(0));
    axpy(&mut lhs, -cp, unit(-1));
    axpy(&mut lhs, cm, unit(1));
    axpy(&mut lhs, -cm, unit(0));
    if let Some(a) = alpha {
        axpy(&mut lhs, -0.5 * cp, dm(-1, a));
        axpy(&mut lhs, -0.5 * cm, dp(1, a));
        axpy(&mut rhs, -0.5 * cp, dm(0, a));
        axpy(&mut rhs, -0.5 * cm, dp(0, a));
    }
    RowStencil {
        implicit: lhs,
        explicit: rhs,
    }
}

/// Assembles the full linear system of one step and solves it by LU with partial pivoting.
pub fn dense_oracle_step(
    phi: &Field1D,
    c: &CourantNumbers,
    alpha: Option<&[f64]>,
    bv: BoundaryValues,
) -> Result<Field1D> {
    check_lengths(&phi.values, c)?;
    let p = &phi.values;
    let cv = &c.values;
    let m = p.len();
    let last = m - 1;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut b = DVector::<f64>::zeros(m);
    let mut fixed = vec![None; m];

    for i in expanding_pairs(c) {
        // Characteristic foot x-bar: explicit update from the interpolated value there.
        let xbar = cv[i] / (cv[i] - cv[i + 1]);
        let star = (1.0 - xbar) * p[i] + xbar * p[i + 1];
        let cl = -(cv[i + 1] - cv[i]);
        let cr = cv[i + 1] - cv[i];
        fixed[i] = Some((p[i] - cl * star) / (1.0 - cl));
        fixed[i + 1] = Some((p[i + 1] + cr * star) / (1.0 + cr));
    }
    if cv[0] >= 0.0 {
        fixed[0] = Some(bv.left);
    }
    if cv[last] <= 0.0 {
        fixed[last] = Some(bv.right);
    }
    let ext = |k: isize| -> f64 {
        if k < 0 {
            2.0 * p[0] - p[1]
        } else if k as usize > last {
            2.0 * p[last] - p[last - 1]
        } else {
            p[k as usize]
        }
    };

    for i in 0..m {
        if let Some(v) = fixed[i] {
            a[(i, i)] = 1.0;
            b[i] = v;
            continue;
        }
        let ci = cv[i];
        let al = alpha.map(|al| {
            let near = (ci > 0.0 && i < 2) || (ci < 0.0 && i + 2 > last);
            if near {
                0.0
            } else {
                al[i]
            }
        });
        let row = interior_row(ci, al);
        for (k, &coef) in row.implicit.iter().enumerate() {
            if coef == 0.0 {
                continue;
            }
            let j = i as isize + k as isize - 2;
            if j < 0 || j as usize > last {
                return invalid(format!("stencil of node {i} leaves the grid"));
            }
            a[(i, j as usize)] += coef;
        }
        b[i] = row
            .explicit
            .iter()
            .enumerate()
            .map(|(k, &coef)| {
                if coef == 0.0 {
                    0.0
                } else {
                    coef * ext(i as isize + k as isize - 2)
                }
            })
            .sum();
    }
    let x = a.lu().solve(&b).ok_or(Error::Singular)?;
    Ok(Field1D::from(x.iter().copied().collect::<Vec<_>>()))
}

pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A 1D non-conservative transport problem.
#[derive(Clone)]
pub struct Problem1D {
    pub origin: f64,
    pub length: f64,
    pub final_time: f64,
    pub velocity: SpaceTimeFn,
    pub time_dependent: bool,
    pub initial: SpaceFn,
    pub boundary: BoundaryData1D,
    /// Number of equal substeps of length `tau / substeps` per time step.
    pub substeps: usize,
}

impl std::fmt::Debug for Problem1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem1D")
            .field("origin", &self.origin)
            .field("length", &self.length)
            .field("final_time", &self.final_time)
            .field("substeps", &self.substeps)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub order: Order,
    pub alpha: AlphaPolicy,
}

impl SchemeConfig {
    pub fn first_order() -> Self {
        Self {
            order: Order::First,
            alpha: AlphaPolicy::Fixed(0.0),
        }
    }

    pub fn second_order(alpha: AlphaPolicy) -> Self {
        Self {
            order: Order::Second,
            alpha,
        }
    }
}

/// Courant numbers for substep `s` of step `n`, with the velocity frozen at the substep midpoint.
pub(crate) fn substep_courant(problem: &Problem1D, grid: &Grid1D, t0: f64, dt: f64) -> Result<CourantNumbers> {
    let tm = t0 + 0.5 * dt;
    let v = VelocityField1D::sample(grid, |x| (problem.velocity)(x, tm))?;
    courant(&v, dt)
}

/// Runs the scheme and returns every time level. `checked = false` admits
/// `alpha` values outside `[0, 1]`.
pub(crate) fn solve_impl(
    problem: &Problem1D,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    config: &SchemeConfig,
    checked: bool,
) -> Result<Trajectory<Field1D>> {
    let mut phi = grid.sample(|x| (problem.initial)(x))?;
    let mut levels = Vec::with_capacity(tgrid.steps() + 1);
    levels.push(phi.clone());
    let subs = problem.substeps.max(1);
    let dt = tgrid.tau() / subs as f64;
    let mut frozen = None;
    for n in 0..tgrid.steps() {
        for s in 0..subs {
            let t0 = tgrid.time(n) + s as f64 * dt;
            let c = match (&frozen, problem.time_dependent) {
                (Some(c), false) => c,
                _ => {
                    frozen = Some(substep_courant(problem, grid, t0, dt)?);
                    frozen.as_ref().unwrap()
                }
            };
            let bv = problem.boundary.at(t0 + dt);
            let next = match config.order {
                Order::First => sweep(&phi.values, c, None, bv, None),
                Order::Second => {
                    let a = config.alpha.resolve(c, n, checked)?;
                    sweep(&phi.values, c, Some(&a), bv, None)
                }
            };
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Diverged { step: n });
            }
            phi = Field1D::from(next);
        }
        levels.push(phi.clone());
    }
    Ok(Trajectory { levels })
}

pub fn solve(
    problem: &Problem1D,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    config: &SchemeConfig,
) -> Result<Trajectory<Field1D>> {
    solve_impl(problem, grid, tgrid, config, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cn(v: Vec<f64>) -> CourantNumbers {
        CourantNumbers::new(v).unwrap()
    }

    #[test]
    fn first_order_hand_example() {
        let phi = Field1D::from(vec![0.0, 0.0, 1.0, 0.0, 0.0]);
        let out = step_first_order(&phi, &cn(vec![1.0; 5]), BoundaryValues { left: 0.0, right: 9.0 }).unwrap();
        assert_eq!(out.values, vec![0.0, 0.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn constant_preserved() {
        let phi = Field1D::from(vec![3.0; 8]);
        let c = cn(vec![-2.0, -1.0, 0.5, 4.0, 1.0, -0.5, -3.0, 2.0]);
        let bv = BoundaryValues { left: 3.0, right: 3.0 };
        for out in [
            step_first_order(&phi, &c, bv).unwrap(),
            step_second_order(&phi, &c, &[0.3; 8], bv).unwrap(),
        ] {
            assert!(out.values.iter().all(|v| (v - 3.0).abs() < 1e-14));
        }
    }

    #[test]
    fn gradients() {
        let phi = [1.0, 3.0, 5.0, 7.0];
        for a in [0.0, 0.3, 1.0] {
            assert!((upwind_gradient(&phi, 1, a, Side::Minus).unwrap() - 2.0).abs() < 1e-15);
            assert!((upwind_gradient(&phi, 2, a, Side::Plus).unwrap() - 2.0).abs() < 1e-15);
        }
        let phi = [0.0, 1.0, 5.0];
        let central = 2.5;
        assert_eq!(upwind_gradient(&phi, 1, 0.5, Side::Minus).unwrap(), central);
        assert_eq!(upwind_gradient(&phi, 1, 0.5, Side::Plus).unwrap(), central);
        assert_eq!(upwind_gradient(&phi, 1, 1.0, Side::Minus).unwrap(), 1.0);
        assert!(upwind_gradient(&phi, 0, 0.5, Side::Minus).is_err());
        assert!(upwind_gradient(&phi, 2, 0.5, Side::Minus).is_err());
    }

    #[test]
    fn linear_wave_is_exact() {
        let (a, b, v, h, tau) = (0.7, -0.2, 1.0, 0.1, 0.35);
        let xs: Vec<f64> = (0..12).map(|i| i as f64 * h).collect();
        let phi = Field1D::from(xs.iter().map(|x| a * x + b).collect::<Vec<_>>());
        let c = cn(vec![v * tau / h; 12]);
        let bv = BoundaryValues {
            left: a * (0.0 - v * tau) + b,
            right: 0.0,
        };
        for al in [0.0, 0.5, 0.8, 1.0] {
            let out = step_second_order(&phi, &c, &[al; 12], bv).unwrap();
            for (i, x) in xs.iter().enumerate().take(11).skip(2) {
                assert!((out.values[i] - (a * (x - v * tau) + b)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn oracle_identity_for_zero_courant() {
        let phi = Field1D::from(vec![0.1, -0.4, 2.0, 0.3, 0.9]);
        let c = cn(vec![0.0; 5]);
        let bv = BoundaryValues { left: 0.1, right: 0.9 };
        let out = dense_oracle_step(&phi, &c, Some(&[0.5; 5]), bv).unwrap();
        for (a, b) in out.values.iter().zip(&phi.values) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_matches_oracle_sign_changing() {
        let phi = Field1D::from((0..13).map(|i| ((i * 7 % 5) as f64 - 2.0) * 0.3).collect::<Vec<_>>());
        let c = cn((0..13).map(|i| 3.0 * ((i as f64) * 0.6 - 1.0).sin()).collect());
        let bv = BoundaryValues { left: 0.2, right: -0.7 };
        let alpha = vec![0.7; 13];
        let s = step_second_order(&phi, &c, &alpha, bv).unwrap();
        let o = dense_oracle_step(&phi, &c, Some(&alpha), bv).unwrap();
        for (a, b) in s.values.iter().zip(&o.values) {
            assert!((a - b).abs() < 1e-12, "{a} {b}");
        }
        let s = step_first_order(&phi, &c, bv).unwrap();
        let o = dense_oracle_step(&phi, &c, None, bv).unwrap();
        for (a, b) in s.values.iter().zip(&o.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_validation() {
        let c = cn(vec![1.0, 2.0, 3.0]);
        assert!(AlphaPolicy::Fixed(1.2).resolve(&c, 0, true).is_err());
        assert!(AlphaPolicy::Fixed(1.2).resolve(&c, 0, false).is_ok());
        let r = AlphaPolicy::CourantRule
            .resolve(&cn(vec![10.0, 0.0, 1.0]), 0, true)
            .unwrap();
        assert_eq!(r, vec![2.0, 1.0 / 3.0, 0.5]);
    }
}
