//! One gradient step on the per-node `alpha` values of the second order
//! scheme, minimizing the squared negative part of the solution.
//!
//! The gradient is a hand-written reverse pass through the sweep updates.

use std::sync::Arc;

use crate::analysis::final_error;
use crate::error::{invalid, Result};
use crate::mesh::{Field1D, Grid1D, TimeGrid, Trajectory};
use crate::nonconservative::{solve_impl, substep_courant, sweep, AlphaPolicy, Order, Problem1D, SchemeConfig, Update};

pub use crate::nonconservative::AlphaField;

/// `h tau sum_n sum_i min(0, phi_i^n)^2`.
pub fn loss_j(traj: &Trajectory<Field1D>, h: f64, tau: f64) -> f64 {
    let s: f64 = traj
        .levels
        .iter()
        .flat_map(|f| f.values.iter())
        .map(|&v| v.min(0.0).powi(2))
        .sum();
    h * tau * s
}

/// Entries that are optimized: interior nodes `1..I` and steps `1..N`.
pub fn is_free(field: &AlphaField, i: usize, n: usize) -> bool {
    i >= 1 && i + 1 < field.nodes() && n >= 1 && n < field.steps()
}

struct Substep {
    old: Vec<f64>,
    new: Vec<f64>,
    tape: Vec<Update>,
}

fn forward(
    problem: &Problem1D,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    alpha: &AlphaField,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<Substep>>)> {
    let mut phi = grid.sample(|x| (problem.initial)(x))?.values;
    let subs = problem.substeps.max(1);
    let dt = tgrid.tau() / subs as f64;
    let mut levels = vec![phi.clone()];
    let mut steps = Vec::with_capacity(tgrid.steps());
    for n in 0..tgrid.steps() {
        let mut record = Vec::with_capacity(subs);
        for s in 0..subs {
            let t0 = tgrid.time(n) + s as f64 * dt;
            let c = substep_courant(problem, grid, t0, dt)?;
            let bv = problem.boundary.at(t0 + dt);
            let mut tape = Vec::new();
            let new = sweep(&phi, &c, Some(alpha.step(n)), bv, Some(&mut tape));
            record.push(Substep {
                old: std::mem::replace(&mut phi, new.clone()),
                new,
                tape,
            });
        }
        levels.push(phi.clone());
        steps.push(record);
    }
    Ok((levels, steps))
}

fn add_left(lam: &mut [f64], i: usize, v: f64) {
    if i == 0 {
        lam[0] += 2.0 * v;
        lam[1] -= v;
    } else {
        lam[i - 1] += v;
    }
}

fn add_right(lam: &mut [f64], i: usize, v: f64) {
    let last = lam.len() - 1;
    if i == last {
        lam[last] += 2.0 * v;
        lam[last - 1] -= v;
    } else {
        lam[i + 1] += v;
    }
}

fn left_val(p: &[f64], i: usize) -> f64 {
    if i == 0 {
        2.0 * p[0] - p[1]
    } else {
        p[i - 1]
    }
}

fn right_val(p: &[f64], i: usize) -> f64 {
    let last = p.len() - 1;
    if i == last {
        2.0 * p[last] - p[last - 1]
    } else {
        p[i + 1]
    }
}

/// Pulls the adjoint of the new level back to the old level and accumulates
/// `d/d alpha_i` into `grad`.
fn adjoint_substep(sub: &Substep, lam_out: &[f64], grad: &mut [f64]) -> Vec<f64> {
    let p = &sub.old;
    let q = &sub.new;
    let mut ln = lam_out.to_vec();
    let mut lo = vec![0.0; p.len()];
    for u in sub.tape.iter().rev() {
        match *u {
            Update::Dirichlet { i } => ln[i] = 0.0,
            Update::Pair { i, theta, slope } => {
                let (li, lj) = (ln[i], ln[i + 1]);
                let ls = slope / (1.0 + slope) * (li + lj);
                lo[i] += li / (1.0 + slope) + (1.0 - theta) * ls;
                lo[i + 1] += lj / (1.0 + slope) + theta * ls;
                ln[i] = 0.0;
                ln[i + 1] = 0.0;
            }
            Update::Forward1 { i, c } => {
                let l = std::mem::take(&mut ln[i]);
                lo[i] += l / (1.0 + c);
                ln[i - 1] += l * c / (1.0 + c);
            }
            Update::Backward1 { i, c } => {
                let l = std::mem::take(&mut ln[i]);
                lo[i] += l / (1.0 - c);
                ln[i + 1] -= l * c / (1.0 - c);
            }
            Update::Forward {
                i,
                c,
                alpha: a,
                fallback,
            } => {
                let l = std::mem::take(&mut ln[i]);
                let d = 2.0 + (1.0 + a) * c;
                ln[i - 1] += l * (1.0 + 2.0 * a) * c / d;
                lo[i] += l * (2.0 - c * (2.0 * a - 1.0)) / d;
                add_left(&mut lo, i, l * c * a / d);
                add_right(&mut lo, i, -l * c * (1.0 - a) / d);
                if !fallback {
                    ln[i - 2] -= l * a * c / d;
                    let g = (p[i] - left_val(p, i)) - (right_val(p, i) - p[i]);
                    let dn = 2.0 * q[i - 1] * c - q[i - 2] * c - c * g;
                    grad[i] += l * (dn - q[i] * c) / d;
                }
            }
            Update::Backward {
                i,
                c,
                alpha: a,
                fallback,
            } => {
                let l = std::mem::take(&mut ln[i]);
                let d = 2.0 - (1.0 + a) * c;
                ln[i + 1] -= l * (1.0 + 2.0 * a) * c / d;
                lo[i] += l * (2.0 - c * (1.0 - 2.0 * a)) / d;
                add_right(&mut lo, i, -l * c * a / d);
                add_left(&mut lo, i, l * c * (1.0 - a) / d);
                if !fallback {
                    ln[i + 2] += l * a * c / d;
                    let g = (right_val(p, i) - p[i]) - (p[i] - left_val(p, i));
                    let dn = -2.0 * q[i + 1] * c + q[i + 2] * c - c * g;
                    grad[i] += l * (dn + q[i] * c) / d;
                }
            }
        }
    }
    for (o, n) in lo.iter_mut().zip(&ln) {
        *o += n;
    }
    lo
}

fn check_shape(field: &AlphaField, grid: &Grid1D, tgrid: &TimeGrid) -> Result<()> {
    if field.nodes() != grid.len() || field.steps() != tgrid.steps() {
        return invalid(format!(
            "alpha field is {} x {}, expected {} x {}",
            field.nodes(),
            field.steps(),
            grid.len(),
            tgrid.steps()
        ));
    }
    Ok(())
}

/// Exact gradient of `J` with respect to every `alpha_i^n`; entries outside
/// the free range are zero.
pub fn grad_j(problem: &Problem1D, grid: &Grid1D, tgrid: &TimeGrid, alpha: &AlphaField) -> Result<AlphaField> {
    check_shape(alpha, grid, tgrid)?;
    let (levels, steps) = forward(problem, grid, tgrid, alpha)?;
    let w = 2.0 * grid.h() * tgrid.tau();
    let dj = |level: &[f64]| -> Vec<f64> { level.iter().map(|&v| w * v.min(0.0)).collect() };
    let mut grad = AlphaField::constant(alpha.nodes(), alpha.steps(), 0.0);
    let mut lam = dj(&levels[tgrid.steps()]);
    for n in (0..tgrid.steps()).rev() {
        let mut g = vec![0.0; alpha.nodes()];
        for sub in steps[n].iter().rev() {
            lam = adjoint_substep(sub, &lam, &mut g);
        }
        for (i, gi) in g.into_iter().enumerate() {
            if is_free(alpha, i, n) {
                grad.set(i, n, gi);
            }
        }
        for (l, d) in lam.iter_mut().zip(dj(&levels[n])) {
            *l += d;
        }
    }
    Ok(grad)
}

/// `alpha - eta * g` on free entries, without clamping.
pub fn descent_step(alpha: &AlphaField, grad: &AlphaField, eta: f64) -> Result<AlphaField> {
    if alpha.nodes() != grad.nodes() || alpha.steps() != grad.steps() {
        return invalid("gradient shape differs from alpha");
    }
    let values = alpha
        .values()
        .iter()
        .zip(grad.values())
        .map(|(a, g)| a - eta * g)
        .collect();
    AlphaField::from_values(alpha.nodes(), alpha.steps(), values)
}

pub fn clamp_unit(alpha: &AlphaField) -> AlphaField {
    let mut out = alpha.clone();
    for a in out.values_mut() {
        *a = a.clamp(0.0, 1.0);
    }
    out
}

/// Loss of the scheme with the given field; values outside `[0, 1]` are allowed.
pub fn evaluate(
    problem: &Problem1D,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    alpha: &AlphaField,
) -> Result<Trajectory<Field1D>> {
    check_shape(alpha, grid, tgrid)?;
    let config = SchemeConfig {
        order: Order::Second,
        alpha: AlphaPolicy::Field(Arc::new(alpha.clone())),
    };
    solve_impl(problem, grid, tgrid, &config, false)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationReport {
    pub eta: f64,
    pub j_before: f64,
    pub j_after: f64,
    pub j_after_clamped: f64,
    pub e_before: f64,
    pub e_after: f64,
    pub e_after_clamped: f64,
    pub max_abs_gradient: f64,
}

/// Solve with `alpha = 0.5`, take one descent step of size `eta`, solve again.
/// `exact_final` is the reference solution at the final time. Also returns the
/// unclamped field after the step.
pub fn optimize_once(
    problem: &Problem1D,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    eta: f64,
    exact_final: impl Fn(f64) -> f64,
) -> Result<(OptimizationReport, AlphaField)> {
    if !eta.is_finite() || eta < 0.0 {
        return invalid(format!("step size must be finite and non-negative, got {eta}"));
    }
    let (h, tau) = (grid.h(), tgrid.tau());
    let a0 = AlphaField::constant(grid.len(), tgrid.steps(), 0.5);
    let before = evaluate(problem, grid, tgrid, &a0)?;
    let g = grad_j(problem, grid, tgrid, &a0)?;
    let a1 = descent_step(&a0, &g, eta)?;
    let after = evaluate(problem, grid, tgrid, &a1)?;
    let clamped = evaluate(problem, grid, tgrid, &clamp_unit(&a1))?;
    let report = OptimizationReport {
        eta,
        j_before: loss_j(&before, h, tau),
        j_after: loss_j(&after, h, tau),
        j_after_clamped: loss_j(&clamped, h, tau),
        e_before: final_error(before.last(), grid, &exact_final),
        e_after: final_error(after.last(), grid, &exact_final),
        e_after_clamped: final_error(clamped.last(), grid, &exact_final),
        max_abs_gradient: g.values().iter().fold(0.0, |m, v| m.max(v.abs())),
    };
    Ok((report, a1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loss_of_single_negative_value() {
        let mut levels = vec![Field1D::from(vec![0.5; 4]); 3];
        levels[2].values[1] = -0.3;
        let j = loss_j(&Trajectory { levels }, 0.1, 0.2);
        assert!((j - 0.1 * 0.2 * 0.09).abs() < 1e-15);
    }

    #[test]
    fn descent_arithmetic() {
        let a = AlphaField::constant(4, 3, 0.5);
        let g = AlphaField::constant(4, 3, 1.0);
        let b = descent_step(&a, &g, 0.1).unwrap();
        assert!(b.values().iter().all(|v| (v - 0.4).abs() < 1e-15));
        assert_eq!(descent_step(&a, &g, 0.0).unwrap(), a);
        let z = AlphaField::constant(4, 3, 0.0);
        assert_eq!(descent_step(&a, &z, 3.0).unwrap(), a);
    }

    #[test]
    fn free_range() {
        let a = AlphaField::constant(5, 4, 0.5);
        assert!(!is_free(&a, 0, 1));
        assert!(!is_free(&a, 4, 1));
        assert!(!is_free(&a, 2, 0));
        assert!(is_free(&a, 1, 3));
    }
}
