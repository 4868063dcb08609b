//! Finite-volume schemes for `d_t phi + d_x (v phi) = 0` on cell grids.
//!
//! Cell `k` (0-based) has faces `k` and `k + 1`. Face Courant numbers are
//! stored per face, `I + 1` values. Fluxes below are in Courant units
//! (`tau / h` times the physical flux) unless stated otherwise.

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{invalid, Error, Result};
use crate::mesh::{Field1D, Grid1D, TimeGrid, Trajectory};
use crate::nonconservative::{BoundaryData1D, BoundaryValues, Order, Problem1D};
use crate::velocity::{courant, CourantNumbers, VelocityField1D};

/// How a cell with `C_{i-1/2} < 0 < C_{i+1/2}` is treated by the second order scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpandingTreatment {
    /// Keep the second order fluxes; the few cells around the divergence form
    /// a small block that is solved directly during the sweep.
    #[default]
    CoupledBlock,
    /// Use first order upwind fluxes on both faces of the diverging cell.
    FirstOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvConfig {
    pub order: Order,
    pub alpha: f64,
    pub expanding: ExpandingTreatment,
}

impl FvConfig {
    pub fn first_order() -> Self {
        Self {
            order: Order::First,
            alpha: 0.0,
            expanding: ExpandingTreatment::CoupledBlock,
        }
    }

    pub fn second_order(alpha: f64) -> Self {
        Self {
            order: Order::Second,
            alpha,
            expanding: ExpandingTreatment::CoupledBlock,
        }
    }
}

/// Boundary values needed by one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepBoundary {
    pub old: BoundaryValues,
    pub mid: BoundaryValues,
    pub new: BoundaryValues,
}

impl StepBoundary {
    pub fn from_data(bc: &BoundaryData1D, t_n: f64, tau: f64) -> Self {
        Self {
            old: bc.at(t_n),
            mid: bc.at(t_n + 0.5 * tau),
            new: bc.at(t_n + tau),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxSet {
    pub values: Vec<f64>,
}

/// `konst + sum coef * Phi^{n+1}_cell`.
#[derive(Debug, Clone, Default)]
struct Lin {
    terms: Vec<(usize, f64)>,
    konst: f64,
}

impl Lin {
    fn add(&mut self, cell: usize, coef: f64) {
        if coef != 0.0 {
            self.terms.push((cell, coef));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FaceKind {
    InflowLeft,
    InflowRight,
    Upwind1,
    Upwind2,
}

fn face_kinds(c: &[f64], order: Order, expanding: ExpandingTreatment) -> Vec<FaceKind> {
    let last = c.len() - 1;
    let base = match order {
        Order::First => FaceKind::Upwind1,
        Order::Second => FaceKind::Upwind2,
    };
    let mut kinds = vec![base; c.len()];
    if order == Order::Second && expanding == ExpandingTreatment::FirstOrder {
        for k in 0..last {
            if c[k] < 0.0 && c[k + 1] > 0.0 {
                kinds[k] = FaceKind::Upwind1;
                kinds[k + 1] = FaceKind::Upwind1;
            }
        }
    }
    if c[0] >= 0.0 {
        kinds[0] = FaceKind::InflowLeft;
    }
    if c[last] <= 0.0 {
        kinds[last] = FaceKind::InflowRight;
    }
    kinds
}

/// Old level value at paper index `p` in `0..=I+1`, ghosts extrapolated.
fn old_at(phi: &[f64], p: usize, bv: BoundaryValues) -> f64 {
    let n = phi.len();
    if p == 0 {
        2.0 * bv.left - phi[0]
    } else if p == n + 1 {
        2.0 * bv.right - phi[n - 1]
    } else {
        phi[p - 1]
    }
}

/// New level value at paper index `p` as a linear form, ghosts extrapolated.
fn new_at(n_cells: usize, p: usize, scale: f64, bv: BoundaryValues, lin: &mut Lin) {
    if p == 0 {
        lin.konst += scale * 2.0 * bv.left;
        lin.add(0, -scale);
    } else if p == n_cells + 1 {
        lin.konst += scale * 2.0 * bv.right;
        lin.add(n_cells - 1, -scale);
    } else {
        lin.add(p - 1, scale);
    }
}

fn face_form(f: usize, c: f64, kind: FaceKind, alpha: f64, old: &[f64], sb: &StepBoundary) -> Lin {
    let n = old.len();
    let mut lin = Lin::default();
    match kind {
        FaceKind::InflowLeft => lin.konst = c * sb.mid.left,
        FaceKind::InflowRight => lin.konst = c * sb.mid.right,
        FaceKind::Upwind1 => {
            // Cells beyond the domain carry the boundary value itself.
            let p = if c > 0.0 { f } else { f + 1 };
            if c != 0.0 {
                if p == 0 {
                    lin.konst = c * sb.new.left;
                } else if p == n + 1 {
                    lin.konst = c * sb.new.right;
                } else {
                    lin.add(p - 1, c);
                }
            }
        }
        FaceKind::Upwind2 => {
            let a = alpha;
            if c > 0.0 {
                new_at(n, f, c * 0.5 * (1.0 + a), sb.new, &mut lin);
                if a != 0.0 {
                    new_at(n, f - 1, -c * 0.5 * a, sb.new, &mut lin);
                }
                lin.konst += c * 0.5 * (a * old_at(old, f, sb.old) + (1.0 - a) * old_at(old, f + 1, sb.old));
            } else if c < 0.0 {
                new_at(n, f + 1, c * 0.5 * (1.0 + a), sb.new, &mut lin);
                if a != 0.0 {
                    new_at(n, f + 2, -c * 0.5 * a, sb.new, &mut lin);
                }
                lin.konst += c * 0.5 * ((1.0 - a) * old_at(old, f, sb.old) + a * old_at(old, f + 1, sb.old));
            }
        }
    }
    lin
}

/// Equation of cell `k`: `sum coef * Phi^{n+1} = rhs`.
struct CellRow {
    coefs: Vec<(usize, f64)>,
    rhs: f64,
}

fn assemble(phi: &[f64], c: &CourantNumbers, config: &FvConfig, sb: &StepBoundary) -> Vec<CellRow> {
    let n = phi.len();
    let kinds = face_kinds(&c.values, config.order, config.expanding);
    let forms: Vec<Lin> = (0..=n)
        .map(|f| face_form(f, c.values[f], kinds[f], config.alpha, phi, sb))
        .collect();
    (0..n)
        .map(|k| {
            let mut coefs: Vec<(usize, f64)> = vec![(k, 1.0)];
            let mut push = |j: usize, v: f64| {
                if let Some(e) = coefs.iter_mut().find(|e| e.0 == j) {
                    e.1 += v;
                } else {
                    coefs.push((j, v));
                }
            };
            for &(j, v) in &forms[k + 1].terms {
                push(j, v);
            }
            for &(j, v) in &forms[k].terms {
                push(j, -v);
            }
            CellRow {
                coefs,
                rhs: phi[k] - forms[k + 1].konst + forms[k].konst,
            }
        })
        .collect()
}

/// Solves the cell equations by substitution in dependency order. Cells that
/// depend on each other (around a diverging velocity) are solved as one block.
fn substitute(rows: &[CellRow]) -> Result<Vec<f64>> {
    let n = rows.len();
    let mut g = DiGraph::<usize, ()>::with_capacity(n, 4 * n);
    let ids: Vec<_> = (0..n).map(|k| g.add_node(k)).collect();
    for (k, row) in rows.iter().enumerate() {
        for &(j, v) in &row.coefs {
            if j != k && v != 0.0 {
                g.add_edge(ids[k], ids[j], ());
            }
        }
    }
    let mut x = vec![0.0; n];
    let mut solved = vec![false; n];
    // Tarjan yields components with dependencies first.
    for comp in tarjan_scc(&g) {
        let mut cells: Vec<usize> = comp.iter().map(|&id| g[id]).collect();
        cells.sort_unstable();
        if cells.len() == 1 {
            let k = cells[0];
            let mut rhs = rows[k].rhs;
            let mut diag = 0.0;
            for &(j, v) in &rows[k].coefs {
                if j == k {
                    diag += v;
                } else if solved[j] {
                    rhs -= v * x[j];
                } else {
                    return Err(Error::Sweep(k));
                }
            }
            if diag == 0.0 {
                return Err(Error::Singular);
            }
            x[k] = rhs / diag;
            solved[k] = true;
            continue;
        }
        let m = cells.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        let mut b = DVector::<f64>::zeros(m);
        for (r, &k) in cells.iter().enumerate() {
            b[r] = rows[k].rhs;
            for &(j, v) in &rows[k].coefs {
                if let Some(col) = cells.iter().position(|&q| q == j) {
                    a[(r, col)] += v;
                } else if solved[j] {
                    b[r] -= v * x[j];
                } else {
                    return Err(Error::Sweep(k));
                }
            }
        }
        let sol = a.lu().solve(&b).ok_or(Error::Singular)?;
        for (r, &k) in cells.iter().enumerate() {
            x[k] = sol[r];
            solved[k] = true;
        }
    }
    Ok(x)
}

fn check(phi: &Field1D, c: &CourantNumbers) -> Result<()> {
    if c.len() != phi.len() + 1 {
        return invalid(format!(
            "{} cells need {} face Courant numbers, got {}",
            phi.len(),
            phi.len() + 1,
            c.len()
        ));
    }
    if phi.len() < 2 {
        return invalid("need at least two cells");
    }
    Ok(())
}

/// First order implicit upwind step; `bv` holds boundary values at `t^{n+1}`,
/// which also serve as the inflow values.
pub fn step_fv_first_order(phi: &Field1D, c: &CourantNumbers, bv: BoundaryValues) -> Result<Field1D> {
    check(phi, c)?;
    let sb = StepBoundary {
        old: bv,
        mid: bv,
        new: bv,
    };
    let rows = assemble(&phi.values, c, &FvConfig::first_order(), &sb);
    Ok(Field1D::from(substitute(&rows)?))
}

pub fn step_fv_second_order(
    phi: &Field1D,
    c: &CourantNumbers,
    alpha: f64,
    sb: &StepBoundary,
    expanding: ExpandingTreatment,
) -> Result<Field1D> {
    check(phi, c)?;
    if !alpha.is_finite() {
        return invalid("alpha must be finite");
    }
    let config = FvConfig {
        order: Order::Second,
        alpha,
        expanding,
    };
    let rows = assemble(&phi.values, c, &config, sb);
    Ok(Field1D::from(substitute(&rows)?))
}

/// Physical face fluxes `F_{i+1/2}^{n+1/2}` evaluated from both levels, `I + 1` values.
#[allow(clippy::too_many_arguments)]
pub fn fluxes(
    old: &Field1D,
    new: &Field1D,
    c: &CourantNumbers,
    config: &FvConfig,
    sb: &StepBoundary,
    h: f64,
    tau: f64,
) -> Result<FluxSet> {
    check(old, c)?;
    let n = old.len();
    let kinds = face_kinds(&c.values, config.order, config.expanding);
    let a = config.alpha;
    let ghost_new = |p: usize| -> f64 {
        if p == 0 {
            match config.order {
                Order::First => sb.new.left,
                Order::Second => 2.0 * sb.new.left - new.values[0],
            }
        } else if p == n + 1 {
            match config.order {
                Order::First => sb.new.right,
                Order::Second => 2.0 * sb.new.right - new.values[n - 1],
            }
        } else {
            new.values[p - 1]
        }
    };
    let old_v = |p: usize| old_at(&old.values, p, sb.old);
    // Phi_{p, alpha-} and Phi_{p, alpha+} at either level.
    let am = |f: &dyn Fn(usize) -> f64, p: usize| a * f(p) + (1.0 - a) * f(p + 1);
    let ap = |f: &dyn Fn(usize) -> f64, p: usize| (1.0 - a) * f(p) + a * f(p + 1);
    let scale = h / tau;
    let mut values = Vec::with_capacity(n + 1);
    for f in 0..=n {
        let cf = c.values[f];
        let (vp, vm) = (cf.max(0.0), cf.min(0.0));
        let g = match kinds[f] {
            FaceKind::InflowLeft => cf * sb.mid.left,
            FaceKind::InflowRight => cf * sb.mid.right,
            FaceKind::Upwind1 => {
                let nb = |p: usize| {
                    if p == 0 {
                        sb.new.left
                    } else if p == n + 1 {
                        sb.new.right
                    } else {
                        new.values[p - 1]
                    }
                };
                vp * nb(f) + vm * nb(f + 1)
            }
            FaceKind::Upwind2 => {
                let mut g = 0.0;
                if vp > 0.0 {
                    g += vp * (ghost_new(f) - 0.5 * am(&ghost_new, f - 1) + 0.5 * am(&old_v, f));
                }
                if vm < 0.0 {
                    g += vm * (ghost_new(f + 1) - 0.5 * ap(&ghost_new, f + 1) + 0.5 * ap(&old_v, f));
                }
                g
            }
        };
        values.push(g * scale);
    }
    Ok(FluxSet { values })
}

pub fn total_mass(phi: &Field1D, h: f64) -> f64 {
    h * phi.values.iter().sum::<f64>()
}

/// Dense solve of the same step with the two ghost cells kept as unknowns.
pub fn dense_oracle_fv_step(
    phi: &Field1D,
    c: &CourantNumbers,
    config: &FvConfig,
    sb: &StepBoundary,
) -> Result<Field1D> {
    check(phi, c)?;
    let n = phi.len();
    let m = n + 2;
    let a = config.alpha;
    let kinds = face_kinds(&c.values, config.order, config.expanding);
    let old_v = |p: usize| old_at(&phi.values, p, sb.old);
    let mut mat = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    // Row p in 1..=n: Phi_p + G_{p+1/2} - G_{p-1/2} = Phi_p^n; unknown index = paper index.
    for p in 1..=n {
        mat[(p, p)] += 1.0;
        rhs[p] += phi.values[p - 1];
        for (f, sign) in [(p, 1.0), (p - 1, -1.0)] {
            let cf = c.values[f];
            let (cp, cm) = (cf.max(0.0), cf.min(0.0));
            match kinds[f] {
                FaceKind::InflowLeft => rhs[p] -= sign * cf * sb.mid.left,
                FaceKind::InflowRight => rhs[p] -= sign * cf * sb.mid.right,
                FaceKind::Upwind1 => {
                    if cp > 0.0 {
                        mat[(p, f)] += sign * cp;
                    }
                    if cm < 0.0 {
                        mat[(p, f + 1)] += sign * cm;
                    }
                }
                FaceKind::Upwind2 => {
                    if cp > 0.0 {
                        // Phi_f - (a Phi_{f-1} + (1-a) Phi_f) / 2 + (a Phi^n_f + (1-a) Phi^n_{f+1}) / 2
                        mat[(p, f)] += sign * cp * (1.0 - 0.5 * (1.0 - a));
                        if a != 0.0 {
                            mat[(p, f - 1)] -= sign * cp * 0.5 * a;
                        }
                        rhs[p] -= sign * cp * 0.5 * (a * old_v(f) + (1.0 - a) * old_v(f + 1));
                    }
                    if cm < 0.0 {
                        // Phi_{f+1} - ((1-a) Phi_{f+1} + a Phi_{f+2}) / 2 + ((1-a) Phi^n_f + a Phi^n_{f+1}) / 2
                        mat[(p, f + 1)] += sign * cm * (1.0 - 0.5 * (1.0 - a));
                        if a != 0.0 {
                            mat[(p, f + 2)] -= sign * cm * 0.5 * a;
                        }
                        rhs[p] -= sign * cm * 0.5 * ((1.0 - a) * old_v(f) + a * old_v(f + 1));
                    }
                }
            }
        }
    }
    match config.order {
        Order::First => {
            mat[(0, 0)] = 1.0;
            rhs[0] = sb.new.left;
            mat[(n + 1, n + 1)] = 1.0;
            rhs[n + 1] = sb.new.right;
        }
        Order::Second => {
            mat[(0, 0)] = 1.0;
            mat[(0, 1)] = 1.0;
            rhs[0] = 2.0 * sb.new.left;
            mat[(n + 1, n + 1)] = 1.0;
            mat[(n + 1, n)] = 1.0;
            rhs[n + 1] = 2.0 * sb.new.right;
        }
    }
    let x = mat.lu().solve(&rhs).ok_or(Error::Singular)?;
    Ok(Field1D::from(x.iter().skip(1).take(n).copied().collect::<Vec<_>>()))
}

/// Face Courant numbers with the velocity frozen at the step midpoint.
pub fn face_courant(problem: &Problem1D, grid: &Grid1D, t_n: f64, tau: f64) -> Result<CourantNumbers> {
    let tm = t_n + 0.5 * tau;
    let v = VelocityField1D::sample(grid, |x| (problem.velocity)(x, tm))?;
    courant(&v, tau)
}

/// Runs a conservative scheme on a cell grid; initial values are point samples at cell centers.
pub fn solve_fv(
    problem: &Problem1D,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    config: &FvConfig,
) -> Result<Trajectory<Field1D>> {
    if grid.centering() != crate::mesh::Centering::Cell {
        return invalid("conservative schemes need a cell grid");
    }
    let mut phi = grid.sample(|x| (problem.initial)(x))?;
    let mut levels = vec![phi.clone()];
    let tau = tgrid.tau();
    let mut frozen: Option<CourantNumbers> = None;
    for n in 0..tgrid.steps() {
        let t_n = tgrid.time(n);
        if frozen.is_none() || problem.time_dependent {
            frozen = Some(face_courant(problem, grid, t_n, tau)?);
        }
        let c = frozen.as_ref().unwrap();
        let sb = StepBoundary::from_data(&problem.boundary, t_n, tau);
        phi = match config.order {
            Order::First => step_fv_first_order(&phi, c, sb.new)?,
            Order::Second => step_fv_second_order(&phi, c, config.alpha, &sb, config.expanding)?,
        };
        if phi.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { step: n });
        }
        levels.push(phi.clone());
    }
    Ok(Trajectory { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sb(v: f64) -> StepBoundary {
        let b = BoundaryValues { left: v, right: v };
        StepBoundary { old: b, mid: b, new: b }
    }

    #[test]
    fn constant_state_is_kept() {
        let phi = Field1D::from(vec![2.0; 6]);
        let c = CourantNumbers::new(vec![1.5; 7]).unwrap();
        let a = step_fv_first_order(&phi, &c, sb(2.0).new).unwrap();
        let b = step_fv_second_order(&phi, &c, 0.5, &sb(2.0), ExpandingTreatment::CoupledBlock).unwrap();
        for v in a.values.iter().chain(&b.values) {
            assert!((v - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_velocity_fluxes_vanish() {
        let phi = Field1D::from(vec![0.3, -1.0, 4.0]);
        let c = CourantNumbers::new(vec![0.0; 4]).unwrap();
        let cfg = FvConfig::second_order(0.5);
        let out = step_fv_second_order(&phi, &c, 0.5, &sb(0.0), ExpandingTreatment::CoupledBlock).unwrap();
        assert_eq!(out, phi);
        let f = fluxes(&phi, &out, &c, &cfg, &sb(0.0), 0.1, 0.2).unwrap();
        assert!(f.values.iter().all(|&v| v == 0.0));
        let o = dense_oracle_fv_step(&phi, &c, &cfg, &sb(0.0)).unwrap();
        for (a, b) in o.values.iter().zip(&phi.values) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_flux_value() {
        let phi = Field1D::from(vec![1.5; 5]);
        let (h, tau, v) = (0.1, 0.05, 2.0);
        let c = CourantNumbers::new(vec![v * tau / h; 6]).unwrap();
        let cfg = FvConfig::second_order(0.3);
        let f = fluxes(&phi, &phi, &c, &cfg, &sb(1.5), h, tau).unwrap();
        for x in f.values {
            assert!((x - v * 1.5).abs() < 1e-13);
        }
    }

    #[test]
    fn mass_of_unit_field() {
        let g = Grid1D::cells(0.0, 3.0, 30).unwrap();
        let phi = g.sample(|_| 1.0).unwrap();
        assert!((total_mass(&phi, g.h()) - 3.0).abs() < 1e-14);
        assert_eq!(total_mass(&g.sample(|_| 0.0).unwrap(), g.h()), 0.0);
    }

    #[test]
    fn sweep_matches_oracle_with_two_sign_changes() {
        let n = 12;
        let phi = Field1D::from((0..n).map(|k| ((k * 5 % 7) as f64 - 3.0) * 0.2).collect::<Vec<_>>());
        let c = CourantNumbers::new((0..=n).map(|f| 2.5 * (f as f64 * 0.7).cos()).collect()).unwrap();
        let b = StepBoundary {
            old: BoundaryValues { left: 0.1, right: -0.2 },
            mid: BoundaryValues {
                left: 0.15,
                right: -0.25,
            },
            new: BoundaryValues { left: 0.2, right: -0.3 },
        };
        for cfg in [
            FvConfig::first_order(),
            FvConfig::second_order(0.5),
            FvConfig::second_order(1.0),
        ] {
            let s = match cfg.order {
                Order::First => step_fv_first_order(&phi, &c, b.new).unwrap(),
                Order::Second => step_fv_second_order(&phi, &c, cfg.alpha, &b, cfg.expanding).unwrap(),
            };
            let ob = match cfg.order {
                Order::First => StepBoundary {
                    old: b.new,
                    mid: b.new,
                    new: b.new,
                },
                Order::Second => b,
            };
            let o = dense_oracle_fv_step(&phi, &c, &cfg, &ob).unwrap();
            for (x, y) in s.values.iter().zip(&o.values) {
                assert!((x - y).abs() < 1e-12, "{cfg:?}: {x} vs {y}");
            }
        }
    }
}
