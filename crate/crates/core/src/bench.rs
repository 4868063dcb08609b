//! Benchmark problems with reference solutions and published reference values.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::analysis::{eoc, level_error_2d, mass_2d};
use crate::conservative::{solve_fv, ExpandingTreatment, FvConfig};
use crate::error::{invalid, Result};
use crate::mesh::{Field1D, Grid1D, Grid2D, TimeGrid, Trajectory};
use crate::nonconservative::{solve, AlphaPolicy, BoundaryData1D, Order, Problem1D, SchemeConfig};
use crate::strang::{run2d, BoundaryClock, Fn3, FreezePolicy, Problem2D, Scheme2D};
use crate::velocity::{courant, VelocityField1D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    Fixed(f64),
    Courant,
}

impl AlphaChoice {
    pub fn policy(self) -> AlphaPolicy {
        match self {
            AlphaChoice::Fixed(a) => AlphaPolicy::Fixed(a),
            AlphaChoice::Courant => AlphaPolicy::CourantRule,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `h tau sum_n sum_i |err|` (times `h` again in 2D), scaled by the problem weight.
    GlobalError,
    /// `h sum_i |err|` at the final time (`h^2` in 2D).
    FinalError,
    /// Smallest value over all nodes and levels.
    MinValue,
    /// `h^d sum phi^0`.
    InitialMass,
}

/// One published number: mesh intervals, time steps, alpha choice, metric and value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub cells: usize,
    pub steps: usize,
    pub alpha: AlphaChoice,
    pub metric: Metric,
    pub value: f64,
    /// Printed order of convergence against the previous row, if any.
    pub eoc: Option<f64>,
}

#[derive(Clone)]
pub enum Dynamics {
    NonConservative(Problem1D),
    Conservative(Problem1D),
    Split(Problem2D),
}

#[derive(Clone)]
pub enum Reference {
    /// Exact solution for every time level.
    Exact1D(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
    Exact2D(Fn3),
    /// Reference at the final time only.
    Final1D(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Final2D(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct BenchmarkProblem {
    pub name: &'static str,
    pub dynamics: Dynamics,
    pub reference: Reference,
    /// Factor applied to the global error (extent of a trivial transverse direction).
    pub error_weight: f64,
    pub published: Vec<Target>,
}

impl std::fmt::Debug for BenchmarkProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BenchmarkProblem")
            .field("name", &self.name)
            .field("published", &self.published.len())
            .finish()
    }
}

impl BenchmarkProblem {
    pub fn final_time(&self) -> f64 {
        match &self.dynamics {
            Dynamics::NonConservative(p) | Dynamics::Conservative(p) => p.final_time,
            Dynamics::Split(p) => p.final_time,
        }
    }

    pub fn dimension(&self) -> usize {
        match self.dynamics {
            Dynamics::Split(_) => 2,
            _ => 1,
        }
    }

    pub fn targets(&self, metric: Metric, alpha: AlphaChoice) -> Vec<Target> {
        self.published
            .iter()
            .filter(|t| t.metric == metric && t.alpha == alpha)
            .copied()
            .collect()
    }
}

fn table(rows: &[(usize, usize, f64, Option<f64>)], alpha: AlphaChoice, metric: Metric) -> Vec<Target> {
    rows.iter()
        .map(|&(cells, steps, value, eoc)| Target {
            cells,
            steps,
            alpha,
            metric,
            value,
            eoc,
        })
        .collect()
}

/// `sin(2 atan2(a sin(s), cos(s)))` written without branch cuts.
fn sin_double_angle(a: f64, s: f64) -> f64 {
    let (p, q) = (a * s.sin(), s.cos());
    2.0 * p * q / (p * p + q * q)
}

pub fn sine_exact(x: f64, t: f64) -> f64 {
    sin_double_angle((-t).exp(), 0.5 * x)
}

/// `v = sin x` on `(-pi/2, 3pi/2)` up to `T = 1.2`. The reference runs treat the
/// problem as 2D with zero transverse velocity: each step is two half steps in
/// `x`, and errors carry the transverse extent `2 pi`.
pub fn sine_velocity_1d() -> BenchmarkProblem {
    let origin = -PI / 2.0;
    let length = 2.0 * PI;
    let right = origin + length;
    let problem = Problem1D {
        origin,
        length,
        final_time: 1.2,
        velocity: Arc::new(|x, _| x.sin()),
        time_dependent: false,
        initial: Arc::new(f64::sin),
        boundary: BoundaryData1D::new(move |t| sine_exact(origin, t), move |t| sine_exact(right, t)),
        substeps: 2,
    };
    let fixed = [
        (40, 1, 0.810861, None),
        (80, 2, 0.167179, Some(2.278)),
        (160, 4, 0.035211, Some(2.247)),
        (320, 8, 0.007858, Some(2.163)),
    ];
    let rule = [
        (40, 1, 0.556925, None),
        (80, 2, 0.099711, Some(2.481)),
        (160, 4, 0.018519, Some(2.428)),
        (320, 8, 0.003831, Some(2.273)),
    ];
    let mut published = table(&fixed, AlphaChoice::Fixed(0.5), Metric::GlobalError);
    published.extend(table(&rule, AlphaChoice::Courant, Metric::GlobalError));
    BenchmarkProblem {
        name: "sine1d",
        dynamics: Dynamics::NonConservative(problem),
        reference: Reference::Exact1D(Arc::new(sine_exact)),
        error_weight: 2.0 * PI,
        published,
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `G(x) = int_0^x ds / (2 + sin s)`, continuous and increasing.
fn travel_time(x: f64) -> f64 {
    let period = 2.0 * PI / SQRT3;
    let k = ((x + PI) / (2.0 * PI)).floor();
    let y = x - 2.0 * PI * k;
    let base = (2.0 / SQRT3) * (1.0 / SQRT3).atan();
    k * period + (2.0 / SQRT3) * ((2.0 * (0.5 * y).tan() + 1.0) / SQRT3).atan() - base
}

fn travel_time_inv(g: f64) -> f64 {
    let period = 2.0 * PI / SQRT3;
    let base = (2.0 / SQRT3) * (1.0 / SQRT3).atan();
    let g = g + base;
    let k = ((g + PI / SQRT3) / period).floor();
    let r = g - k * period;
    2.0 * PI * k + 2.0 * ((SQRT3 * (0.5 * SQRT3 * r).tan() - 1.0) / 2.0).atan()
}

fn bump(x: f64) -> f64 {
    (-2.0 * x * x).exp()
}

pub fn optimizer_exact(x: f64, t: f64) -> f64 {
    bump(travel_time_inv(travel_time(x) - t))
}

/// `v = 2 + sin x` on `(-2, 12)`; one period `T = 2 pi / sqrt 3` moves the
/// initial bump by `2 pi`.
pub fn optimizer_problem_1d() -> BenchmarkProblem {
    let origin = -2.0;
    let problem = Problem1D {
        origin,
        length: 14.0,
        final_time: 2.0 * PI / SQRT3,
        velocity: Arc::new(|x, _| 2.0 + x.sin()),
        time_dependent: false,
        initial: Arc::new(bump),
        boundary: BoundaryData1D::new(move |t| optimizer_exact(origin, t), move |t| optimizer_exact(12.0, t)),
        substeps: 1,
    };
    let before = [(70, 50, 0.521, None), (140, 100, 0.197, None), (280, 200, 0.0533, None)];
    BenchmarkProblem {
        name: "optimizer1d",
        dynamics: Dynamics::NonConservative(problem),
        reference: Reference::Final1D(Arc::new(|x| bump(x - 2.0 * PI))),
        error_weight: 1.0,
        published: table(&before, AlphaChoice::Fixed(0.5), Metric::FinalError),
    }
}

/// Published rows of the optimizer table: `(I, N, eta column, J_b, J_a, E_b, E_a)`,
/// with the `J` columns in units of `1e-3` and `eta` in units of `1e-6`.
pub const OPTIMIZER_TABLE: [(usize, usize, f64, f64, f64, f64, f64); 3] = [
    (70, 50, 0.2, 3.68, 0.0768, 0.521, 0.511),
    (140, 100, 8.0, 1.12, 0.0156, 0.197, 0.190),
    (280, 200, 160.0, 0.0664, 0.00354, 0.0533, 0.0448),
];

fn gd(u: f64) -> f64 {
    2.0 * (0.5 * u).tanh().atan()
}

fn gd_inv(y: f64) -> f64 {
    2.0 * (0.5 * y).tan().atanh()
}

/// Solution of `phi_t + (cos(x) phi)_x = 0` with `phi(x, 0) = cos x`: along each
/// characteristic `v phi` is constant.
pub fn cosine_exact(x: f64, t: f64) -> f64 {
    let k = (x / PI).round();
    let y = x - k * PI;
    if (y.abs() - PI / 2.0).abs() < 1e-14 {
        return 0.0;
    }
    let s = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let x0 = gd(gd_inv(y) - s * t) + k * PI;
    x0.cos().powi(2) / x.cos()
}

/// Conservative problem with `v = cos x` on `(-pi/2, 5pi/2)`, zero velocity at both ends.
pub fn cosine_conservative_1d() -> BenchmarkProblem {
    let problem = Problem1D {
        origin: -PI / 2.0,
        length: 3.0 * PI,
        final_time: 1.0,
        velocity: Arc::new(|x, _| x.cos()),
        time_dependent: false,
        initial: Arc::new(f64::cos),
        boundary: BoundaryData1D::constant(0.0),
        substeps: 1,
    };
    let large = [
        (40, 1, 0.9610, None, 0.7013, None),
        (80, 2, 0.2750, Some(1.81), 0.1941, Some(1.85)),
        (160, 4, 0.0651, Some(2.08), 0.0442, Some(2.13)),
        (320, 8, 0.0150, Some(2.12), 0.0098, Some(2.17)),
    ];
    let small = [
        (40, 4, 0.1181, None, 0.1683, None),
        (80, 8, 0.0256, Some(2.20), 0.0461, Some(1.87)),
        (160, 16, 0.0054, Some(2.26), 0.011, Some(2.02)),
        (320, 32, 0.0012, Some(2.16), 0.0028, Some(2.02)),
    ];
    let mut published = Vec::new();
    for rows in [&large, &small] {
        let half: Vec<_> = rows.iter().map(|r| (r.0, r.1, r.2, r.3)).collect();
        let one: Vec<_> = rows.iter().map(|r| (r.0, r.1, r.4, r.5)).collect();
        published.extend(table(&half, AlphaChoice::Fixed(0.5), Metric::GlobalError));
        published.extend(table(&one, AlphaChoice::Fixed(1.0), Metric::GlobalError));
    }
    BenchmarkProblem {
        name: "cosine1d",
        dynamics: Dynamics::Conservative(problem),
        reference: Reference::Exact1D(Arc::new(cosine_exact)),
        error_weight: 1.0,
        published,
    }
}

pub fn diagonal_exact(x: f64, y: f64, t: f64) -> f64 {
    sin_double_angle((-2.0 * PI * t).exp(), 0.5 * PI * (x + y))
}

/// `v1 = v2 = sin(pi (x + y))` on `(-1, 2)^2` up to `T = 0.24`.
pub fn diagonal_2d() -> BenchmarkProblem {
    let v: Fn3 = Arc::new(|x, y, _| (PI * (x + y)).sin());
    let problem = Problem2D {
        origin: -1.0,
        length: 3.0,
        final_time: 0.24,
        v1: v.clone(),
        v2: v,
        initial: Arc::new(|x, y| (PI * (x + y)).sin()),
        inflow: Arc::new(diagonal_exact),
        freeze: FreezePolicy::StepMidpoint,
        clock: BoundaryClock::Operator,
    };
    let zero = [
        (20, 1, 0.0874, None),
        (40, 2, 0.0179, Some(2.29)),
        (80, 4, 0.00319, Some(2.49)),
        (160, 8, 0.000624, Some(2.36)),
    ];
    let rule = [
        (20, 1, 0.0838, None),
        (40, 2, 0.0173, Some(2.27)),
        (80, 4, 0.00302, Some(2.52)),
        (160, 8, 0.000569, Some(2.41)),
    ];
    let mut published = table(&zero, AlphaChoice::Fixed(0.0), Metric::GlobalError);
    published.extend(table(&rule, AlphaChoice::Courant, Metric::GlobalError));
    BenchmarkProblem {
        name: "diag2d",
        dynamics: Dynamics::Split(problem),
        reference: Reference::Exact2D(Arc::new(diagonal_exact)),
        error_weight: 1.0,
        published,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformationInit {
    Gaussian,
    Distance,
}

pub fn deformation_v1(x: f64, y: f64, t: f64) -> f64 {
    -4.0 * (PI * t).cos() * (2.0 * PI * x).sin().powi(2) * (2.0 * PI * y).sin() * (2.0 * PI * y).cos()
}

pub fn deformation_v2(x: f64, y: f64, t: f64) -> f64 {
    4.0 * (PI * t).cos() * (2.0 * PI * y).sin().powi(2) * (2.0 * PI * x).sin() * (2.0 * PI * x).cos()
}

/// Swirling deformation on the unit square that reverses at `t = 1/2`, so the
/// initial profile is the reference at `T = 1`.
pub fn deformation_2d(init: DeformationInit) -> BenchmarkProblem {
    let phi0: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync> = match init {
        DeformationInit::Gaussian => Arc::new(|x, y| (-100.0 * ((x - 0.5).powi(2) + (y - 0.5).powi(2))).exp()),
        DeformationInit::Distance => Arc::new(|x, y| ((x - 0.5).powi(2) + (y - 0.5).powi(2)).sqrt()),
    };
    let p = phi0.clone();
    let problem = Problem2D {
        origin: 0.0,
        length: 1.0,
        final_time: 1.0,
        v1: Arc::new(deformation_v1),
        v2: Arc::new(deformation_v2),
        initial: phi0.clone(),
        inflow: Arc::new(move |x, y, _| p(x, y)),
        freeze: FreezePolicy::StepMidpoint,
        clock: BoundaryClock::Physical,
    };
    let mut published = match init {
        DeformationInit::Gaussian => {
            let mut t = table(
                &[
                    (40, 100, 0.01088, None),
                    (80, 200, 0.00507, Some(1.1)),
                    (160, 400, 0.00177, Some(1.52)),
                    (320, 800, 0.00042, Some(2.09)),
                ],
                AlphaChoice::Fixed(0.5),
                Metric::FinalError,
            );
            t.extend(table(
                &[
                    (40, 100, 0.00928, None),
                    (80, 200, 0.00415, Some(1.16)),
                    (160, 400, 0.00138, Some(1.59)),
                    (320, 800, 0.00030, Some(2.18)),
                ],
                AlphaChoice::Courant,
                Metric::FinalError,
            ));
            t.extend(table(
                &[
                    (40, 100, -0.0677, None),
                    (80, 200, -0.0275, None),
                    (160, 400, -0.0108, None),
                    (320, 800, -0.00163, None),
                ],
                AlphaChoice::Courant,
                Metric::MinValue,
            ));
            t.push(Target {
                cells: 40,
                steps: 0,
                alpha: AlphaChoice::Fixed(0.5),
                metric: Metric::InitialMass,
                value: 0.031416,
                eoc: None,
            });
            t
        }
        DeformationInit::Distance => {
            let mut t = table(
                &[
                    (40, 100, 0.01692, None),
                    (80, 200, 0.00458, Some(1.89)),
                    (160, 400, 0.00092, Some(2.32)),
                    (320, 800, 0.00014, Some(2.76)),
                ],
                AlphaChoice::Fixed(0.5),
                Metric::FinalError,
            );
            t.extend(table(
                &[
                    (40, 100, 0.01355, None),
                    (80, 200, 0.00351, Some(1.95)),
                    (160, 400, 0.00067, Some(2.38)),
                    (320, 800, 0.00001, Some(2.80)),
                ],
                AlphaChoice::Courant,
                Metric::FinalError,
            ));
            t
        }
    };
    published.sort_by_key(|t| (t.metric as u8, t.cells));
    BenchmarkProblem {
        name: match init {
            DeformationInit::Gaussian => "deform2d-gaussian",
            DeformationInit::Distance => "deform2d-distance",
        },
        dynamics: Dynamics::Split(problem),
        reference: Reference::Final2D(phi0),
        error_weight: 1.0,
        published,
    }
}

pub fn rotation_exact(x: f64, y: f64, t: f64) -> f64 {
    let (s, c) = (2.0 * PI * t).sin_cos();
    let a = (x - 0.5) * c + (y - 0.5) * s + 0.25;
    let b = (y - 0.5) * c - (x - 0.5) * s;
    (-100.0 * (a * a + b * b)).exp()
}

/// Rigid rotation of a Gaussian on the unit square for half a period.
pub fn rotation_2d() -> BenchmarkProblem {
    let problem = Problem2D {
        origin: 0.0,
        length: 1.0,
        final_time: 0.5,
        v1: Arc::new(|_, y, _| -2.0 * PI * (y - 0.5)),
        v2: Arc::new(|x, _, _| 2.0 * PI * (x - 0.5)),
        initial: Arc::new(|x, y| rotation_exact(x, y, 0.0)),
        inflow: Arc::new(|_, _, _| 0.0),
        freeze: FreezePolicy::StepMidpoint,
        clock: BoundaryClock::Physical,
    };
    let mut published = table(
        &[
            (20, 25, 0.005436, None),
            (40, 50, 0.00143, Some(1.926)),
            (80, 100, 0.000296, Some(2.272)),
            (160, 200, 0.000065, Some(2.187)),
        ],
        AlphaChoice::Fixed(0.5),
        Metric::GlobalError,
    );
    published.extend(table(
        &[
            (20, 25, 0.005125, None),
            (40, 50, 0.00113, Some(2.181)),
            (80, 100, 0.000168, Some(2.749)),
            (160, 200, 0.000022, Some(2.932)),
        ],
        AlphaChoice::Courant,
        Metric::GlobalError,
    ));
    published.extend(table(
        &[
            (20, 25, -0.0287, None),
            (40, 50, -0.00615, None),
            (80, 100, -0.000130, None),
            (160, 200, -1.610e-10, None),
        ],
        AlphaChoice::Courant,
        Metric::MinValue,
    ));
    BenchmarkProblem {
        name: "rotation2d",
        dynamics: Dynamics::Split(problem),
        reference: Reference::Exact2D(Arc::new(rotation_exact)),
        error_weight: 1.0,
        published,
    }
}

pub fn by_name(name: &str) -> Option<BenchmarkProblem> {
    Some(match name {
        "sine1d" => sine_velocity_1d(),
        "optimizer1d" => optimizer_problem_1d(),
        "cosine1d" => cosine_conservative_1d(),
        "diag2d" => diagonal_2d(),
        "deform2d" | "deform2d-gaussian" => deformation_2d(DeformationInit::Gaussian),
        "deform2d-distance" => deformation_2d(DeformationInit::Distance),
        "rotation2d" => rotation_2d(),
        _ => return None,
    })
}

pub const PROBLEM_NAMES: [&str; 6] = ["sine1d", "optimizer1d", "cosine1d", "diag2d", "deform2d", "rotation2d"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Nc1,
    Nc2,
    Fv1,
    Fv2,
}

impl SchemeKind {
    pub fn order(self) -> Order {
        match self {
            SchemeKind::Nc1 | SchemeKind::Fv1 => Order::First,
            SchemeKind::Nc2 | SchemeKind::Fv2 => Order::Second,
        }
    }

    pub fn is_conservative(self) -> bool {
        matches!(self, SchemeKind::Fv1 | SchemeKind::Fv2)
    }

    /// The scheme a problem is naturally posed for.
    pub fn default_for(problem: &BenchmarkProblem) -> Self {
        match problem.dynamics {
            Dynamics::Conservative(_) => SchemeKind::Fv2,
            _ => SchemeKind::Nc2,
        }
    }
}

/// Everything measured on one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub cells: usize,
    pub steps: usize,
    pub h: f64,
    pub tau: f64,
    /// Weighted global error, when the reference holds at every level.
    pub global_error: Option<f64>,
    pub final_error: f64,
    pub min_series: Vec<f64>,
    pub mass_series: Vec<f64>,
    /// Largest |C| of a single substep at `t = 0`.
    pub max_courant: f64,
    pub max_abs: f64,
}

impl RunReport {
    pub fn min_value(&self) -> f64 {
        self.min_series.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest relative change of mass against level 0.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.mass_series[0];
        let scale = m0.abs().max(f64::MIN_POSITIVE);
        self.mass_series.iter().fold(0.0, |m, v| m.max((v - m0).abs() / scale))
    }

    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::GlobalError => self.global_error,
            Metric::FinalError => Some(self.final_error),
            Metric::MinValue => Some(self.min_value()),
            Metric::InitialMass => self.mass_series.first().copied(),
        }
    }
}

/// Runs `problem` on `cells` intervals with `steps` time steps and collects the report.
/// `field_observer` receives every 1D or 2D level as flat values.
pub fn run(
    problem: &BenchmarkProblem,
    cells: usize,
    steps: usize,
    scheme: SchemeKind,
    alpha: &AlphaPolicy,
    mut field_observer: impl FnMut(usize, &[f64]),
) -> Result<RunReport> {
    let tgrid = TimeGrid::new(problem.final_time(), steps)?;
    let tau = tgrid.tau();
    match &problem.dynamics {
        Dynamics::NonConservative(p) | Dynamics::Conservative(p) => {
            let conservative = scheme.is_conservative();
            let grid = if conservative {
                Grid1D::cells(p.origin, p.length, cells)?
            } else {
                Grid1D::nodes(p.origin, p.length, cells)?
            };
            let traj = if conservative {
                let a = match (scheme.order(), alpha) {
                    (Order::First, _) => 0.0,
                    (Order::Second, AlphaPolicy::Fixed(a)) => *a,
                    _ => return invalid("conservative schemes need one fixed alpha"),
                };
                let config = FvConfig {
                    order: scheme.order(),
                    alpha: a,
                    expanding: ExpandingTreatment::CoupledBlock,
                };
                solve_fv(p, &grid, &tgrid, &config)?
            } else {
                let config = SchemeConfig {
                    order: scheme.order(),
                    alpha: alpha.clone(),
                };
                solve(p, &grid, &tgrid, &config)?
            };
            for (n, f) in traj.levels.iter().enumerate() {
                field_observer(n, &f.values);
            }
            let dt = if conservative {
                tau
            } else {
                tau / p.substeps.max(1) as f64
            };
            let max_courant = if steps == 0 {
                0.0
            } else {
                let vs = if conservative {
                    VelocityField1D::new(
                        grid.faces().iter().map(|&x| (p.velocity)(x, 0.5 * dt)).collect(),
                        grid.origin(),
                        grid.h(),
                    )?
                } else {
                    VelocityField1D::sample(&grid, |x| (p.velocity)(x, 0.5 * dt))?
                };
                courant(&vs, dt)?.max_abs()
            };
            report_1d(problem, &grid, &tgrid, &traj, max_courant)
        }
        Dynamics::Split(p) => {
            if scheme.is_conservative() {
                return invalid("2D problems use the non-conservative schemes");
            }
            let grid = Grid2D::square(p.origin, p.length, cells)?;
            let h = grid.h();
            let s = Scheme2D {
                order: scheme.order(),
                alpha: alpha.clone(),
            };
            let mut sum = 0.0;
            let mut mins = Vec::with_capacity(steps + 1);
            let mut mass = Vec::with_capacity(steps + 1);
            let mut max_abs: f64 = 0.0;
            let last = run2d(p, &grid, &tgrid, &s, |n, f| {
                if let Reference::Exact2D(e) = &problem.reference {
                    let t = tgrid.time(n);
                    sum += level_error_2d(f, &grid, |x, y| e(x, y, t));
                }
                mins.push(f.min());
                mass.push(mass_2d(f, h));
                max_abs = max_abs.max(f.max_abs());
                field_observer(n, &f.data);
            })?;
            let final_error = match &problem.reference {
                Reference::Exact2D(e) => level_error_2d(&last, &grid, |x, y| e(x, y, tgrid.final_time())),
                Reference::Final2D(e) => level_error_2d(&last, &grid, |x, y| e(x, y)),
                _ => return invalid("reference does not match the dimension"),
            };
            let global_error = match problem.reference {
                Reference::Exact2D(_) => Some(problem.error_weight * tau * sum),
                _ => None,
            };
            let mut vmax: f64 = 0.0;
            for j in 0..grid.ny() {
                for i in 0..grid.nx() {
                    let (x, y) = (grid.x.coordinate(i), grid.y.coordinate(j));
                    let t = 0.5 * tau;
                    vmax = vmax.max((0.5 * (p.v1)(x, y, t)).abs()).max((p.v2)(x, y, t).abs());
                }
            }
            Ok(RunReport {
                cells,
                steps,
                h,
                tau,
                global_error,
                final_error,
                min_series: mins,
                mass_series: mass,
                max_courant: vmax * tau / h,
                max_abs,
            })
        }
    }
}

fn report_1d(
    problem: &BenchmarkProblem,
    grid: &Grid1D,
    tgrid: &TimeGrid,
    traj: &Trajectory<Field1D>,
    max_courant: f64,
) -> Result<RunReport> {
    let (global_error, final_error) = match &problem.reference {
        Reference::Exact1D(e) => {
            let g = crate::analysis::global_error(traj, grid, tgrid, |x, t| e(x, t))?;
            let f = crate::analysis::final_error(traj.last(), grid, |x| e(x, tgrid.final_time()));
            (Some(problem.error_weight * g), f)
        }
        Reference::Final1D(e) => (None, crate::analysis::final_error(traj.last(), grid, |x| e(x))),
        _ => return invalid("reference does not match the dimension"),
    };
    Ok(RunReport {
        cells: grid.intervals(),
        steps: tgrid.steps(),
        h: grid.h(),
        tau: tgrid.tau(),
        global_error,
        final_error,
        min_series: crate::analysis::min_series(traj),
        mass_series: crate::analysis::mass_series_1d(traj, grid.h()),
        max_courant,
        max_abs: traj.levels.iter().fold(0.0, |m, f| m.max(f.max_abs())),
    })
}

/// One row of a refinement ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow {
    pub report: RunReport,
    pub value: f64,
    pub eoc: Option<f64>,
}

/// Runs consecutive `(cells, steps)` pairs and computes the EOC chain of `metric`.
pub fn ladder(
    problem: &BenchmarkProblem,
    rungs: &[(usize, usize)],
    scheme: SchemeKind,
    alpha: &AlphaPolicy,
    metric: Metric,
) -> Result<Vec<LadderRow>> {
    let mut rows: Vec<LadderRow> = Vec::with_capacity(rungs.len());
    for &(cells, steps) in rungs {
        let report = run(problem, cells, steps, scheme, alpha, |_, _| {})?;
        let value = report
            .metric(metric)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("{} has no {metric:?}", problem.name)))?;
        let eoc = match rows.last() {
            Some(prev) if prev.value > 0.0 && value > 0.0 => Some(eoc(prev.value, value)?),
            _ => None,
        };
        rows.push(LadderRow { report, value, eoc });
    }
    Ok(rows)
}
