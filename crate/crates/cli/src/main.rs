use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};
use sweepadv::bench::{self, BenchmarkProblem, DeformationInit, Dynamics, Metric, Reference, SchemeKind};
use sweepadv::nonconservative::{AlphaField, AlphaPolicy};
use sweepadv::optimizer::optimize_once;
use sweepadv::{Grid1D, Grid2D, TimeGrid};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] sweepadv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Solver(sweepadv::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scheme {
    Nc1,
    Nc2,
    Fv1,
    Fv2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Init {
    Gaussian,
    Distance,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Global,
    Final,
    Min,
}

/// Runs the advection benchmarks and writes CSV/JSON reports.
#[derive(Debug, Parser)]
#[command(name = "sweepadv", version)]
struct Args {
    /// sine1d, optimizer1d, cosine1d, diag2d, deform2d, rotation2d
    #[arg(long)]
    problem: Option<String>,
    /// Defaults to fv2 for cosine1d and nc2 otherwise.
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    /// `fixed:<v>`, `<v>`, `courant` or `field:<path>` (CSV with columns n,i,value).
    #[arg(long, default_value = "fixed:0.5")]
    alpha: String,
    /// Number of mesh intervals per direction.
    #[arg(long = "I", default_value_t = 40)]
    cells: usize,
    /// Number of time steps.
    #[arg(long = "N", default_value_t = 1)]
    steps: usize,
    /// Refinement ladder `I:N,I:N,...`; overrides --I and --N.
    #[arg(long)]
    ladder: Option<String>,
    /// Error measure for the ladder; defaults to global when the reference covers all levels.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Comma separated subset of min, mass, fields.
    #[arg(long, value_delimiter = ',')]
    emit: Vec<String>,
    /// Initial data of deform2d.
    #[arg(long, value_enum, default_value = "gaussian")]
    init: Init,
    /// Output directory for report files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// One gradient step on the alpha field (non-conservative 1D problems).
    #[arg(long)]
    optimize: bool,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Print the problem names and exit.
    #[arg(long)]
    list: bool,
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&format!("{x:.16e}")).unwrap_or(Value::Null)
    } else {
        Value::Null
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_ladder(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|r| {
            let (a, b) = r
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("ladder entry `{r}` is not I:N")))?;
            match (a.trim().parse(), b.trim().parse()) {
                (Ok(i), Ok(n)) => Ok((i, n)),
                _ => usage(format!("ladder entry `{r}` is not I:N")),
            }
        })
        .collect()
}

fn read_alpha_field(path: &Path, nodes: usize, steps: usize) -> Result<AlphaField, CliError> {
    let mut field = AlphaField::constant(nodes, steps, f64::NAN);
    let mut rdr = csv::Reader::from_path(path)?;
    for rec in rdr.records() {
        let rec = rec?;
        let parsed = (
            rec.get(0).and_then(|s| s.trim().parse::<usize>().ok()),
            rec.get(1).and_then(|s| s.trim().parse::<usize>().ok()),
            rec.get(2).and_then(|s| s.trim().parse::<f64>().ok()),
        );
        match parsed {
            (Some(n), Some(i), Some(v)) if n < steps && i < nodes => field.set(i, n, v),
            _ => return usage(format!("bad alpha record {:?}", rec)),
        }
    }
    if field.values().iter().any(|v| v.is_nan()) {
        return usage(format!("alpha field must list all {nodes} x {steps} entries"));
    }
    Ok(field)
}

fn write_alpha_field(path: &Path, field: &AlphaField) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "i", "value"])?;
    for n in 0..field.steps() {
        for i in 0..field.nodes() {
            w.write_record([n.to_string(), i.to_string(), fmt(field.get(i, n))])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn alpha_policy(spec: &str, nodes: usize, steps: usize) -> Result<AlphaPolicy, CliError> {
    let spec = spec.trim();
    if spec == "courant" {
        return Ok(AlphaPolicy::CourantRule);
    }
    if let Some(p) = spec.strip_prefix("field:") {
        return Ok(AlphaPolicy::Field(Arc::new(read_alpha_field(
            Path::new(p),
            nodes,
            steps,
        )?)));
    }
    let v = spec.strip_prefix("fixed:").unwrap_or(spec);
    match v.parse::<f64>() {
        Ok(a) if a.is_finite() => Ok(AlphaPolicy::Fixed(a)),
        _ => usage(format!("cannot read alpha `{spec}`")),
    }
}

fn scheme_kind(s: Scheme) -> SchemeKind {
    match s {
        Scheme::Nc1 => SchemeKind::Nc1,
        Scheme::Nc2 => SchemeKind::Nc2,
        Scheme::Fv1 => SchemeKind::Fv1,
        Scheme::Fv2 => SchemeKind::Fv2,
    }
}

fn default_metric(problem: &BenchmarkProblem) -> Metric {
    match problem.reference {
        Reference::Exact1D(_) | Reference::Exact2D(_) => Metric::GlobalError,
        _ => Metric::FinalError,
    }
}

/// Coordinates of the unknowns along one direction.
fn coordinates(problem: &BenchmarkProblem, cells: usize, kind: SchemeKind) -> Result<Vec<f64>, CliError> {
    Ok(match &problem.dynamics {
        Dynamics::NonConservative(p) | Dynamics::Conservative(p) => {
            let g = if kind.is_conservative() {
                Grid1D::cells(p.origin, p.length, cells)?
            } else {
                Grid1D::nodes(p.origin, p.length, cells)?
            };
            g.coordinates()
        }
        Dynamics::Split(p) => Grid2D::square(p.origin, p.length, cells)?.x.coordinates(),
    })
}

fn write_series(path: &Path, tgrid: &TimeGrid, values: &[f64]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "t", "value"])?;
    for (n, v) in values.iter().enumerate() {
        w.write_record([n.to_string(), fmt(tgrid.time(n)), fmt(*v)])?;
    }
    w.flush()?;
    Ok(())
}

fn write_level(path: &Path, xs: &[f64], two_d: bool, values: &[f64]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    if two_d {
        let nx = xs.len();
        w.write_record(["i", "j", "x", "y", "value"])?;
        for (k, v) in values.iter().enumerate() {
            let (i, j) = (k % nx, k / nx);
            w.write_record([i.to_string(), j.to_string(), fmt(xs[i]), fmt(xs[j]), fmt(*v)])?;
        }
    } else {
        w.write_record(["i", "x", "value"])?;
        for (i, v) in values.iter().enumerate() {
            w.write_record([i.to_string(), fmt(xs[i]), fmt(*v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn execute(args: &Args) -> Result<Value, CliError> {
    let name = match &args.problem {
        Some(n) => n.as_str(),
        None => return usage("--problem is required"),
    };
    let problem = match name {
        "deform2d" => bench::deformation_2d(match args.init {
            Init::Gaussian => DeformationInit::Gaussian,
            Init::Distance => DeformationInit::Distance,
        }),
        other => bench::by_name(other).ok_or_else(|| CliError::Usage(format!("unknown problem `{other}`")))?,
    };
    let kind = args
        .scheme
        .map_or_else(|| SchemeKind::default_for(&problem), scheme_kind);
    let metric = match args.metric {
        None => default_metric(&problem),
        Some(MetricArg::Global) => Metric::GlobalError,
        Some(MetricArg::Final) => Metric::FinalError,
        Some(MetricArg::Min) => Metric::MinValue,
    };
    for e in &args.emit {
        if !matches!(e.as_str(), "min" | "mass" | "fields") {
            return usage(format!("unknown --emit item `{e}`"));
        }
    }
    if !args.emit.is_empty() && args.out.is_none() {
        return usage("--emit needs --out");
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
    }
    let mut summary = Map::new();
    summary.insert("problem".into(), json!(problem.name));
    summary.insert("scheme".into(), json!(format!("{kind:?}").to_lowercase()));
    summary.insert("alpha".into(), json!(args.alpha));

    if args.optimize {
        let p = match &problem.dynamics {
            Dynamics::NonConservative(p) if !kind.is_conservative() => p,
            _ => return usage("--optimize needs a non-conservative 1D problem"),
        };
        let exact: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match &problem.reference {
            Reference::Final1D(e) => e.clone(),
            Reference::Exact1D(e) => {
                let (e, t) = (e.clone(), p.final_time);
                Arc::new(move |x| e(x, t))
            }
            _ => return usage("problem has no 1D reference"),
        };
        let grid = Grid1D::nodes(p.origin, p.length, args.cells)?;
        let tgrid = TimeGrid::new(p.final_time, args.steps)?;
        let (r, field) = optimize_once(p, &grid, &tgrid, args.eta, |x| exact(x))?;
        if let Some(dir) = &args.out {
            write_alpha_field(&dir.join("alpha_optimized.csv"), &field)?;
        }
        summary.insert("I".into(), json!(args.cells));
        summary.insert("N".into(), json!(args.steps));
        summary.insert(
            "optimizer".into(),
            json!({
                "eta": num(r.eta),
                "j_before": num(r.j_before),
                "j_after": num(r.j_after),
                "j_after_clamped": num(r.j_after_clamped),
                "e_before": num(r.e_before),
                "e_after": num(r.e_after),
                "e_after_clamped": num(r.e_after_clamped),
                "max_abs_gradient": num(r.max_abs_gradient),
            }),
        );
        return Ok(Value::Object(summary));
    }

    if let Some(l) = &args.ladder {
        if !args.emit.is_empty() {
            return usage("--emit applies to single runs");
        }
        let rungs = parse_ladder(l)?;
        let mut rows = Vec::new();
        let mut out_rows = Vec::new();
        for &(cells, steps) in &rungs {
            let alpha = alpha_policy(&args.alpha, cells + 1, steps)?;
            let one = bench::ladder(&problem, &[(cells, steps)], kind, &alpha, metric)?;
            let value = one[0].value;
            let eoc = match rows.last() {
                Some(&(_, _, prev, _)) if prev > 0.0 && value > 0.0 => Some(sweepadv::analysis::eoc(prev, value)?),
                _ => None,
            };
            let r = &one[0].report;
            rows.push((cells, steps, value, r.max_courant));
            out_rows.push(json!({
                "I": cells,
                "N": steps,
                "h": num(r.h),
                "tau": num(r.tau),
                "max_courant": num(r.max_courant),
                "value": num(value),
                "eoc": opt(eoc),
            }));
        }
        if let Some(dir) = &args.out {
            let mut w = csv::Writer::from_path(dir.join("ladder.csv"))?;
            w.write_record(["I", "N", "h", "tau", "max_courant", "value", "eoc"])?;
            for row in &out_rows {
                let g = |k: &str| row[k].to_string();
                w.write_record([g("I"), g("N"), g("h"), g("tau"), g("max_courant"), g("value"), g("eoc")])?;
            }
            w.flush()?;
        }
        summary.insert("metric".into(), json!(format!("{metric:?}")));
        summary.insert("ladder".into(), Value::Array(out_rows));
        return Ok(Value::Object(summary));
    }

    let alpha = alpha_policy(&args.alpha, args.cells + 1, args.steps)?;
    let fields = args.emit.iter().any(|e| e == "fields");
    let xs = coordinates(&problem, args.cells, kind)?;
    let two_d = problem.dimension() == 2;
    let mut io_err = None;
    let report = bench::run(&problem, args.cells, args.steps, kind, &alpha, |n, v| {
        if let (true, Some(dir), None) = (fields, &args.out, &io_err) {
            let path = dir.join(format!("level_{n:05}.csv"));
            if let Err(e) = write_level(&path, &xs, two_d, v) {
                io_err = Some(e);
            }
        }
    })?;
    if let Some(e) = io_err {
        return Err(e);
    }
    let tgrid = TimeGrid::new(problem.final_time(), args.steps)?;
    if let Some(dir) = &args.out {
        if args.emit.iter().any(|e| e == "min") {
            write_series(&dir.join("min.csv"), &tgrid, &report.min_series)?;
        }
        if args.emit.iter().any(|e| e == "mass") {
            write_series(&dir.join("mass.csv"), &tgrid, &report.mass_series)?;
        }
    }
    summary.insert("I".into(), json!(args.cells));
    summary.insert("N".into(), json!(args.steps));
    summary.insert("h".into(), num(report.h));
    summary.insert("tau".into(), num(report.tau));
    summary.insert("max_courant".into(), num(report.max_courant));
    summary.insert("global_error".into(), opt(report.global_error));
    summary.insert("final_error".into(), num(report.final_error));
    summary.insert("min_value".into(), num(report.min_value()));
    summary.insert("max_abs".into(), num(report.max_abs));
    summary.insert("initial_mass".into(), num(report.mass_series[0]));
    summary.insert("mass_drift".into(), num(report.mass_drift()));
    Ok(Value::Object(summary))
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for n in bench::PROBLEM_NAMES {
            println!("{n}");
        }
        return ExitCode::SUCCESS;
    }
    match execute(&args) {
        Ok(summary) => {
            let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            if let Some(dir) = &args.out {
                if let Err(e) = fs::write(dir.join("summary.json"), format!("{text}\n")) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
