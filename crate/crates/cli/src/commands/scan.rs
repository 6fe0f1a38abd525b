use clap::{Args, ValueEnum};
use heatkern::kernels::{
    radial_derivative, torus_kernel, torus_ray_derivative, torus_ray_length, DERIVATIVE_TOL,
};
use heatkern::revolution::{
    monotonicity_defect, solve_heat, two_bump_values, InitialData, Mollifier, SolverConfig,
};
use heatkern::{ModelManifold, RadialProfile};

use super::par_map;
use crate::error::{CliError, CliResult, Status};
use crate::grid::{Grid, Pair};
use crate::models::{manifold, model_label, ModelKind, ProfileArgs};
use crate::output::{emit_table, OutputArgs, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Mollifier,
    TwoBump,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub aspect: f64,
    /// Distances to scan; defaults to `--count` interior points of the radial range.
    #[arg(long, allow_hyphen_values = true, visible_alias = "theta")]
    pub d: Option<Grid>,
    #[arg(long, default_value_t = 256)]
    pub count: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Grid,
    /// Ray direction `a,b` for tori.
    #[arg(long, allow_hyphen_values = true)]
    pub dir: Option<Pair>,
    /// Allowed positive difference relative to the largest value.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Initial data for profile scans.
    #[arg(long, value_enum, default_value = "mollifier")]
    pub init: InitKind,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 256)]
    pub intervals: usize,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Worst positive radial slope at one time.
struct Line {
    t: f64,
    max_difference: f64,
    sup: f64,
}

pub fn run(args: &ScanArgs) -> CliResult<Status> {
    let model = manifold(args.model, args.dim, args.aspect, &args.profile)?;
    let label = model_label(&model);
    let lines = match &model {
        ModelManifold::Revolution(p) => profile_scan(args, p)?,
        ModelManifold::FlatTorus { aspect } => torus_scan(args, *aspect)?,
        _ => kernel_scan(args, &model)?,
    };
    let mut table = Table::new(&["model", "t", "max_difference", "sup", "relative", "pass"]);
    let mut all_pass = true;
    for l in &lines {
        let relative = l.max_difference / l.sup;
        let pass = relative <= args.tol;
        all_pass &= pass;
        table.push(vec![
            label.as_str().into(),
            l.t.into(),
            l.max_difference.into(),
            l.sup.into(),
            relative.into(),
            pass.into(),
        ]);
    }
    emit_table(&args.output, &table)?;
    Ok(if all_pass {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

fn times(args: &ScanArgs) -> CliResult<Vec<f64>> {
    let ts = args.t.positive();
    if ts.is_empty() {
        return Err(CliError::Config(
            "--t needs at least one positive time".into(),
        ));
    }
    Ok(ts)
}

fn interior(top: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|i| top * i as f64 / (count + 1) as f64)
        .collect()
}

fn kernel_scan(args: &ScanArgs, model: &ModelManifold) -> CliResult<Vec<Line>> {
    let ds = match &args.d {
        Some(g) => g.0.clone(),
        None => interior(model.radial_extent().min(10.0), args.count),
    };
    let mut lines = Vec::new();
    for t in times(args)? {
        let slopes = par_map(&ds, |&d| Ok(radial_derivative(model, d, t, None)?))?;
        let values = par_map(&ds, |&d| Ok(model.kernel(d, t, DERIVATIVE_TOL)?.value))?;
        let sup = values
            .iter()
            .copied()
            .fold(model.kernel(0.0, t, DERIVATIVE_TOL)?.value, f64::max);
        lines.push(Line {
            t,
            max_difference: slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            sup,
        });
    }
    Ok(lines)
}

fn torus_scan(args: &ScanArgs, aspect: f64) -> CliResult<Vec<Line>> {
    let dir = args
        .dir
        .ok_or_else(|| CliError::Config("torus scans need a ray direction --dir a,b".into()))?;
    let dir = (dir.0, dir.1);
    let ss = match &args.d {
        Some(g) => g.0.clone(),
        None => interior(torus_ray_length(aspect, dir), args.count),
    };
    let mut lines = Vec::new();
    for t in times(args)? {
        let slopes = par_map(&ss, |&s| Ok(torus_ray_derivative(aspect, dir, s, t, None)?))?;
        lines.push(Line {
            t,
            max_difference: slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            sup: torus_kernel(aspect, 0.0, 0.0, t, DERIVATIVE_TOL)?.value,
        });
    }
    Ok(lines)
}

// Solver-based scan: the monotonicity defect of the discrete solution.
fn profile_scan(args: &ScanArgs, p: &RadialProfile) -> CliResult<Vec<Line>> {
    let init = match args.init {
        InitKind::Mollifier => InitialData::Mollifier(Mollifier::new(p, args.eps)?),
        InitKind::TwoBump => InitialData::Values(two_bump_values(p, args.intervals)),
    };
    let config = SolverConfig {
        intervals: args.intervals,
        dt: None,
        records: 2,
    };
    let mut lines = Vec::new();
    for &t in &args.t.0 {
        if t < 0.0 {
            return Err(CliError::Config("scan times must be >= 0".into()));
        }
        let values = if t == 0.0 {
            // The initial snapshot carries the data as the solver sees it.
            let traj = solve_heat(p, &init, f64::MIN_POSITIVE.sqrt(), &config)?;
            traj.states[0].values.clone()
        } else {
            solve_heat(p, &init, t, &config)?
                .final_state()
                .values
                .clone()
        };
        lines.push(Line {
            t,
            max_difference: monotonicity_defect(&values),
            sup: values.iter().copied().fold(0.0, f64::max),
        });
    }
    Ok(lines)
}
