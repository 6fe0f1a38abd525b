use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use heatkern::revolution::{solve_heat, two_bump_values, InitialData, Mollifier, SolverConfig};
use heatkern::Boundary;
use serde_json::{json, Value};

use super::scan::InitKind;
use crate::error::{CliError, CliResult, Status};
use crate::models::ProfileArgs;
use crate::output::{emit, json_line};

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Ambient dimension for generating curves, intrinsic for model manifolds.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "mollifier")]
    pub init: InitKind,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long)]
    pub t: f64,
    /// Grid intervals; defaults to at least 8 per mollifier width and never below 256.
    #[arg(long)]
    pub intervals: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub records: usize,
    /// Trajectory CSV (`t,rho,f`).
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Summary JSON (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &SolveArgs) -> CliResult<Status> {
    let p = args.profile.build(args.dim)?;
    if args.t.is_nan() || args.t <= 0.0 {
        return Err(CliError::Config("--t must be positive".into()));
    }
    let intervals = args
        .intervals
        .unwrap_or_else(|| ((8.0 * p.length() / args.eps).ceil() as usize).max(256));
    let init = match args.init {
        InitKind::Mollifier => InitialData::Mollifier(Mollifier::new(&p, args.eps)?),
        InitKind::TwoBump => InitialData::Values(two_bump_values(&p, intervals)),
    };
    let config = SolverConfig {
        intervals,
        dt: args.dt,
        records: args.records,
    };
    let traj = solve_heat(&p, &init, args.t, &config)?;
    if let Some(path) = &args.trajectory {
        traj.write_csv(BufWriter::new(File::create(path)?))?;
    }
    let boundary_kind = match traj.boundary {
        Boundary::Closed => "closed",
        Boundary::Dirichlet => "dirichlet",
        Boundary::Neumann => "neumann",
    };
    let max_defect = traj
        .states
        .iter()
        .map(|s| s.defect)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = traj.final_state();
    let decreasing = match traj.boundary {
        Boundary::Dirichlet => Value::Bool(traj.mass_strictly_decreasing()),
        _ => Value::Null,
    };
    let summary = json!({
        "boundary_kind": boundary_kind,
        "profile": p.label(),
        "intervals": intervals,
        "t_end": last.t,
        "dt": traj.dt,
        "dt_max": traj.dt_max,
        "steps": traj.steps.len() - 1,
        "initial_mass": traj.states[0].mass,
        "final_mass": last.mass,
        "boundary_loss": last.boundary_loss,
        "mass_drift": traj.mass_drift(),
        "mass_strictly_decreasing": decreasing,
        "max_defect": max_defect,
        "max_relative_defect": traj.max_relative_defect(),
        "far_field_flux": traj.far_field_flux,
    });
    emit(args.out.as_ref(), &json_line(&summary))?;
    Ok(Status::Ok)
}
