use clap::Args;
use heatkern::kernels::{hyperbolic2_mass, total_mass};
use heatkern::{HyperbolicRep, ModelManifold};

use super::par_map;
use crate::error::{CliError, CliResult, Status};
use crate::grid::Grid;
use crate::models::{manifold, model_label, ModelKind, ProfileArgs, RepKind};
use crate::output::{emit_table, OutputArgs, Table};

#[derive(Debug, Clone, Args)]
pub struct MassArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub aspect: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Grid,
    #[arg(long, value_enum)]
    pub rep: Option<RepKind>,
    #[arg(long)]
    pub both_reps: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: &MassArgs) -> CliResult<Status> {
    let model = manifold(args.model, args.dim, args.aspect, &args.profile)?;
    let times = args.t.positive();
    if times.is_empty() {
        return Err(CliError::Config(
            "--t needs at least one positive time".into(),
        ));
    }
    let label = model_label(&model);
    let reps: Vec<(String, Option<HyperbolicRep>)> = match (&model, args.both_reps, args.rep) {
        (ModelManifold::HyperbolicPlane, true, _) => vec![
            (format!("{label}-integral"), Some(HyperbolicRep::Integral)),
            (format!("{label}-spectral"), Some(HyperbolicRep::Spectral)),
        ],
        (ModelManifold::HyperbolicPlane, false, Some(RepKind::Spectral)) => {
            vec![(format!("{label}-spectral"), Some(HyperbolicRep::Spectral))]
        }
        _ => vec![(label, None)],
    };
    let mut table = Table::new(&["model", "t", "mass", "abs_err"]);
    for (name, rep) in &reps {
        let values = par_map(&times, |&t| {
            Ok(match rep {
                Some(r) => hyperbolic2_mass(*r, t, args.tol)?,
                None => total_mass(&model, t, args.tol)?,
            })
        })?;
        for (&t, v) in times.iter().zip(values) {
            table.push(vec![
                name.as_str().into(),
                t.into(),
                v.value.into(),
                v.abs_error_estimate.into(),
            ]);
        }
    }
    emit_table(&args.output, &table)?;
    Ok(Status::Ok)
}
