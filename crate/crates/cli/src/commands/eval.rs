use clap::Args;
use heatkern::kernels::{
    default_eps_list, hyperbolic2_kernel, torus_kernel, torus_kernel_fourier, torus_kernel_images,
};
use heatkern::revolution::heat_kernel_estimate_many;
use heatkern::{HyperbolicRep, KernelValue, ModelManifold};

use super::par_map;
use crate::error::{CliError, CliResult, Status};
use crate::grid::{Grid, Pair};
use crate::models::{manifold, model_label, ModelKind, ProfileArgs, RepKind};
use crate::output::{emit_table, Cell, OutputArgs, Table};

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub aspect: f64,
    /// Geodesic distances (angles on spheres).
    #[arg(long, allow_hyphen_values = true, visible_alias = "theta")]
    pub d: Option<Grid>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Grid,
    /// Torus points `x,y`; may be repeated.
    #[arg(long, allow_hyphen_values = true)]
    pub xy: Vec<Pair>,
    /// Hyperbolic-plane representation.
    #[arg(long, value_enum)]
    pub rep: Option<RepKind>,
    /// Evaluate both representations (hyperbolic plane and torus).
    #[arg(long)]
    pub both_reps: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Mollifier widths for profile models, largest first.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

type TorusEval = fn(f64, f64, f64, f64, f64) -> heatkern::Result<KernelValue>;

pub fn run(args: &EvalArgs) -> CliResult<Status> {
    let model = manifold(args.model, args.dim, args.aspect, &args.profile)?;
    let times = args.t.positive();
    if times.is_empty() {
        return Err(CliError::Config(
            "--t needs at least one positive time".into(),
        ));
    }
    let label = model_label(&model);
    let table = match &model {
        ModelManifold::FlatTorus { aspect } => torus_table(args, *aspect, &label, &times)?,
        ModelManifold::Revolution(p) => {
            let ds = distances(args)?;
            let mut table = Table::new(&["model", "d", "t", "value", "abs_err"]);
            for &t in &times {
                let eps = args
                    .eps
                    .clone()
                    .unwrap_or_else(|| default_eps_list(p.length(), t));
                for (d, v) in ds.iter().zip(heat_kernel_estimate_many(p, &ds, t, &eps)?) {
                    table.push(row(&label, *d, t, v));
                }
            }
            table
        }
        _ => {
            let ds = distances(args)?;
            let column = if matches!(model, ModelManifold::Sphere(_)) {
                "theta"
            } else {
                "d"
            };
            let mut table = Table::new(&["model", column, "t", "value", "abs_err"]);
            let reps: Vec<(String, Option<HyperbolicRep>)> =
                match (&model, args.both_reps, args.rep) {
                    (ModelManifold::HyperbolicPlane, true, _) => vec![
                        (format!("{label}-integral"), Some(HyperbolicRep::Integral)),
                        (format!("{label}-spectral"), Some(HyperbolicRep::Spectral)),
                    ],
                    (ModelManifold::HyperbolicPlane, false, Some(r)) => {
                        let rep = HyperbolicRep::from(r);
                        let name = match rep {
                            HyperbolicRep::Integral => "integral",
                            HyperbolicRep::Spectral => "spectral",
                        };
                        vec![(format!("{label}-{name}"), Some(rep))]
                    }
                    _ => vec![(label.clone(), None)],
                };
            let points: Vec<(f64, f64)> = times
                .iter()
                .flat_map(|&t| ds.iter().map(move |&d| (t, d)))
                .collect();
            for (name, rep) in &reps {
                let values = par_map(&points, |&(t, d)| {
                    Ok(match rep {
                        Some(r) => hyperbolic2_kernel(*r, d, t, args.tol)?,
                        None => model.kernel(d, t, args.tol)?,
                    })
                })?;
                for (&(t, d), v) in points.iter().zip(values) {
                    table.push(row(name, d, t, v));
                }
            }
            table
        }
    };
    emit_table(&args.output, &table)?;
    Ok(Status::Ok)
}

fn distances(args: &EvalArgs) -> CliResult<Vec<f64>> {
    match &args.d {
        Some(g) => Ok(g.0.clone()),
        None => Err(CliError::Config(
            "--d (or --theta) is required for this model".into(),
        )),
    }
}

fn row(label: &str, d: f64, t: f64, v: KernelValue) -> Vec<Cell> {
    vec![
        label.into(),
        d.into(),
        t.into(),
        v.value.into(),
        v.abs_error_estimate.into(),
    ]
}

fn torus_table(args: &EvalArgs, aspect: f64, label: &str, times: &[f64]) -> CliResult<Table> {
    let mut pts: Vec<(f64, f64)> = args.xy.iter().map(|p| (p.0, p.1)).collect();
    if let Some(g) = &args.d {
        pts.extend(g.0.iter().map(|&d| (d, 0.0)));
    }
    if pts.is_empty() {
        return Err(CliError::Config(
            "torus evaluation needs --xy or --d".into(),
        ));
    }
    let reps: Vec<(String, TorusEval)> = if args.both_reps {
        vec![
            (format!("{label}-images"), torus_kernel_images),
            (format!("{label}-fourier"), torus_kernel_fourier),
        ]
    } else {
        vec![(label.to_string(), torus_kernel)]
    };
    let points: Vec<(f64, f64, f64)> = times
        .iter()
        .flat_map(|&t| pts.iter().map(move |&(x, y)| (t, x, y)))
        .collect();
    let mut table = Table::new(&["model", "x", "y", "t", "value", "abs_err"]);
    for (name, f) in &reps {
        let values = par_map(&points, |&(t, x, y)| Ok(f(aspect, x, y, t, args.tol)?))?;
        for (&(t, x, y), v) in points.iter().zip(values) {
            table.push(vec![
                name.as_str().into(),
                x.into(),
                y.into(),
                t.into(),
                v.value.into(),
                v.abs_error_estimate.into(),
            ]);
        }
    }
    Ok(table)
}
