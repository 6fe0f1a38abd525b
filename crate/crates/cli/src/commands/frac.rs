use clap::{Args, Subcommand};
use heatkern::fractional::{
    cordoba_check, frac_apply, frac_heat_kernel, max_principle_check, subordinate_kernel,
    theta_grid, ZonalFunction,
};
use heatkern::CheckReport;

use super::{par_map, CmSpec};
use crate::error::{CliError, CliResult, Status};
use crate::grid::{Grid, List};
use crate::output::{emit, emit_table, OutputArgs, Table};

#[derive(Debug, Clone, Subcommand)]
pub enum FracCommand {
    /// Kernel of the negative fractional power on S^dim, by subordination.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Grid,
        #[arg(long, allow_hyphen_values = true)]
        d: Grid,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Heat kernel of the fractional Laplacian on S².
    Heat {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Grid,
        #[arg(long, allow_hyphen_values = true)]
        theta: Grid,
        #[arg(long, allow_hyphen_values = true)]
        t: Grid,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate a zonal function and its fractional Laplacian.
    Apply {
        #[command(flatten)]
        zonal: ZonalArgs,
        #[arg(long, allow_hyphen_values = true)]
        theta: Grid,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check 2f·(−Δ)^α f ≥ (−Δ)^α f² on a θ-grid.
    Cordoba {
        #[command(flatten)]
        zonal: ZonalArgs,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Check (−Δ)^α f ≥ 0 at the maximum point of f.
    Maxprinciple {
        #[command(flatten)]
        zonal: ZonalArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Finite-difference complete-monotonicity check of a test function.
    Cm {
        #[arg(long = "fn")]
        function: CmSpec,
        #[command(flatten)]
        report: ReportArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ZonalArgs {
    /// Legendre coefficients a_0,a_1,… of f = Σ a_k P_k(cos θ).
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: List,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Report file (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

pub fn run(cmd: &FracCommand) -> CliResult<Status> {
    match cmd {
        FracCommand::Kernel {
            alpha,
            d,
            dim,
            tol,
            output,
        } => {
            let pts: Vec<(f64, f64)> = alpha
                .0
                .iter()
                .flat_map(|&a| d.0.iter().map(move |&d| (a, d)))
                .collect();
            let values = par_map(&pts, |&(a, d)| Ok(subordinate_kernel(*dim, a, d, *tol)?))?;
            let mut table = Table::new(&["alpha", "d", "k", "k_norm", "abs_err"]);
            for v in values {
                table.push(vec![
                    v.alpha.into(),
                    v.d.into(),
                    v.k.into(),
                    v.k_norm.into(),
                    v.abs_error_estimate.into(),
                ]);
            }
            emit_table(output, &table)?;
            Ok(Status::Ok)
        }
        FracCommand::Heat {
            alpha,
            theta,
            t,
            tol,
            output,
        } => {
            let times = t.positive();
            if times.is_empty() {
                return Err(CliError::Config(
                    "--t needs at least one positive time".into(),
                ));
            }
            let mut pts = Vec::new();
            for &a in &alpha.0 {
                for &t in &times {
                    pts.extend(theta.0.iter().map(|&th| (a, t, th)));
                }
            }
            let values = par_map(&pts, |&(a, t, th)| Ok(frac_heat_kernel(a, th, t, *tol)?))?;
            let mut table = Table::new(&["alpha", "t", "theta", "value", "abs_err"]);
            for (&(a, t, th), v) in pts.iter().zip(values) {
                table.push(vec![
                    a.into(),
                    t.into(),
                    th.into(),
                    v.value.into(),
                    v.abs_error_estimate.into(),
                ]);
            }
            emit_table(output, &table)?;
            Ok(Status::Ok)
        }
        FracCommand::Apply {
            zonal,
            theta,
            output,
        } => {
            let f = ZonalFunction::new(zonal.coeffs.0.clone());
            let lf = frac_apply(&f, zonal.alpha)?;
            let mut table = Table::new(&["theta", "f", "frac_laplacian_f"]);
            for &th in &theta.0 {
                table.push(vec![th.into(), f.eval(th).into(), lf.eval(th).into()]);
            }
            emit_table(output, &table)?;
            Ok(Status::Ok)
        }
        FracCommand::Cordoba {
            zonal,
            count,
            report,
        } => {
            let f = ZonalFunction::new(zonal.coeffs.0.clone());
            emit_report(
                report,
                &cordoba_check(&f, zonal.alpha, &theta_grid(*count))?,
            )
        }
        FracCommand::Maxprinciple { zonal, report } => {
            let f = ZonalFunction::new(zonal.coeffs.0.clone());
            emit_report(report, &max_principle_check(&f, zonal.alpha)?)
        }
        FracCommand::Cm { function, report } => {
            let f = function.build();
            let r = f
                .check()
                .to_check_report()
                .param("function", f.label.clone());
            emit_report(report, &r)
        }
    }
}

fn emit_report(args: &ReportArgs, report: &CheckReport) -> CliResult<Status> {
    let mut s = report.to_json();
    s.push('\n');
    emit(args.out.as_ref(), &s)?;
    Ok(if report.pass {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}
