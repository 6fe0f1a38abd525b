use clap::Subcommand;
use heatkern::fractional::{fejer_sum, legendre_cm_sum, mehler_cm_integral};

use super::{par_map, CmSpec};
use crate::error::{CliResult, Status};
use crate::grid::Grid;
use crate::output::{emit_table, OutputArgs, Table};

#[derive(Debug, Clone, Subcommand)]
pub enum SumCommand {
    /// Σ (2k+1) F(k(k+1)) P_k′(x) for a completely monotonic F.
    Legendre {
        #[arg(long = "fn")]
        function: CmSpec,
        #[arg(long, allow_hyphen_values = true)]
        x: Grid,
        /// Fixed truncation degree (adaptive when omitted).
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mehler–Fock integral of a completely monotonic F at distance r.
    Mehler {
        #[arg(long = "fn")]
        function: CmSpec,
        #[arg(long, allow_hyphen_values = true)]
        r: Grid,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fejér partial sums Σ_{k≤N} P_k(x).
    Fejer {
        #[arg(long = "N", default_value_t = 200)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: Grid,
        #[command(flatten)]
        output: OutputArgs,
    },
}

pub fn run(cmd: &SumCommand) -> CliResult<Status> {
    match cmd {
        SumCommand::Legendre {
            function,
            x,
            kmax,
            tol,
            output,
        } => {
            let f = function.build();
            let values = par_map(&x.0, |&x| Ok(legendre_cm_sum(&f, x, *kmax, *tol)?))?;
            let mut table = Table::new(&["function", "x", "value", "tail_bound", "terms"]);
            for (&x, v) in x.0.iter().zip(values) {
                table.push(vec![
                    f.label.as_str().into(),
                    x.into(),
                    v.value.into(),
                    v.tail_bound.into(),
                    v.terms.into(),
                ]);
            }
            emit_table(output, &table)?;
        }
        SumCommand::Mehler {
            function,
            r,
            tol,
            output,
        } => {
            let f = function.build();
            let values = par_map(&r.0, |&r| Ok(mehler_cm_integral(&f, r, *tol)?))?;
            let mut table = Table::new(&["function", "r", "value", "abs_err"]);
            for (&r, v) in r.0.iter().zip(values) {
                table.push(vec![
                    f.label.as_str().into(),
                    r.into(),
                    v.value.into(),
                    v.abs_error_estimate.into(),
                ]);
            }
            emit_table(output, &table)?;
        }
        SumCommand::Fejer { n, x, output } => {
            let values = par_map(&x.0, |&x| Ok(fejer_sum(*n, x)?))?;
            let mut table = Table::new(&["n", "x", "value"]);
            for (&x, v) in x.0.iter().zip(values) {
                table.push(vec![(*n).into(), x.into(), v.into()]);
            }
            emit_table(output, &table)?;
        }
    }
    Ok(Status::Ok)
}
