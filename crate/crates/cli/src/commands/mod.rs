pub mod eval;
pub mod frac;
pub mod mass;
pub mod scan;
pub mod solve;
pub mod sum;
pub mod verify;

use std::str::FromStr;

use heatkern::fractional::CMFunction;
use rayon::prelude::*;

use crate::error::CliResult;

/// Maps `f` over `items` in parallel and returns the results in input order.
/// On failure the error of the earliest failing item is reported, so output
/// never depends on scheduling.
pub fn par_map<T, U, F>(items: &[T], f: F) -> CliResult<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> CliResult<U> + Sync + Send,
{
    let results: Vec<CliResult<U>> = items.par_iter().map(f).collect();
    results.into_iter().collect()
}

/// Completely monotonic test function: `exp:t0`, `stretched:a` or `power:c:p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmSpec {
    Exp(f64),
    Stretched(f64),
    Power(f64, f64),
}

impl FromStr for CmSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<f64>().map_err(|_| format!("not a number: '{x}'"));
        match parts.as_slice() {
            ["exp", t0] => Ok(CmSpec::Exp(num(t0)?)),
            ["stretched", a] => Ok(CmSpec::Stretched(num(a)?)),
            ["power", c, p] => Ok(CmSpec::Power(num(c)?, num(p)?)),
            _ => Err(format!(
                "expected exp:t0, stretched:a or power:c:p, got '{s}'"
            )),
        }
    }
}

impl CmSpec {
    pub fn build(self) -> CMFunction {
        match self {
            CmSpec::Exp(t0) => CMFunction::exponential(t0),
            CmSpec::Stretched(a) => CMFunction::stretched_exponential(a),
            CmSpec::Power(c, p) => CMFunction::inverse_power(c, p),
        }
    }
}
