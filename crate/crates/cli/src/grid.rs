//! Grid and list syntax shared by the subcommands.

use std::str::FromStr;

/// Points given as `start:stop:count` (endpoints included), a single value,
/// or a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: '{s}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: '{s}'"))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [single] => single
                .split(',')
                .map(number)
                .collect::<Result<_, _>>()
                .map(Grid),
            [start, stop, count] => {
                let (a, b) = (number(start)?, number(stop)?);
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("grid count must be a positive integer, got '{count}'"))?;
                match n {
                    0 => Err("grid count must be at least 1".into()),
                    1 => Ok(Grid(vec![a])),
                    _ => Ok(Grid(
                        (0..n)
                            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                            .collect(),
                    )),
                }
            }
            _ => Err(format!("expected start:stop:count, got '{s}'")),
        }
    }
}

impl Grid {
    /// Drops nonpositive times, where every kernel is singular.
    pub fn positive(&self) -> Vec<f64> {
        self.0.iter().copied().filter(|t| *t > 0.0).collect()
    }
}

/// A point `x,y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub f64, pub f64);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split(',').collect::<Vec<_>>().as_slice() {
            [x, y] => Ok(Pair(number(x)?, number(y)?)),
            _ => Err(format!("expected x,y, got '{s}'")),
        }
    }
}

/// Comma-separated list of reals, e.g. Legendre coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(number).collect::<Result<_, _>>().map(List)
    }
}
