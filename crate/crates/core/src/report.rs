//! JSON check reports shared by the fractional checks and the CLI verifier.

use serde::Serialize;
use serde_json::{Map, Value};

/// Summary of the sampling grid a check ran on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSummary {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSummary {
    pub fn of(points: &[f64]) -> Self {
        GridSummary {
            start: points.first().copied().unwrap_or(f64::NAN),
            stop: points.last().copied().unwrap_or(f64::NAN),
            count: points.len(),
        }
    }
}

/// Outcome of a numerical check: `{check, parameters, grid, worst_margin, pass}`.
///
/// `worst_margin` is the smallest slack observed; the check passes when it
/// stays above the negated tolerance recorded in `parameters`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub parameters: Map<String, Value>,
    pub grid: GridSummary,
    pub worst_margin: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: &str, grid: GridSummary, worst_margin: f64, pass: bool) -> Self {
        CheckReport {
            check: check.to_string(),
            parameters: Map::new(),
            grid,
            worst_margin,
            pass,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// Single-line JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        // Map is ordered by key, so going through Value sorts the top level too.
        let v = serde_json::to_value(self).expect("report is serializable");
        serde_json::to_string(&v).expect("report is serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let r = CheckReport::new("demo", GridSummary::of(&[0.0, 1.0]), -0.5, false)
            .param("zeta", 1.0)
            .param("alpha", 0.5);
        let s = r.to_json();
        let order = [
            "\"check\"",
            "\"grid\"",
            "\"parameters\"",
            "\"pass\"",
            "\"worst_margin\"",
        ];
        let pos: Vec<usize> = order.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
    }
}
