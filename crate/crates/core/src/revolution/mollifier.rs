use crate::error::{HeatError, Result};
use crate::quad::integrate_finite;

use super::profile::RadialProfile;

/// Smooth radially decreasing bump `c·exp(−1/(1−(ρ/ε)²))` on `[0, ε)`,
/// normalized to unit mass against `S(ρ) dρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    eps: f64,
    scale: f64,
}

fn shape(u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

impl Mollifier {
    pub fn new(profile: &RadialProfile, eps: f64) -> Result<Self> {
        let limit = profile.length() / 4.0;
        if !(eps > 0.0) || eps >= limit {
            return Err(HeatError::domain(
                "mollifier",
                format!("need 0 < eps < L/4 = {limit}, got {eps}"),
            ));
        }
        let q = integrate_finite(|r| shape(r / eps) * profile.s(r), 0.0, eps, 1e-15)?;
        let mass = q.value;
        if !(mass > 0.0) {
            return Err(HeatError::domain("mollifier", "bump has zero mass"));
        }
        Ok(Mollifier {
            eps,
            scale: 1.0 / mass,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn value(&self, rho: f64) -> f64 {
        self.scale * shape(rho.abs() / self.eps)
    }
}
