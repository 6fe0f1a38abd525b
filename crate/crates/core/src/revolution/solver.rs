use std::io::Write;

use serde::Serialize;

use crate::error::{HeatError, Result};

use super::mollifier::Mollifier;
use super::profile::{Boundary, RadialProfile};

/// Smallest accepted number of grid intervals.
pub const MIN_INTERVALS: usize = 64;

/// Far-field flux (relative to mass) tolerated on truncated noncompact domains.
pub const FAR_FIELD_TOL: f64 = 1e-10;

/// Initial data for [`solve_heat`].
#[derive(Debug, Clone)]
pub enum InitialData {
    Mollifier(Mollifier),
    /// Values at the grid nodes `ρ_0 … ρ_N`.
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of grid intervals `N` (the grid has `N + 1` nodes).
    pub intervals: usize,
    /// Time step; defaults to `0.9·dt_max`.
    pub dt: Option<f64>,
    /// Number of full snapshots kept, including `t = 0` and `t_end`.
    pub records: usize,
}

impl SolverConfig {
    pub fn new(intervals: usize) -> Self {
        SolverConfig {
            intervals,
            dt: None,
            records: 200,
        }
    }
}

/// Snapshot of the discrete solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverState {
    pub t: f64,
    pub values: Vec<f64>,
    /// `Σ V_i f_i` over the control volumes.
    pub mass: f64,
    /// `max_i (f_{i+1} − f_i)`.
    pub defect: f64,
    /// Mass that has left through a Dirichlet boundary so far.
    pub boundary_loss: f64,
}

/// Scalar diagnostics recorded after every time step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub t: f64,
    pub mass: f64,
    pub defect: f64,
    pub boundary_loss: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Vec<f64>,
    pub volumes: Vec<f64>,
    pub boundary: Boundary,
    pub dt: f64,
    pub dt_max: f64,
    pub states: Vec<SolverState>,
    pub steps: Vec<StepRecord>,
    /// Time-integrated flux through the outermost face, relative to mass
    /// (only meaningful on truncated noncompact domains).
    pub far_field_flux: f64,
}

/// `max_i (f_{i+1} − f_i)`: nonpositive exactly when the values are radially non-increasing.
pub fn monotonicity_defect(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}

impl Trajectory {
    pub fn final_state(&self) -> &SolverState {
        self.states
            .last()
            .expect("trajectory has at least one state")
    }

    /// Largest recorded `defect / max f` over all steps.
    pub fn max_relative_defect(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.defect / s.values.iter().cloned().fold(0.0, f64::max))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Strict mass decrease at every time step of a Dirichlet solve.
    ///
    /// Per-step mass losses sit far below the rounding of `Σ V f`, so the
    /// decrease is read off the tracked boundary loss: it must grow strictly
    /// from step to step while `mass + loss` stays constant.
    pub fn mass_strictly_decreasing(&self) -> bool {
        let m0 = self.steps[0].mass + self.steps[0].boundary_loss;
        self.steps
            .windows(2)
            .all(|w| w[1].boundary_loss > w[0].boundary_loss)
            && self
                .steps
                .iter()
                .all(|s| (s.mass + s.boundary_loss - m0).abs() <= 1e-10 * m0.abs())
    }

    /// Largest deviation of the mass from its initial value over all steps.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.steps[0].mass;
        self.steps
            .iter()
            .map(|s| (s.mass - m0).abs())
            .fold(0.0, f64::max)
    }

    /// Cubic interpolation of a state at radius `d`, using the even
    /// reflection at the pole and the boundary reflection at `ρ = L`.
    pub fn interpolate(&self, state: &SolverState, d: f64) -> f64 {
        let n = self.grid.len() - 1;
        let h = self.grid[1] - self.grid[0];
        let l = self.grid[n];
        let d = d.clamp(0.0, l);
        let j = ((d / h).floor() as i64).clamp(0, n as i64 - 1);
        let value = |k: i64| -> f64 {
            if k < 0 {
                state.values[(-k) as usize]
            } else if k as usize > n {
                let mirror = 2 * n - k as usize;
                let v = state.values[mirror];
                if self.boundary == Boundary::Dirichlet {
                    -v
                } else {
                    v
                }
            } else {
                state.values[k as usize]
            }
        };
        let u = d / h - j as f64;
        // Lagrange basis on nodes −1, 0, 1, 2 relative to j.
        let w = [
            -u * (u - 1.0) * (u - 2.0) / 6.0,
            (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
            -(u + 1.0) * u * (u - 2.0) / 2.0,
            (u + 1.0) * u * (u - 1.0) / 6.0,
        ];
        (0..4).map(|i| w[i] * value(j - 1 + i as i64)).sum()
    }

    /// Write all snapshots as CSV with columns `t,rho,f`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,rho,f")?;
        for s in &self.states {
            for (rho, f) in self.grid.iter().zip(&s.values) {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", s.t, rho, f)?;
            }
        }
        Ok(())
    }
}

/// Finite-volume discretization of `∂_t f = S⁻¹ ∂_ρ(S ∂_ρ f)` on a uniform grid.
struct Operator {
    vol: Vec<f64>,
    // Face conductances S(ρ_{i+½}) / (ρ_{i+1} − ρ_i).
    cond: Vec<f64>,
    unknowns: usize,
}

impl Operator {
    fn new(profile: &RadialProfile, grid: &[f64]) -> Self {
        let n = grid.len() - 1;
        let faces: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let mut vol = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let lo = if i == 0 { grid[0] } else { faces[i - 1] };
            let hi = if i == n { grid[n] } else { faces[i] };
            vol.push(profile.shell_volume(lo, hi));
        }
        let cond = faces
            .iter()
            .zip(grid.windows(2))
            .map(|(&f, w)| profile.s(f) / (w[1] - w[0]))
            .collect();
        let unknowns = if profile.boundary() == Boundary::Dirichlet {
            n
        } else {
            n + 1
        };
        Operator {
            vol,
            cond,
            unknowns,
        }
    }

    /// Diagonal of the (positive semidefinite) stiffness matrix.
    fn stiffness_diag(&self, i: usize) -> f64 {
        let left = if i == 0 { 0.0 } else { self.cond[i - 1] };
        let right = if i < self.cond.len() {
            self.cond[i]
        } else {
            0.0
        };
        left + right
    }

    /// Largest step keeping the explicit half of Crank–Nicolson nonnegative.
    fn dt_max(&self) -> f64 {
        (0..self.unknowns)
            .map(|i| 2.0 * self.vol[i] / self.stiffness_diag(i))
            .fold(f64::INFINITY, f64::min)
    }
}

fn validate_init(profile: &RadialProfile, grid: &[f64], init: &InitialData) -> Result<Vec<f64>> {
    let n = grid.len() - 1;
    match init {
        InitialData::Mollifier(m) => Ok(grid.iter().map(|&r| m.value(r)).collect()),
        InitialData::Values(v) => {
            if v.len() != n + 1 {
                return Err(HeatError::domain(
                    "solve_heat",
                    format!("expected {} initial values, got {}", n + 1, v.len()),
                ));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(HeatError::domain(
                    "solve_heat",
                    "initial values must be finite",
                ));
            }
            if profile.boundary() == Boundary::Dirichlet && v[n] != 0.0 {
                return Err(HeatError::BoundaryMismatch(format!(
                    "Dirichlet boundary needs f(L) = 0, got {}",
                    v[n]
                )));
            }
            Ok(v.clone())
        }
    }
}

/// Crank–Nicolson solve of the radial heat equation from `init` up to `t_end`.
///
/// The pole (and the antipode of closed profiles) carries no boundary
/// condition: the control volume there shrinks like `ρ^{m+1}`, which reduces
/// the scheme to `(1+m) f″` under the symmetry `f′ = 0`.
pub fn solve_heat(
    profile: &RadialProfile,
    init: &InitialData,
    t_end: f64,
    config: &SolverConfig,
) -> Result<Trajectory> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(HeatError::domain("solve_heat", "t_end must be positive"));
    }
    let n = config.intervals;
    if n < MIN_INTERVALS {
        return Err(HeatError::domain(
            "solve_heat",
            format!("need at least {MIN_INTERVALS} intervals, got {n}"),
        ));
    }
    let l = profile.length();
    let grid: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
    let op = Operator::new(profile, &grid);
    let dt_max = op.dt_max();
    let dt_target = match config.dt {
        Some(dt) if !(dt > 0.0) => {
            return Err(HeatError::domain("solve_heat", "dt must be positive"))
        }
        Some(dt) if dt > dt_max * (1.0 + 1e-12) => return Err(HeatError::Stability { dt, dt_max }),
        Some(dt) => dt,
        None => 0.9 * dt_max,
    };
    let nsteps = ((t_end / dt_target) - 1e-9).ceil().max(1.0) as usize;
    let dt = t_end / nsteps as f64;

    let mut f = validate_init(profile, &grid, init)?;
    let k = op.unknowns;
    let mass_of = |f: &[f64]| -> f64 { (0..k).map(|i| op.vol[i] * f[i]).sum() };
    if let InitialData::Mollifier(_) = init {
        let m0 = mass_of(&f);
        f.iter_mut().for_each(|v| *v /= m0);
    }

    // Prefactorized Thomas sweep for (V + dt/2·L) f⁺ = (V − dt/2·L) f.
    let half = 0.5 * dt;
    let diag: Vec<f64> = (0..k)
        .map(|i| op.vol[i] + half * op.stiffness_diag(i))
        .collect();
    let off: Vec<f64> = (0..k.saturating_sub(1))
        .map(|i| -half * op.cond[i])
        .collect();
    let mut cprime = vec![0.0; k];
    let mut denom = vec![0.0; k];
    denom[0] = diag[0];
    for i in 1..k {
        cprime[i - 1] = off[i - 1] / denom[i - 1];
        denom[i] = diag[i] - off[i - 1] * cprime[i - 1];
    }

    let record_at: Vec<usize> = {
        let r = config.records.max(2);
        let mut v: Vec<usize> = (0..r)
            .map(|j| (j * nsteps + (r - 1) / 2) / (r - 1))
            .collect();
        v.dedup();
        v
    };
    let mut next_record = 0;
    let mut states = Vec::with_capacity(record_at.len());
    let mut steps = Vec::with_capacity(nsteps + 1);
    let mut loss = 0.0;
    let mut far_flux = 0.0;
    let mut mass = mass_of(&f);
    let mass0 = mass;

    let mut snapshot =
        |step: usize, t: f64, f: &[f64], mass: f64, loss: f64, states: &mut Vec<SolverState>| {
            let defect = monotonicity_defect(f);
            if next_record < record_at.len() && record_at[next_record] == step {
                states.push(SolverState {
                    t,
                    values: f.to_vec(),
                    mass,
                    defect,
                    boundary_loss: loss,
                });
                next_record += 1;
            }
            defect
        };
    let defect = snapshot(0, 0.0, &f, mass, loss, &mut states);
    steps.push(StepRecord {
        t: 0.0,
        mass,
        defect,
        boundary_loss: loss,
    });

    // Explicit half: diagonal V − dt/2·diag(L) and off-diagonal dt/2·c.
    let ediag: Vec<f64> = (0..k)
        .map(|i| op.vol[i] - half * op.stiffness_diag(i))
        .collect();
    let eoff: Vec<f64> = off.iter().map(|o| -o).collect();
    let mut rhs = vec![0.0; k];
    for step in 1..=nsteps {
        if k == 1 {
            rhs[0] = ediag[0] * f[0];
        } else {
            rhs[0] = ediag[0] * f[0] + eoff[0] * f[1];
            for i in 1..k - 1 {
                rhs[i] = eoff[i - 1] * f[i - 1] + ediag[i] * f[i] + eoff[i] * f[i + 1];
            }
            rhs[k - 1] = eoff[k - 2] * f[k - 2] + ediag[k - 1] * f[k - 1];
        }
        let edge_before = f[k - 1];
        let last_face_before = f[n] - f[n - 1];
        // Forward elimination then back substitution, in place.
        rhs[0] /= denom[0];
        for i in 1..k {
            rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / denom[i];
        }
        for i in (0..k - 1).rev() {
            rhs[i] -= cprime[i] * rhs[i + 1];
        }
        f[..k].copy_from_slice(&rhs);

        if profile.boundary() == Boundary::Dirichlet {
            loss += half * op.cond[n - 1] * (edge_before + f[k - 1]);
        }
        if profile.is_noncompact() {
            far_flux += half * op.cond[n - 1] * (last_face_before.abs() + (f[n] - f[n - 1]).abs());
        }
        mass = mass_of(&f);
        let t = dt * step as f64;
        let defect = snapshot(step, t, &f, mass, loss, &mut states);
        steps.push(StepRecord {
            t,
            mass,
            defect,
            boundary_loss: loss,
        });
    }

    let far_field_flux = far_flux / mass0.abs().max(f64::MIN_POSITIVE);
    if profile.is_noncompact() && far_field_flux > FAR_FIELD_TOL {
        return Err(HeatError::BoundaryMismatch(format!(
            "heat reached the working radius: relative flux {far_field_flux:e} > {FAR_FIELD_TOL:e}"
        )));
    }
    Ok(Trajectory {
        grid,
        volumes: op.vol,
        boundary: profile.boundary(),
        dt,
        dt_max,
        states,
        steps,
        far_field_flux,
    })
}

/// Nodal values with two separated bumps, used to exercise the defect diagnostic.
pub fn two_bump_values(profile: &RadialProfile, intervals: usize) -> Vec<f64> {
    let l = profile.length();
    let bump = |x: f64, c: f64, w: f64| {
        let u = (x - c) / w;
        if u.abs() < 1.0 {
            (-1.0 / (1.0 - u * u)).exp()
        } else {
            0.0
        }
    };
    (0..=intervals)
        .map(|i| {
            let x = l * i as f64 / intervals as f64;
            bump(x, 0.0, 0.1 * l) + 0.5 * bump(x, 0.5 * l, 0.1 * l)
        })
        .collect()
}
