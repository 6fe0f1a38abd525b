//! Model and profile selection from command-line flags.

use std::f64::consts::PI;
use std::fs::File;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use heatkern::revolution::{
    euclidean_model, hyperbolic_model, profile_from_curve, sphere_profile, GeneratingCurve,
};
use heatkern::{Boundary, HyperbolicRep, ModelManifold, RadialProfile};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Euclidean space of dimension --dim.
    Euclid,
    /// Round sphere of dimension --dim.
    Sphere,
    Sphere2,
    Sphere3,
    /// Hyperbolic plane.
    Hyp2,
    /// Hyperbolic 3-space.
    Hyp3,
    /// Flat torus R²/(Z × ℓZ) with ℓ = --aspect.
    Torus,
    /// Hypersurface of revolution or model manifold chosen by --profile.
    Profile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    Integral,
    Spectral,
}

impl From<RepKind> for HyperbolicRep {
    fn from(r: RepKind) -> Self {
        match r {
            RepKind::Integral => HyperbolicRep::Integral,
            RepKind::Spectral => HyperbolicRep::Spectral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    /// Round sphere of radius --R in R^dim.
    Sphere,
    /// Ellipsoid of revolution with semi-axes --a (equatorial) and --c (polar).
    Ellipsoid,
    /// Spherical cap of polar angle --angle.
    Cap,
    /// Euclidean model A(ρ) = ρ of intrinsic dimension --dim.
    Euclid,
    /// Hyperbolic model A(ρ) = sinh ρ of intrinsic dimension --dim.
    Hyperbolic,
    /// Generating curve read from --curve (columns s, r, z).
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcKind {
    Closed,
    Dirichlet,
    Neumann,
}

impl From<BcKind> for Boundary {
    fn from(b: BcKind) -> Self {
        match b {
            BcKind::Closed => Boundary::Closed,
            BcKind::Dirichlet => Boundary::Dirichlet,
            BcKind::Neumann => Boundary::Neumann,
        }
    }
}

/// Flags describing a radial profile. `--dim` is the ambient dimension for
/// generating curves and the intrinsic dimension for model manifolds.
#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long, value_enum, default_value = "sphere")]
    pub profile: ProfileKind,
    #[arg(long = "R", default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 2.0 * PI / 3.0)]
    pub angle: f64,
    /// Boundary condition; defaults to closed for closed surfaces, Dirichlet
    /// for caps and Neumann for model manifolds.
    #[arg(long, value_enum)]
    pub bc: Option<BcKind>,
    /// Working radius at which model manifolds are truncated.
    #[arg(long, default_value_t = 10.0)]
    pub rwork: f64,
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

impl ProfileArgs {
    pub fn build(&self, dim: usize) -> CliResult<RadialProfile> {
        let p = match self.profile {
            ProfileKind::Sphere => sphere_profile(self.radius, dim)?,
            ProfileKind::Ellipsoid => {
                let bc = self.bc.map_or(Boundary::Closed, Boundary::from);
                profile_from_curve(&GeneratingCurve::ellipsoid(self.a, self.c), dim, bc)?
            }
            ProfileKind::Cap => {
                let bc = self.bc.map_or(Boundary::Dirichlet, Boundary::from);
                profile_from_curve(&GeneratingCurve::spherical_cap(self.angle), dim, bc)?
            }
            ProfileKind::Euclid => euclidean_model(dim, self.rwork)?,
            ProfileKind::Hyperbolic => hyperbolic_model(dim, self.rwork)?,
            ProfileKind::Csv => {
                let path = self
                    .curve
                    .as_ref()
                    .ok_or_else(|| CliError::Config("--profile csv needs --curve <path>".into()))?;
                let curve = GeneratingCurve::from_csv(File::open(path)?)?;
                let bc = self.bc.map_or(Boundary::Closed, Boundary::from);
                profile_from_curve(&curve, dim, bc)?
            }
        };
        match (self.profile, self.bc) {
            (ProfileKind::Sphere | ProfileKind::Euclid | ProfileKind::Hyperbolic, Some(bc)) => {
                Ok(p.with_boundary(bc.into())?)
            }
            _ => Ok(p),
        }
    }
}

/// Builds the manifold for the kernel-level commands.
pub fn manifold(
    kind: ModelKind,
    dim: Option<usize>,
    aspect: f64,
    profile: &ProfileArgs,
) -> CliResult<ModelManifold> {
    let need_dim = |default: usize| dim.unwrap_or(default);
    Ok(match kind {
        ModelKind::Euclid => {
            let n = need_dim(2);
            if n == 0 {
                return Err(CliError::Config("--dim must be >= 1".into()));
            }
            ModelManifold::Euclidean(n)
        }
        ModelKind::Sphere => ModelManifold::sphere(need_dim(2))?,
        ModelKind::Sphere2 => ModelManifold::Sphere(2),
        ModelKind::Sphere3 => ModelManifold::Sphere(3),
        ModelKind::Hyp2 => ModelManifold::HyperbolicPlane,
        ModelKind::Hyp3 => ModelManifold::Hyperbolic3,
        ModelKind::Torus => ModelManifold::flat_torus(aspect)?,
        ModelKind::Profile => ModelManifold::Revolution(profile.build(need_dim(3))?),
    })
}

/// Short name used in output rows.
pub fn model_label(m: &ModelManifold) -> String {
    match m {
        ModelManifold::Euclidean(n) => format!("euclid{n}"),
        ModelManifold::Sphere(n) => format!("sphere{n}"),
        ModelManifold::HyperbolicPlane => "hyp2".into(),
        ModelManifold::Hyperbolic3 => "hyp3".into(),
        ModelManifold::FlatTorus { aspect } => format!("torus{aspect}"),
        ModelManifold::Revolution(p) => p.label().to_string(),
    }
}
