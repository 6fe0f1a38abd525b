use std::fmt;
use std::io::Read;
use std::sync::Arc;

use crate::error::{HeatError, Result};
use crate::specfun::{gauss_legendre, sphere_volume};

use super::spline::CubicSpline;

/// A shareable real function of one variable.
pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default upper bound on the sampled curvature proxy `(log S)″`.
pub const DEFAULT_Q_MAX: f64 = 1e4;

/// Segments in the arc-length cache of a generating curve.
const ARC_CACHE_SEGMENTS: usize = 4096;

/// Samples used when validating `q` and positivity.
const CHECK_SAMPLES: usize = 2000;

/// Boundary condition at `ρ = L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Boundary {
    /// The profile closes up at an antipodal axis point.
    Closed,
    Dirichlet,
    Neumann,
}

/// Radial geometry around a pole: `S(ρ)` and its log-derivatives.
#[derive(Clone)]
pub struct RadialProfile {
    ambient: usize,
    s: RadialFn,
    b: RadialFn,
    q: RadialFn,
    length: f64,
    noncompact: bool,
    boundary: Boundary,
    label: String,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .field("ambient", &self.ambient)
            .field("length", &self.length)
            .field("noncompact", &self.noncompact)
            .field("boundary", &self.boundary)
            .finish()
    }
}

impl RadialProfile {
    /// Ambient dimension `n`; the manifold itself has dimension `n − 1`.
    pub fn ambient_dimension(&self) -> usize {
        self.ambient
    }

    pub fn intrinsic_dimension(&self) -> usize {
        self.ambient - 1
    }

    /// Leading exponent `m = n − 2` of `S(ρ) ~ c·ρ^m` at the pole.
    pub fn origin_exponent(&self) -> usize {
        self.ambient - 2
    }

    /// Length of the radial domain: `L` for compact profiles, `R_work` otherwise.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Geodesic diameter; `∞` for model manifolds truncated at a working radius.
    pub fn diameter(&self) -> f64 {
        if self.noncompact {
            f64::INFINITY
        } else {
            self.length
        }
    }

    pub fn is_noncompact(&self) -> bool {
        self.noncompact
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Surface volume `S(ρ)` of the geodesic sphere of radius `ρ`.
    pub fn s(&self, rho: f64) -> f64 {
        (self.s)(rho)
    }

    /// Drift `(log S)′(ρ)`.
    pub fn b(&self, rho: f64) -> f64 {
        (self.b)(rho)
    }

    /// Curvature proxy `(log S)″(ρ)`.
    pub fn q(&self, rho: f64) -> f64 {
        (self.q)(rho)
    }

    /// `∫_a^b S(ρ) dρ` by a fixed 8-point Gauss rule on each half.
    pub fn shell_volume(&self, a: f64, b: f64) -> f64 {
        let (x, w) = gauss_rule();
        let mut sum = 0.0;
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            for (xi, wi) in x.iter().zip(w) {
                sum += h * wi * self.s(c + h * xi);
            }
        }
        sum
    }

    /// Replace the boundary kind (for example to turn a cap into a Neumann problem).
    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        if (self.boundary == Boundary::Closed || boundary == Boundary::Closed)
            && self.boundary != boundary
        {
            return Err(HeatError::BoundaryMismatch(format!(
                "cannot change boundary {:?} to {:?}",
                self.boundary, boundary
            )));
        }
        if self.noncompact && boundary == Boundary::Dirichlet {
            return Err(HeatError::BoundaryMismatch(
                "noncompact profiles use a Neumann far boundary".into(),
            ));
        }
        self.boundary = boundary;
        Ok(self)
    }

    /// Check positivity of `S` and the upper bound on `q` on a sampled grid.
    fn validate(self, q_max: f64) -> Result<Self> {
        let l = self.length;
        let delta = 1e-3 * l;
        for i in 0..=CHECK_SAMPLES {
            let rho = delta + (l - 2.0 * delta) * i as f64 / CHECK_SAMPLES as f64;
            let s = self.s(rho);
            if !(s > 0.0) || !s.is_finite() {
                return Err(HeatError::ProfileRejected(format!(
                    "S({rho}) = {s} is not positive"
                )));
            }
            let q = self.q(rho);
            if !q.is_finite() || q > q_max {
                return Err(HeatError::ProfileRejected(format!(
                    "(log S)'' = {q:e} at rho = {rho} exceeds q_max = {q_max:e}"
                )));
            }
        }
        Ok(self)
    }
}

fn gauss_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: std::sync::OnceLock<(Vec<f64>, Vec<f64>)> = std::sync::OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

/// Round sphere of radius `R` in `ℝⁿ` (an `(n−1)`-sphere) seen from a pole.
pub fn sphere_profile(radius: f64, n: usize) -> Result<RadialProfile> {
    if n < 2 {
        return Err(HeatError::domain("sphere_profile", "n must be >= 2"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(HeatError::domain(
            "sphere_profile",
            "radius must be positive",
        ));
    }
    let m = (n - 2) as f64;
    let area = sphere_volume(n - 2);
    let r = radius;
    Ok(RadialProfile {
        ambient: n,
        s: Arc::new(move |rho| area * (r * (rho / r).sin()).powi(n as i32 - 2)),
        b: Arc::new(move |rho| m / (r * (rho / r).tan())),
        q: Arc::new(move |rho| -m / (r * (rho / r).sin()).powi(2)),
        length: std::f64::consts::PI * r,
        noncompact: false,
        boundary: Boundary::Closed,
        label: format!("sphere(R={radius}, n={n})"),
    })
}

/// First and second derivatives by fourth-order differences, falling back to
/// one-sided stencils within `2h` of `lo`/`hi`.
fn fd_derivatives(f: &dyn Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let h = (1e-3 * span)
        .min(((x - lo).min(hi - x)) / 8.0)
        .max(1e-4 * span);
    if x - 2.0 * h >= lo && x + 2.0 * h <= hi {
        let (m2, m1, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h));
        let f0 = f(x);
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * f0 + 16.0 * p1 - p2) / (12.0 * h * h);
        (d1, d2)
    } else {
        // Forward (or backward) fourth-order stencils.
        let sgn = if x - 2.0 * h < lo { 1.0 } else { -1.0 };
        let g = |k: f64| f(x + sgn * k * h);
        let (f0, f1, f2, f3, f4, f5) = (g(0.0), g(1.0), g(2.0), g(3.0), g(4.0), g(5.0));
        let d1 = (-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) / (12.0 * h);
        let d2 = (45.0 * f0 - 154.0 * f1 + 214.0 * f2 - 156.0 * f3 + 61.0 * f4 - 10.0 * f5)
            / (12.0 * h * h);
        (sgn * d1, d2)
    }
}

/// A generating curve `s ↦ (r(s), z(s))` in the half-plane `r ≥ 0`.
///
/// The parameter need not be arc length. Derivatives may be supplied;
/// otherwise they are taken by finite differences.
#[derive(Clone)]
pub struct GeneratingCurve {
    pub r: RadialFn,
    pub z: RadialFn,
    pub s_max: f64,
    /// `(r′, r″, z′, z″)` in the curve parameter.
    pub derivatives: Option<[RadialFn; 4]>,
}

impl GeneratingCurve {
    pub fn new(
        r: impl Fn(f64) -> f64 + Send + Sync + 'static,
        z: impl Fn(f64) -> f64 + Send + Sync + 'static,
        s_max: f64,
    ) -> Self {
        GeneratingCurve {
            r: Arc::new(r),
            z: Arc::new(z),
            s_max,
            derivatives: None,
        }
    }

    pub fn with_derivatives(mut self, d: [RadialFn; 4]) -> Self {
        self.derivatives = Some(d);
        self
    }

    /// Meridian of the ellipsoid with equatorial semi-axis `a` and polar semi-axis `c`,
    /// from the south pole to the north pole.
    pub fn ellipsoid(a: f64, c: f64) -> Self {
        GeneratingCurve::new(
            move |s| a * s.sin(),
            move |s| -c * s.cos(),
            std::f64::consts::PI,
        )
        .with_derivatives([
            Arc::new(move |s| a * s.cos()),
            Arc::new(move |s| -a * s.sin()),
            Arc::new(move |s| c * s.sin()),
            Arc::new(move |s| c * s.cos()),
        ])
    }

    /// Unit-sphere meridian from the south pole up to polar angle `angle`.
    pub fn spherical_cap(angle: f64) -> Self {
        let mut c = GeneratingCurve::ellipsoid(1.0, 1.0);
        c.s_max = angle;
        c
    }

    /// Derivatives `(r′, r″, z′, z″)` at parameter `s`.
    fn derivs(&self, s: f64) -> [f64; 4] {
        match &self.derivatives {
            Some(d) => [d[0](s), d[1](s), d[2](s), d[3](s)],
            None => {
                let (r1, r2) = fd_derivatives(&*self.r, s, 0.0, self.s_max);
                let (z1, z2) = fd_derivatives(&*self.z, s, 0.0, self.s_max);
                [r1, r2, z1, z2]
            }
        }
    }

    /// Read a curve from CSV with header row and columns `s`, `r`, `z`;
    /// rows are interpolated by natural cubic splines.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| HeatError::Parse(e.to_string()))?
            .clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| HeatError::Parse(format!("missing column '{name}'")))
        };
        let (is, ir, iz) = (col("s")?, col("r")?, col("z")?);
        let (mut s, mut r, mut z) = (Vec::new(), Vec::new(), Vec::new());
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| HeatError::Parse(e.to_string()))?;
            let field = |i: usize| -> Result<f64> {
                let raw = rec.get(i).unwrap_or("").trim();
                raw.parse::<f64>()
                    .map_err(|_| HeatError::Parse(format!("row {}: bad number '{raw}'", line + 2)))
            };
            s.push(field(is)?);
            r.push(field(ir)?);
            z.push(field(iz)?);
        }
        if s.len() < 4 {
            return Err(HeatError::Parse("need at least 4 rows".into()));
        }
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(HeatError::Parse(
                "column s must be strictly increasing".into(),
            ));
        }
        if s[0] != 0.0 {
            return Err(HeatError::Parse("column s must start at 0".into()));
        }
        let s_max = *s.last().unwrap();
        let rs = Arc::new(CubicSpline::natural(&s, &r));
        let zs = Arc::new(CubicSpline::natural(&s, &z));
        let (r0, r1, r2) = (rs.clone(), rs.clone(), rs.clone());
        let (z0, z1, z2) = (zs.clone(), zs.clone(), zs);
        Ok(
            GeneratingCurve::new(move |x| r0.eval(x), move |x| z0.eval(x), s_max).with_derivatives(
                [
                    Arc::new(move |x| r1.derivative(x)),
                    Arc::new(move |x| r2.second_derivative(x)),
                    Arc::new(move |x| z1.derivative(x)),
                    Arc::new(move |x| z2.second_derivative(x)),
                ],
            ),
        )
    }
}

/// Arc-length reparametrization of a curve: tabulated `ρ(s_j)` with
/// Hermite inversion `ρ ↦ s`.
struct ArcCache {
    s: Vec<f64>,
    rho: Vec<f64>,
    dsdrho: Vec<f64>,
}

impl ArcCache {
    fn build(curve: &GeneratingCurve) -> Result<Self> {
        let speed = |s: f64| {
            let d = curve.derivs(s);
            d[0].hypot(d[2])
        };
        let n = ARC_CACHE_SEGMENTS;
        let mut s = Vec::with_capacity(n + 1);
        let mut rho = Vec::with_capacity(n + 1);
        let mut dsdrho = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        for j in 0..=n {
            let sj = curve.s_max * j as f64 / n as f64;
            if j > 0 {
                let (x, w) = gauss_rule();
                let (c, h) = (0.5 * (s[j - 1] + sj), 0.5 * (sj - s[j - 1]));
                acc += x
                    .iter()
                    .zip(w)
                    .map(|(xi, wi)| h * wi * speed(c + h * xi))
                    .sum::<f64>();
            }
            let sigma = speed(sj);
            if !(sigma > 0.0) || !sigma.is_finite() {
                return Err(HeatError::ProfileRejected(format!(
                    "curve is not regular at s = {sj} (speed {sigma})"
                )));
            }
            s.push(sj);
            rho.push(acc);
            dsdrho.push(1.0 / sigma);
        }
        Ok(ArcCache { s, rho, dsdrho })
    }

    fn length(&self) -> f64 {
        *self.rho.last().unwrap()
    }

    fn s_of_rho(&self, rho: f64) -> f64 {
        let rho = rho.clamp(0.0, self.length());
        let j = match self.rho.binary_search_by(|x| x.partial_cmp(&rho).unwrap()) {
            Ok(j) => return self.s[j],
            Err(j) => j.clamp(1, self.rho.len() - 1) - 1,
        };
        let h = self.rho[j + 1] - self.rho[j];
        let u = (rho - self.rho[j]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        h00 * self.s[j]
            + h10 * h * self.dsdrho[j]
            + h01 * self.s[j + 1]
            + h11 * h * self.dsdrho[j + 1]
    }
}

/// Hypersurface of revolution in `ℝⁿ` generated by rotating a curve about the
/// `x_n` axis. The curve must start on the axis; for `Closed` it must end on it too.
pub fn profile_from_curve(
    curve: &GeneratingCurve,
    n: usize,
    boundary: Boundary,
) -> Result<RadialProfile> {
    profile_from_curve_with_qmax(curve, n, boundary, DEFAULT_Q_MAX)
}

pub fn profile_from_curve_with_qmax(
    curve: &GeneratingCurve,
    n: usize,
    boundary: Boundary,
    q_max: f64,
) -> Result<RadialProfile> {
    if n < 2 {
        return Err(HeatError::domain("profile_from_curve", "n must be >= 2"));
    }
    if !(curve.s_max > 0.0) || !curve.s_max.is_finite() {
        return Err(HeatError::domain(
            "profile_from_curve",
            "s_max must be positive",
        ));
    }
    let arc = Arc::new(ArcCache::build(curve)?);
    let length = arc.length();
    let scale = length.max(1.0);
    let axis_tol = 1e-8 * scale;

    for i in 0..=CHECK_SAMPLES {
        let s = curve.s_max * i as f64 / CHECK_SAMPLES as f64;
        let r = (curve.r)(s);
        if r < -axis_tol || !r.is_finite() {
            return Err(HeatError::ProfileRejected(format!(
                "r({s}) = {r} is negative"
            )));
        }
    }
    let r0 = (curve.r)(0.0);
    if r0.abs() > axis_tol {
        return Err(HeatError::ProfileRejected(format!(
            "curve does not start on the axis: r(0) = {r0}"
        )));
    }
    let r_end = (curve.r)(curve.s_max);
    let closes = r_end.abs() <= axis_tol;
    match boundary {
        Boundary::Closed if !closes => {
            return Err(HeatError::ProfileRejected(format!(
                "closed profile must return to the axis, r(s_max) = {r_end}"
            )))
        }
        Boundary::Dirichlet | Boundary::Neumann if closes => {
            return Err(HeatError::ProfileRejected(
                "curve returns to the axis; use a closed boundary".into(),
            ))
        }
        _ => {}
    }

    // r and its ρ-derivatives through the chain rule.
    let c = curve.clone();
    let a = arc.clone();
    let geom = Arc::new(move |rho: f64| -> (f64, f64, f64) {
        let s = a.s_of_rho(rho);
        let r = (c.r)(s);
        let [r1, r2, z1, z2] = c.derivs(s);
        let sigma = r1.hypot(z1);
        let sigma_s = (r1 * r2 + z1 * z2) / sigma;
        let r_rho = r1 / sigma;
        let r_rhorho = (r2 * sigma - r1 * sigma_s) / sigma.powi(3);
        (r, r_rho, r_rhorho)
    });
    let slope0 = geom(0.0).1;
    if (slope0 - 1.0).abs() > 1e-3 {
        return Err(HeatError::ProfileRejected(format!(
            "curve must leave the axis perpendicularly, dr/drho(0) = {slope0}"
        )));
    }
    if closes {
        let slope = geom(length).1;
        if (slope + 1.0).abs() > 1e-3 {
            return Err(HeatError::ProfileRejected(format!(
                "curve must meet the axis perpendicularly, dr/drho(L) = {slope}"
            )));
        }
    }

    let m = (n - 2) as f64;
    let area = sphere_volume(n - 2);
    let (g1, g2, g3) = (geom.clone(), geom.clone(), geom);
    let pow = n as i32 - 2;
    let profile = RadialProfile {
        ambient: n,
        s: Arc::new(move |rho| area * g1(rho).0.max(0.0).powi(pow)),
        b: Arc::new(move |rho| {
            let (r, r1, _) = g2(rho);
            m * r1 / r
        }),
        q: Arc::new(move |rho| {
            let (r, r1, r2) = g3(rho);
            m * (r2 / r - (r1 / r).powi(2))
        }),
        length,
        noncompact: false,
        boundary,
        label: format!("curve(n={n}, L={length:.6})"),
    };
    profile.validate(q_max)
}

/// Spherically symmetric model manifold with metric `dρ² + A(ρ)² dσ²` in
/// intrinsic dimension `n`, truncated at the working radius `R_work`.
/// Derivatives of `A` are taken by finite differences.
pub fn model_profile(
    a: impl Fn(f64) -> f64 + Send + Sync + 'static,
    n: usize,
    r_work: f64,
) -> Result<RadialProfile> {
    let a: RadialFn = Arc::new(a);
    let (a1, a2) = (a.clone(), a.clone());
    let d1: RadialFn = Arc::new(move |x| fd_derivatives(&*a1, x, 0.0, x + 1.0).0);
    let d2: RadialFn = Arc::new(move |x| fd_derivatives(&*a2, x, 0.0, x + 1.0).1);
    model_profile_with_derivatives(a, d1, d2, n, r_work, DEFAULT_Q_MAX)
}

/// [`model_profile`] with analytic `A′` and `A″`.
pub fn model_profile_with_derivatives(
    a: RadialFn,
    a1: RadialFn,
    a2: RadialFn,
    n: usize,
    r_work: f64,
    q_max: f64,
) -> Result<RadialProfile> {
    if n < 2 {
        return Err(HeatError::domain("model_profile", "n must be >= 2"));
    }
    if !(r_work > 0.0) || !r_work.is_finite() {
        return Err(HeatError::domain(
            "model_profile",
            "R_work must be positive",
        ));
    }
    for i in 1..=CHECK_SAMPLES {
        let rho = r_work * i as f64 / CHECK_SAMPLES as f64;
        let v = a(rho);
        if !(v > 1e-10 * rho.max(1.0)) || !v.is_finite() {
            return Err(HeatError::ProfileRejected(format!(
                "A({rho}) = {v} is not positive"
            )));
        }
    }
    let probe = 1e-4 * r_work.min(1.0);
    let ratio = a(probe) / probe;
    if (ratio - 1.0).abs() > 1e-3 {
        return Err(HeatError::ProfileRejected(format!(
            "A(rho)/rho must tend to 1 at the pole, got {ratio}"
        )));
    }
    let m = (n - 1) as f64;
    let area = sphere_volume(n - 1);
    let pow = n as i32 - 1;
    let (ab, a1b) = (a.clone(), a1.clone());
    let (aq, a1q) = (a.clone(), a1);
    let profile = RadialProfile {
        ambient: n + 1,
        s: Arc::new(move |rho| area * a(rho).powi(pow)),
        b: Arc::new(move |rho| m * a1b(rho) / ab(rho)),
        q: Arc::new(move |rho| {
            let v = aq(rho);
            let d = a1q(rho) / v;
            m * (a2(rho) / v - d * d)
        }),
        length: r_work,
        noncompact: true,
        boundary: Boundary::Neumann,
        label: format!("model(n={n}, R_work={r_work})"),
    };
    profile.validate(q_max)
}

/// Euclidean `ℝⁿ` as a model manifold (`A(ρ) = ρ`).
pub fn euclidean_model(n: usize, r_work: f64) -> Result<RadialProfile> {
    let mut p = model_profile_with_derivatives(
        Arc::new(|x| x),
        Arc::new(|_| 1.0),
        Arc::new(|_| 0.0),
        n,
        r_work,
        DEFAULT_Q_MAX,
    )?;
    p.label = format!("euclidean(n={n}, R_work={r_work})");
    Ok(p)
}

/// Hyperbolic space `ℍⁿ` as a model manifold (`A(ρ) = sinh ρ`).
pub fn hyperbolic_model(n: usize, r_work: f64) -> Result<RadialProfile> {
    let mut p = model_profile_with_derivatives(
        Arc::new(f64::sinh),
        Arc::new(f64::cosh),
        Arc::new(f64::sinh),
        n,
        r_work,
        DEFAULT_Q_MAX,
    )?;
    p.label = format!("hyperbolic(n={n}, R_work={r_work})");
    Ok(p)
}
