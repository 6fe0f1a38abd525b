/// Natural cubic spline through tabulated points.
#[derive(Debug, Clone)]
pub(crate) struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// `x` must be strictly increasing with at least two points.
    pub(crate) fn natural(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives.
            let mut diag = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            let mut upper = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 2..n - 1 {
                let lower = x[i] - x[i - 1];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            for i in (1..n - 1).rev() {
                m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
            }
        }
        CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        }
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let n = self.x.len();
        let j = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(j) => j.min(n - 2),
            Err(j) => j.clamp(1, n - 1) - 1,
        };
        let h = self.x[j + 1] - self.x[j];
        (j, h, (t - self.x[j]) / h)
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let (j, h, u) = self.locate(t);
        let a = 1.0 - u;
        a * self.y[j]
            + u * self.y[j + 1]
            + h * h / 6.0 * ((a * a * a - a) * self.m[j] + (u * u * u - u) * self.m[j + 1])
    }

    pub(crate) fn derivative(&self, t: f64) -> f64 {
        let (j, h, u) = self.locate(t);
        let a = 1.0 - u;
        (self.y[j + 1] - self.y[j]) / h
            + h / 6.0 * (-(3.0 * a * a - 1.0) * self.m[j] + (3.0 * u * u - 1.0) * self.m[j + 1])
    }

    pub(crate) fn second_derivative(&self, t: f64) -> f64 {
        let (j, _, u) = self.locate(t);
        (1.0 - u) * self.m[j] + u * self.m[j + 1]
    }
}
