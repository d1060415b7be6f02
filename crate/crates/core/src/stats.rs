//! Small numeric helpers shared by the sweep analytics.

use crate::math;

/// Ordinary least-squares line through `(x, y)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for two points or an exact fit.
    pub slope_stderr: f64,
}

/// Fits `y = slope·x + intercept`. `None` for mismatched lengths, fewer than
/// two points, or no spread in `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if n > 2 {
        let sse: f64 =
            xs.iter().zip(ys).map(|(&x, &y)| (y - slope * x - intercept) * (y - slope * x - intercept)).sum();
        math::sqrt(sse / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    Some(LinearFit { slope, intercept, slope_stderr })
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    linear_fit(xs, ys).map(|f| f.slope)
}

/// Trapezoidal integral of `ys` over `xs`.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}
