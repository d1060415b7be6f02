//! Rational B-spline segments with five control points.

use alloc::vec;
use alloc::vec::Vec;

use crate::geom::Vec2;

use super::MidlineError;

/// Control points per segment; each segment is half a fold period.
pub const CONTROL_POINTS: usize = 5;

pub const DEFAULT_DEGREE: usize = 3;

/// One half-period of the midline.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsSegment {
    control_points: [Vec2; CONTROL_POINTS],
    weights: [f64; CONTROL_POINTS],
    degree: usize,
    knots: Vec<f64>,
}

/// Clamped uniform knot vector on `[0, 1]` for five control points.
pub fn clamped_knots(degree: usize) -> Vec<f64> {
    let interior = CONTROL_POINTS - degree - 1;
    let mut knots = vec![0.0; degree + 1];
    for i in 1..=interior {
        knots.push(i as f64 / (interior + 1) as f64);
    }
    knots.extend(core::iter::repeat_n(1.0, degree + 1));
    knots
}

impl NurbsSegment {
    pub fn new(
        control_points: [Vec2; CONTROL_POINTS],
        weights: [f64; CONTROL_POINTS],
        degree: usize,
        knots: Vec<f64>,
    ) -> Result<Self, MidlineError> {
        if degree == 0 || degree >= CONTROL_POINTS {
            return Err(MidlineError::InvalidSegment("degree must be within 1..=4"));
        }
        if knots.len() != CONTROL_POINTS + degree + 1 {
            return Err(MidlineError::InvalidSegment("knot count must be control points + degree + 1"));
        }
        if knots.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(MidlineError::InvalidSegment("knots must be nondecreasing"));
        }
        let m = knots.len();
        if knots[..=degree].iter().any(|&k| k != 0.0) || knots[m - degree - 1..].iter().any(|&k| k != 1.0) {
            return Err(MidlineError::InvalidSegment("knot vector must be clamped to [0, 1]"));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(MidlineError::InvalidSegment("weights must be positive"));
        }
        Ok(Self { control_points, weights, degree, knots })
    }

    /// Cubic segment on the clamped knot vector `[0,0,0,0,0.5,1,1,1,1]`.
    pub fn cubic(control_points: [Vec2; CONTROL_POINTS], weights: [f64; CONTROL_POINTS]) -> Result<Self, MidlineError> {
        Self::new(control_points, weights, DEFAULT_DEGREE, clamped_knots(DEFAULT_DEGREE))
    }

    pub fn control_points(&self) -> &[Vec2; CONTROL_POINTS] {
        &self.control_points
    }

    pub fn weights(&self) -> &[f64; CONTROL_POINTS] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Index `k` of the knot span with `U[k] <= u < U[k+1]`; `u = 1` maps to
    /// the last non-empty span.
    fn span(&self, u: f64) -> usize {
        let n = CONTROL_POINTS - 1;
        if u >= self.knots[n + 1] {
            return n;
        }
        let mut k = self.degree;
        while k < n && u >= self.knots[k + 1] {
            k += 1;
        }
        k
    }

    /// Evaluates the segment at `u ∈ [0, 1]` by de Boor's algorithm on
    /// homogeneous coordinates.
    pub fn eval(&self, u: f64) -> Result<Vec2, MidlineError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(MidlineError::ParameterOutOfRange(u));
        }
        Ok(self.eval_unchecked(u))
    }

    pub(crate) fn eval_unchecked(&self, u: f64) -> Vec2 {
        let p = self.degree;
        let k = self.span(u);
        let mut d = [[0.0f64; 3]; CONTROL_POINTS];
        for (j, slot) in d.iter_mut().enumerate().take(p + 1) {
            let i = j + k - p;
            let w = self.weights[i];
            let cp = self.control_points[i];
            *slot = [cp.x * w, cp.y * w, w];
        }
        for r in 1..=p {
            for j in (r..=p).rev() {
                let lo = self.knots[j + k - p];
                let hi = self.knots[j + 1 + k - r];
                let alpha = if hi > lo { (u - lo) / (hi - lo) } else { 0.0 };
                let prev = d[j - 1];
                for (c, p) in d[j].iter_mut().zip(prev) {
                    *c = (1.0 - alpha) * p + alpha * *c;
                }
            }
        }
        let [x, y, w] = d[p];
        Vec2::new(x / w, y / w)
    }

    /// Rational basis values `R_i(u)` for all five control points.
    pub fn rational_basis(&self, u: f64) -> Result<[f64; CONTROL_POINTS], MidlineError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(MidlineError::ParameterOutOfRange(u));
        }
        let p = self.degree;
        let k = self.span(u);
        // Nonzero B-spline values N_{k-p..=k} by the triangular recurrence.
        let mut n = [0.0f64; CONTROL_POINTS];
        let mut left = [0.0f64; CONTROL_POINTS];
        let mut right = [0.0f64; CONTROL_POINTS];
        n[0] = 1.0;
        for j in 1..=p {
            left[j] = u - self.knots[k + 1 - j];
            right[j] = self.knots[k + j] - u;
            let mut saved = 0.0;
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = if denom != 0.0 { n[r] / denom } else { 0.0 };
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
        }
        let mut out = [0.0; CONTROL_POINTS];
        let mut total = 0.0;
        for (j, nj) in n.iter().enumerate().take(p + 1) {
            let i = k - p + j;
            out[i] = nj * self.weights[i];
            total += out[i];
        }
        for v in &mut out {
            *v /= total;
        }
        Ok(out)
    }
}
