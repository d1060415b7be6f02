//! The 1D midline: a chain of rational cubic segments in the (ρ, z) plane.
//!
//! Segments run from the outer radius inward, alternating peak→valley and
//! valley→peak. Control points are indexed by role rather than travel order:
//! CP1 is the peak endpoint, CP5 the valley endpoint, CP3 the central point
//! and CP2/CP4 sit next to the peak and valley. The layout is built in a local
//! frame with ρ ∈ [0, radius]; [`Midline::offset_radially`] moves it onto the
//! hub.

mod nurbs;

use alloc::vec::Vec;

use thiserror::Error;

pub use nurbs::{clamped_knots, NurbsSegment, CONTROL_POINTS, DEFAULT_DEGREE};

use crate::design::MidlineParams;
use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MidlineError {
    #[error("invalid NURBS segment: {0}")]
    InvalidSegment(&'static str),
    #[error("parameter u = {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("samples_per_segment must be >= 8, got {0}")]
    TooFewSamples(usize),
    #[error("midline has no samples")]
    Empty,
    #[error("consecutive midline samples {0} and {1} coincide")]
    CoincidentSamples(usize, usize),
    #[error("arc coordinates {from}..{to} are outside [0, {total}]")]
    ArcRangeOutOfBounds { from: f64, to: f64, total: f64 },
    #[error("invalid midline parameters: {0}")]
    InvalidParams(&'static str),
}

/// Role of a control point within its segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlRole {
    /// CP1, the peak endpoint.
    Peak,
    /// CP2, adjacent to the peak.
    PeakAdjacent,
    /// CP3, the central point.
    Center,
    /// CP4, adjacent to the valley.
    ValleyAdjacent,
    /// CP5, the valley endpoint.
    Valley,
}

/// Placement of one segment inside a [`Midline`].
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentLayout {
    pub nurbs: NurbsSegment,
    /// `true` when the segment travels peak→valley.
    pub starts_at_peak: bool,
    /// Index of the first and last sample belonging to the segment.
    pub first_sample: usize,
    pub last_sample: usize,
}

impl SegmentLayout {
    /// Control point index (travel order) holding the given role.
    pub fn index_of(&self, role: ControlRole) -> usize {
        let forward = match role {
            ControlRole::Peak => 0,
            ControlRole::PeakAdjacent => 1,
            ControlRole::Center => 2,
            ControlRole::ValleyAdjacent => 3,
            ControlRole::Valley => 4,
        };
        if self.starts_at_peak {
            forward
        } else {
            4 - forward
        }
    }

    pub fn control_point(&self, role: ControlRole) -> Vec2 {
        self.nurbs.control_points()[self.index_of(role)]
    }

    /// Sample index nearest to the given control point, lowest index on ties.
    pub fn nearest_sample(&self, samples: &[Vec2], role: ControlRole) -> usize {
        let target = self.control_point(role);
        let mut best = self.first_sample;
        let mut best_d = f64::INFINITY;
        for (i, s) in samples.iter().enumerate().take(self.last_sample + 1).skip(self.first_sample) {
            let d = s.distance(target);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

/// Sampled midline with cumulative arc-length coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Midline {
    samples: Vec<Vec2>,
    arc_coords: Vec<f64>,
    segment_index: Vec<usize>,
    segments: Vec<SegmentLayout>,
}

fn cumulative_arc(samples: &[Vec2]) -> Result<Vec<f64>, MidlineError> {
    if samples.is_empty() {
        return Err(MidlineError::Empty);
    }
    let mut arc = Vec::with_capacity(samples.len());
    arc.push(0.0);
    for i in 1..samples.len() {
        let d = samples[i].distance(samples[i - 1]);
        if !(d > 0.0) {
            return Err(MidlineError::CoincidentSamples(i - 1, i));
        }
        arc.push(arc[i - 1] + d);
    }
    Ok(arc)
}

impl Midline {
    /// A midline without segment structure, e.g. a straight test polyline.
    pub fn from_points(samples: Vec<Vec2>) -> Result<Self, MidlineError> {
        let arc_coords = cumulative_arc(&samples)?;
        let segment_index = alloc::vec![0; samples.len()];
        Ok(Self { samples, arc_coords, segment_index, segments: Vec::new() })
    }

    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }

    pub fn arc_coords(&self) -> &[f64] {
        &self.arc_coords
    }

    pub fn segment_index(&self) -> &[usize] {
        &self.segment_index
    }

    pub fn segments(&self) -> &[SegmentLayout] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        *self.arc_coords.last().expect("midline is never empty")
    }

    /// Polyline length between two arc coordinates.
    pub fn arc_length(&self, s_from: f64, s_to: f64) -> Result<f64, MidlineError> {
        let total = self.total_length();
        if !(0.0 <= s_from && s_from <= s_to && s_to <= total) {
            return Err(MidlineError::ArcRangeOutOfBounds { from: s_from, to: s_to, total });
        }
        Ok(s_to - s_from)
    }

    /// Arc length of one segment.
    pub fn segment_length(&self, segment: usize) -> f64 {
        let s = &self.segments[segment];
        self.arc_coords[s.last_sample] - self.arc_coords[s.first_sample]
    }

    /// Peak-to-valley envelope along z.
    pub fn z_extent(&self) -> f64 {
        let (lo, hi) =
            self.samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
        hi - lo
    }

    /// Shifts samples and control points by `dr` along ρ.
    pub fn offset_radially(mut self, dr: f64) -> Self {
        let shift = Vec2::new(dr, 0.0);
        for s in &mut self.samples {
            *s = *s + shift;
        }
        for seg in &mut self.segments {
            let cps = seg.nurbs.control_points().map(|p| p + shift);
            seg.nurbs = NurbsSegment::new(cps, *seg.nurbs.weights(), seg.nurbs.degree(), seg.nurbs.knots().to_vec())
                .expect("shifting preserves segment validity");
        }
        self
    }
}

/// Control points of every segment in the local frame, in travel order.
pub fn segment_control_points(params: &MidlineParams) -> Result<Vec<([Vec2; CONTROL_POINTS], bool)>, MidlineError> {
    let n = params.num_curves;
    if n == 0 || params.period_scaling.len() != n || params.amplitude_scaling.len() != n {
        return Err(MidlineError::InvalidParams("scaling lists must have num_curves entries"));
    }
    if !(params.amplitude > 0.0 && params.radius > 0.0 && params.curve_weight > 0.0) {
        return Err(MidlineError::InvalidParams("amplitude, radius and curve_weight must be positive"));
    }
    let total: f64 = params.period_scaling.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut cum = 0.0;
    let mut z = 0.0;
    for i in 0..n {
        let rho_a = params.radius * (1.0 - cum / total);
        cum += params.period_scaling[i];
        let rho_b = if i + 1 == n { 0.0 } else { params.radius * (1.0 - cum / total) };
        let starts_at_peak = i % 2 == 0;
        let rise = params.amplitude * params.amplitude_scaling[i];
        let z_b = if starts_at_peak { z - rise } else { z + rise };
        let span = rho_a - rho_b;
        let half = 0.5 * span;
        let pv = params.peak_valley_offset * half;
        let a = Vec2::new(rho_a, z);
        let b = Vec2::new(rho_b, z_b);
        let near_a = Vec2::new(rho_a - 0.25 * span + pv, z);
        let center = Vec2::new(0.5 * (rho_a + rho_b) + params.center_offset * half, 0.5 * (z + z_b));
        let near_b = Vec2::new(rho_b + 0.25 * span - pv, z_b);
        out.push(([a, near_a, center, near_b, b], starts_at_peak));
        z = z_b;
    }
    Ok(out)
}

/// Builds and samples the midline in its local frame.
pub fn build_midline(params: &MidlineParams, samples_per_segment: usize) -> Result<Midline, MidlineError> {
    if samples_per_segment < 8 {
        return Err(MidlineError::TooFewSamples(samples_per_segment));
    }
    let layouts = segment_control_points(params)?;
    let w = params.curve_weight;
    let weights = [1.0, w, 1.0, w, 1.0];
    let n = layouts.len();
    let mut samples = Vec::with_capacity(n * samples_per_segment + 1);
    let mut segment_index = Vec::with_capacity(samples.capacity());
    let mut segments = Vec::with_capacity(n);
    for (i, (cps, starts_at_peak)) in layouts.into_iter().enumerate() {
        let nurbs = NurbsSegment::cubic(cps, weights)?;
        let first_sample = if i == 0 { 0 } else { samples.len() - 1 };
        let start = if i == 0 { 0 } else { 1 };
        for j in start..=samples_per_segment {
            let u = j as f64 / samples_per_segment as f64;
            let p = if j == samples_per_segment { cps[4] } else { nurbs.eval_unchecked(u) };
            samples.push(if j == 0 { cps[0] } else { p });
            segment_index.push(i);
        }
        segments.push(SegmentLayout { nurbs, starts_at_peak, first_sample, last_sample: samples.len() - 1 });
    }
    let arc_coords = cumulative_arc(&samples)?;
    Ok(Midline { samples, arc_coords, segment_index, segments })
}
