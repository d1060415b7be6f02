//! Inextensible tilted-cone bending model.
//!
//! The deployed actuator is approximated by a tilted cone with base radius
//! `r`. Its two opposed walls keep their rest arc lengths `s0` and `s1`:
//!
//! ```text
//! s1² = h² + (x + r)²
//! s0² = h² + (x − r)²
//! ```
//!
//! Subtracting gives the transverse reach `x = (s1² − s0²) / 4r`, and the
//! axial projection follows from the second relation. The model ignores
//! material strain, so it does not capture the plateau seen at large arc
//! length ratios.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::ValidatedDesign;
use crate::math;
use crate::solid::{interpolate_sections, placed_midline, SolidError};

/// Relative residual every returned prediction satisfies.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BendInputs {
    /// Arc length of the shorter wall, in mm.
    pub s0: f64,
    /// Arc length of the opposed wall, in mm.
    pub s1: f64,
    /// Base radius, in mm.
    pub r: f64,
    /// Rest height for the axial ratio, in mm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BendPrediction {
    /// Transverse reach of the tip from the base centre, in mm.
    pub x: f64,
    /// Axial projection, in mm.
    pub h: f64,
    pub theta_deg: f64,
    /// `h / h0` when a rest height was supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axial_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BendError {
    #[error("{name} must be positive and finite (got {value})")]
    NonPositive { name: &'static str, value: f64 },
    #[error("s1 ({s1}) must not be shorter than s0 ({s0})")]
    Unordered { s0: f64, s1: f64 },
    #[error("no tilted cone fits: x = {x}, r = {r} gives (x - r)^2 = {gap_sq} > s0^2 = {s0_sq}")]
    Infeasible { x: f64, r: f64, gap_sq: f64, s0_sq: f64 },
    #[error("back-substitution residual {0} exceeds tolerance")]
    Residual(f64),
    #[error(transparent)]
    Generation(#[from] SolidError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, BendError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(BendError::NonPositive { name, value })
    }
}

/// Largest relative residual of the two cone relations.
pub fn residual(inputs: &BendInputs, p: &BendPrediction) -> f64 {
    let h2 = p.h * p.h;
    let r1 = (h2 + (p.x + inputs.r) * (p.x + inputs.r) - inputs.s1 * inputs.s1).abs() / (inputs.s1 * inputs.s1);
    let r0 = (h2 + (p.x - inputs.r) * (p.x - inputs.r) - inputs.s0 * inputs.s0).abs() / (inputs.s0 * inputs.s0);
    r0.max(r1)
}

/// Solves the cone relations for reach, height and bend angle.
pub fn solve_tilted_cone(inputs: &BendInputs) -> Result<BendPrediction, BendError> {
    let s0 = positive("s0", inputs.s0)?;
    let s1 = positive("s1", inputs.s1)?;
    let r = positive("r", inputs.r)?;
    let h0 = inputs.h0.map(|h| positive("h0", h)).transpose()?;
    if s1 < s0 {
        return Err(BendError::Unordered { s0, s1 });
    }
    // Factored to keep x exactly zero when the walls match.
    let x = (s1 - s0) * (s1 + s0) / (4.0 * r);
    let gap = x - r;
    let (gap_sq, s0_sq) = (gap * gap, s0 * s0);
    if gap_sq > s0_sq {
        return Err(BendError::Infeasible { x, r, gap_sq, s0_sq });
    }
    let h = math::sqrt((s0 - gap.abs()) * (s0 + gap.abs()));
    let p = BendPrediction { x, h, theta_deg: math::to_degrees(math::atan2(x, h)), axial_ratio: h0.map(|h0| h / h0) };
    let res = residual(inputs, &p);
    if !(res < RESIDUAL_TOLERANCE) {
        return Err(BendError::Residual(res));
    }
    Ok(p)
}

/// Opposed wall lengths and cone dimensions read off a design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpposedArcs {
    /// Midline arc length at `theta_a`.
    pub s_a: f64,
    /// Midline arc length at `theta_a + 180°`.
    pub s_b: f64,
    /// Mean midline radius of the two planes.
    pub r: f64,
    /// Larger z-extent of the two folded midlines.
    pub h0: f64,
}

impl OpposedArcs {
    /// `s1 / s0` with the longer wall on top.
    pub fn ratio(&self) -> f64 {
        self.s_a.max(self.s_b) / self.s_a.min(self.s_b)
    }

    pub fn inputs(&self) -> BendInputs {
        BendInputs { s0: self.s_a.min(self.s_b), s1: self.s_a.max(self.s_b), r: self.r, h0: Some(self.h0) }
    }
}

/// Measures the midlines on the plane at `theta_a` and the plane opposite it.
pub fn opposed_arcs(design: &ValidatedDesign, theta_a: f64) -> Result<OpposedArcs, BendError> {
    let res = design.resolution();
    let a = interpolate_sections(design.sections(), theta_a);
    let b = interpolate_sections(design.sections(), theta_a + 180.0);
    let ma = placed_midline(&a, res.samples_per_segment, design.hub_radius())?;
    let mb = placed_midline(&b, res.samples_per_segment, design.hub_radius())?;
    Ok(OpposedArcs {
        s_a: ma.total_length(),
        s_b: mb.total_length(),
        r: 0.5 * (a.midline.radius + b.midline.radius),
        h0: ma.z_extent().max(mb.z_extent()),
    })
}

/// Predicts the bend of a design from its opposed midline arc lengths.
pub fn predict_from_design(design: &ValidatedDesign, theta_a: f64) -> Result<BendPrediction, BendError> {
    solve_tilted_cone(&opposed_arcs(design, theta_a)?.inputs())
}

/// Signed relative change `(l1 - l0) / l0`.
pub fn expansion_ratio(l0: f64, l1: f64) -> Result<f64, BendError> {
    let l0 = positive("l0", l0)?;
    Ok((l1 - l0) / l0)
}

/// Predictions for `s1 = ratio · s0` over each ratio.
pub fn ratio_sweep(s0: f64, r: f64, h0: Option<f64>, ratios: &[f64]) -> Result<Vec<(f64, BendPrediction)>, BendError> {
    ratios.iter().map(|&k| solve_tilted_cone(&BendInputs { s0, s1: k * s0, r, h0 }).map(|p| (k, p))).collect()
}
