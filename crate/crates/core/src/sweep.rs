//! One-factor-at-a-time design sweep, geometric metrics and sensitivity fits.
//!
//! The metrics are geometric proxies computed from the generated shell and the
//! tilted-cone model; they are not inflation measurements.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bend::{expansion_ratio, opposed_arcs, solve_tilted_cone, BendError, BendPrediction, OpposedArcs};
use crate::design::{
    standard_factors, DesignParams, Factor, FactorCode, FactorError, Level, ValidatedDesign, Violation,
};
use crate::solid::{frame_angles, loft, mesh_diagnostics, radial_extent, MeshReport, SolidError, TriMesh};
use crate::stats::{linear_fit, trapezoid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("{id} fails validation: {}", join(violations))]
    Invalid { id: String, violations: Vec<Violation> },
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Solid(#[from] SolidError),
    #[error(transparent)]
    Bend(#[from] BendError),
    #[error("generated mesh is not watertight ({boundary} boundary, {nonmanifold} non-manifold edges)")]
    NotWatertight { boundary: usize, nonmanifold: usize },
    #[error("sweep table has no successful baseline row")]
    MissingBaseline,
    #[error("sweep table has no successful {factor}-{} row", level.as_str())]
    MissingLevel { factor: FactorCode, level: Level },
    #[error("contact analysis needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("displacement decreases at sample {0}")]
    DecreasingDisplacement(usize),
    #[error("displacement has no spread")]
    NoDisplacementSpread,
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Baseline plus factor list, as read from a sweep spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub baseline: DesignParams,
    pub factors: Vec<Factor>,
}

impl SweepSpec {
    /// Baseline preset with the seven standard factors.
    pub fn standard() -> Self {
        Self { baseline: crate::design::baseline(), factors: standard_factors() }
    }
}

/// One design of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct DoeDesign {
    /// `BAS` or `<CODE>-<low|high>`.
    pub id: String,
    pub variant: Option<(FactorCode, Level)>,
    pub design: ValidatedDesign,
}

impl DoeDesign {
    /// Coded level: 0 for the baseline, ∓1 for low and high.
    pub fn coded_level(&self) -> f64 {
        self.variant.map_or(0.0, |(_, l)| l.coded())
    }
}

fn variant_id(code: FactorCode, level: Level) -> String {
    let mut s = String::from(code.as_str());
    s.push('-');
    s.push_str(level.as_str());
    s
}

/// Baseline first, then each factor's low and high variant in list order.
pub fn generate_doe(base: &DesignParams, factors: &[Factor]) -> Result<Vec<DoeDesign>, SweepError> {
    let check = |id: String, p: DesignParams| {
        p.validate().map_err(|violations| SweepError::Invalid { id: id.clone(), violations }).map(|design| (id, design))
    };
    let mut out = Vec::with_capacity(1 + 2 * factors.len());
    let (id, design) = check(String::from("BAS"), base.clone())?;
    out.push(DoeDesign { id, variant: None, design });
    for f in factors {
        for level in [Level::Low, Level::High] {
            let (id, design) = check(variant_id(f.code, level), f.apply(base, level)?)?;
            out.push(DoeDesign { id, variant: Some((f.code, level)), design });
        }
    }
    Ok(out)
}

/// Metric columns of the sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    AxialExpansionRatio,
    RadialExpansionRatio,
    #[serde(rename = "mesh_volume_mm3")]
    MeshVolume,
    ArcLengthRatio,
    #[serde(rename = "bend_theta_deg")]
    BendTheta,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Self::AxialExpansionRatio,
        Self::RadialExpansionRatio,
        Self::MeshVolume,
        Self::ArcLengthRatio,
        Self::BendTheta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AxialExpansionRatio => "axial_expansion_ratio",
            Self::RadialExpansionRatio => "radial_expansion_ratio",
            Self::MeshVolume => "mesh_volume_mm3",
            Self::ArcLengthRatio => "arc_length_ratio",
            Self::BendTheta => "bend_theta_deg",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Geometric performance proxies of one design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepMetrics {
    /// Mean opposed midline length against the folded height.
    pub axial_expansion_ratio: f64,
    /// Outer shell radius against the midline radius.
    pub radial_expansion_ratio: f64,
    pub mesh_volume_mm3: f64,
    /// Longer over shorter opposed midline length on the bend plane.
    pub arc_length_ratio: f64,
    pub bend_theta_deg: f64,
}

impl SweepMetrics {
    pub fn get(&self, m: Metric) -> f64 {
        match m {
            Metric::AxialExpansionRatio => self.axial_expansion_ratio,
            Metric::RadialExpansionRatio => self.radial_expansion_ratio,
            Metric::MeshVolume => self.mesh_volume_mm3,
            Metric::ArcLengthRatio => self.arc_length_ratio,
            Metric::BendTheta => self.bend_theta_deg,
        }
    }

    pub fn set(&mut self, m: Metric, v: f64) {
        match m {
            Metric::AxialExpansionRatio => self.axial_expansion_ratio = v,
            Metric::RadialExpansionRatio => self.radial_expansion_ratio = v,
            Metric::MeshVolume => self.mesh_volume_mm3 = v,
            Metric::ArcLengthRatio => self.arc_length_ratio = v,
            Metric::BendTheta => self.bend_theta_deg = v,
        }
    }
}

/// Everything the pipeline produces for one design.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub mesh: TriMesh,
    pub report: MeshReport,
    /// Frame angle in [0°, 180°) whose opposed pair differs most in length.
    pub bend_plane_deg: f64,
    pub arcs: OpposedArcs,
    pub bend: BendPrediction,
    pub metrics: SweepMetrics,
}

/// Bend plane and opposed arcs; the lowest angle wins ties.
pub fn bend_plane(design: &ValidatedDesign) -> Result<(f64, OpposedArcs), SweepError> {
    let mut best: Option<(f64, OpposedArcs)> = None;
    for theta in frame_angles(design).into_iter().filter(|&t| t < 180.0) {
        let arcs = opposed_arcs(design, theta)?;
        if best.as_ref().is_none_or(|(_, b)| arcs.ratio() > b.ratio()) {
            best = Some((theta, arcs));
        }
    }
    Ok(best.expect("a full revolution has a frame below 180 degrees"))
}

/// Runs midline, cross-section, loft and bend model for one design.
pub fn evaluate(design: &ValidatedDesign) -> Result<Evaluation, SweepError> {
    let mesh = loft(design)?;
    let report = mesh_diagnostics(&mesh);
    if !report.watertight {
        return Err(SweepError::NotWatertight {
            boundary: report.boundary_edges,
            nonmanifold: report.nonmanifold_edges,
        });
    }
    let (bend_plane_deg, arcs) = bend_plane(design)?;
    let bend = solve_tilted_cone(&arcs.inputs())?;
    let s_mean = 0.5 * (arcs.s_a + arcs.s_b);
    let metrics = SweepMetrics {
        axial_expansion_ratio: expansion_ratio(arcs.h0, s_mean)?,
        radial_expansion_ratio: expansion_ratio(arcs.r, radial_extent(&mesh))?,
        mesh_volume_mm3: report.enclosed_volume,
        arc_length_ratio: arcs.ratio(),
        bend_theta_deg: bend.theta_deg,
    };
    Ok(Evaluation { mesh, report, bend_plane_deg, arcs, bend, metrics })
}

/// One row of the sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResultRow {
    pub design_id: String,
    pub factor: Option<FactorCode>,
    pub level: Option<Level>,
    pub metrics: Option<SweepMetrics>,
    /// Failure message when the pipeline did not complete.
    pub error: Option<String>,
}

impl SweepResultRow {
    pub fn coded_level(&self) -> f64 {
        self.level.map_or(0.0, Level::coded)
    }
}

/// Evaluates one sweep design, recording failure in the row.
pub fn evaluate_row(d: &DoeDesign) -> SweepResultRow {
    let result = evaluate(&d.design);
    SweepResultRow {
        design_id: d.id.clone(),
        factor: d.variant.map(|v| v.0),
        level: d.variant.map(|v| v.1),
        metrics: result.as_ref().ok().map(|e| e.metrics),
        error: result.err().map(|e| e.to_string()),
    }
}

/// Rows in input order.
pub fn evaluate_designs(designs: &[DoeDesign]) -> Vec<SweepResultRow> {
    designs.iter().map(evaluate_row).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityEntry {
    pub factor: FactorCode,
    pub metric: Metric,
    /// Least-squares slope of the metric against coded level.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// Factor-major, metrics in [`Metric::ALL`] order.
    pub entries: Vec<SensitivityEntry>,
}

impl SensitivityReport {
    pub fn slope(&self, factor: FactorCode, metric: Metric) -> Option<f64> {
        self.entries.iter().find(|e| e.factor == factor && e.metric == metric).map(|e| e.slope)
    }

    /// Factors by decreasing `|slope|` for one metric; list order breaks ties.
    pub fn ranking(&self, metric: Metric) -> Vec<FactorCode> {
        let mut v: Vec<(FactorCode, f64)> =
            self.entries.iter().filter(|e| e.metric == metric).map(|e| (e.factor, e.slope.abs())).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1));
        v.into_iter().map(|(f, _)| f).collect()
    }
}

/// Slopes over the low, baseline and high rows of every factor in the table.
pub fn sensitivity(rows: &[SweepResultRow]) -> Result<SensitivityReport, SweepError> {
    let base = rows.iter().find(|r| r.factor.is_none()).and_then(|r| r.metrics).ok_or(SweepError::MissingBaseline)?;
    let mut factors: Vec<FactorCode> = Vec::new();
    for f in rows.iter().filter_map(|r| r.factor) {
        if !factors.contains(&f) {
            factors.push(f);
        }
    }
    let mut entries = Vec::with_capacity(factors.len() * Metric::ALL.len());
    for factor in factors {
        let at = |level: Level| {
            rows.iter()
                .find(|r| r.factor == Some(factor) && r.level == Some(level))
                .and_then(|r| r.metrics)
                .ok_or(SweepError::MissingLevel { factor, level })
        };
        let (low, high) = (at(Level::Low)?, at(Level::High)?);
        for metric in Metric::ALL {
            let ys = [low.get(metric), base.get(metric), high.get(metric)];
            let slope = linear_fit(&[-1.0, 0.0, 1.0], &ys).map_or(f64::NAN, |f| f.slope);
            entries.push(SensitivityEntry { factor, metric, slope });
        }
    }
    Ok(SensitivityReport { entries })
}

/// Stiffness and work of a force–displacement record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactSummary {
    /// Least-squares slope of force against displacement, in N/mm.
    pub avg_stiffness: f64,
    pub stiffness_stderr: f64,
    /// Trapezoidal integral of force over displacement, in N·mm.
    pub work: f64,
}

/// Analyses `(displacement mm, force N)` samples.
pub fn analyze_contact(samples: &[(f64, f64)]) -> Result<ContactSummary, SweepError> {
    if samples.len() < 2 {
        return Err(SweepError::TooFewSamples(samples.len()));
    }
    if let Some(i) = samples.windows(2).position(|w| w[1].0 < w[0].0) {
        return Err(SweepError::DecreasingDisplacement(i + 1));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let fit = linear_fit(&xs, &ys).ok_or(SweepError::NoDisplacementSpread)?;
    Ok(ContactSummary { avg_stiffness: fit.slope, stiffness_stderr: fit.slope_stderr, work: trapezoid(&xs, &ys) })
}
