//! Design parameter schema, validation, and the one-factor preset table.
//!
//! Only `amplitude`, `radius`, `max_thickness` and `hub_radius` carry units
//! (millimetres). Offsets, weights and scalings are dimensionless and act
//! relative to those lengths, so a design scales cleanly.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::Feed;
use crate::math;

/// Controls for the 1D midline of one angular section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidlineParams {
    /// Vertical extent of each segment, in mm.
    pub amplitude: f64,
    /// Total radial span of the midline, in mm.
    pub radius: f64,
    /// Number of half-period segments.
    pub num_curves: usize,
    /// Radial shift of each segment's central control point, as a fraction of
    /// half the segment span.
    pub center_offset: f64,
    /// Radial shift of the extremum-adjacent control points away from the
    /// segment centre, as a fraction of half the segment span.
    pub peak_valley_offset: f64,
    /// Weight of the extremum-adjacent control points.
    pub curve_weight: f64,
    /// Relative radial span of each segment.
    pub period_scaling: Vec<f64>,
    /// Relative vertical extent of each segment.
    pub amplitude_scaling: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThicknessMode {
    Constant,
    Variable,
    Collapsed,
    #[serde(rename = "sbend")]
    SBend,
}

impl ThicknessMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Variable => "variable",
            Self::Collapsed => "collapsed",
            Self::SBend => "sbend",
        }
    }
}

/// Wall thickness controls for one angular section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThicknessSpec {
    /// Largest disk radius along the midline, in mm.
    pub max_thickness: f64,
    /// Factors at the peak (CP1), centre (CP3) and valley (CP5) anchors.
    pub thickness_factors: [f64; 3],
    pub mode: ThicknessMode,
    /// Second factor triple, used by [`ThicknessMode::SBend`] only.
    #[serde(default)]
    pub sbend_factors: Option<[f64; 3]>,
}

/// Parameters of one user-defined angular plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section {
    pub theta_deg: f64,
    pub midline: MidlineParams,
    pub thickness: ThicknessSpec,
}

/// User-defined sections ordered by angle. A single entry is an
/// axisymmetric design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngularSections(pub Vec<Section>);

impl AngularSections {
    pub fn as_slice(&self) -> &[Section] {
        &self.0
    }

    pub fn is_axisymmetric(&self) -> bool {
        self.0.len() == 1
    }
}

/// Sampling densities for each stage of generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationResolution {
    /// Midline samples per segment.
    #[serde(default = "default_samples_per_segment")]
    pub samples_per_segment: usize,
    /// Vertex count K of each resampled cross-section.
    #[serde(default = "default_contour_points")]
    pub contour_points: usize,
    /// Spacing of lofted frames, in degrees. Must divide 360.
    #[serde(default = "default_angular_step")]
    pub angular_step_deg: f64,
    /// Distance-field grid spacing in mm; `None` picks a quarter of the
    /// thinnest wall radius of each section.
    #[serde(default)]
    pub cell_size: Option<f64>,
}

fn default_samples_per_segment() -> usize {
    64
}

fn default_contour_points() -> usize {
    256
}

fn default_angular_step() -> f64 {
    5.0
}

impl Default for GenerationResolution {
    fn default() -> Self {
        Self {
            samples_per_segment: default_samples_per_segment(),
            contour_points: default_contour_points(),
            angular_step_deg: default_angular_step(),
            cell_size: None,
        }
    }
}

pub const DEFAULT_HUB_RADIUS: f64 = 2.0;

fn default_hub_radius() -> f64 {
    DEFAULT_HUB_RADIUS
}

/// The complete parameter set for one actuator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignParams {
    pub sections: AngularSections,
    #[serde(default)]
    pub resolution: GenerationResolution,
    /// Distance from the revolve axis to the inner end of the midline, in mm.
    #[serde(default = "default_hub_radius")]
    pub hub_radius: f64,
}

/// One violated constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Dotted path of the offending field, e.g. `sections[0].midline.amplitude`.
    pub field: String,
    pub constraint: String,
    pub value: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (got {})", self.field, self.constraint, self.value)
    }
}

/// A design whose parameters satisfy every schema invariant.
///
/// Only [`validate`] constructs one, so downstream stages can rely on
/// positive lengths, matching list sizes and sorted angles.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidatedDesign(DesignParams);

impl ValidatedDesign {
    pub fn params(&self) -> &DesignParams {
        &self.0
    }

    pub fn into_inner(self) -> DesignParams {
        self.0
    }

    pub fn sections(&self) -> &[Section] {
        self.0.sections.as_slice()
    }

    pub fn resolution(&self) -> &GenerationResolution {
        &self.0.resolution
    }

    pub fn hub_radius(&self) -> f64 {
        self.0.hub_radius
    }

    /// SHA-256 over every parameter in a fixed field order.
    pub fn digest(&self) -> [u8; 32] {
        self.0.digest()
    }
}

impl DesignParams {
    pub fn validate(self) -> Result<ValidatedDesign, Vec<Violation>> {
        validate(self)
    }

    pub fn digest(&self) -> [u8; 32] {
        let mut feed = Feed::new();
        feed.tag("design/v1");
        feed.usize(self.sections.0.len());
        for s in &self.sections.0 {
            feed.f64(s.theta_deg);
            let m = &s.midline;
            feed.f64(m.amplitude);
            feed.f64(m.radius);
            feed.usize(m.num_curves);
            feed.f64(m.center_offset);
            feed.f64(m.peak_valley_offset);
            feed.f64(m.curve_weight);
            feed.f64s(&m.period_scaling);
            feed.f64s(&m.amplitude_scaling);
            let t = &s.thickness;
            feed.f64(t.max_thickness);
            feed.f64s(&t.thickness_factors);
            feed.tag(t.mode.name());
            match &t.sbend_factors {
                Some(f) => feed.f64s(f),
                None => feed.tag("none"),
            }
        }
        let r = &self.resolution;
        feed.usize(r.samples_per_segment);
        feed.usize(r.contour_points);
        feed.f64(r.angular_step_deg);
        match r.cell_size {
            Some(c) => feed.f64(c),
            None => feed.tag("auto"),
        }
        feed.f64(self.hub_radius);
        feed.finish()
    }
}

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn fail(&mut self, field: &str, constraint: &str, value: impl fmt::Display) {
        self.violations.push(Violation {
            field: field.to_string(),
            constraint: constraint.to_string(),
            value: value.to_string(),
        });
    }

    fn positive(&mut self, field: &str, name: &str, v: f64) {
        if !(v.is_finite() && v > 0.0) {
            self.fail(field, &format!("{name} must be > 0"), v);
        }
    }

    fn within(&mut self, field: &str, name: &str, v: f64, lo: f64, hi: f64) {
        if !(v.is_finite() && v >= lo && v <= hi) {
            self.fail(field, &format!("{name} must be within [{lo}, {hi}]"), v);
        }
    }

    fn factor(&mut self, field: &str, v: f64) {
        if !(v.is_finite() && v > 0.0 && v <= 1.0) {
            self.fail(field, "thickness factor must be within (0, 1]", v);
        }
    }
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", items.join(", "))
}

fn check_midline(c: &mut Checker, path: &str, m: &MidlineParams) {
    c.positive(&format!("{path}.amplitude"), "amplitude", m.amplitude);
    c.positive(&format!("{path}.radius"), "radius", m.radius);
    if m.num_curves == 0 {
        c.fail(&format!("{path}.num_curves"), "num_curves must be >= 1", m.num_curves);
    }
    c.within(&format!("{path}.center_offset"), "center_offset", m.center_offset, -1.0, 1.0);
    c.within(&format!("{path}.peak_valley_offset"), "peak_valley_offset", m.peak_valley_offset, -1.0, 1.0);
    c.positive(&format!("{path}.curve_weight"), "curve_weight", m.curve_weight);
    for (name, list) in [("period_scaling", &m.period_scaling), ("amplitude_scaling", &m.amplitude_scaling)] {
        let field = format!("{path}.{name}");
        if list.len() != m.num_curves {
            c.fail(
                &field,
                &format!("{name} length must equal num_curves ({})", m.num_curves),
                format!("length {} {}", list.len(), fmt_list(list)),
            );
        }
        for (i, &v) in list.iter().enumerate() {
            c.positive(&format!("{field}[{i}]"), name, v);
        }
    }
}

fn check_thickness(c: &mut Checker, path: &str, t: &ThicknessSpec) {
    c.positive(&format!("{path}.max_thickness"), "max_thickness", t.max_thickness);
    for (i, &f) in t.thickness_factors.iter().enumerate() {
        c.factor(&format!("{path}.thickness_factors[{i}]"), f);
    }
    match (t.mode, &t.sbend_factors) {
        (ThicknessMode::SBend, None) => {
            c.fail(&format!("{path}.sbend_factors"), "sbend mode requires sbend_factors", "none")
        }
        (ThicknessMode::SBend, Some(f)) => {
            for (i, &v) in f.iter().enumerate() {
                c.factor(&format!("{path}.sbend_factors[{i}]"), v);
            }
        }
        (mode, Some(f)) => c.fail(
            &format!("{path}.sbend_factors"),
            &format!("sbend_factors must be absent in {} mode", mode.name()),
            fmt_list(f),
        ),
        (_, None) => {}
    }
}

fn check_resolution(c: &mut Checker, r: &GenerationResolution) {
    if r.samples_per_segment < 8 {
        c.fail("resolution.samples_per_segment", "samples_per_segment must be >= 8", r.samples_per_segment);
    }
    if r.contour_points < 16 {
        c.fail("resolution.contour_points", "contour_points must be >= 16", r.contour_points);
    }
    let step = r.angular_step_deg;
    if !(step.is_finite() && step > 0.0 && step <= 360.0) {
        c.fail("resolution.angular_step_deg", "angular_step_deg must be within (0, 360]", step);
    } else if frame_count(step).is_none() {
        c.fail("resolution.angular_step_deg", "angular_step_deg must divide 360", step);
    }
    if let Some(cell) = r.cell_size {
        c.positive("resolution.cell_size", "cell_size", cell);
    }
}

/// Number of frames for an angular step, if the step divides 360.
pub(crate) fn frame_count(step_deg: f64) -> Option<usize> {
    let n = 360.0 / step_deg;
    let rounded = math::round(n);
    if rounded >= 1.0 && (n - rounded).abs() < 1e-9 {
        Some(rounded as usize)
    } else {
        None
    }
}

/// Checks every invariant and returns either the validated design or the
/// full list of violations.
pub fn validate(raw: DesignParams) -> Result<ValidatedDesign, Vec<Violation>> {
    let mut c = Checker { violations: Vec::new() };
    let sections = raw.sections.as_slice();
    if sections.is_empty() {
        c.fail("sections", "at least one section is required", "[]");
    }
    for (i, s) in sections.iter().enumerate() {
        let path = format!("sections[{i}]");
        if !(s.theta_deg.is_finite() && s.theta_deg >= 0.0 && s.theta_deg < 360.0) {
            c.fail(&format!("{path}.theta_deg"), "theta_deg must be within [0, 360)", s.theta_deg);
        }
        if i > 0 && s.theta_deg <= sections[i - 1].theta_deg {
            c.fail(&format!("{path}.theta_deg"), "theta_deg must be strictly increasing", s.theta_deg);
        }
        check_midline(&mut c, &format!("{path}.midline"), &s.midline);
        check_thickness(&mut c, &format!("{path}.thickness"), &s.thickness);
        if i > 0 {
            let first = &sections[0];
            if s.midline.num_curves != first.midline.num_curves {
                c.fail(
                    &format!("{path}.midline.num_curves"),
                    &format!("all sections must share num_curves ({})", first.midline.num_curves),
                    s.midline.num_curves,
                );
            }
            if s.thickness.mode != first.thickness.mode {
                c.fail(
                    &format!("{path}.thickness.mode"),
                    &format!("all sections must share a thickness mode ({})", first.thickness.mode.name()),
                    s.thickness.mode.name(),
                );
            }
        }
        if !(raw.hub_radius > s.thickness.max_thickness) {
            c.fail(
                "hub_radius",
                &format!("hub_radius must exceed max_thickness of sections[{i}] ({})", s.thickness.max_thickness),
                raw.hub_radius,
            );
        }
    }
    check_resolution(&mut c, &raw.resolution);
    if let Some(step) = (raw.resolution.angular_step_deg > 0.0).then_some(raw.resolution.angular_step_deg) {
        if frame_count(step).is_some() {
            for (i, s) in sections.iter().enumerate() {
                let k = s.theta_deg / step;
                if s.theta_deg.is_finite() && (k - math::round(k)).abs() > 1e-9 {
                    c.fail(
                        &format!("sections[{i}].theta_deg"),
                        &format!("theta_deg must lie on the {step} degree frame grid"),
                        s.theta_deg,
                    );
                }
            }
        }
    }
    if c.violations.is_empty() {
        Ok(ValidatedDesign(raw))
    } else {
        Err(c.violations)
    }
}

/// The documented reference design every preset is a delta against.
pub fn baseline() -> DesignParams {
    DesignParams {
        sections: AngularSections(vec![Section {
            theta_deg: 0.0,
            midline: MidlineParams {
                amplitude: 20.0,
                radius: 30.0,
                num_curves: 3,
                center_offset: 0.0,
                peak_valley_offset: 0.0,
                curve_weight: 1.0,
                period_scaling: vec![1.0, 1.0, 1.0],
                amplitude_scaling: vec![1.0, 1.0, 1.0],
            },
            thickness: ThicknessSpec {
                max_thickness: 1.0,
                thickness_factors: [1.0, 1.0, 1.0],
                mode: ThicknessMode::Variable,
                sbend_factors: None,
            },
        }]),
        resolution: GenerationResolution::default(),
        hub_radius: DEFAULT_HUB_RADIUS,
    }
}

/// Codes of the one-factor sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorCode {
    /// Amplitude.
    #[serde(rename = "AMP")]
    Amp,
    /// Period scaling.
    #[serde(rename = "PRD")]
    Prd,
    /// Central control point offset.
    #[serde(rename = "XOF")]
    Xof,
    /// Peak/valley control point offset.
    #[serde(rename = "XMF")]
    Xmf,
    /// Curve weight.
    #[serde(rename = "CWT")]
    Cwt,
    /// Thickness factors.
    #[serde(rename = "THF")]
    Thf,
    /// Maximum thickness value.
    #[serde(rename = "THV")]
    Thv,
}

impl FactorCode {
    pub const ALL: [FactorCode; 7] = [Self::Amp, Self::Prd, Self::Xof, Self::Xmf, Self::Cwt, Self::Thf, Self::Thv];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Amp => "AMP",
            Self::Prd => "PRD",
            Self::Xof => "XOF",
            Self::Xmf => "XMF",
            Self::Cwt => "CWT",
            Self::Thf => "THF",
            Self::Thv => "THV",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Name of the section field this factor drives.
    pub fn field(self) -> &'static str {
        match self {
            Self::Amp => "midline.amplitude",
            Self::Prd => "midline.period_scaling",
            Self::Xof => "midline.center_offset",
            Self::Xmf => "midline.peak_valley_offset",
            Self::Cwt => "midline.curve_weight",
            Self::Thf => "thickness.thickness_factors",
            Self::Thv => "thickness.max_thickness",
        }
    }
}

impl fmt::Display for FactorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Low,
    High,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Low => "low",
            Self::High => "high",
        }
    }

    /// Normalised coordinate used by the sensitivity fit.
    pub fn coded(self) -> f64 {
        match self {
            Self::Low => -1.0,
            Self::High => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl fmt::Display for FactorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Scalar(v) => write!(f, "{v}"),
            Self::Vector(v) => f.write_str(&fmt_list(v)),
        }
    }
}

/// A factor with its low and high levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub code: FactorCode,
    pub low: FactorValue,
    pub high: FactorValue,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError {
    #[error("{code} expects a {expected} value, got {got}")]
    WrongShape { code: FactorCode, expected: &'static str, got: String },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

impl Factor {
    pub fn level(&self, level: Level) -> &FactorValue {
        match level {
            Level::Low => &self.low,
            Level::High => &self.high,
        }
    }

    /// Returns `base` with this factor set to `level` on every section.
    pub fn apply(&self, base: &DesignParams, level: Level) -> Result<DesignParams, FactorError> {
        let value = self.level(level);
        let shape_err = |expected| FactorError::WrongShape { code: self.code, expected, got: value.to_string() };
        let mut out = base.clone();
        for s in &mut out.sections.0 {
            match (self.code, value) {
                (FactorCode::Amp, FactorValue::Scalar(v)) => s.midline.amplitude = *v,
                (FactorCode::Xof, FactorValue::Scalar(v)) => s.midline.center_offset = *v,
                (FactorCode::Xmf, FactorValue::Scalar(v)) => s.midline.peak_valley_offset = *v,
                (FactorCode::Cwt, FactorValue::Scalar(v)) => s.midline.curve_weight = *v,
                (FactorCode::Thv, FactorValue::Scalar(v)) => s.thickness.max_thickness = *v,
                (FactorCode::Prd, FactorValue::Vector(v)) => s.midline.period_scaling = v.clone(),
                (FactorCode::Thf, FactorValue::Vector(v)) => {
                    let triple: [f64; 3] = v.as_slice().try_into().map_err(|_| shape_err("three-element list"))?;
                    s.thickness.thickness_factors = triple;
                }
                (FactorCode::Prd, _) => return Err(shape_err("list")),
                (FactorCode::Thf, _) => return Err(shape_err("three-element list")),
                _ => return Err(shape_err("scalar")),
            }
        }
        Ok(out)
    }
}

/// The seven factors and levels of the one-factor exploration set.
pub fn standard_factors() -> Vec<Factor> {
    use FactorValue::{Scalar, Vector};
    vec![
        Factor { code: FactorCode::Amp, low: Scalar(10.0), high: Scalar(30.0) },
        Factor { code: FactorCode::Prd, low: Vector(vec![1.5, 1.0, 0.5]), high: Vector(vec![0.5, 1.0, 1.5]) },
        Factor { code: FactorCode::Xof, low: Scalar(-0.75), high: Scalar(0.75) },
        Factor { code: FactorCode::Xmf, low: Scalar(-0.5), high: Scalar(0.5) },
        Factor { code: FactorCode::Cwt, low: Scalar(1.0), high: Scalar(10.0) },
        Factor { code: FactorCode::Thf, low: Vector(vec![1.0, 0.5, 1.0]), high: Vector(vec![0.5, 1.0, 0.5]) },
        Factor { code: FactorCode::Thv, low: Scalar(0.5), high: Scalar(1.5) },
    ]
}

/// All 15 preset names: `BAS` followed by each factor's low and high variant.
pub fn preset_names() -> Vec<String> {
    let mut names = vec![String::from("BAS")];
    for code in FactorCode::ALL {
        for level in [Level::Low, Level::High] {
            names.push(format!("{}-{}", code.as_str(), level.as_str()));
        }
    }
    names
}

/// Parses `BAS` or `<CODE>-<low|high>`.
pub fn parse_preset_name(name: &str) -> Option<Option<(FactorCode, Level)>> {
    if name == "BAS" {
        return Some(None);
    }
    let (code, level) = name.split_once('-')?;
    let code = FactorCode::parse(code)?;
    let level = match level {
        "low" => Level::Low,
        "high" => Level::High,
        _ => return None,
    };
    Some(Some((code, level)))
}

pub fn preset(name: &str) -> Result<DesignParams, FactorError> {
    let parsed = parse_preset_name(name).ok_or_else(|| FactorError::UnknownPreset(name.to_string()))?;
    let base = baseline();
    match parsed {
        None => Ok(base),
        Some((code, level)) => {
            let factors = standard_factors();
            let factor = factors.iter().find(|f| f.code == code).expect("every code has a factor");
            factor.apply(&base, level)
        }
    }
}
