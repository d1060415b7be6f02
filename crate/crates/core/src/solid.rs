//! Angular interpolation, lofting and mesh diagnostics.
//!
//! Every frame is rebuilt from parameters interpolated between the
//! user-defined planes; contours are never blended directly. The closed outer
//! contour of each frame is swept about the z axis as a shell. The seam at
//! 360° reuses frame 0, so full revolutions are watertight by construction.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cross_section::{thickness_profile, union_of_circles, ClosedContour, SectionError, DEFAULT_CELL_DIVISOR};
use crate::design::{frame_count, MidlineParams, Section, ThicknessSpec, ValidatedDesign};
use crate::digest::Feed;
use crate::geom::Vec3;
use crate::math;
use crate::midline::{build_midline, Midline, MidlineError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolidError {
    #[error("midline at theta {theta} deg: {source}")]
    Midline { theta: f64, source: MidlineError },
    #[error("cross-section at theta {theta} deg: {source}")]
    Section { theta: f64, source: SectionError },
    #[error("cross-section at theta {theta} deg is not a simple polygon")]
    NonSimple { theta: f64 },
    #[error("angular step {0} deg does not divide 360")]
    BadStep(f64),
    #[error("frames carry different vertex counts ({0} and {1})")]
    RaggedFrames(usize, usize),
    #[error("need at least 3 frames and 3 contour points")]
    TooFewFrames,
}

/// Indexed triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    /// Digest of the design that produced the mesh, if any.
    pub provenance: Option<[u8; 32]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Self {
        Self { vertices, triangles, provenance: None }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Corner positions of triangle `i`.
    pub fn corners(&self, i: usize) -> [Vec3; 3] {
        self.triangles[i].map(|k| self.vertices[k as usize])
    }

    /// SHA-256 over vertex bits and triangle indices.
    pub fn digest(&self) -> [u8; 32] {
        let mut feed = Feed::new();
        feed.tag("mesh/v1");
        feed.usize(self.vertices.len());
        for v in &self.vertices {
            feed.f64(v.x);
            feed.f64(v.y);
            feed.f64(v.z);
        }
        feed.usize(self.triangles.len());
        for t in &self.triangles {
            for &k in t {
                feed.u32(k);
            }
        }
        feed.finish()
    }
}

/// Resampled cross-section placed on one angular plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionFrame {
    pub theta_deg: f64,
    /// Contour in (ρ, z), counter-clockwise, vertex 0 at the anchor.
    pub contour: ClosedContour,
}

impl SectionFrame {
    /// Contour vertices mapped into 3D on the plane at `theta_deg`.
    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        let a = math::to_radians(self.theta_deg);
        let (s, c) = (math::sin(a), math::cos(a));
        self.contour.vertices().iter().map(move |p| Vec3::new(p.x * c, p.x * s, p.y))
    }
}

fn wrap_deg(theta: f64) -> f64 {
    let w = theta - 360.0 * math::floor(theta / 360.0);
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t == 0.0 {
        a
    } else {
        a + (b - a) * t
    }
}

fn lerp_slice(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| lerp(x, y, t)).collect()
}

fn lerp3(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    [lerp(a[0], b[0], t), lerp(a[1], b[1], t), lerp(a[2], b[2], t)]
}

/// Blends two sections componentwise. Mode and segment count come from `a`,
/// which validation guarantees match `b`.
fn blend_sections(a: &Section, b: &Section, theta: f64, t: f64) -> Section {
    let (ma, mb) = (&a.midline, &b.midline);
    let midline = MidlineParams {
        amplitude: lerp(ma.amplitude, mb.amplitude, t),
        radius: lerp(ma.radius, mb.radius, t),
        num_curves: ma.num_curves,
        center_offset: lerp(ma.center_offset, mb.center_offset, t),
        peak_valley_offset: lerp(ma.peak_valley_offset, mb.peak_valley_offset, t),
        curve_weight: lerp(ma.curve_weight, mb.curve_weight, t),
        period_scaling: lerp_slice(&ma.period_scaling, &mb.period_scaling, t),
        amplitude_scaling: lerp_slice(&ma.amplitude_scaling, &mb.amplitude_scaling, t),
    };
    let (ta, tb) = (&a.thickness, &b.thickness);
    let thickness = ThicknessSpec {
        max_thickness: lerp(ta.max_thickness, tb.max_thickness, t),
        thickness_factors: lerp3(&ta.thickness_factors, &tb.thickness_factors, t),
        mode: ta.mode,
        sbend_factors: match (&ta.sbend_factors, &tb.sbend_factors) {
            (Some(x), Some(y)) => Some(lerp3(x, y, t)),
            (x, _) => *x,
        },
    };
    Section { theta_deg: theta, midline, thickness }
}

/// Section parameters at `theta_deg`, linear between the bracketing
/// user-defined planes with periodic wrap.
pub fn interpolate_sections(sections: &[Section], theta_deg: f64) -> Section {
    let theta = wrap_deg(theta_deg);
    let n = sections.len();
    if n == 1 {
        let mut s = sections[0].clone();
        s.theta_deg = theta;
        return s;
    }
    let upper = sections.iter().position(|s| s.theta_deg > theta).unwrap_or(n);
    let (a, b, span, offset) = if upper == 0 || upper == n {
        // Wraps from the last plane through 360° to the first.
        let a = &sections[n - 1];
        let b = &sections[0];
        let span = b.theta_deg + 360.0 - a.theta_deg;
        let offset = if theta >= a.theta_deg { theta - a.theta_deg } else { theta + 360.0 - a.theta_deg };
        (a, b, span, offset)
    } else {
        let a = &sections[upper - 1];
        let b = &sections[upper];
        (a, b, b.theta_deg - a.theta_deg, theta - a.theta_deg)
    };
    blend_sections(a, b, theta, offset / span)
}

/// Midline of `section` placed at `hub_radius` from the revolve axis.
pub fn placed_midline(section: &Section, samples_per_segment: usize, hub_radius: f64) -> Result<Midline, SolidError> {
    let theta = section.theta_deg;
    build_midline(&section.midline, samples_per_segment)
        .map(|m| m.offset_radially(hub_radius))
        .map_err(|source| SolidError::Midline { theta, source })
}

/// Runs the 1D and 2D stages for one section and resamples to `k` vertices.
pub fn section_contour(
    section: &Section,
    samples_per_segment: usize,
    hub_radius: f64,
    k: usize,
    cell_size: Option<f64>,
) -> Result<ClosedContour, SolidError> {
    let theta = section.theta_deg;
    let wrap = |source| SolidError::Section { theta, source };
    let m = placed_midline(section, samples_per_segment, hub_radius)?;
    let t = thickness_profile(&m, &section.thickness).map_err(wrap)?;
    let cell = cell_size.unwrap_or(t.min() / DEFAULT_CELL_DIVISOR);
    let contour = union_of_circles(&m, &t, cell).map_err(wrap)?.resample(k).map_err(wrap)?;
    if !contour.is_simple() {
        return Err(SolidError::NonSimple { theta });
    }
    Ok(contour)
}

/// Frame angles for a design, starting at 0°.
pub fn frame_angles(design: &ValidatedDesign) -> Vec<f64> {
    let step = design.resolution().angular_step_deg;
    let n = frame_count(step).expect("validated step divides 360");
    (0..n).map(|j| step * j as f64).collect()
}

/// Builds the frame at `theta_deg`.
pub fn section_frame(design: &ValidatedDesign, theta_deg: f64) -> Result<SectionFrame, SolidError> {
    let res = design.resolution();
    let section = interpolate_sections(design.sections(), theta_deg);
    let contour =
        section_contour(&section, res.samples_per_segment, design.hub_radius(), res.contour_points, res.cell_size)?;
    Ok(SectionFrame { theta_deg: section.theta_deg, contour })
}

/// Builds every frame, reusing contours whose interpolated parameters repeat.
pub fn section_frames(design: &ValidatedDesign) -> Result<Vec<SectionFrame>, SolidError> {
    let res = design.resolution();
    let mut cache: Vec<(Section, ClosedContour)> = Vec::new();
    let mut frames = Vec::new();
    for theta in frame_angles(design) {
        let mut section = interpolate_sections(design.sections(), theta);
        let key_theta = section.theta_deg;
        section.theta_deg = 0.0;
        let hit = cache.iter().find(|(s, _)| *s == section).map(|(_, c)| c.clone());
        let contour = match hit {
            Some(c) => c,
            None => {
                section.theta_deg = key_theta;
                let c = section_contour(
                    &section,
                    res.samples_per_segment,
                    design.hub_radius(),
                    res.contour_points,
                    res.cell_size,
                )?;
                section.theta_deg = 0.0;
                cache.push((section, c.clone()));
                c
            }
        };
        frames.push(SectionFrame { theta_deg: key_theta, contour });
    }
    Ok(frames)
}

/// Relative margin below which the two diagonals of a quad count as equal.
const DIAGONAL_TIE: f64 = 1e-9;

/// Joins frames spanning a full revolution into a closed shell.
///
/// Vertex `k` of frame `j` has index `j·K + k`. Each quad between adjacent
/// frames becomes two triangles wound so normals point away from the
/// contour interior; the last frame connects back to frame 0. Quads split
/// along their shorter diagonal, which keeps the triangulation mirror
/// symmetric; near-ties take the `(j, k)–(j+1, k+1)` diagonal.
pub fn loft_frames(frames: &[SectionFrame]) -> Result<TriMesh, SolidError> {
    let n = frames.len();
    let k = frames.first().map_or(0, |f| f.contour.len());
    if n < 3 || k < 3 {
        return Err(SolidError::TooFewFrames);
    }
    if let Some(f) = frames.iter().find(|f| f.contour.len() != k) {
        return Err(SolidError::RaggedFrames(k, f.contour.len()));
    }
    let mut vertices = Vec::with_capacity(n * k);
    for f in frames {
        vertices.extend(f.points());
    }
    let idx = |j: usize, i: usize| ((j % n) * k + (i % k)) as u32;
    let mut triangles = Vec::with_capacity(2 * n * k);
    for j in 0..n {
        for i in 0..k {
            let (a, b, c, d) = (idx(j, i), idx(j + 1, i), idx(j + 1, i + 1), idx(j, i + 1));
            let len = |p: u32, q: u32| {
                let e = vertices[p as usize] - vertices[q as usize];
                e.dot(e)
            };
            if len(b, d) < len(a, c) * (1.0 - DIAGONAL_TIE) {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            } else {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
    }
    Ok(TriMesh::new(vertices, triangles))
}

/// Generates the full actuator shell for a validated design.
pub fn loft(design: &ValidatedDesign) -> Result<TriMesh, SolidError> {
    let frames = section_frames(design)?;
    let mut mesh = loft_frames(&frames)?;
    mesh.provenance = Some(design.digest());
    Ok(mesh)
}

/// Sweeps a single contour about the z axis in `step_deg` increments.
pub fn revolve(contour: &ClosedContour, step_deg: f64) -> Result<TriMesh, SolidError> {
    let n = frame_count(step_deg).ok_or(SolidError::BadStep(step_deg))?;
    let frames: Vec<SectionFrame> =
        (0..n).map(|j| SectionFrame { theta_deg: step_deg * j as f64, contour: contour.to_ccw() }).collect();
    loft_frames(&frames)
}

/// Topology and measure summary of a mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshReport {
    /// Every edge borders exactly two triangles.
    pub watertight: bool,
    /// Every interior edge is traversed once in each direction.
    pub consistently_oriented: bool,
    pub boundary_edges: usize,
    pub nonmanifold_edges: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub euler_characteristic: i64,
    /// Divergence-theorem volume in mm³; positive for outward winding.
    pub enclosed_volume: f64,
    pub surface_area: f64,
    pub bbox_min: [f64; 3],
    pub bbox_max: [f64; 3],
}

/// Edge counts, volume, area and bounds of `mesh`.
pub fn mesh_diagnostics(mesh: &TriMesh) -> MeshReport {
    // (low, high, forward) for every triangle edge, sorted to group shared edges.
    let mut edges: Vec<(u32, u32, bool)> = Vec::with_capacity(mesh.triangles.len() * 3);
    let mut volume = 0.0;
    let mut area = 0.0;
    for (i, t) in mesh.triangles.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            edges.push((a.min(b), a.max(b), a < b));
        }
        let [p, q, r] = mesh.corners(i);
        volume += p.dot(q.cross(r)) / 6.0;
        area += 0.5 * (q - p).cross(r - p).length();
    }
    edges.sort_unstable();
    let (mut boundary, mut nonmanifold, mut unique) = (0, 0, 0);
    let mut oriented = true;
    let mut i = 0;
    while i < edges.len() {
        let mut j = i + 1;
        while j < edges.len() && edges[j].0 == edges[i].0 && edges[j].1 == edges[i].1 {
            j += 1;
        }
        match j - i {
            1 => boundary += 1,
            2 => oriented &= edges[i].2 != edges[i + 1].2,
            _ => nonmanifold += 1,
        }
        unique += 1;
        i = j;
    }
    let (lo, hi) = mesh.vertices.iter().fold(
        (
            Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), v| (lo.min(*v), hi.max(*v)),
    );
    let (lo, hi) = if mesh.vertices.is_empty() { (Vec3::default(), Vec3::default()) } else { (lo, hi) };
    let watertight = !mesh.triangles.is_empty() && boundary == 0 && nonmanifold == 0;
    MeshReport {
        watertight,
        consistently_oriented: oriented && nonmanifold == 0,
        boundary_edges: boundary,
        nonmanifold_edges: nonmanifold,
        vertex_count: mesh.vertices.len(),
        edge_count: unique,
        triangle_count: mesh.triangles.len(),
        euler_characteristic: mesh.vertices.len() as i64 - unique as i64 + mesh.triangles.len() as i64,
        enclosed_volume: volume,
        surface_area: area,
        bbox_min: [lo.x, lo.y, lo.z],
        bbox_max: [hi.x, hi.y, hi.z],
    }
}

/// Maximum ρ over every frame of the mesh, i.e. its radial extent.
pub fn radial_extent(mesh: &TriMesh) -> f64 {
    mesh.vertices.iter().map(|v| math::hypot(v.x, v.y)).fold(0.0, f64::max)
}

/// Contour vertices of `frame` as 3D points, for embedding checks.
pub fn frame_points(frame: &SectionFrame) -> Vec<Vec3> {
    frame.points().collect()
}
