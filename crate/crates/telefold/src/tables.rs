//! Fixed-column CSV tables.
//!
//! Column sets are versioned by [`CSV_SCHEMA_VERSION`]; reals are written with
//! six decimals so files compare byte-for-byte across runs.

use std::io::Write;

use telefold_core::bend::BendPrediction;
use telefold_core::midline::Midline;
use telefold_core::silhouette::DeformationSeries;
use telefold_core::sweep::{Metric, SensitivityReport, SweepResultRow};
use telefold_core::ClosedContour;

pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const RESULTS_COLUMNS: [&str; 10] = [
    "design_id",
    "factor",
    "level",
    "coded_level",
    "axial_expansion_ratio",
    "radial_expansion_ratio",
    "mesh_volume_mm3",
    "arc_length_ratio",
    "bend_theta_deg",
    "error",
];
pub const SENSITIVITY_COLUMNS: [&str; 3] = ["factor", "metric", "slope"];
pub const SILHOUETTE_COLUMNS: [&str; 6] = ["frame", "h_px", "w_px", "dL_mm", "dR_mm", "theta_deg"];
pub const BEND_COLUMNS: [&str; 5] = ["ratio", "x_mm", "h_mm", "theta_deg", "axial_ratio"];
pub const MIDLINE_COLUMNS: [&str; 3] = ["s", "rho", "z"];
pub const CONTOUR_COLUMNS: [&str; 2] = ["x", "y"];

/// Six decimals; values that round to zero print as `0.000000`, never `-0.000000`.
pub fn fixed(v: f64) -> String {
    if v.abs() < 5e-7 {
        return String::from("0.000000");
    }
    format!("{v:.6}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fixed).unwrap_or_default()
}

fn table<W: Write, const N: usize>(
    out: W,
    columns: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_results<W: Write>(out: W, rows: &[SweepResultRow]) -> csv::Result<()> {
    table(
        out,
        RESULTS_COLUMNS,
        rows.iter().map(|r| {
            let m = |k: Metric| opt(r.metrics.map(|m| m.get(k)));
            [
                r.design_id.clone(),
                r.factor.map(|f| f.as_str().to_string()).unwrap_or_default(),
                r.level.map(|l| l.as_str().to_string()).unwrap_or_default(),
                fixed(r.coded_level()),
                m(Metric::AxialExpansionRatio),
                m(Metric::RadialExpansionRatio),
                m(Metric::MeshVolume),
                m(Metric::ArcLengthRatio),
                m(Metric::BendTheta),
                r.error.clone().unwrap_or_default(),
            ]
        }),
    )
}

pub fn write_sensitivity<W: Write>(out: W, report: &SensitivityReport) -> csv::Result<()> {
    table(
        out,
        SENSITIVITY_COLUMNS,
        report.entries.iter().map(|e| [e.factor.as_str().to_string(), e.metric.as_str().to_string(), fixed(e.slope)]),
    )
}

/// One row per frame; `frames` names the rows, usually by file name.
pub fn write_silhouette<W: Write>(out: W, frames: &[String], series: &DeformationSeries) -> csv::Result<()> {
    table(
        out,
        SILHOUETTE_COLUMNS,
        frames.iter().zip(&series.rows).map(|(name, r)| {
            [name.clone(), r.h_px.to_string(), r.w_px.to_string(), fixed(r.dl_mm), fixed(r.dr_mm), opt(r.theta_deg)]
        }),
    )
}

pub fn write_bend<W: Write>(out: W, rows: &[(f64, BendPrediction)]) -> csv::Result<()> {
    table(
        out,
        BEND_COLUMNS,
        rows.iter().map(|(ratio, p)| [fixed(*ratio), fixed(p.x), fixed(p.h), fixed(p.theta_deg), opt(p.axial_ratio)]),
    )
}

/// Arc coordinate and placed position of every midline sample.
pub fn write_midline<W: Write>(out: W, m: &Midline) -> csv::Result<()> {
    table(
        out,
        MIDLINE_COLUMNS,
        m.arc_coords().iter().zip(m.samples()).map(|(s, p)| [fixed(*s), fixed(p.x), fixed(p.y)]),
    )
}

pub fn write_contour<W: Write>(out: W, c: &ClosedContour) -> csv::Result<()> {
    table(out, CONTOUR_COLUMNS, c.vertices().iter().map(|p| [fixed(p.x), fixed(p.y)]))
}
