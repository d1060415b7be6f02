//! Whole-design generation and the parallel sweep runner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use telefold_core::bend::{BendPrediction, OpposedArcs};
use telefold_core::sweep::{
    evaluate, evaluate_row, generate_doe, sensitivity, DoeDesign, SensitivityReport, SweepError, SweepMetrics,
    SweepResultRow, SweepSpec,
};
use telefold_core::{MeshReport, TriMesh, ValidatedDesign};
use thiserror::Error;

use crate::stl::{stl_bytes, StlError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Stl(#[from] StlError),
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything reported about one generated design, minus the mesh bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateSummary {
    pub design_digest: String,
    pub mesh_digest: String,
    pub diagnostics: MeshReport,
    pub bend_plane_deg: f64,
    pub arcs: OpposedArcs,
    pub bend: BendPrediction,
    pub metrics: SweepMetrics,
}

pub struct Generated {
    pub mesh: TriMesh,
    pub stl: Vec<u8>,
    pub summary: GenerateSummary,
}

/// Lofts, checks, measures and encodes one design.
pub fn generate(design: &ValidatedDesign) -> Result<Generated, PipelineError> {
    let e = evaluate(design)?;
    let stl = stl_bytes(&e.mesh)?;
    let summary = GenerateSummary {
        design_digest: hex(&design.digest()),
        mesh_digest: hex(&e.mesh.digest()),
        diagnostics: e.report,
        bend_plane_deg: e.bend_plane_deg,
        arcs: e.arcs,
        bend: e.bend,
        metrics: e.metrics,
    };
    Ok(Generated { mesh: e.mesh, stl, summary })
}

/// Rows in input order; designs are evaluated on the rayon pool.
pub fn evaluate_parallel(designs: &[DoeDesign]) -> Vec<SweepResultRow> {
    designs.par_iter().map(evaluate_row).collect()
}

pub struct SweepOutcome {
    pub rows: Vec<SweepResultRow>,
    /// Fails when the baseline or a factor level did not evaluate.
    pub sensitivity: Result<SensitivityReport, SweepError>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, SweepError> {
    let designs = generate_doe(&spec.baseline, &spec.factors)?;
    let rows = evaluate_parallel(&designs);
    let sensitivity = sensitivity(&rows);
    Ok(SweepOutcome { rows, sensitivity })
}
