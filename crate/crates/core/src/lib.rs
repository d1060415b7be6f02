//! Geometry kernel for programmable telescopic soft pneumatic actuators.
//!
//! The pipeline runs from a reduced parameter set to a printable shell:
//!
//! 1. [`midline`] builds a chain of rational cubic segments in the
//!    radial/axial plane.
//! 2. [`cross_section`] assigns a wall thickness along the midline and takes
//!    the union of the resulting disks, extracting the outer boundary.
//! 3. [`solid`] rebuilds that section on every angular plane from
//!    interpolated parameters and lofts the frames into a closed mesh.
//!
//! Alongside the generator sit the tilted-cone bending model ([`bend`]), the
//! silhouette measurement pipeline ([`silhouette`]) and the one-factor design
//! sweep with its sensitivity fits ([`sweep`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and the
//! HTTP service live in the `telefold` crate.

#![no_std]
// NaN must fail range checks, so `!(a > b)` is intentional throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bend;
pub mod cross_section;
pub mod design;
mod digest;
pub mod geom;
mod math;
pub mod midline;
pub mod silhouette;
pub mod solid;
pub mod stats;
pub mod sweep;

pub use bend::{BendInputs, BendPrediction};
pub use cross_section::{ClosedContour, ThicknessProfile};
pub use design::{DesignParams, ValidatedDesign};
pub use geom::{Vec2, Vec3};
pub use midline::{Midline, NurbsSegment};
pub use solid::{MeshReport, TriMesh};
