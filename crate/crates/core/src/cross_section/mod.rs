//! Closed 2D cross-sections: a wall thickness per midline sample, the union
//! of the resulting disks, and uniform arc-length resampling.

mod contour;
mod thickness;
mod union;

use thiserror::Error;

pub use contour::ClosedContour;
pub use thickness::{thickness_profile, ThicknessProfile};
pub use union::{union_of_circles, DEFAULT_CELL_DIVISOR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectionError {
    #[error("{0} thickness mode needs segment structure on the midline")]
    NoSegments(&'static str),
    #[error("sbend mode requires sbend_factors")]
    MissingSbendFactors,
    #[error("thickness profile has {radii} radii for {samples} midline samples")]
    LengthMismatch { radii: usize, samples: usize },
    #[error("disk radius {0} must be positive and finite")]
    NonPositiveRadius(f64),
    #[error("cell size {cell} is too coarse for minimum radius {min_radius} (needs <= {limit})")]
    CellTooCoarse { cell: f64, min_radius: f64, limit: f64 },
    #[error("midline is empty")]
    EmptyMidline,
    #[error("distance field produced no closed contour")]
    NoContour,
    #[error("contour has zero perimeter")]
    DegenerateContour,
    #[error("resample count must be >= 3, got {0}")]
    TooFewPoints(usize),
}
