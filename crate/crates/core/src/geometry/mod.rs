//! Convex bodies, composite regions, and the cone structure of set
//! differences.

use core::fmt;

mod aperture;
mod body;
mod region;
mod vector;

pub use aperture::{component_apertures, component_diagnostics, ApertureReport, Arc,
                   ComponentDiagnostics};
pub use body::{BodyParts, BodySpec};
pub use region::{inclusion_check, minkowski_average, BoundingBox, Region, RegionParts,
                 INCLUSION_TOL, STRICT_INTERIOR_MARGIN};
pub use vector::{Vector, MAX_DIM};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryError {
    /// A body constructor rejected its input.
    InvalidBody(&'static str),
    /// The gauge of a region containing a translation was requested.
    GaugeUndefined,
    /// A parameter fell outside its admissible range.
    DomainError(&'static str),
    DimensionError { expected: usize, got: usize },
    /// An aperture component too narrow to analyze.
    DegenerateComponent,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::InvalidBody(m) => write!(f, "invalid body: {m}"),
            GeometryError::GaugeUndefined => {
                write!(f, "gauge undefined: region contains a translation")
            }
            GeometryError::DomainError(m) => write!(f, "{m}"),
            GeometryError::DimensionError { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GeometryError::DegenerateComponent => write!(f, "degenerate aperture component"),
        }
    }
}

impl core::error::Error for GeometryError {}
