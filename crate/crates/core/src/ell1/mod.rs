//! Pixelated sets in ℓ1ⁿ (n ≤ 3) in exact rational arithmetic: convexity,
//! weight measures, cube-Steiner polynomials and the magnitudes they give.

mod body;
mod convexity;
mod measure;
mod pixel;
mod steiner;

use num_rational::BigRational;
use thiserror::Error;

pub use body::{convex_body_pixel_bounds, facets, outer_pixelation, BodyKind, ConvexBodySpec, Facet, PixelBounds};
pub use convexity::{check_l1_convex, ConvexityVerdict};
pub use measure::{
    probe_grid, verify_weight_measure, weight_measure, weight_measure_ie, Face, FaceMeasure, IE_MAX_CELLS,
};
pub use pixel::{format_rational, parse_pixel_set, parse_rational, PixelSet, MAX_DIM};
pub use steiner::{
    dilation_volume, intrinsic_volumes, magnitude_from_polynomial, magnitude_via_intrinsic,
    magnitude_via_intrinsic_exact, IntrinsicMagnitude, SteinerPolynomial, NODE_FRACTIONS,
};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Ell1Error {
    #[error("pixel set is empty")]
    EmptySet,
    #[error("cell has {found} coordinates, expected {expected}")]
    MixedDimensions { expected: usize, found: usize },
    #[error("bad scale {0}")]
    BadScale(String),
    #[error("dimension {0} unsupported (1 ≤ n ≤ 3)")]
    UnsupportedDimension(usize),
    #[error("{0}")]
    Parse(String),
    #[error("{cells} cells exceed the inclusion–exclusion limit {limit}")]
    TooManyCells { cells: usize, limit: usize },
    #[error("probe {0:?} lies outside the set")]
    ProbeOutsideSet(Vec<f64>),
    #[error("expected a positive value, got {0}")]
    NonPositive(String),
    #[error("body has empty interior")]
    DegenerateBody,
    #[error("some listed vertex is not an extreme point")]
    NonConvexVertices,
}
