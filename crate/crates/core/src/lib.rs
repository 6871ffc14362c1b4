//! Magnitude of finite metric spaces and the closed-form oracles that pin it.
//!
//! * [`metric`]: certified finite metric spaces and generators.
//! * [`engine`]: weightings, magnitude, magnitude functions, definiteness.
//! * [`line`]: exact formulas for subsets of the real line.
//! * [`ell1`]: exact rational geometry of pixelated sets in ℓ1ⁿ.
//! * [`diversity`]: maximum diversity, covering numbers, dimension estimates.
//! * [`euclid`]: Euclidean balls, even spheres and volume asymptotics.

pub mod diversity;
pub mod ell1;
pub mod engine;
pub mod euclid;
pub mod line;
pub mod metric;

pub use engine::{magnitude, solve_weighting, SimilarityMatrix, WeightingResult, WeightingStatus};
pub use metric::{generate_space, validate_metric, FiniteMetricSpace, SpaceKind, SpaceSpec};
