//! Exact geometry of squared complex distances.
//!
//! Points of ℂ² are mapped to lines of ℂ³ by the Elekes–Sharir–Guth–Katz
//! transform, under which equal distances become coplanar line pairs. The
//! crate computes everything over the Gaussian rationals, so every count
//! and every incidence it reports is exact.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod complex_plane;
pub mod esgk;
pub mod incidence;
pub mod lines;
pub mod real_geometry;
pub mod harness;
