//! Hyperspectral inspection toolkit for composite surfaces.
//!
//! The pipeline runs on [`Hypercube`] values:
//!
//! 1. **I/O**: ENVI BSQ/BIL/BIP reading and writing ([`hypercube::envi`]).
//! 2. **Preprocess**: dark/white reflectance calibration, sensor binning, SNV
//!    correction, PCA and PC1-guided joint bilateral filtering ([`preprocess`]).
//! 3. **Detect**: saliency map, hard threshold, 8-connected regions and
//!    moment-ellipse shape features ([`detect`]).
//! 4. **Evaluate**: pixel-level precision/recall ([`evaluate`]).
//! 5. **Geometry**: fixed-overlap stitching and tilt restoration ([`geometry`]).
//! 6. **Profile**: ROI mean ± std spectra and crossings ([`profile`]).
//! 7. **Synth**: a seeded push-broom scanner producing raw cubes, references
//!    and exact ground truth ([`synth`]).
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detect;
pub mod error;
pub mod evaluate;
pub mod filter;
pub mod format;
pub mod geometry;
pub mod hypercube;
pub mod image;
pub mod linalg;
pub mod preprocess;
pub mod profile;
pub mod report;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use hypercube::{CubeKind, Hypercube, Step};
pub use image::{Image, Mask};
pub use scalar::Scalar;

/// Double-precision hypercube, the canonical in-memory precision.
pub type Cube = Hypercube<f64>;
/// Single-precision hypercube.
pub type Cube32 = Hypercube<f32>;
/// Double-precision 2-D plane.
pub type Plane = Image<f64>;
/// Single-precision 2-D plane.
pub type Plane32 = Image<f32>;
