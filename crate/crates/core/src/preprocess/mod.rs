//! Spectral and spatial pre-processing.
//!
//! Order along the pipeline: [`calibrate`] (raw counts → reflectance), optional
//! [`bin`], [`snv_correct`], then [`pca`] and the PC1-guided
//! [`joint_bilateral_filter`]. Standard deviations are population (1/n)
//! throughout the crate.
//!
//! Global reductions (means, variances, covariance) are accumulated
//! sequentially in row-major pixel order, so results do not depend on the
//! rayon thread count.

mod binning;
mod calibrate;
mod jbf;
mod pca;
mod snv;

pub use binning::bin;
pub use calibrate::{calibrate, CalibrationRefs, CalibrationReport};
pub use jbf::{jbf_pc1, jbf_weights, joint_bilateral_filter, JbfParams, WindowRule};
pub use pca::{first_component, pca, PcaModel};
pub use snv::{snv_correct, SnvMode, SnvStats};
