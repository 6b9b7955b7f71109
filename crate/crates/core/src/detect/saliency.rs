//! Saliency substitute: Gaussian smoothing, absolute deviation from the
//! median, and rescaling by a high percentile of the deviations.
//!
//! This is a deterministic stand-in for a learned or Gestalt saliency model;
//! it scores how far each (smoothed) pixel sits from the typical background.

use super::{median, percentile};
use crate::error::{Error, Result};
use crate::filter::gaussian_blur;
use crate::image::Image;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaliencyParams<T> {
    /// Smoothing scale, pixels.
    pub sigma: T,
    /// Deviation percentile mapped to 1.
    pub percentile: f64,
    /// Deviation scales at or below this absolute level count as a flat image.
    pub flat_floor: T,
}

impl<T: Scalar> Default for SaliencyParams<T> {
    fn default() -> Self {
        Self { sigma: T::lit(2.0), percentile: 99.5, flat_floor: T::zero() }
    }
}

/// Gray-scale damage likelihood in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap<T> {
    pub values: Image<T>,
    /// Provenance of the guide image the map was computed from.
    pub source: String,
}

pub fn saliency_map<T: Scalar>(guide: &Image<T>) -> Result<SaliencyMap<T>> {
    saliency_map_with(guide, &SaliencyParams::default())
}

/// Saliency with explicit parameters.
///
/// A deviation scale within `√eps · max|smoothed|` (or `flat_floor`) is treated
/// as a constant image and gives an all-zero map. When fewer pixels than the
/// percentile deviate, the maximum deviation is used as the scale instead.
pub fn saliency_map_with<T: Scalar>(guide: &Image<T>, params: &SaliencyParams<T>) -> Result<SaliencyMap<T>> {
    if let Some(k) = guide.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("guide pixel ({}, {})", k / guide.cols(), k % guide.cols())));
    }
    let smoothed = gaussian_blur(guide, params.sigma);
    let center = median(smoothed.as_slice());
    let deviation = smoothed.map(|v| (v - center).abs());

    let mut scale = percentile(deviation.as_slice(), params.percentile);
    let max_dev = deviation.as_slice().iter().fold(T::zero(), |m, &v| m.max(v));
    if !(scale > T::zero()) {
        scale = max_dev;
    }
    let magnitude = smoothed.as_slice().iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let floor = params.flat_floor.max(T::epsilon().sqrt() * magnitude);
    let values = if !(scale > floor) {
        Image::filled(guide.rows(), guide.cols(), T::zero())
    } else {
        deviation.map(|d| (d / scale).min(T::one()))
    };
    Ok(SaliencyMap { values, source: format!("saliency(sigma={}, percentile={})", params.sigma, params.percentile) })
}
