//! Damage detection: saliency map → hard threshold → connected regions →
//! moment-ellipse shape features, plus background suppression for feature maps.

mod background;
mod features;
mod pipeline;
mod regions;
mod saliency;
mod threshold;

pub use background::{suppress_background, DEFAULT_BACKGROUND_PERCENTILE};
pub use features::{chain_code, region_features, RegionFeatures};
pub use pipeline::{detect_damage, pc1_saliency, DetectConfig, Detection};
pub use regions::{extract_regions, Region};
pub use saliency::{saliency_map, saliency_map_with, SaliencyMap, SaliencyParams};
pub use threshold::{otsu_threshold, threshold_mask, BinaryMask, ThresholdPolicy};

use crate::scalar::Scalar;

/// `q`-th percentile (0..=100) by linear interpolation between order
/// statistics at rank `q/100 · (n-1)`. Panics on empty input.
pub fn percentile<T: Scalar>(values: &[T], q: f64) -> T {
    assert!(!values.is_empty(), "percentile of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    percentile_sorted(&sorted, q)
}

pub(crate) fn percentile_sorted<T: Scalar>(sorted: &[T], q: f64) -> T {
    let rank = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = T::lit(rank - lo as f64);
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

pub fn median<T: Scalar>(values: &[T]) -> T {
    percentile(values, 50.0)
}
