use std::fmt;
use std::str::FromStr;

use super::saliency::SaliencyMap;
use crate::error::{Error, Result};
use crate::image::Mask;
use crate::scalar::Scalar;

/// How the saliency map is binarised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy {
    /// `mask = map >= t`, `t` in `[0, 1]`.
    Fixed(f64),
    /// Otsu's method over a 256-bin histogram of `[0, 1]`.
    Otsu,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::Fixed(0.5)
    }
}

impl fmt::Display for ThresholdPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdPolicy::Fixed(t) => write!(f, "{t}"),
            ThresholdPolicy::Otsu => f.write_str("otsu"),
        }
    }
}

impl FromStr for ThresholdPolicy {
    type Err = Error;

    /// `"otsu"` or a number.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("otsu") {
            return Ok(ThresholdPolicy::Otsu);
        }
        s.parse::<f64>()
            .map(ThresholdPolicy::Fixed)
            .map_err(|_| Error::InvalidParameter(format!("threshold must be 'otsu' or a number, got '{s}'")))
    }
}

/// Thresholded saliency map.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMask {
    pub mask: Mask,
    pub threshold_used: f64,
}

pub fn threshold_mask<T: Scalar>(map: &SaliencyMap<T>, policy: ThresholdPolicy) -> Result<BinaryMask> {
    let values = &map.values;
    let t = match policy {
        ThresholdPolicy::Fixed(t) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!("fixed threshold {t} outside [0, 1]")));
            }
            t
        }
        ThresholdPolicy::Otsu => otsu_threshold(values.as_slice()),
    };
    let tt = T::lit(t);
    Ok(BinaryMask { mask: values.map(|v| v >= tt), threshold_used: t })
}

/// Otsu threshold of values in `[0, 1]`.
///
/// Histogram bin of `v` is `min(floor(256 v), 255)`. A split after bin `k`
/// yields threshold `(k + 1) / 256`. When several splits reach the maximum
/// between-class variance the middle of that range is used. A histogram
/// with a single populated bin gives 1.0.
pub fn otsu_threshold<T: Scalar>(values: &[T]) -> f64 {
    let mut hist = [0u64; 256];
    for v in values {
        let b = (v.as_f64() * 256.0).floor().clamp(0.0, 255.0) as usize;
        hist[b] += 1;
    }
    let total: u64 = hist.iter().sum();
    let center = |b: usize| (b as f64 + 0.5) / 256.0;
    let total_mass: f64 = hist.iter().enumerate().map(|(b, &h)| h as f64 * center(b)).sum();

    let mut between = [f64::NEG_INFINITY; 255];
    let (mut w0, mut m0) = (0u64, 0.0f64);
    for k in 0..255 {
        w0 += hist[k];
        m0 += hist[k] as f64 * center(k);
        let w1 = total - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let mu0 = m0 / w0 as f64;
        let mu1 = (total_mass - m0) / w1 as f64;
        between[k] = w0 as f64 * w1 as f64 * (mu0 - mu1).powi(2);
    }
    let best = between.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return 1.0;
    }
    let tol = best.abs() * 1e-12;
    let near: Vec<usize> = (0..255).filter(|&k| between[k] >= best - tol).collect();
    let k = (near[0] + near[near.len() - 1]) / 2;
    (k + 1) as f64 / 256.0
}
