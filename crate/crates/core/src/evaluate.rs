//! Pixel-level precision and recall against ground-truth masks.

use crate::error::{Error, Result};
use crate::image::Mask;

/// Pixel counts and the derived metrics.
///
/// Zero denominators: no detections gives precision 0 with `no_detections`
/// set; empty truth gives recall 1 with `empty_truth` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub no_detections: bool,
    pub empty_truth: bool,
}

impl EvalResult {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let (precision, no_detections) = ratio(tp as f64, (tp + fp) as f64, 0.0);
        let (recall, empty_truth) = ratio(tp as f64, (tp + fn_) as f64, 1.0);
        Self { tp, fp, fn_, precision, recall, no_detections, empty_truth }
    }
}

fn ratio(num: f64, den: f64, fallback: f64) -> (f64, bool) {
    if den > 0.0 {
        (num / den, false)
    } else {
        (fallback, true)
    }
}

pub fn precision_recall(detected: &Mask, truth: &Mask) -> Result<EvalResult> {
    if detected.shape() != truth.shape() {
        return Err(Error::Shape(format!(
            "detected mask is {:?}, truth is {:?}",
            detected.shape(),
            truth.shape()
        )));
    }
    let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
    for (&d, &t) in detected.as_slice().iter().zip(truth.as_slice()) {
        match (d, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(EvalResult::from_counts(tp, fp, fn_))
}

/// Overall score across samples.
///
/// Counts are pooled rather than ratios averaged: precision is
/// `Σ w·tp / Σ w·(tp + fp)` and recall `Σ w·tp / Σ w·(tp + fn)`. The returned
/// integer counts are the unweighted sums. With equal weights the result is
/// exactly the score of the concatenated masks.
pub fn weighted_overall(results: &[(EvalResult, f64)]) -> Result<EvalResult> {
    if results.is_empty() {
        return Err(Error::InvalidParameter("no results to pool".into()));
    }
    if let Some((_, w)) = results.iter().find(|(_, w)| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(format!("weight {w} must be positive")));
    }
    let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
    let (mut wtp, mut wfp, mut wfn) = (0.0, 0.0, 0.0);
    for (r, w) in results {
        tp += r.tp;
        fp += r.fp;
        fn_ += r.fn_;
        wtp += w * r.tp as f64;
        wfp += w * r.fp as f64;
        wfn += w * r.fn_ as f64;
    }
    let (precision, no_detections) = ratio(wtp, wtp + wfp, 0.0);
    let (recall, empty_truth) = ratio(wtp, wtp + wfn, 1.0);
    Ok(EvalResult { tp, fp, fn_, precision, recall, no_detections, empty_truth })
}

/// Unit-weight pooling of raw counts.
pub fn pool(results: &[EvalResult]) -> Result<EvalResult> {
    let weighted: Vec<(EvalResult, f64)> = results.iter().map(|r| (*r, 1.0)).collect();
    weighted_overall(&weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Image;

    fn mask(bits: &[u8], cols: usize) -> Mask {
        Image::new(bits.len() / cols, cols, bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    #[test]
    fn perfect_detection() {
        let t = mask(&[1, 0, 1, 1], 2);
        let r = precision_recall(&t, &t).unwrap();
        assert_eq!((r.precision, r.recall), (1.0, 1.0));
    }

    #[test]
    fn empty_detection_flagged() {
        let r = precision_recall(&mask(&[0, 0, 0, 0], 2), &mask(&[1, 0, 0, 0], 2)).unwrap();
        assert_eq!((r.precision, r.recall), (0.0, 0.0));
        assert!(r.no_detections && !r.empty_truth);
        let r = precision_recall(&mask(&[1, 0, 0, 0], 2), &mask(&[0, 0, 0, 0], 2)).unwrap();
        assert_eq!((r.precision, r.recall), (0.0, 1.0));
        assert!(r.empty_truth);
    }

    #[test]
    fn three_by_three_counts() {
        let d = mask(&[1, 1, 1, 0, 0, 0, 0, 0, 0], 3);
        let t = mask(&[1, 1, 0, 1, 0, 0, 0, 0, 0], 3);
        let r = precision_recall(&d, &t).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (2, 1, 1));
        assert!((r.precision - 2.0 / 3.0).abs() < 1e-15 && (r.recall - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch() {
        assert!(precision_recall(&mask(&[1, 0], 2), &mask(&[1, 0], 1)).is_err());
    }

    #[test]
    fn pooling() {
        let a = EvalResult::from_counts(10, 0, 0);
        let b = EvalResult::from_counts(0, 10, 10);
        let p = weighted_overall(&[(a, 1.0), (b, 1.0)]).unwrap();
        assert_eq!((p.precision, p.recall), (0.5, 0.5));
        assert_eq!(weighted_overall(&[(b, 3.0)]).unwrap(), b);
        let c = EvalResult::from_counts(3, 1, 2);
        let cc = weighted_overall(&[(c, 2.0), (c, 2.0)]).unwrap();
        assert_eq!((cc.precision, cc.recall), (c.precision, c.recall));
        assert!(weighted_overall(&[]).is_err());
        assert!(weighted_overall(&[(a, 0.0)]).is_err());
    }
}
