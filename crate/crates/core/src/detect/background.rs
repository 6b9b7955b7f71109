use super::percentile;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Scalar;

/// Default clamp percentile for [`suppress_background`].
pub const DEFAULT_BACKGROUND_PERCENTILE: f64 = 75.0;

/// Raises everything below the `q`-th percentile to that percentile, then
/// rescales to `[0, 1]`. A plane that is constant after clamping becomes all zeros.
pub fn suppress_background<T: Scalar>(plane: &Image<T>, q: f64) -> Result<Image<T>> {
    if !(0.0..100.0).contains(&q) {
        return Err(Error::InvalidParameter(format!("percentile {q} outside [0, 100)")));
    }
    if let Some(k) = plane.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("plane element {k}")));
    }
    let floor = percentile(plane.as_slice(), q);
    let clamped = plane.map(|v| v.max(floor));
    let (lo, hi) = clamped
        .as_slice()
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > lo) {
        return Ok(Image::filled(plane.rows(), plane.cols(), T::zero()));
    }
    Ok(clamped.map(|v| (v - lo) / (hi - lo)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_plane_is_zero() {
        let out = suppress_background(&Image::filled(4, 4, 3.0f64), 75.0).unwrap();
        assert!(out.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn background_and_blob() {
        let plane = Image::from_fn(10, 10, |r, _| if r == 0 { 0.9f64 } else { 0.2 });
        let out = suppress_background(&plane, 75.0).unwrap();
        for r in 0..10 {
            for c in 0..10 {
                assert_eq!(out.get(r, c), if r == 0 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn percentile_range() {
        let p = Image::filled(2, 2, 0.0f64);
        assert!(suppress_background(&p, 100.0).is_err());
        assert!(suppress_background(&p, -1.0).is_err());
    }
}
