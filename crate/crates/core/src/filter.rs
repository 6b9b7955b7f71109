//! Separable Gaussian smoothing with truncated, renormalised borders.

use crate::image::Image;
use crate::scalar::Scalar;

/// Unnormalised Gaussian taps `exp(-k²/2σ²)` for `k` in `-radius..=radius`.
pub fn gaussian_taps<T: Scalar>(sigma: T, radius: usize) -> Vec<T> {
    let two_s2 = T::lit(2.0) * sigma * sigma;
    (0..=2 * radius)
        .map(|n| {
            let k = T::from_usize_lossy(n) - T::from_usize_lossy(radius);
            (-(k * k) / two_s2).exp()
        })
        .collect()
}

/// Gaussian blur with support `ceil(3σ)`.
pub fn gaussian_blur<T: Scalar>(img: &Image<T>, sigma: T) -> Image<T> {
    let radius = (T::lit(3.0) * sigma).ceil().to_usize().unwrap_or(0);
    gaussian_blur_with_radius(img, sigma, radius)
}

/// Gaussian blur over a `(2r+1)²` window. Taps falling outside the image are
/// dropped and the remaining weights renormalised, so a constant image is
/// returned unchanged.
pub fn gaussian_blur_with_radius<T: Scalar>(img: &Image<T>, sigma: T, radius: usize) -> Image<T> {
    let taps = gaussian_taps(sigma, radius);
    let (rows, cols) = img.shape();
    let r = radius as isize;

    let pass = |src: &Image<T>, along_cols: bool| {
        Image::from_fn(rows, cols, |y, x| {
            let (pos, len) = if along_cols { (x as isize, cols as isize) } else { (y as isize, rows as isize) };
            let mut acc = T::zero();
            let mut norm = T::zero();
            for k in -r..=r {
                let p = pos + k;
                if p < 0 || p >= len {
                    continue;
                }
                let w = taps[(k + r) as usize];
                let v = if along_cols { src.get(y, p as usize) } else { src.get(p as usize, x) };
                acc = acc + w * v;
                norm = norm + w;
            }
            acc / norm
        })
    };

    let horizontal = pass(img, true);
    pass(&horizontal, false)
}
