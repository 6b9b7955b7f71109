use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::pca::first_component;
use crate::error::{Error, Result};
use crate::hypercube::{Hypercube, Step};
use crate::image::Image;
use crate::scalar::Scalar;

/// How the filter window is sized from the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowRule {
    /// Square window of half-width `ceil(2 σ_d)`.
    #[default]
    TwoSigma,
    /// `(2σ_d + 1)` rows × `(2σ_r + 1)` columns; both sigmas must be integers.
    Literal,
}

impl fmt::Display for WindowRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowRule::TwoSigma => "two-sigma",
            WindowRule::Literal => "literal",
        })
    }
}

impl FromStr for WindowRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "two-sigma" => Ok(WindowRule::TwoSigma),
            "literal" => Ok(WindowRule::Literal),
            other => Err(Error::InvalidParameter(format!("unknown window rule '{other}'"))),
        }
    }
}

/// Joint bilateral filter parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JbfParams<T> {
    /// Spatial Gaussian scale, pixels.
    pub sigma_d: T,
    /// Range Gaussian scale, guide units.
    pub sigma_r: T,
    pub window: WindowRule,
}

impl<T: Scalar> JbfParams<T> {
    pub fn new(sigma_d: T, sigma_r: T) -> Result<Self> {
        Self::with_rule(sigma_d, sigma_r, WindowRule::TwoSigma)
    }

    pub fn with_rule(sigma_d: T, sigma_r: T, window: WindowRule) -> Result<Self> {
        if !(sigma_d > T::zero()) || !(sigma_r > T::zero()) || !sigma_d.is_finite() || !sigma_r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma_d and sigma_r must be positive, got {sigma_d} and {sigma_r}"
            )));
        }
        if window == WindowRule::Literal && (sigma_d.fract() != T::zero() || sigma_r.fract() != T::zero()) {
            return Err(Error::InvalidParameter("literal window rule needs integer sigmas".into()));
        }
        Ok(Self { sigma_d, sigma_r, window })
    }

    /// Defaults for a guide image: σ_d = 2 and σ_r = 0.1 × the guide's dynamic range
    /// (1 for a constant guide).
    pub fn for_guide(guide: &Image<T>) -> Self {
        let (lo, hi) = guide
            .as_slice()
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let range = hi - lo;
        let sigma_r = if range > T::zero() && range.is_finite() { T::lit(0.1) * range } else { T::one() };
        Self { sigma_d: T::lit(2.0), sigma_r, window: WindowRule::TwoSigma }
    }

    /// Half extents `(rows, cols)` of the window.
    pub fn half_extent(&self) -> (usize, usize) {
        let to = |v: T| v.to_usize().unwrap_or(0);
        match self.window {
            WindowRule::TwoSigma => {
                let h = to((T::lit(2.0) * self.sigma_d).ceil());
                (h, h)
            }
            WindowRule::Literal => (to(self.sigma_d), to(self.sigma_r)),
        }
    }

    /// Full window size `(rows, cols)`, both odd.
    pub fn window_size(&self) -> (usize, usize) {
        let (hr, hc) = self.half_extent();
        (2 * hr + 1, 2 * hc + 1)
    }
}

/// Kernel weights for one output pixel, normalised to sum to 1.
///
/// Neighbours outside the image are dropped before normalising.
pub fn jbf_weights<T: Scalar>(guide: &Image<T>, params: &JbfParams<T>, i: usize, j: usize) -> Vec<(usize, usize, T)> {
    let mut w = raw_weights(guide, params, i, j, &spatial_table(params));
    let k = w.iter().fold(T::zero(), |acc, &(_, _, x)| acc + x);
    for e in &mut w {
        e.2 = e.2 / k;
    }
    w
}

fn spatial_table<T: Scalar>(params: &JbfParams<T>) -> Vec<T> {
    let (hr, hc) = params.half_extent();
    let two_s2 = T::lit(2.0) * params.sigma_d * params.sigma_d;
    let mut table = Vec::with_capacity((2 * hr + 1) * (2 * hc + 1));
    for di in 0..=2 * hr {
        for dj in 0..=2 * hc {
            let y = T::from_usize_lossy(di) - T::from_usize_lossy(hr);
            let x = T::from_usize_lossy(dj) - T::from_usize_lossy(hc);
            table.push((-(y * y + x * x) / two_s2).exp());
        }
    }
    table
}

fn raw_weights<T: Scalar>(
    guide: &Image<T>,
    params: &JbfParams<T>,
    i: usize,
    j: usize,
    spatial: &[T],
) -> Vec<(usize, usize, T)> {
    let (rows, cols) = guide.shape();
    let (hr, hc) = params.half_extent();
    let two_r2 = T::lit(2.0) * params.sigma_r * params.sigma_r;
    let center = guide.get(i, j);
    let mut out = Vec::with_capacity((2 * hr + 1) * (2 * hc + 1));
    for p in i.saturating_sub(hr)..=(i + hr).min(rows - 1) {
        for q in j.saturating_sub(hc)..=(j + hc).min(cols - 1) {
            let ds = spatial[(p + hr - i) * (2 * hc + 1) + (q + hc - j)];
            let d = center - guide.get(p, q);
            out.push((p, q, ds * (-(d * d) / two_r2).exp()));
        }
    }
    out
}

/// Filters every band with weights from the spatial Gaussian and a range
/// Gaussian on guide differences.
///
/// Windows are truncated at the image border. Dead positions receive zero
/// weight; a pixel whose live neighbourhood is empty outputs 0.
pub fn joint_bilateral_filter<T: Scalar>(
    cube: &Hypercube<T>,
    guide: &Image<T>,
    params: &JbfParams<T>,
) -> Result<Hypercube<T>> {
    let (lines, samples, bands) = cube.dims();
    if guide.shape() != (lines, samples) {
        return Err(Error::Shape(format!(
            "guide is {:?}, cube is {}x{}",
            guide.shape(),
            lines,
            samples
        )));
    }
    let spatial = spatial_table(params);
    let plane = lines * samples;
    // pixel-interleaved copy so the band loop runs over contiguous memory
    let mut bip = vec![T::zero(); plane * bands];
    for b in 0..bands {
        for (p, &v) in cube.band_plane(b).iter().enumerate() {
            bip[p * bands + b] = v;
        }
    }
    let dead = cube.dead_mask();

    // each row yields its band-major slab: bands × samples
    let rows: Vec<Vec<T>> = (0..lines)
        .into_par_iter()
        .map(|i| {
            let mut slab = vec![T::zero(); bands * samples];
            let mut acc = vec![T::zero(); bands];
            let mut norm = vec![T::zero(); bands];
            for j in 0..samples {
                let w = raw_weights(guide, params, i, j, &spatial);
                acc.fill(T::zero());
                norm.fill(T::zero());
                for &(p, q, x) in &w {
                    let px = &bip[(p * samples + q) * bands..][..bands];
                    match dead {
                        None => {
                            for (a, &v) in acc.iter_mut().zip(px) {
                                *a = *a + x * v;
                            }
                        }
                        Some(d) => {
                            let d = &d[q * bands..][..bands];
                            for b in 0..bands {
                                if !d[b] {
                                    acc[b] = acc[b] + x * px[b];
                                    norm[b] = norm[b] + x;
                                }
                            }
                        }
                    }
                }
                let k = w.iter().fold(T::zero(), |s, &(_, _, x)| s + x);
                for b in 0..bands {
                    let k = if dead.is_some() { norm[b] } else { k };
                    slab[b * samples + j] = if k > T::zero() { acc[b] / k } else { T::zero() };
                }
            }
            slab
        })
        .collect();

    let mut values = vec![T::zero(); bands * plane];
    for (i, slab) in rows.iter().enumerate() {
        for b in 0..bands {
            let dst = b * plane + i * samples;
            values[dst..dst + samples].copy_from_slice(&slab[b * samples..(b + 1) * samples]);
        }
    }
    let step = Step::new("jbf")
        .param("sigma_d", params.sigma_d)
        .param("sigma_r", params.sigma_r)
        .param("window", params.window);
    let dead = dead.map(<[bool]>::to_vec);
    Ok(cube
        .derive(lines, samples, bands, values, cube.wavelengths().to_vec(), cube.kind(), step)?
        .with_dead(dead))
}

/// Joint bilateral filter guided by the cube's own first principal component.
/// `params = None` picks [`JbfParams::for_guide`]. Returns the filtered cube and the guide.
pub fn jbf_pc1<T: Scalar>(cube: &Hypercube<T>, params: Option<JbfParams<T>>) -> Result<(Hypercube<T>, Image<T>)> {
    let (_, guide) = first_component(cube)?;
    let params = params.unwrap_or_else(|| JbfParams::for_guide(&guide));
    let out = joint_bilateral_filter(cube, &guide, &params)?;
    Ok((out, guide))
}
