//! Two-scan stitching with a known overlap, and restoration of scans acquired
//! with the sample tilted against the stage.
//!
//! Tilt geometry: with the sample tilted by θ, each stage step of `s` moves the
//! surface under the camera by `s / cos θ`, so the acquired image is
//! compressed along the scan by `cos θ`. Restoration stretches the line axis by
//! `1 / cos θ`; the synthetic scanner applies the inverse.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypercube::{Hypercube, Step};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Blend {
    #[default]
    Average,
    TakeFirst,
}

impl fmt::Display for Blend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Blend::Average => "average",
            Blend::TakeFirst => "take-first",
        })
    }
}

impl FromStr for Blend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "average" => Ok(Blend::Average),
            "take-first" | "first" => Ok(Blend::TakeFirst),
            other => Err(Error::InvalidParameter(format!("unknown blend '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StitchSpec {
    /// Overlapping sample columns between the two scans.
    pub overlap: usize,
    pub blend: Blend,
}

/// Joins `a` (left) and `b` (right) along the sample axis: output width
/// `2x - overlap`, where the last `overlap` columns of `a` coincide with the
/// first `overlap` columns of `b`.
pub fn stitch<T: Scalar>(a: &Hypercube<T>, b: &Hypercube<T>, spec: StitchSpec) -> Result<Hypercube<T>> {
    if a.dims() != b.dims() {
        return Err(Error::Shape(format!("scans differ: {:?} vs {:?}", a.dims(), b.dims())));
    }
    if a.wavelengths() != b.wavelengths() {
        return Err(Error::Shape("scans have different wavelength axes".into()));
    }
    let (lines, x, bands) = a.dims();
    if spec.overlap > x {
        return Err(Error::InvalidParameter(format!("overlap {} exceeds scan width {x}", spec.overlap)));
    }
    let width = 2 * x - spec.overlap;
    let left = x - spec.overlap;
    let two = T::lit(2.0);

    let mut values = Vec::with_capacity(lines * width * bands);
    let mut dead = vec![false; width * bands];
    for band in 0..bands {
        for i in 0..lines {
            for j in 0..width {
                let from_a = (j < x).then_some(j);
                let from_b = (j >= left).then(|| j - left);
                let live_a = from_a.filter(|&ja| !a.is_dead(ja, band));
                let live_b = from_b.filter(|&jb| !b.is_dead(jb, band));
                let v = match (live_a, live_b) {
                    (Some(ja), Some(jb)) => match spec.blend {
                        Blend::Average => (a.at(i, ja, band) + b.at(i, jb, band)) / two,
                        Blend::TakeFirst => a.at(i, ja, band),
                    },
                    (Some(ja), None) => a.at(i, ja, band),
                    (None, Some(jb)) => b.at(i, jb, band),
                    (None, None) => {
                        dead[j * bands + band] = true;
                        T::zero()
                    }
                };
                values.push(v);
            }
        }
    }
    let step = Step::new("stitch").param("overlap", spec.overlap).param("blend", spec.blend);
    Ok(a.derive(lines, width, bands, values, a.wavelengths().to_vec(), a.kind(), step)?
        .with_dead(Some(dead)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltSpec {
    /// Placing angle in degrees, `0 <= theta < 90`.
    pub theta: f64,
}

impl TiltSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..90.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("tilt angle {theta} outside [0, 90)")));
        }
        Ok(Self { theta })
    }

    /// Number of restored lines for `lines` acquired ones.
    pub fn restored_lines(&self, lines: usize) -> usize {
        (lines as f64 / self.theta.to_radians().cos()).round() as usize
    }
}

/// Stretches the line axis by `1 / cos θ` with linear interpolation.
/// Output has `round(I / cos θ)` lines; `θ = 0` returns the input values unchanged.
pub fn tilt_correct<T: Scalar>(cube: &Hypercube<T>, spec: TiltSpec) -> Result<Hypercube<T>> {
    TiltSpec::new(spec.theta)?;
    let step = Step::new("tilt").param("theta", spec.theta);
    if spec.theta == 0.0 {
        let (l, s, b) = cube.dims();
        let dead = cube.dead_mask().map(<[bool]>::to_vec);
        return Ok(cube
            .derive(l, s, b, cube.values().to_vec(), cube.wavelengths().to_vec(), cube.kind(), step)?
            .with_dead(dead));
    }
    let cos = spec.theta.to_radians().cos();
    resample_lines(cube, spec.restored_lines(cube.lines()), cos, step)
}

/// Resamples the line axis: output line `k` reads input position `k · spacing`
/// (linear interpolation, clamped to the last line).
pub fn resample_along_scan<T: Scalar>(cube: &Hypercube<T>, out_lines: usize, spacing: f64) -> Result<Hypercube<T>> {
    let step = Step::new("resample_lines").param("lines", out_lines).param("spacing", spacing);
    resample_lines(cube, out_lines, spacing, step)
}

fn resample_lines<T: Scalar>(cube: &Hypercube<T>, out_lines: usize, spacing: f64, step: Step) -> Result<Hypercube<T>> {
    if out_lines == 0 || !(spacing > 0.0) {
        return Err(Error::InvalidParameter("resampling needs >= 1 line and positive spacing".into()));
    }
    let (lines, samples, bands) = cube.dims();
    let last = (lines - 1) as f64;
    let taps: Vec<(usize, usize, T)> = (0..out_lines)
        .map(|k| {
            let pos = (k as f64 * spacing).min(last);
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(lines - 1);
            (lo, hi, T::lit(pos - lo as f64))
        })
        .collect();
    let mut values = Vec::with_capacity(out_lines * samples * bands);
    for b in 0..bands {
        for &(lo, hi, f) in &taps {
            for j in 0..samples {
                let (v0, v1) = (cube.at(lo, j, b), cube.at(hi, j, b));
                values.push(if f == T::zero() { v0 } else { v0 + (v1 - v0) * f });
            }
        }
    }
    let dead = cube.dead_mask().map(<[bool]>::to_vec);
    Ok(cube
        .derive(out_lines, samples, bands, values, cube.wavelengths().to_vec(), cube.kind(), step)?
        .with_dead(dead))
}
