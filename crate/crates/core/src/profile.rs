//! Region-of-interest spectral profiles: per-band mean ± std, crossings of two
//! profiles, and a per-band separation score.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypercube::Hypercube;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoiShape {
    Rect { row0: usize, col0: usize, rows: usize, cols: usize },
    Pixels(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roi {
    pub name: String,
    pub shape: RoiShape,
}

impl Roi {
    pub fn rect(name: impl Into<String>, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self { name: name.into(), shape: RoiShape::Rect { row0, col0, rows, cols } }
    }

    pub fn pixels(name: impl Into<String>, pixels: Vec<(usize, usize)>) -> Self {
        Self { name: name.into(), shape: RoiShape::Pixels(pixels) }
    }

    fn resolve(&self, lines: usize, samples: usize) -> Result<Vec<(usize, usize)>> {
        let px: Vec<(usize, usize)> = match &self.shape {
            RoiShape::Rect { row0, col0, rows, cols } => {
                if row0 + rows > lines || col0 + cols > samples {
                    return Err(Error::OutOfRange(format!(
                        "ROI '{}' exceeds {lines}x{samples}",
                        self.name
                    )));
                }
                (*row0..row0 + rows).flat_map(|r| (*col0..col0 + cols).map(move |c| (r, c))).collect()
            }
            RoiShape::Pixels(p) => {
                if let Some(&(r, c)) = p.iter().find(|&&(r, c)| r >= lines || c >= samples) {
                    return Err(Error::OutOfRange(format!("ROI '{}' pixel ({r}, {c}) outside cube", self.name)));
                }
                p.clone()
            }
        };
        if px.is_empty() {
            return Err(Error::InvalidParameter(format!("ROI '{}' is empty", self.name)));
        }
        Ok(px)
    }
}

impl FromStr for Roi {
    type Err = Error;

    /// `name:row0,col0,rows,cols`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("ROI '{s}' must look like name:row0,col0,rows,cols"));
        let (name, rest) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = rest
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match nums[..] {
            [r, c, h, w] => Ok(Roi::rect(name.trim(), r, c, h, w)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Roi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            RoiShape::Rect { row0, col0, rows, cols } => write!(f, "{}:{row0},{col0},{rows},{cols}", self.name),
            RoiShape::Pixels(p) => write!(f, "{}:<{} pixels>", self.name, p.len()),
        }
    }
}

/// Mean and population std spectra of an ROI.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile<T> {
    pub name: String,
    pub mean: Vec<T>,
    pub std: Vec<T>,
    pub n: usize,
    pub wavelengths: Vec<f64>,
}

pub fn roi_profile<T: Scalar>(cube: &Hypercube<T>, roi: &Roi) -> Result<SpectralProfile<T>> {
    let px = roi.resolve(cube.lines(), cube.samples())?;
    let n = T::from_usize_lossy(px.len());
    let mut mean = Vec::with_capacity(cube.bands());
    let mut std = Vec::with_capacity(cube.bands());
    for b in 0..cube.bands() {
        let m = px.iter().fold(T::zero(), |acc, &(i, j)| acc + cube.at(i, j, b)) / n;
        let v = px.iter().fold(T::zero(), |acc, &(i, j)| {
            let d = cube.at(i, j, b) - m;
            acc + d * d
        }) / n;
        mean.push(m);
        std.push(v.sqrt());
    }
    Ok(SpectralProfile { name: roi.name.clone(), mean, std, n: px.len(), wavelengths: cube.wavelengths().to_vec() })
}

/// Sign changes of `p1.mean - p2.mean`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Crossings {
    /// Interpolated wavelengths of strict sign changes between adjacent bands.
    pub crossings: Vec<f64>,
    /// Band wavelengths where the difference is exactly zero.
    pub tangencies: Vec<f64>,
}

fn check_axes<T>(p1: &SpectralProfile<T>, p2: &SpectralProfile<T>) -> Result<()> {
    if p1.wavelengths != p2.wavelengths || p1.mean.len() != p2.mean.len() {
        return Err(Error::Shape(format!(
            "profiles '{}' and '{}' have different wavelength axes",
            p1.name, p2.name
        )));
    }
    Ok(())
}

pub fn profile_crossings<T: Scalar>(p1: &SpectralProfile<T>, p2: &SpectralProfile<T>) -> Result<Crossings> {
    check_axes(p1, p2)?;
    if p1.wavelengths.is_empty() {
        return Err(Error::InvalidParameter("profiles carry no wavelength axis".into()));
    }
    let d: Vec<f64> = p1.mean.iter().zip(&p2.mean).map(|(a, b)| (*a - *b).as_f64()).collect();
    let w = &p1.wavelengths;
    let mut out = Crossings::default();
    for b in 0..d.len() {
        if d[b] == 0.0 {
            out.tangencies.push(w[b]);
        }
        if b + 1 < d.len() && d[b] * d[b + 1] < 0.0 {
            out.crossings.push(w[b] + (w[b + 1] - w[b]) * d[b] / (d[b] - d[b + 1]));
        }
    }
    Ok(out)
}

/// Per-band `|m1 - m2| / sqrt((s1² + s2²)/2 + 1e-12)` and the index of its
/// first maximum.
pub fn profile_separation<T: Scalar>(p1: &SpectralProfile<T>, p2: &SpectralProfile<T>) -> Result<(Vec<T>, usize)> {
    check_axes(p1, p2)?;
    let eps = T::lit(1e-12);
    let two = T::lit(2.0);
    let scores: Vec<T> = (0..p1.mean.len())
        .map(|b| {
            let pooled = (p1.std[b] * p1.std[b] + p2.std[b] * p2.std[b]) / two;
            (p1.mean[b] - p2.mean[b]).abs() / (pooled + eps).sqrt()
        })
        .collect();
    let mut best = 0;
    for (b, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = b;
        }
    }
    Ok((scores, best))
}
