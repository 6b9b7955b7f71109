use crate::error::{Error, Result};
use crate::hypercube::{CubeKind, Hypercube, Step};
use crate::scalar::Scalar;

/// Dark and white reference frames, one value per (sample column, band).
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRefs<T> {
    samples: usize,
    bands: usize,
    /// Indexed `j * bands + b`.
    dark: Vec<T>,
    white: Vec<T>,
}

impl<T: Scalar> CalibrationRefs<T> {
    pub fn new(samples: usize, bands: usize, dark: Vec<T>, white: Vec<T>) -> Result<Self> {
        if samples == 0 || bands == 0 || dark.len() != samples * bands || white.len() != samples * bands {
            return Err(Error::Shape(format!(
                "references must hold {samples}x{bands} values (dark {}, white {})",
                dark.len(),
                white.len()
            )));
        }
        Ok(Self { samples, bands, dark, white })
    }

    /// Averages multi-line dark and white recordings over the scan direction.
    pub fn from_recordings(dark: &Hypercube<T>, white: &Hypercube<T>) -> Result<Self> {
        if (dark.samples(), dark.bands()) != (white.samples(), white.bands()) {
            return Err(Error::Shape(format!(
                "dark is {}x{} (samples x bands), white is {}x{}",
                dark.samples(),
                dark.bands(),
                white.samples(),
                white.bands()
            )));
        }
        let mean = |c: &Hypercube<T>| {
            let n = T::from_usize_lossy(c.lines());
            let mut out = Vec::with_capacity(c.samples() * c.bands());
            for j in 0..c.samples() {
                for b in 0..c.bands() {
                    let mut acc = T::zero();
                    for i in 0..c.lines() {
                        acc = acc + c.at(i, j, b);
                    }
                    out.push(acc / n);
                }
            }
            out
        };
        Self::new(dark.samples(), dark.bands(), mean(dark), mean(white))
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    #[inline]
    pub fn dark(&self, j: usize, b: usize) -> T {
        self.dark[j * self.bands + b]
    }

    #[inline]
    pub fn white(&self, j: usize, b: usize) -> T {
        self.white[j * self.bands + b]
    }

    /// Positions where `white - dark` is not strictly positive.
    pub fn dead_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.samples {
            for b in 0..self.bands {
                let span = self.white(j, b) - self.dark(j, b);
                if !(span > T::zero()) || !span.is_finite() {
                    out.push((j, b));
                }
            }
        }
        out
    }

    /// The references as single-line cubes `(dark, white)`, e.g. for writing to disk.
    pub fn to_cubes(&self) -> (Hypercube<T>, Hypercube<T>) {
        let as_cube = |v: &[T]| {
            Hypercube::from_fn(1, self.samples, self.bands, CubeKind::RawRadiance, |_, j, b| v[j * self.bands + b])
        };
        (as_cube(&self.dark), as_cube(&self.white))
    }
}

/// Dead positions found while calibrating.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CalibrationReport {
    /// `(sample, band)` pairs with `white <= dark`; their output is 0.
    pub dead: Vec<(usize, usize)>,
}

/// Converts raw counts to reflectance: `r = (s - d) / (w - d)`.
///
/// Values above 1 (specular highlights) are kept. Dead reference positions are
/// written as 0 and flagged on the output cube.
pub fn calibrate<T: Scalar>(
    raw: &Hypercube<T>,
    refs: &CalibrationRefs<T>,
) -> Result<(Hypercube<T>, CalibrationReport)> {
    raw.require_kind("calibrate", &[CubeKind::RawRadiance])?;
    if (raw.samples(), raw.bands()) != (refs.samples, refs.bands) {
        return Err(Error::Shape(format!(
            "cube has {} samples x {} bands, references {}x{}",
            raw.samples(),
            raw.bands(),
            refs.samples,
            refs.bands
        )));
    }
    let dead_list = refs.dead_positions();
    if dead_list.len() == refs.samples * refs.bands {
        return Err(Error::AllDead);
    }
    let mut dead = vec![false; refs.samples * refs.bands];
    for &(j, b) in &dead_list {
        dead[j * refs.bands + b] = true;
    }

    let (lines, samples, bands) = raw.dims();
    let mut values = Vec::with_capacity(raw.values().len());
    for b in 0..bands {
        for i in 0..lines {
            for j in 0..samples {
                let v = if dead[j * bands + b] {
                    T::zero()
                } else {
                    let d = refs.dark(j, b);
                    (raw.at(i, j, b) - d) / (refs.white(j, b) - d)
                };
                values.push(v);
            }
        }
    }
    let step = Step::new("calibrate").param("dead", dead_list.len());
    let cube = raw
        .derive(lines, samples, bands, values, raw.wavelengths().to_vec(), CubeKind::Reflectance, step)?
        .with_dead(Some(dead));
    Ok((cube, CalibrationReport { dead: dead_list }))
}
