use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypercube::{CubeKind, Hypercube, Step};
use crate::scalar::Scalar;

/// Which population SNV statistics are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnvMode {
    /// Each band standardised over all pixels.
    #[default]
    PerBand,
    /// Each pixel spectrum standardised by its own mean and std (classic SNV).
    PerSpectrum,
}

impl SnvMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SnvMode::PerBand => "per-band",
            SnvMode::PerSpectrum => "per-spectrum",
        }
    }
}

impl fmt::Display for SnvMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SnvMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per-band" | "band" => Ok(SnvMode::PerBand),
            "per-spectrum" | "spectrum" => Ok(SnvMode::PerSpectrum),
            other => Err(Error::InvalidParameter(format!("unknown SNV mode '{other}'"))),
        }
    }
}

/// Means and standard deviations used by [`snv_correct`].
///
/// Per-band: one entry per band. Per-spectrum: one entry per pixel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SnvStats<T> {
    pub mode: SnvMode,
    pub mu: Vec<T>,
    pub sigma: Vec<T>,
}

/// Standard normal variate correction.
///
/// Fails with [`Error::Degenerate`] naming the band or pixel whose standard
/// deviation is zero. Dead entries are excluded from the statistics and stay 0.
pub fn snv_correct<T: Scalar>(cube: &Hypercube<T>, mode: SnvMode) -> Result<(Hypercube<T>, SnvStats<T>)> {
    cube.require_kind("snv", &[CubeKind::Reflectance])?;
    let (lines, samples, bands) = cube.dims();
    let mut values = vec![T::zero(); cube.values().len()];
    let mut mu = Vec::new();
    let mut sigma = Vec::new();

    match mode {
        SnvMode::PerBand => {
            for b in 0..bands {
                let plane = cube.band_plane(b);
                let live = |k: &usize| !cube.is_dead(k % samples, b);
                let idx: Vec<usize> = (0..lines * samples).filter(live).collect();
                let (m, s) = mean_std(idx.iter().map(|&k| plane[k]));
                if idx.is_empty() || !(s > T::zero()) {
                    return Err(Error::Degenerate(format!("band {b} has zero standard deviation")));
                }
                let base = b * lines * samples;
                for k in idx {
                    values[base + k] = (plane[k] - m) / s;
                }
                mu.push(m);
                sigma.push(s);
            }
        }
        SnvMode::PerSpectrum => {
            for i in 0..lines {
                for j in 0..samples {
                    let live: Vec<usize> = (0..bands).filter(|&b| !cube.is_dead(j, b)).collect();
                    let (m, s) = mean_std(live.iter().map(|&b| cube.at(i, j, b)));
                    if live.is_empty() || !(s > T::zero()) {
                        return Err(Error::Degenerate(format!(
                            "pixel ({i}, {j}) spectrum has zero standard deviation"
                        )));
                    }
                    for b in live {
                        values[cube.index(i, j, b)] = (cube.at(i, j, b) - m) / s;
                    }
                    mu.push(m);
                    sigma.push(s);
                }
            }
        }
    }

    let dead = cube.dead_mask().map(<[bool]>::to_vec);
    let step = Step::new("snv").param("mode", mode);
    let out = cube
        .derive(lines, samples, bands, values, cube.wavelengths().to_vec(), CubeKind::SnvCorrected, step)?
        .with_dead(dead);
    Ok((out, SnvStats { mode, mu, sigma }))
}

/// Two-pass population mean and standard deviation.
pub(crate) fn mean_std<T: Scalar>(xs: impl Iterator<Item = T> + Clone) -> (T, T) {
    let mut n = 0usize;
    let mut sum = T::zero();
    for x in xs.clone() {
        sum = sum + x;
        n += 1;
    }
    if n == 0 {
        return (T::zero(), T::zero());
    }
    let nf = T::from_usize_lossy(n);
    let mean = sum / nf;
    let mut ss = T::zero();
    for x in xs {
        let d = x - mean;
        ss = ss + d * d;
    }
    (mean, (ss / nf).sqrt())
}
