use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypercube::{CubeKind, Hypercube, Step};
use crate::image::Image;
use crate::linalg::symmetric_eigen;
use crate::scalar::Scalar;

/// Principal axes of the pixel spectra.
///
/// Components are unit length and mutually orthogonal, ordered by
/// non-increasing variance. Each component's largest-magnitude coefficient is
/// positive (first such coefficient on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel<T> {
    pub mean_spectrum: Vec<T>,
    pub components: Vec<Vec<T>>,
    pub explained_variance: Vec<T>,
    /// Trace of the covariance, i.e. the sum of all B eigenvalues.
    pub total_variance: T,
}

impl<T: Scalar> PcaModel<T> {
    /// Scores of one spectrum. Entries flagged in `skip` count as the mean.
    pub fn project(&self, spectrum: &[T], skip: impl Fn(usize) -> bool) -> Vec<T> {
        self.components
            .iter()
            .map(|c| {
                let mut acc = T::zero();
                for (b, (&x, &m)) in spectrum.iter().zip(&self.mean_spectrum).enumerate() {
                    if !skip(b) {
                        acc = acc + (x - m) * c[b];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Population covariance PCA over pixel spectra; returns the model and a
/// feature cube holding the `k` score planes.
///
/// Pixels in a column with any dead band are left out of the statistics; their
/// scores treat dead bands as equal to the mean.
pub fn pca<T: Scalar>(cube: &Hypercube<T>, k: usize) -> Result<(PcaModel<T>, Hypercube<T>)> {
    let (lines, samples, bands) = cube.dims();
    let live_cols: Vec<usize> = (0..samples).filter(|&j| cube.column_live(j)).collect();
    let n = lines * live_cols.len();
    if k == 0 || k > bands.min(n) {
        return Err(Error::InvalidParameter(format!(
            "component count {k} outside 1..={}",
            bands.min(n)
        )));
    }

    let mut spectrum = vec![T::zero(); bands];
    let gather = |i: usize, j: usize, buf: &mut [T]| {
        for (b, v) in buf.iter_mut().enumerate() {
            *v = cube.at(i, j, b);
        }
    };

    let mut mean = vec![T::zero(); bands];
    for i in 0..lines {
        for &j in &live_cols {
            gather(i, j, &mut spectrum);
            for (b, &x) in spectrum.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite(format!("({i}, {j}, {b})")));
                }
                mean[b] = mean[b] + x;
            }
        }
    }
    let nf = T::from_usize_lossy(n);
    for m in &mut mean {
        *m = *m / nf;
    }

    let mut cov = vec![T::zero(); bands * bands];
    for i in 0..lines {
        for &j in &live_cols {
            gather(i, j, &mut spectrum);
            for (x, m) in spectrum.iter_mut().zip(&mean) {
                *x = *x - *m;
            }
            for p in 0..bands {
                let xp = spectrum[p];
                let row = &mut cov[p * bands..(p + 1) * bands];
                for q in p..bands {
                    row[q] = row[q] + xp * spectrum[q];
                }
            }
        }
    }
    for p in 0..bands {
        for q in p..bands {
            let v = cov[p * bands + q] / nf;
            cov[p * bands + q] = v;
            cov[q * bands + p] = v;
        }
    }
    let total_variance = (0..bands).map(|p| cov[p * bands + p]).sum::<T>();

    let eig = symmetric_eigen(&cov, bands);
    let mut components: Vec<Vec<T>> = eig.vectors.into_iter().take(k).collect();
    for c in &mut components {
        let mut lead = 0;
        for (b, v) in c.iter().enumerate() {
            if v.abs() > c[lead].abs() {
                lead = b;
            }
        }
        if c[lead] < T::zero() {
            c.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let model = PcaModel {
        mean_spectrum: mean,
        components,
        explained_variance: eig.values.into_iter().take(k).collect(),
        total_variance,
    };

    let scores: Vec<Vec<T>> = (0..lines * samples)
        .into_par_iter()
        .map(|px| {
            let (i, j) = (px / samples, px % samples);
            let s: Vec<T> = (0..bands).map(|b| cube.at(i, j, b)).collect();
            model.project(&s, |b| cube.is_dead(j, b))
        })
        .collect();
    let mut values = Vec::with_capacity(k * lines * samples);
    for p in 0..k {
        values.extend(scores.iter().map(|s| s[p]));
    }
    let step = Step::new("pca").param("k", k);
    let features = cube.derive(lines, samples, k, values, Vec::new(), CubeKind::Feature, step)?;
    Ok((model, features))
}

/// First principal component score plane (the default JBF guide).
pub fn first_component<T: Scalar>(cube: &Hypercube<T>) -> Result<(PcaModel<T>, Image<T>)> {
    let (model, features) = pca(cube, 1)?;
    Ok((model, features.slice_band(0)?))
}
