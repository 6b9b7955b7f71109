use crate::error::{Error, Result};
use crate::hypercube::{Hypercube, Step};
use crate::scalar::Scalar;

/// Averages non-overlapping blocks of `spatial` samples × `spectral` bands.
///
/// Remainder samples/bands that do not fill a block are dropped. Dead entries
/// are left out of a block's mean; a block with no live entry stays dead.
pub fn bin<T: Scalar>(cube: &Hypercube<T>, spatial: usize, spectral: usize) -> Result<Hypercube<T>> {
    if spatial == 0 || spectral == 0 {
        return Err(Error::InvalidParameter("binning factors must be >= 1".into()));
    }
    let (lines, samples, bands) = cube.dims();
    if spatial > samples || spectral > bands {
        return Err(Error::InvalidParameter(format!(
            "binning {spatial}x{spectral} exceeds {samples} samples x {bands} bands"
        )));
    }
    let out_samples = samples / spatial;
    let out_bands = bands / spectral;

    let mut values = Vec::with_capacity(lines * out_samples * out_bands);
    let mut dead = vec![false; out_samples * out_bands];
    for ob in 0..out_bands {
        for i in 0..lines {
            for oj in 0..out_samples {
                let mut acc = T::zero();
                let mut n = 0usize;
                for b in ob * spectral..(ob + 1) * spectral {
                    for j in oj * spatial..(oj + 1) * spatial {
                        if !cube.is_dead(j, b) {
                            acc = acc + cube.at(i, j, b);
                            n += 1;
                        }
                    }
                }
                if n == 0 {
                    dead[oj * out_bands + ob] = true;
                    values.push(T::zero());
                } else {
                    values.push(acc / T::from_usize_lossy(n));
                }
            }
        }
    }

    let wavelengths = if cube.wavelengths().is_empty() {
        Vec::new()
    } else {
        cube.wavelengths()
            .chunks_exact(spectral)
            .map(|c| c.iter().sum::<f64>() / spectral as f64)
            .collect()
    };
    let step = Step::new("bin").param("spatial", spatial).param("spectral", spectral);
    Ok(cube
        .derive(lines, out_samples, out_bands, values, wavelengths, cube.kind(), step)?
        .with_dead(Some(dead)))
}
