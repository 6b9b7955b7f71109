//! The hypercube data model.
//!
//! Values are stored band-sequential: band `b` is a contiguous `lines × samples`
//! row-major plane, so element `(i, j, b)` lives at `(b * lines + i) * samples + j`.
//! File interleave is resolved at I/O time and never leaks into the math modules.

pub mod envi;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Scalar;

/// Stage of the processing chain a cube belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CubeKind {
    RawRadiance,
    Reflectance,
    SnvCorrected,
    Feature,
}

impl CubeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CubeKind::RawRadiance => "raw-radiance",
            CubeKind::Reflectance => "reflectance",
            CubeKind::SnvCorrected => "snv-corrected",
            CubeKind::Feature => "feature",
        }
    }
}

impl fmt::Display for CubeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CubeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw-radiance" | "raw" => Ok(CubeKind::RawRadiance),
            "reflectance" => Ok(CubeKind::Reflectance),
            "snv-corrected" | "snv" => Ok(CubeKind::SnvCorrected),
            "feature" => Ok(CubeKind::Feature),
            other => Err(Error::InvalidParameter(format!("unknown cube kind '{other}'"))),
        }
    }
}

/// One applied operation with its parameters, e.g. `bin(spatial=4, spectral=4)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub op: String,
    pub params: Vec<(String, String)>,
}

impl Step {
    pub fn new(op: impl Into<String>) -> Self {
        Self { op: op.into(), params: Vec::new() }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    /// Parses the `Display` form back. Text without a parameter list becomes a bare op.
    pub fn parse(text: &str) -> Self {
        let text = text.trim();
        let Some(open) = text.find('(') else {
            return Step::new(text);
        };
        if !text.ends_with(')') {
            return Step::new(text);
        }
        let op = &text[..open];
        let inner = &text[open + 1..text.len() - 1];
        let mut step = Step::new(op);
        for part in inner.split(", ").filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => step.params.push((k.to_string(), v.to_string())),
                None => return Step::new(text),
            }
        }
        step
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.op)?;
        for (n, (k, v)) in self.params.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str(")")
    }
}

/// An `I × J × B` volume (lines × samples × bands) with its wavelength axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypercube<T> {
    lines: usize,
    samples: usize,
    bands: usize,
    values: Vec<T>,
    wavelengths: Vec<f64>,
    kind: CubeKind,
    provenance: Vec<Step>,
    /// Dead sensor positions, indexed `j * bands + b`.
    dead: Option<Vec<bool>>,
    metadata: Vec<(String, String)>,
}

impl<T: Scalar> Hypercube<T> {
    /// Builds a cube from band-sequential values. `wavelengths` may be empty.
    pub fn new(
        lines: usize,
        samples: usize,
        bands: usize,
        values: Vec<T>,
        wavelengths: Vec<f64>,
        kind: CubeKind,
    ) -> Result<Self> {
        if lines == 0 || samples == 0 || bands == 0 {
            return Err(Error::Shape(format!(
                "cube dimensions must be >= 1, got {lines}x{samples}x{bands}"
            )));
        }
        if values.len() != lines * samples * bands {
            return Err(Error::Shape(format!(
                "{lines}x{samples}x{bands} cube needs {} values, got {}",
                lines * samples * bands,
                values.len()
            )));
        }
        validate_wavelengths(&wavelengths, bands)?;
        Ok(Self {
            lines,
            samples,
            bands,
            values,
            wavelengths,
            kind,
            provenance: Vec::new(),
            dead: None,
            metadata: Vec::new(),
        })
    }

    pub fn from_fn(
        lines: usize,
        samples: usize,
        bands: usize,
        kind: CubeKind,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Self {
        assert!(lines > 0 && samples > 0 && bands > 0, "cube dimensions must be >= 1");
        let mut values = Vec::with_capacity(lines * samples * bands);
        for b in 0..bands {
            for i in 0..lines {
                for j in 0..samples {
                    values.push(f(i, j, b));
                }
            }
        }
        Self::new(lines, samples, bands, values, Vec::new(), kind).expect("consistent shape")
    }

    /// Stacks equally-shaped planes as bands.
    pub fn from_planes(planes: &[Image<T>], kind: CubeKind) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| Error::Shape("cannot build a cube from zero planes".into()))?;
        let (rows, cols) = first.shape();
        let mut values = Vec::with_capacity(rows * cols * planes.len());
        for (n, p) in planes.iter().enumerate() {
            if p.shape() != (rows, cols) {
                return Err(Error::Shape(format!(
                    "plane {n} is {:?}, expected {:?}",
                    p.shape(),
                    (rows, cols)
                )));
            }
            values.extend_from_slice(p.as_slice());
        }
        Self::new(rows, cols, planes.len(), values, Vec::new(), kind)
    }

    pub fn with_wavelengths(mut self, wavelengths: Vec<f64>) -> Result<Self> {
        validate_wavelengths(&wavelengths, self.bands)?;
        self.wavelengths = wavelengths;
        Ok(self)
    }

    pub fn with_metadata(mut self, metadata: Vec<(String, String)>) -> Self {
        self.metadata = metadata;
        self
    }

    pub(crate) fn with_provenance(mut self, provenance: Vec<Step>) -> Self {
        self.provenance = provenance;
        self
    }

    pub(crate) fn with_dead(mut self, dead: Option<Vec<bool>>) -> Self {
        debug_assert!(dead.as_ref().is_none_or(|d| d.len() == self.samples * self.bands));
        self.dead = dead.filter(|d| d.iter().any(|&x| x));
        self
    }

    /// Appends a provenance step. Provenance is append-only.
    pub fn record(mut self, step: Step) -> Self {
        self.provenance.push(step);
        self
    }

    /// New cube carrying this cube's provenance and metadata plus `step`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn derive(
        &self,
        lines: usize,
        samples: usize,
        bands: usize,
        values: Vec<T>,
        wavelengths: Vec<f64>,
        kind: CubeKind,
        step: Step,
    ) -> Result<Self> {
        let mut provenance = self.provenance.clone();
        provenance.push(step);
        Ok(Self::new(lines, samples, bands, values, wavelengths, kind)?
            .with_provenance(provenance)
            .with_metadata(self.metadata.clone()))
    }

    #[inline]
    pub fn lines(&self) -> usize {
        self.lines
    }

    #[inline]
    pub fn samples(&self) -> usize {
        self.samples
    }

    #[inline]
    pub fn bands(&self) -> usize {
        self.bands
    }

    /// `(lines, samples, bands)`.
    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.lines, self.samples, self.bands)
    }

    #[inline]
    pub fn pixels(&self) -> usize {
        self.lines * self.samples
    }

    pub fn kind(&self) -> CubeKind {
        self.kind
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn provenance(&self) -> &[Step] {
        &self.provenance
    }

    /// Provenance rendered as one `a(..) -> b(..)` string.
    pub fn provenance_string(&self) -> String {
        self.provenance.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" -> ")
    }

    /// Header keys carried through from an ENVI source that this crate does not interpret.
    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    /// Band-sequential values.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, b: usize) -> usize {
        (b * self.lines + i) * self.samples + j
    }

    /// Unchecked element access (panics on out-of-range indices).
    #[inline]
    pub fn at(&self, i: usize, j: usize, b: usize) -> T {
        self.values[self.index(i, j, b)]
    }

    /// Band `b` as a borrowed row-major plane.
    #[inline]
    pub fn band_plane(&self, b: usize) -> &[T] {
        let n = self.pixels();
        &self.values[b * n..(b + 1) * n]
    }

    pub fn has_dead(&self) -> bool {
        self.dead.is_some()
    }

    #[inline]
    pub fn is_dead(&self, j: usize, b: usize) -> bool {
        self.dead.as_ref().is_some_and(|d| d[j * self.bands + b])
    }

    /// `samples × bands` dead-position flags, if any are dead.
    pub fn dead_mask(&self) -> Option<&[bool]> {
        self.dead.as_deref()
    }

    /// True when every band at sample column `j` is live.
    pub fn column_live(&self, j: usize) -> bool {
        match &self.dead {
            None => true,
            Some(d) => !d[j * self.bands..(j + 1) * self.bands].iter().any(|&x| x),
        }
    }

    pub fn require_kind(&self, op: &'static str, allowed: &[CubeKind]) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::KindTransition {
                op,
                expected: allowed.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(" | "),
                found: self.kind.to_string(),
            })
        }
    }

    pub fn spectrum_at(&self, i: usize, j: usize) -> Result<Vec<T>> {
        if i >= self.lines || j >= self.samples {
            return Err(Error::OutOfRange(format!(
                "pixel ({i}, {j}) outside {}x{}",
                self.lines, self.samples
            )));
        }
        Ok((0..self.bands).map(|b| self.at(i, j, b)).collect())
    }

    pub fn slice_band(&self, b: usize) -> Result<Image<T>> {
        if b >= self.bands {
            return Err(Error::OutOfRange(format!("band {b} outside 0..{}", self.bands)));
        }
        Image::new(self.lines, self.samples, self.band_plane(b).to_vec())
    }

    /// Plane at the band nearest to `nm`.
    pub fn slice_wavelength(&self, nm: f64) -> Result<Image<T>> {
        self.slice_band(self.band_for_wavelength(nm)?)
    }

    /// Nearest band to `nm`; an exact midpoint goes to the lower band.
    pub fn band_for_wavelength(&self, nm: f64) -> Result<usize> {
        let axis = &self.wavelengths;
        if axis.is_empty() {
            return Err(Error::InvalidParameter("cube has no wavelength axis".into()));
        }
        let (lo, hi) = (axis[0], axis[axis.len() - 1]);
        if !(nm >= lo && nm <= hi) {
            return Err(Error::OutOfRange(format!("{nm} nm outside [{lo}, {hi}]")));
        }
        let mut best = 0;
        for (b, &w) in axis.iter().enumerate() {
            if (w - nm).abs() < (axis[best] - nm).abs() {
                best = b;
            }
        }
        Ok(best)
    }

    /// Same volume under a different element type.
    pub fn cast<U: Scalar>(&self) -> Hypercube<U> {
        Hypercube {
            lines: self.lines,
            samples: self.samples,
            bands: self.bands,
            values: self.values.iter().map(|v| U::lit(v.as_f64())).collect(),
            wavelengths: self.wavelengths.clone(),
            kind: self.kind,
            provenance: self.provenance.clone(),
            dead: self.dead.clone(),
            metadata: self.metadata.clone(),
        }
    }
}

fn validate_wavelengths(wavelengths: &[f64], bands: usize) -> Result<()> {
    if wavelengths.is_empty() {
        return Ok(());
    }
    if wavelengths.len() != bands {
        return Err(Error::Shape(format!(
            "{} wavelengths for {bands} bands",
            wavelengths.len()
        )));
    }
    if wavelengths.iter().any(|w| !w.is_finite()) || wavelengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("wavelengths must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Evenly spaced wavelength grid from `start` to `end` inclusive.
pub fn wavelength_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && end >= start, "invalid wavelength grid");
    let n = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|k| start + k as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_cube() -> Hypercube<f64> {
        Hypercube::from_fn(3, 4, 5, CubeKind::Reflectance, |i, j, b| (100 * i + 10 * j + b) as f64)
    }

    #[test]
    fn spectrum_of_band_index_cube() {
        let c = Hypercube::<f64>::from_fn(2, 2, 6, CubeKind::Reflectance, |_, _, b| b as f64);
        assert_eq!(c.spectrum_at(1, 1).unwrap(), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn constant_cube_spectrum() {
        let c = Hypercube::<f64>::from_fn(2, 3, 4, CubeKind::Reflectance, |_, _, _| 0.25);
        assert_eq!(c.spectrum_at(1, 2).unwrap(), vec![0.25; 4]);
    }

    #[test]
    fn spectrum_matches_triple_loop() {
        let c = ramp_cube();
        for i in 0..3 {
            for j in 0..4 {
                let s = c.spectrum_at(i, j).unwrap();
                for (b, v) in s.iter().enumerate() {
                    assert_eq!(*v, (100 * i + 10 * j + b) as f64);
                }
            }
        }
    }

    #[test]
    fn slice_and_spectrum_agree() {
        let c = ramp_cube();
        for b in 0..5 {
            let plane = c.slice_band(b).unwrap();
            for i in 0..3 {
                for j in 0..4 {
                    assert_eq!(plane.get(i, j), c.spectrum_at(i, j).unwrap()[b]);
                }
            }
        }
    }

    #[test]
    fn out_of_range_access() {
        let c = ramp_cube();
        assert!(matches!(c.spectrum_at(3, 0), Err(Error::OutOfRange(_))));
        assert!(matches!(c.slice_band(5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn single_band_slice_is_whole_volume() {
        let c = Hypercube::<f64>::from_fn(3, 2, 1, CubeKind::Reflectance, |i, j, _| (i * 2 + j) as f64);
        assert_eq!(c.slice_band(0).unwrap().as_slice(), c.values());
    }

    #[test]
    fn nearest_band_lookup() {
        let c = Hypercube::<f64>::from_fn(1, 1, 76, CubeKind::Reflectance, |_, _, _| 0.0)
            .with_wavelengths(wavelength_grid(950.0, 1700.0, 10.0))
            .unwrap();
        assert_eq!(c.wavelengths().len(), 76);
        assert_eq!(c.wavelengths()[c.band_for_wavelength(1267.0).unwrap()], 1270.0);
        // midpoint goes to the lower band
        assert_eq!(c.wavelengths()[c.band_for_wavelength(1145.0).unwrap()], 1140.0);
        assert_eq!(c.wavelengths()[c.band_for_wavelength(1146.0).unwrap()], 1150.0);
        assert!(c.band_for_wavelength(949.0).is_err());
        assert!(c.band_for_wavelength(1700.5).is_err());
    }

    #[test]
    fn rejects_bad_wavelengths() {
        let c = Hypercube::<f64>::from_fn(1, 1, 3, CubeKind::Reflectance, |_, _, _| 0.0);
        assert!(c.clone().with_wavelengths(vec![1.0, 2.0]).is_err());
        assert!(c.with_wavelengths(vec![1.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn step_display_roundtrip() {
        let s = Step::new("bin").param("spatial", 4).param("spectral", 2);
        assert_eq!(s.to_string(), "bin(spatial=4, spectral=2)");
        assert_eq!(Step::parse(&s.to_string()), s);
        assert_eq!(Step::parse("calibrate()"), Step::new("calibrate"));
    }

    #[test]
    fn kind_parse() {
        for k in [CubeKind::RawRadiance, CubeKind::Reflectance, CubeKind::SnvCorrected, CubeKind::Feature] {
            assert_eq!(k.as_str().parse::<CubeKind>().unwrap(), k);
        }
    }
}
