//! Seeded synthetic scenes and a push-broom scanner model.
//!
//! A scene is a grid of materials, each a parametric reflectance spectrum,
//! with multiplicative damage patches. The camera model is
//!
//! ```text
//! raw(i,j,b) = illum(j) · gain(j,b) · R(i,j,λ_b) · m(i,j) + dark(j,b) + noise
//! ```
//!
//! with `m` the damage multiplier (1 outside damage). White and dark reference
//! recordings come from the same model with `R = 1` and `R = 0` and are averaged
//! over [`SceneSpec::reference_lines`] lines.
//!
//! Noise is Gaussian with standard deviation `noise · illum(j) · gain(j,b)`, so
//! `noise` is in reflectance units. With `shot_noise` the standard deviation is
//! further scaled by `sqrt(R · m)` (variance proportional to signal).
//!
//! Every scan line draws from its own ChaCha8 stream, so output does not depend
//! on thread count.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercube::{wavelength_grid, CubeKind, Hypercube, Step};
use crate::image::{Image, Mask};
use crate::preprocess::CalibrationRefs;

/// Gaussian bump `height · exp(-(λ - center)² / (2 width²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub height: f64,
}

/// Reflectance spectrum: a baseline plus Gaussian bumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSignature {
    pub name: String,
    pub baseline: f64,
    #[serde(default)]
    pub bumps: Vec<Bump>,
}

/// Names accepted by [`MaterialSignature::preset`].
pub const PRESETS: [&str; 6] = ["cfrp-normal", "adhesive", "al-normal", "al-adhesive", "grinding", "grinding-defect"];

/// Where the preset CFRP/adhesive pair crosses.
pub const PRESET_CROSSING_NM: f64 = 1147.0;

impl MaterialSignature {
    pub fn new(name: impl Into<String>, baseline: f64, bumps: Vec<Bump>) -> Self {
        Self { name: name.into(), baseline, bumps }
    }

    pub fn reflectance(&self, nm: f64) -> f64 {
        self.bumps.iter().fold(self.baseline, |acc, b| {
            let d = (nm - b.center) / b.width;
            acc + b.height * (-0.5 * d * d).exp()
        })
    }

    pub fn sample(&self, wavelengths: &[f64]) -> Vec<f64> {
        wavelengths.iter().map(|&w| self.reflectance(w)).collect()
    }

    /// Checks `0 < R(λ) < 1.2` on the grid.
    pub fn validate(&self, wavelengths: &[f64]) -> Result<()> {
        if self.bumps.iter().any(|b| !(b.width > 0.0)) {
            return Err(Error::Scene(format!("signature '{}' has a non-positive bump width", self.name)));
        }
        for &w in wavelengths {
            let r = self.reflectance(w);
            if !(r > 0.0 && r < 1.2) {
                return Err(Error::Scene(format!(
                    "signature '{}' has reflectance {r} at {w} nm, outside (0, 1.2)",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// Built-in signatures. CFRP and adhesive cross at [`PRESET_CROSSING_NM`];
    /// in 1333–1600 nm grinding > grinding-defect > cfrp-normal.
    pub fn preset(name: &str) -> Option<Self> {
        let bump = |center, width, height| Bump { center, width, height };
        Some(match name {
            "cfrp-normal" | "adhesive" => {
                let (adhesive, normal) = crossing_pair(PRESET_CROSSING_NM);
                if name == "adhesive" { adhesive } else { normal }
            }
            "al-normal" => Self::new(name, 0.55, vec![bump(1050.0, 120.0, 0.15), bump(1500.0, 200.0, -0.1)]),
            "al-adhesive" => Self::new(name, 0.45, vec![bump(1200.0, 80.0, 0.12), bump(1650.0, 60.0, -0.15)]),
            "grinding" => Self::new(name, 0.4, vec![bump(1450.0, 150.0, 0.4)]),
            "grinding-defect" => Self::new(name, 0.35, vec![bump(1450.0, 150.0, 0.25)]),
            _ => return None,
        })
    }
}

/// `(adhesive, normal)` signatures whose difference changes sign exactly once,
/// at `nm`: equal Gaussian bumps mirrored about the crossing on a shared baseline.
pub fn crossing_pair(nm: f64) -> (MaterialSignature, MaterialSignature) {
    let shared = Bump { center: 1500.0, width: 150.0, height: 0.1 };
    let bump = |center| Bump { center, width: 120.0, height: 0.25 };
    (
        MaterialSignature::new("adhesive", 0.2, vec![bump(nm - 150.0), shared]),
        MaterialSignature::new("cfrp-normal", 0.2, vec![bump(nm + 150.0), shared]),
    )
}

/// Damage footprint. Orientations are in degrees from the column axis towards
/// increasing row; lengths in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum DamageShape {
    /// Semi-axes `a` (along the orientation) and `b`.
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        orientation: f64,
    },
    /// Rectangle `length × width`.
    Bar {
        length: f64,
        width: f64,
        #[serde(default)]
        orientation: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DamageSpec {
    #[serde(flatten)]
    pub shape: DamageShape,
    /// `(row, col)` in pixel coordinates; pixel `(i, j)` is centred on `(i, j)`.
    pub center: (f64, f64),
    /// Reflectance multiplier inside the footprint.
    pub effect: f64,
}

impl DamageSpec {
    pub fn ellipse(center: (f64, f64), a: f64, b: f64, orientation: f64, effect: f64) -> Self {
        Self { shape: DamageShape::Ellipse { a, b, orientation }, center, effect }
    }

    pub fn bar(center: (f64, f64), length: f64, width: f64, orientation: f64, effect: f64) -> Self {
        Self { shape: DamageShape::Bar { length, width, orientation }, center, effect }
    }

    /// Whether the continuous point `(row, col)` lies inside the footprint.
    /// Ellipses are closed; bars are half-open, `-L/2 <= u < L/2`.
    pub fn contains(&self, row: f64, col: f64) -> bool {
        let (dy, dx) = (row - self.center.0, col - self.center.1);
        let (s, c) = self.orientation().to_radians().sin_cos();
        let (u, v) = (dx * c + dy * s, -dx * s + dy * c);
        match self.shape {
            DamageShape::Ellipse { a, b, .. } => (u / a).powi(2) + (v / b).powi(2) <= 1.0,
            DamageShape::Bar { length, width, .. } => {
                -length / 2.0 <= u && u < length / 2.0 && -width / 2.0 <= v && v < width / 2.0
            }
        }
    }

    fn orientation(&self) -> f64 {
        match self.shape {
            DamageShape::Ellipse { orientation, .. } | DamageShape::Bar { orientation, .. } => orientation,
        }
    }

    /// Half extents `(rows, cols)` of the axis-aligned bounding box.
    fn half_extent(&self) -> (f64, f64) {
        let (s, c) = self.orientation().to_radians().sin_cos();
        match self.shape {
            DamageShape::Ellipse { a, b, .. } => {
                (((a * s).powi(2) + (b * c).powi(2)).sqrt(), ((a * c).powi(2) + (b * s).powi(2)).sqrt())
            }
            DamageShape::Bar { length, width, .. } => {
                let (h, w) = (length / 2.0, width / 2.0);
                (h * s.abs() + w * c.abs(), h * c.abs() + w * s.abs())
            }
        }
    }

    fn validate(&self, lines: usize, samples: usize, n: usize) -> Result<()> {
        let sizes_ok = match self.shape {
            DamageShape::Ellipse { a, b, orientation } => a > 0.0 && b > 0.0 && orientation.is_finite(),
            DamageShape::Bar { length, width, orientation } => length > 0.0 && width > 0.0 && orientation.is_finite(),
        };
        if !sizes_ok || !(self.effect > 0.0) || !self.effect.is_finite() {
            return Err(Error::Scene(format!("damage {n}: sizes and effect must be positive")));
        }
        let (hr, hc) = self.half_extent();
        let (r, c) = self.center;
        if r - hr < -0.5 || c - hc < -0.5 || r + hr > lines as f64 - 0.5 || c + hc > samples as f64 - 0.5 {
            return Err(Error::Scene(format!("damage {n} does not fit inside the {lines}x{samples} scene")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavelengthRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for WavelengthRange {
    fn default() -> Self {
        Self { start: 950.0, end: 1700.0, step: 10.0 }
    }
}

/// Axis-aligned material patch `[row0, col0, rows, cols]`. Later patches win.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Patch {
    pub material: String,
    pub rect: [usize; 4],
}

/// Scene description, loadable from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    /// `(lines, samples)`.
    pub size: (usize, usize),
    #[serde(default)]
    pub wavelengths: WavelengthRange,
    /// Material everywhere no patch covers.
    #[serde(default = "default_background")]
    pub background: String,
    #[serde(default, rename = "patch")]
    pub patches: Vec<Patch>,
    /// Signatures beyond the presets; a custom name shadows a preset.
    #[serde(default, rename = "material")]
    pub materials: Vec<MaterialSignature>,
    #[serde(default, rename = "damage")]
    pub damages: Vec<DamageSpec>,
    /// Multiplicative illumination at the first and last sample, linear in between.
    #[serde(default = "flat_illumination")]
    pub illumination: (f64, f64),
    /// Gaussian noise σ in reflectance units.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub shot_noise: bool,
    /// Mean sensor gain (counts per unit reflectance).
    #[serde(default = "default_gain")]
    pub gain: f64,
    /// Relative amplitude of the per-(sample, band) gain pattern.
    #[serde(default = "default_fixed_pattern")]
    pub fixed_pattern: f64,
    /// Mean dark level in counts.
    #[serde(default = "default_dark")]
    pub dark_level: f64,
    #[serde(default = "default_reference_lines")]
    pub reference_lines: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_background() -> String {
    "cfrp-normal".into()
}
fn flat_illumination() -> (f64, f64) {
    (1.0, 1.0)
}
fn default_gain() -> f64 {
    1000.0
}
fn default_fixed_pattern() -> f64 {
    0.1
}
fn default_dark() -> f64 {
    100.0
}
fn default_reference_lines() -> usize {
    16
}

impl SceneSpec {
    pub fn new(lines: usize, samples: usize) -> Self {
        Self {
            size: (lines, samples),
            wavelengths: WavelengthRange::default(),
            background: default_background(),
            patches: Vec::new(),
            materials: Vec::new(),
            damages: Vec::new(),
            illumination: flat_illumination(),
            noise: 0.0,
            shot_noise: false,
            gain: default_gain(),
            fixed_pattern: default_fixed_pattern(),
            dark_level: default_dark(),
            reference_lines: default_reference_lines(),
            seed: 0,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn wavelength_axis(&self) -> Vec<f64> {
        let w = self.wavelengths;
        wavelength_grid(w.start, w.end, w.step)
    }

    fn signature(&self, name: &str) -> Result<MaterialSignature> {
        self.materials
            .iter()
            .find(|m| m.name == name)
            .cloned()
            .or_else(|| MaterialSignature::preset(name))
            .ok_or_else(|| Error::Scene(format!("unknown material '{name}'")))
    }

    fn illum(&self, j: usize) -> f64 {
        let (a, b) = self.illumination;
        if self.size.1 < 2 {
            return a;
        }
        a + (b - a) * j as f64 / (self.size.1 - 1) as f64
    }

    fn gain_at(&self, j: usize, b: usize) -> f64 {
        let (j, b) = (j as f64, b as f64);
        self.gain * (1.0 + self.fixed_pattern * (0.7 * (0.37 * j + 0.11 * b).sin() + 0.3 * (1.3 * j).cos()))
    }

    fn dark_at(&self, j: usize, b: usize) -> f64 {
        self.dark_level * (1.0 + 0.05 * (0.23 * j as f64 + 0.5 * b as f64).cos())
    }
}

/// Material map, resolved signatures sampled on the grid, and per-position
/// damage membership.
struct Resolved {
    wavelengths: Vec<f64>,
    /// Per material, one value per band.
    spectra: Vec<Vec<f64>>,
    /// Row-major material index.
    map: Vec<usize>,
    /// `illum(j) · gain(j,b)` and `dark(j,b)`, indexed `j * bands + b`.
    span: Vec<f64>,
    dark: Vec<f64>,
}

fn resolve(spec: &SceneSpec) -> Result<Resolved> {
    let (lines, samples) = spec.size;
    if lines == 0 || samples == 0 {
        return Err(Error::Scene("scene size must be at least 1x1".into()));
    }
    let w = spec.wavelengths;
    if !(w.step > 0.0) || !(w.end >= w.start) || !w.start.is_finite() || !w.end.is_finite() {
        return Err(Error::Scene(format!("invalid wavelength range {}..{} step {}", w.start, w.end, w.step)));
    }
    let (i0, i1) = spec.illumination;
    if !(i0 > 0.0 && i1 > 0.0) || !i0.is_finite() || !i1.is_finite() {
        return Err(Error::Scene("illumination must be positive".into()));
    }
    if !(spec.gain > 0.0) || !(spec.fixed_pattern >= 0.0 && spec.fixed_pattern < 1.0) || !(spec.dark_level >= 0.0) {
        return Err(Error::Scene("gain must be positive, fixed_pattern in [0, 1), dark_level >= 0".into()));
    }
    if !(spec.noise >= 0.0) || !spec.noise.is_finite() {
        return Err(Error::Scene(format!("noise must be >= 0, got {}", spec.noise)));
    }
    if spec.reference_lines == 0 {
        return Err(Error::Scene("reference_lines must be >= 1".into()));
    }
    let wavelengths = spec.wavelength_axis();

    let mut names: Vec<String> = vec![spec.background.clone()];
    let mut index: HashMap<String, usize> = HashMap::from([(spec.background.clone(), 0)]);
    let mut map = vec![0usize; lines * samples];
    for p in &spec.patches {
        let [r0, c0, h, w] = p.rect;
        if r0 + h > lines || c0 + w > samples {
            return Err(Error::Scene(format!("patch '{}' {:?} exceeds the scene", p.material, p.rect)));
        }
        let id = *index.entry(p.material.clone()).or_insert_with(|| {
            names.push(p.material.clone());
            names.len() - 1
        });
        for r in r0..r0 + h {
            map[r * samples + c0..r * samples + c0 + w].fill(id);
        }
    }
    let spectra = names
        .iter()
        .map(|n| {
            let s = spec.signature(n)?;
            s.validate(&wavelengths)?;
            Ok(s.sample(&wavelengths))
        })
        .collect::<Result<Vec<_>>>()?;

    for (n, d) in spec.damages.iter().enumerate() {
        d.validate(lines, samples, n)?;
    }
    // conflicting overlaps are checked on the pixel grid
    for (n, a) in spec.damages.iter().enumerate() {
        for (m, b) in spec.damages.iter().enumerate().skip(n + 1) {
            if a.effect == b.effect {
                continue;
            }
            let overlap = (0..lines).any(|i| (0..samples).any(|j| a.contains(i as f64, j as f64) && b.contains(i as f64, j as f64)));
            if overlap {
                return Err(Error::Scene(format!(
                    "damages {n} and {m} overlap with different effects ({} vs {})",
                    a.effect, b.effect
                )));
            }
        }
    }
    let bands = wavelengths.len();
    let span = (0..samples * bands).map(|e| spec.illum(e / bands) * spec.gain_at(e / bands, e % bands)).collect();
    let dark = (0..samples * bands).map(|e| spec.dark_at(e / bands, e % bands)).collect();
    Ok(Resolved { wavelengths, spectra, map, span, dark })
}

/// Damage multiplier at a continuous position.
fn modulation(spec: &SceneSpec, row: f64, col: f64) -> f64 {
    spec.damages.iter().find(|d| d.contains(row, col)).map_or(1.0, |d| d.effect)
}

fn line_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

// streams 0.. are scan lines; references live far above any line count
const DARK_STREAM: u64 = 1 << 40;
const WHITE_STREAM: u64 = 1 << 41;

/// Renders one line at continuous scene row `y` into `samples × bands` values
/// (sample-major).
fn render_line(spec: &SceneSpec, res: &Resolved, y: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (lines, samples) = spec.size;
    let bands = res.wavelengths.len();
    let row = (y.round().max(0.0) as usize).min(lines - 1);
    let mut out = Vec::with_capacity(samples * bands);
    for j in 0..samples {
        let m = modulation(spec, y, j as f64);
        let spectrum = &res.spectra[res.map[row * samples + j]];
        for (b, &r) in spectrum.iter().enumerate() {
            let span = res.span[j * bands + b];
            let refl = r * m;
            let mut v = span * refl + res.dark[j * bands + b];
            if spec.noise > 0.0 {
                let sd = if spec.shot_noise { spec.noise * span * refl.sqrt() } else { spec.noise * span };
                let z: f64 = StandardNormal.sample(rng);
                v += sd * z;
            }
            out.push(v);
        }
    }
    out
}

fn assemble(rows: Vec<Vec<f64>>, samples: usize, bands: usize) -> Vec<f64> {
    let lines = rows.len();
    let mut values = vec![0.0; lines * samples * bands];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..samples {
            for b in 0..bands {
                values[(b * lines + i) * samples + j] = row[j * bands + b];
            }
        }
    }
    values
}

fn references(spec: &SceneSpec, res: &Resolved) -> Result<CalibrationRefs<f64>> {
    let bands = res.wavelengths.len();
    let samples = spec.size.1;
    let n = spec.reference_lines;
    let record = |stream: u64, refl: f64| -> Vec<f64> {
        let lines: Vec<Vec<f64>> = (0..n as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = line_rng(spec.seed, stream + k);
                let mut out = Vec::with_capacity(samples * bands);
                for j in 0..samples {
                    for b in 0..bands {
                        let span = res.span[j * bands + b];
                        let mut v = span * refl + res.dark[j * bands + b];
                        if spec.noise > 0.0 {
                            let sd = if spec.shot_noise { spec.noise * span * refl.sqrt() } else { spec.noise * span };
                            let z: f64 = StandardNormal.sample(&mut rng);
                            v += sd * z;
                        }
                        out.push(v);
                    }
                }
                out
            })
            .collect();
        (0..samples * bands).map(|e| lines.iter().map(|l| l[e]).sum::<f64>() / n as f64).collect()
    };
    CalibrationRefs::new(samples, bands, record(DARK_STREAM, 0.0), record(WHITE_STREAM, 1.0))
}

/// Everything [`generate_scene`] produces.
#[derive(Debug, Clone)]
pub struct Scene {
    pub raw: Hypercube<f64>,
    pub refs: CalibrationRefs<f64>,
    /// One mask per damage, in spec order.
    pub truths: Vec<Mask>,
    /// Union of the damage masks.
    pub truth: Mask,
    /// Noiseless damage-modulated reflectance.
    pub reflectance: Hypercube<f64>,
}

fn scene_step(spec: &SceneSpec) -> Step {
    Step::new("synth")
        .param("seed", spec.seed)
        .param("noise", spec.noise)
        .param("damages", spec.damages.len())
}

pub fn generate_scene(spec: &SceneSpec) -> Result<Scene> {
    let res = resolve(spec)?;
    let (lines, samples) = spec.size;
    let bands = res.wavelengths.len();

    let rows: Vec<Vec<f64>> = (0..lines)
        .into_par_iter()
        .map(|i| render_line(spec, &res, i as f64, &mut line_rng(spec.seed, i as u64)))
        .collect();
    let raw = Hypercube::new(lines, samples, bands, assemble(rows, samples, bands), res.wavelengths.clone(), CubeKind::RawRadiance)?
        .record(scene_step(spec));

    let m = Image::from_fn(lines, samples, |i, j| modulation(spec, i as f64, j as f64));
    let reflectance = Hypercube::from_fn(lines, samples, bands, CubeKind::Reflectance, |i, j, b| {
        res.spectra[res.map[i * samples + j]][b] * m.get(i, j)
    })
    .with_wavelengths(res.wavelengths.clone())?
    .record(scene_step(spec));

    let truths: Vec<Mask> = spec
        .damages
        .iter()
        .map(|d| Image::from_fn(lines, samples, |i, j| d.contains(i as f64, j as f64)))
        .collect();
    let truth = Image::from_fn(lines, samples, |i, j| truths.iter().any(|t| t.get(i, j)));
    Ok(Scene { raw, refs: references(spec, &res)?, truths, truth, reflectance })
}

/// Push-broom kinematics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    /// Stage speed, mm/s.
    pub speed: f64,
    /// Camera line rate, lines/s.
    #[serde(default = "default_line_rate")]
    pub line_rate: f64,
    /// Scan path length, mm.
    pub path_length: f64,
    /// Placing angle, degrees in `[0, 90)`.
    #[serde(default)]
    pub tilt: f64,
}

/// Default camera line rate: 620 lines over a 12.5 s scan.
pub const DEFAULT_LINE_RATE: f64 = 49.6;

fn default_line_rate() -> f64 {
    DEFAULT_LINE_RATE
}

impl ScanSpec {
    pub fn new(speed: f64, line_rate: f64, path_length: f64, tilt: f64) -> Result<Self> {
        let s = Self { speed, line_rate, path_length, tilt };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.speed > 0.0) || !(self.line_rate > 0.0) || !self.speed.is_finite() || !self.line_rate.is_finite() {
            return Err(Error::InvalidParameter("scan speed and line rate must be positive".into()));
        }
        if !(self.path_length >= 0.0) || !self.path_length.is_finite() {
            return Err(Error::InvalidParameter("scan path length must be >= 0".into()));
        }
        if !(0.0..90.0).contains(&self.tilt) {
            return Err(Error::InvalidParameter(format!("tilt {} outside [0, 90)", self.tilt)));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.path_length / self.speed
    }

    /// `floor(path_length · line_rate / speed)`.
    pub fn line_count(&self) -> usize {
        (self.path_length * self.line_rate / self.speed + 1e-9).floor() as usize
    }
}

/// Output of [`pushbroom_scan`].
#[derive(Debug, Clone)]
pub struct Scan {
    pub raw: Hypercube<f64>,
    /// Same references as [`generate_scene`] records.
    pub refs: CalibrationRefs<f64>,
    /// Damage membership at each acquired line's surface position.
    pub truth: Mask,
}

/// Scans the scene line by line. One scene row is the ground distance the stage
/// travels between exposures; line `i` images surface row `i / cos(tilt)`.
/// Rows beyond the scene repeat its last row's materials.
pub fn pushbroom_scan(spec: &SceneSpec, scan: &ScanSpec) -> Result<Scan> {
    scan.validate()?;
    let res = resolve(spec)?;
    let n = scan.line_count();
    if n == 0 {
        return Err(Error::InvalidParameter("scan covers zero lines".into()));
    }
    let samples = spec.size.1;
    let bands = res.wavelengths.len();
    let cos = scan.tilt.to_radians().cos();
    let pos = |i: usize| if scan.tilt == 0.0 { i as f64 } else { i as f64 / cos };
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| render_line(spec, &res, pos(i), &mut line_rng(spec.seed, i as u64)))
        .collect();
    let step = Step::new("pushbroom")
        .param("speed", scan.speed)
        .param("line_rate", scan.line_rate)
        .param("path_length", scan.path_length)
        .param("tilt", scan.tilt);
    let raw = Hypercube::new(n, samples, bands, assemble(rows, samples, bands), res.wavelengths.clone(), CubeKind::RawRadiance)?
        .record(scene_step(spec))
        .record(step);
    let truth = Image::from_fn(n, samples, |i, j| spec.damages.iter().any(|d| d.contains(pos(i), j as f64)));
    Ok(Scan { raw, refs: references(spec, &res)?, truth })
}
