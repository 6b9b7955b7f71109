//! `hsindt run`: an ordered list of stages read from a TOML file.
//!
//! ```toml
//! input = "scan/raw.hdr"
//! output = "out"
//!
//! [[stage]]
//! name = "calibrate"
//! dark = "scan/dark.hdr"
//! white = "scan/white.hdr"
//!
//! [[stage]]
//! name = "saliency"
//! ```
//!
//! The whole list is checked before anything runs: unknown stages or keys,
//! stages fed the wrong kind of cube and stages missing their inputs exit
//! with status 2. Relative paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use hsindt::detect::{
    extract_regions, pc1_saliency, region_features, saliency_map_with, threshold_mask, RegionFeatures, SaliencyMap,
    SaliencyParams, ThresholdPolicy,
};
use hsindt::evaluate::precision_recall;
use hsindt::geometry::{stitch, tilt_correct, Blend, StitchSpec, TiltSpec};
use hsindt::hypercube::envi::{cube_from_parts, data_path_for, header_path_for, EnviHeader};
use hsindt::preprocess::{bin, calibrate, first_component, jbf_pc1, pca, snv_correct, CalibrationRefs, JbfParams, SnvMode, WindowRule};
use hsindt::profile::{profile_crossings, roi_profile, Roi};
use hsindt::report::{self, EvalRow};
use hsindt::synth::{generate_scene, SceneSpec};
use hsindt::{Cube, CubeKind, Mask};
use serde::Deserialize;

use crate::io::{self, Format, Out};
use crate::Failure;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input: Option<PathBuf>,
    /// Scene description rendered in-process instead of reading `input`.
    scene: Option<PathBuf>,
    /// Kind of a headerless-kind input cube; defaults to what the header says,
    /// else raw radiance.
    input_kind: Option<String>,
    output: Option<PathBuf>,
    #[serde(default)]
    stage: Vec<Stage>,
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum Number {
    Value(f64),
    Text(String),
}

#[derive(Deserialize, Clone)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
enum Stage {
    Calibrate {
        dark: Option<PathBuf>,
        white: Option<PathBuf>,
        save: Option<PathBuf>,
    },
    Bin {
        #[serde(default = "one")]
        spatial: usize,
        #[serde(default = "one")]
        spectral: usize,
        save: Option<PathBuf>,
    },
    Snv {
        mode: Option<String>,
        save: Option<PathBuf>,
    },
    Jbf {
        sigma_d: Option<f64>,
        sigma_r: Option<f64>,
        window: Option<String>,
        save: Option<PathBuf>,
    },
    Pca {
        #[serde(default = "three")]
        k: usize,
        save: Option<PathBuf>,
    },
    Saliency {
        sigma: Option<f64>,
        percentile: Option<f64>,
        save: Option<PathBuf>,
    },
    Threshold {
        policy: Option<Number>,
        save: Option<PathBuf>,
    },
    Regions {
        #[serde(default = "five")]
        min_area: usize,
    },
    Evaluate {
        truth: Option<PathBuf>,
        sample_id: Option<String>,
        impactor: Option<String>,
    },
    Stitch {
        with: PathBuf,
        overlap: usize,
        blend: Option<String>,
        save: Option<PathBuf>,
    },
    Tilt {
        theta: f64,
        save: Option<PathBuf>,
    },
    Profile {
        rois: Vec<String>,
        #[serde(default)]
        chart: bool,
    },
}

fn one() -> usize {
    1
}
fn three() -> usize {
    3
}
fn five() -> usize {
    5
}

impl Stage {
    fn name(&self) -> &'static str {
        match self {
            Stage::Calibrate { .. } => "calibrate",
            Stage::Bin { .. } => "bin",
            Stage::Snv { .. } => "snv",
            Stage::Jbf { .. } => "jbf",
            Stage::Pca { .. } => "pca",
            Stage::Saliency { .. } => "saliency",
            Stage::Threshold { .. } => "threshold",
            Stage::Regions { .. } => "regions",
            Stage::Evaluate { .. } => "evaluate",
            Stage::Stitch { .. } => "stitch",
            Stage::Tilt { .. } => "tilt",
            Stage::Profile { .. } => "profile",
        }
    }

    fn save(&self) -> Option<&PathBuf> {
        match self {
            Stage::Calibrate { save, .. }
            | Stage::Bin { save, .. }
            | Stage::Snv { save, .. }
            | Stage::Jbf { save, .. }
            | Stage::Pca { save, .. }
            | Stage::Saliency { save, .. }
            | Stage::Threshold { save, .. }
            | Stage::Stitch { save, .. }
            | Stage::Tilt { save, .. } => save.as_ref(),
            Stage::Regions { .. } | Stage::Evaluate { .. } | Stage::Profile { .. } => None,
        }
    }
}

/// A stage with its string options parsed.
enum Step {
    Calibrate { refs: Option<(PathBuf, PathBuf)> },
    Bin { spatial: usize, spectral: usize },
    Snv { mode: SnvMode },
    Jbf { sigma_d: Option<f64>, sigma_r: Option<f64>, window: WindowRule },
    Pca { k: usize },
    Saliency { params: SaliencyParams<f64> },
    Threshold { policy: ThresholdPolicy },
    Regions { min_area: usize },
    Evaluate { truth: Option<PathBuf>, sample_id: String, impactor: String },
    Stitch { with: PathBuf, spec: StitchSpec },
    Tilt { spec: TiltSpec },
    Profile { rois: Vec<Roi>, chart: bool },
}

enum Source {
    Cube { path: PathBuf, kind: Option<CubeKind> },
    Scene(SceneSpec),
}

/// A checked pipeline ready to run.
pub struct Pipeline {
    source: Source,
    output: PathBuf,
    stages: Vec<(&'static str, Step, Option<PathBuf>)>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn opt<T: std::str::FromStr<Err = hsindt::Error>>(k: usize, name: &str, s: Option<&str>) -> Result<Option<T>, Failure> {
    s.map(|s| s.parse::<T>().map_err(|e| Failure::usage(format!("stage {k} ({name}): {e}")))).transpose()
}

/// Reads and checks `config`. `input`, `output` and `seed` override the file.
pub fn load(config: &Path, input: Option<PathBuf>, output: Option<PathBuf>, seed: Option<u64>) -> Result<Pipeline, Failure> {
    let text = std::fs::read_to_string(config).map_err(|e| io::io_failure(config, e))?;
    let file: ConfigFile = toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", config.display())))?;
    let base = config.parent().unwrap_or(Path::new("")).to_path_buf();
    let usage = |m: String| Failure::usage(format!("{}: {m}", config.display()));

    if file.stage.is_empty() {
        return Err(usage("no stages; add at least one [[stage]] table with a name".into()));
    }
    let declared = opt::<CubeKind>(0, "input_kind", file.input_kind.as_deref())?;
    // A command-line input replaces both file sources.
    let scene_file = if input.is_some() { None } else { file.scene.as_ref() };
    let input = input.or_else(|| file.input.map(|p| resolve(&base, &p)));
    let source = match (input, scene_file) {
        (Some(_), Some(_)) => return Err(usage("set either input or scene, not both".into())),
        (None, None) => return Err(usage("no input cube or scene given".into())),
        (Some(path), None) => {
            if seed.is_some() {
                return Err(usage("--seed applies only to scene inputs".into()));
            }
            let kind = input_kind(&path, declared)?;
            Source::Cube { path, kind: Some(kind) }
        }
        (None, Some(scene)) => {
            if declared.is_some_and(|k| k != CubeKind::RawRadiance) {
                return Err(usage("a rendered scene is raw radiance".into()));
            }
            let mut spec = io::read_scene(&resolve(&base, scene))?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            Source::Scene(spec)
        }
    };
    let output = output.unwrap_or_else(|| resolve(&base, file.output.as_deref().unwrap_or(Path::new("out"))));
    let scene = matches!(source, Source::Scene(_));
    let mut kind = match &source {
        Source::Cube { kind, .. } => kind.unwrap_or(CubeKind::RawRadiance),
        Source::Scene(_) => CubeKind::RawRadiance,
    };

    // Walk the list once with symbolic state.
    let (mut saliency, mut mask) = (false, false);
    let mut stages = Vec::with_capacity(file.stage.len());
    for (n, stage) in file.stage.iter().enumerate() {
        let k = n + 1;
        let name = stage.name();
        let fail = |m: String| usage(format!("stage {k} ({name}): {m}"));
        let need_kind = |allowed: &[CubeKind], kind: CubeKind| {
            if allowed.contains(&kind) {
                Ok(())
            } else {
                let list: Vec<&str> = allowed.iter().map(|k| k.as_str()).collect();
                Err(fail(format!("needs a {} cube, pipeline has {kind} here", list.join(" or "))))
            }
        };
        let cube_stage = !matches!(
            stage,
            Stage::Threshold { .. } | Stage::Regions { .. } | Stage::Evaluate { .. } | Stage::Profile { .. }
        );
        if cube_stage && saliency {
            return Err(fail("cube stages must come before saliency".into()));
        }
        let step = match stage {
            Stage::Calibrate { dark, white, .. } => {
                need_kind(&[CubeKind::RawRadiance], kind)?;
                kind = CubeKind::Reflectance;
                let refs = match (dark, white) {
                    (Some(d), Some(w)) => Some((resolve(&base, d), resolve(&base, w))),
                    (None, None) if scene => None,
                    (None, None) => return Err(fail("dark and white references are required".into())),
                    _ => return Err(fail("give both dark and white".into())),
                };
                Step::Calibrate { refs }
            }
            Stage::Bin { spatial, spectral, .. } => {
                if *spatial == 0 || *spectral == 0 {
                    return Err(fail("bin factors must be >= 1".into()));
                }
                Step::Bin { spatial: *spatial, spectral: *spectral }
            }
            Stage::Snv { mode, .. } => {
                need_kind(&[CubeKind::Reflectance], kind)?;
                kind = CubeKind::SnvCorrected;
                Step::Snv { mode: opt(k, name, mode.as_deref())?.unwrap_or_default() }
            }
            Stage::Jbf { sigma_d, sigma_r, window, .. } => {
                need_kind(&[CubeKind::Reflectance, CubeKind::SnvCorrected], kind)?;
                let window = opt(k, name, window.as_deref())?.unwrap_or_default();
                if window == WindowRule::Literal && (sigma_d.is_none() || sigma_r.is_none()) {
                    return Err(fail("the literal window needs both sigma_d and sigma_r".into()));
                }
                Step::Jbf { sigma_d: *sigma_d, sigma_r: *sigma_r, window }
            }
            Stage::Pca { k: comps, .. } => {
                need_kind(&[CubeKind::Reflectance, CubeKind::SnvCorrected], kind)?;
                if *comps == 0 {
                    return Err(fail("k must be >= 1".into()));
                }
                kind = CubeKind::Feature;
                Step::Pca { k: *comps }
            }
            Stage::Saliency { sigma, percentile, .. } => {
                need_kind(&[CubeKind::Reflectance, CubeKind::SnvCorrected, CubeKind::Feature], kind)?;
                let mut params = SaliencyParams::<f64>::default();
                params.sigma = sigma.unwrap_or(params.sigma);
                params.percentile = percentile.unwrap_or(params.percentile);
                if params.sigma.is_nan() || params.sigma < 0.0 || !(0.0..=100.0).contains(&params.percentile) {
                    return Err(fail("sigma must be >= 0 and percentile in [0, 100]".into()));
                }
                saliency = true;
                Step::Saliency { params }
            }
            Stage::Threshold { policy, .. } => {
                if !saliency {
                    return Err(fail("needs a saliency stage before it".into()));
                }
                let policy = match policy {
                    None => ThresholdPolicy::default(),
                    Some(Number::Value(t)) => ThresholdPolicy::Fixed(*t),
                    Some(Number::Text(s)) => opt(k, name, Some(s))?.expect("some"),
                };
                if let ThresholdPolicy::Fixed(t) = policy {
                    if !(0.0..=1.0).contains(&t) {
                        return Err(fail(format!("fixed threshold {t} outside [0, 1]")));
                    }
                }
                mask = true;
                Step::Threshold { policy }
            }
            Stage::Regions { min_area } => {
                if !mask {
                    return Err(fail("needs a threshold stage before it".into()));
                }
                Step::Regions { min_area: *min_area }
            }
            Stage::Evaluate { truth, sample_id, impactor } => {
                if !mask {
                    return Err(fail("needs a threshold stage before it".into()));
                }
                if truth.is_none() && !scene {
                    return Err(fail("truth mask is required for cube inputs".into()));
                }
                let default_id = match &source {
                    Source::Cube { path, .. } => io::stem(path),
                    Source::Scene(_) => "scene".into(),
                };
                Step::Evaluate {
                    truth: truth.as_ref().map(|t| resolve(&base, t)),
                    sample_id: sample_id.clone().unwrap_or(default_id),
                    impactor: impactor.clone().unwrap_or_else(|| "unknown".into()),
                }
            }
            Stage::Stitch { with, overlap, blend, .. } => Step::Stitch {
                with: resolve(&base, with),
                spec: StitchSpec { overlap: *overlap, blend: opt::<Blend>(k, name, blend.as_deref())?.unwrap_or_default() },
            },
            Stage::Tilt { theta, .. } => Step::Tilt { spec: TiltSpec::new(*theta).map_err(|e| fail(e.to_string()))? },
            Stage::Profile { rois, chart } => {
                if rois.is_empty() {
                    return Err(fail("list at least one ROI as name:row0,col0,rows,cols".into()));
                }
                let rois = rois.iter().map(|r| r.parse::<Roi>().map_err(|e| fail(e.to_string()))).collect::<Result<_, _>>()?;
                Step::Profile { rois, chart: *chart }
            }
        };
        if let Some(save) = stage.save() {
            if save.as_os_str().is_empty() || save.is_absolute() {
                return Err(fail("save must be a relative file name".into()));
            }
        }
        stages.push((name, step, stage.save().cloned()));
    }
    Ok(Pipeline { source, output, stages })
}

fn header_of(path: &Path) -> Result<(PathBuf, PathBuf), Failure> {
    Ok(if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("hdr")) {
        (path.to_path_buf(), data_path_for(path)?)
    } else {
        (header_path_for(path), path.to_path_buf())
    })
}

fn read_header(path: &Path) -> Result<EnviHeader, Failure> {
    let (hdr, _) = header_of(path)?;
    let text = std::fs::read_to_string(&hdr).map_err(|e| io::io_failure(&hdr, e))?;
    Ok(EnviHeader::parse(&text)?)
}

/// The input's kind from its header, checked against the declared one.
fn input_kind(path: &Path, declared: Option<CubeKind>) -> Result<CubeKind, Failure> {
    let header = read_header(path).map_err(|f| Failure::usage(f.message))?;
    match (header.kind, declared) {
        (Some(h), Some(d)) if h != d => Err(Failure::usage(format!(
            "{} is {h} but input_kind says {d}",
            path.display()
        ))),
        (h, d) => Ok(d.or(h).unwrap_or(CubeKind::RawRadiance)),
    }
}

fn read_cube_as(path: &Path, kind: Option<CubeKind>) -> Result<Cube, Failure> {
    let (hdr, data) = header_of(path)?;
    let text = std::fs::read_to_string(&hdr).map_err(|e| io::io_failure(&hdr, e))?;
    let mut header = EnviHeader::parse(&text)?;
    header.kind = header.kind.or(kind);
    let bytes = std::fs::read(&data).map_err(|e| io::io_failure(&data, e))?;
    Ok(cube_from_parts(&header, &bytes)?)
}

struct State {
    cube: Cube,
    refs: Option<CalibrationRefs<f64>>,
    truth: Option<Mask>,
    saliency: Option<SaliencyMap<f64>>,
    mask: Option<Mask>,
    features: Option<Vec<RegionFeatures>>,
}

/// Runs every stage, printing one summary line each.
pub fn run(p: &Pipeline, format: Format) -> Result<(), Failure> {
    let mut state = match &p.source {
        Source::Cube { path, kind } => State {
            cube: read_cube_as(path, *kind)?,
            refs: None,
            truth: None,
            saliency: None,
            mask: None,
            features: None,
        },
        Source::Scene(spec) => {
            let scene = generate_scene(spec)?;
            State {
                cube: scene.raw,
                refs: Some(scene.refs),
                truth: Some(scene.truth),
                saliency: None,
                mask: None,
                features: None,
            }
        }
    };
    let out = Out::new(&p.output, format)?;
    let n = p.stages.len();
    for (k, (name, step, save)) in p.stages.iter().enumerate() {
        let k = k + 1;
        let summary = apply(&mut state, step, &out)
            .and_then(|s| save_output(&state, save.as_deref(), &out).map(|()| s))
            .map_err(|f| Failure { code: f.code, message: format!("stage {k}/{n} {name}: {}", f.message) })?;
        println!("stage {k}/{n} {name}: {summary}");
    }
    Ok(())
}

fn save_output(state: &State, save: Option<&Path>, out: &Out) -> Result<(), Failure> {
    let Some(save) = save else { return Ok(()) };
    let path = out.path(&save.to_string_lossy());
    if let Some(mask) = &state.mask {
        report::write_mask_pgm(path, mask)?;
    } else if let Some(map) = &state.saliency {
        report::write_plane_pgm(path, &map.values)?;
    } else {
        io::write_cube(&state.cube, &path)?;
    }
    Ok(())
}

fn apply(state: &mut State, step: &Step, out: &Out) -> Result<String, Failure> {
    let cube = &state.cube;
    Ok(match step {
        Step::Calibrate { refs } => {
            let refs = match refs {
                Some((d, w)) => CalibrationRefs::from_recordings(&io::read_cube(d)?, &io::read_cube(w)?)?,
                None => state.refs.clone().expect("scene refs checked at load"),
            };
            let (refl, report) = calibrate(cube, &refs)?;
            state.cube = refl;
            format!("{} reflectance, {} dead positions", io::dims(&state.cube), report.dead.len())
        }
        Step::Bin { spatial, spectral } => {
            state.cube = bin(cube, *spatial, *spectral)?;
            format!("{} after {spatial}x spatial, {spectral}x spectral", io::dims(&state.cube))
        }
        Step::Snv { mode } => {
            state.cube = snv_correct(cube, *mode)?.0;
            format!("{mode} on {}", io::dims(&state.cube))
        }
        Step::Jbf { sigma_d, sigma_r, window } => {
            let params = if sigma_d.is_none() && sigma_r.is_none() {
                None
            } else {
                let base = JbfParams::for_guide(&first_component(cube)?.1);
                Some(JbfParams::with_rule(sigma_d.unwrap_or(base.sigma_d), sigma_r.unwrap_or(base.sigma_r), *window)?)
            };
            state.cube = jbf_pc1(cube, params)?.0;
            format!("{} [{}]", io::dims(&state.cube), state.cube.provenance().last().map_or(String::new(), |s| s.to_string()))
        }
        Step::Pca { k } => {
            let (model, feats) = pca(cube, *k)?;
            state.cube = feats;
            let kept: f64 = model.explained_variance.iter().sum();
            let share = if model.total_variance > 0.0 { kept / model.total_variance } else { 0.0 };
            format!("{k} components, {:.2}% of variance", 100.0 * share)
        }
        Step::Saliency { params } => {
            let map = if cube.kind() == CubeKind::Feature {
                let mut map = saliency_map_with(&cube.slice_band(0)?, params)?;
                map.source = format!("band 0 of {}", cube.provenance_string());
                map
            } else {
                pc1_saliency(cube, params)?.2
            };
            report::write_plane_pgm(out.path("saliency.pgm"), &map.values)?;
            let mean = map.values.as_slice().iter().sum::<f64>() / map.values.len() as f64;
            state.saliency = Some(map);
            format!("mean {mean:.4} from {}", state.saliency.as_ref().expect("set").source)
        }
        Step::Threshold { policy } => {
            let bm = threshold_mask(state.saliency.as_ref().expect("checked at load"), *policy)?;
            report::write_mask_pgm(out.path("mask.pgm"), &bm.mask)?;
            let count = bm.mask.count();
            state.mask = Some(bm.mask);
            format!("{policy} -> threshold {}, {count} pixels", bm.threshold_used)
        }
        Step::Regions { min_area } => {
            let regions = extract_regions(state.mask.as_ref().expect("checked at load"), *min_area);
            let features: Vec<RegionFeatures> = regions.iter().map(region_features).collect();
            let path = out.regions(&features)?;
            state.features = Some(features);
            format!("{} regions -> {}", regions.len(), path.display())
        }
        Step::Evaluate { truth, sample_id, impactor } => {
            let truth = match truth {
                Some(t) => report::read_mask(t)?,
                None => state.truth.clone().expect("scene truth checked at load"),
            };
            let result = precision_recall(state.mask.as_ref().expect("checked at load"), &truth)?;
            let row = EvalRow { sample_id: sample_id.clone(), impactor_type: impactor.clone(), result };
            let path = out.evaluation(&[row], &result)?;
            format!("precision {:.4} recall {:.4} -> {}", result.precision, result.recall, path.display())
        }
        Step::Stitch { with, spec } => {
            let other = io::read_cube(with)?;
            state.cube = stitch(cube, &other, *spec)?;
            format!("{} with {} overlap, {}", io::dims(&state.cube), spec.overlap, spec.blend)
        }
        Step::Tilt { spec } => {
            state.cube = tilt_correct(cube, *spec)?;
            format!("{} at {} deg", io::dims(&state.cube), spec.theta)
        }
        Step::Profile { rois, chart } => {
            let profiles = rois.iter().map(|r| roi_profile(cube, r)).collect::<hsindt::Result<Vec<_>>>()?;
            let path = out.profiles(&profiles)?;
            if *chart {
                report::write_profile_chart(out.path("profiles.png"), &profiles)?;
            }
            let mut s = format!("{} ROIs -> {}", profiles.len(), path.display());
            for pair in profiles.windows(2).filter(|p| !p[0].wavelengths.is_empty()) {
                let c = profile_crossings(&pair[0], &pair[1])?;
                s.push_str(&format!("; {} vs {} cross at {:?} nm", pair[0].name, pair[1].name, c.crossings));
            }
            s
        }
    })
}
