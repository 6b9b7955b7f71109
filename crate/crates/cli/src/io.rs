//! File plumbing shared by the verbs and the pipeline runner.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hsindt::detect::RegionFeatures;
use hsindt::evaluate::{precision_recall, EvalResult};
use hsindt::hypercube::envi::{open_envi, write_envi, WriteOptions};
use hsindt::profile::SpectralProfile;
use hsindt::report::{self, EvalRow};
use hsindt::synth::SceneSpec;
use hsindt::Cube;
use serde_json::{json, Value};

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn read_cube(path: &Path) -> Result<Cube, Failure> {
    Ok(open_envi(path)?)
}

/// Data file for an output argument: `x.hdr` becomes `x.img`.
fn data_path(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("hdr")) {
        path.with_extension("img")
    } else {
        path.to_path_buf()
    }
}

pub fn write_cube(cube: &Cube, path: &Path) -> Result<PathBuf, Failure> {
    write_cube_with(cube, path, &WriteOptions::default())
}

/// Writes the pair and returns the header path.
pub fn write_cube_with(cube: &Cube, path: &Path, opts: &WriteOptions) -> Result<PathBuf, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    }
    Ok(write_envi(cube, data_path(path), opts)?.0)
}

pub fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", path.display()) }
}

pub fn dims(cube: &Cube) -> String {
    format!("{}x{}x{}", cube.lines(), cube.samples(), cube.bands())
}

pub fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "sample".into(), |s| s.to_string_lossy().into_owned())
}

pub fn read_scene(path: &Path) -> Result<SceneSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    SceneSpec::from_toml_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// `sample_id,impactor_type,detected,truth` rows; relative mask paths resolve
/// against the list's directory.
pub fn evaluate_list(list: &Path) -> Result<Vec<EvalRow>, Failure> {
    let text = std::fs::read_to_string(list).map_err(|e| io_failure(list, e))?;
    let base = list.parent().unwrap_or(Path::new(""));
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if n == 0 && cells.first() == Some(&"sample_id") {
            continue;
        }
        let [id, kind, detected, truth] = cells[..] else {
            return Err(Failure::usage(format!("{}:{}: expected 4 columns", list.display(), n + 1)));
        };
        let result = precision_recall(&report::read_mask(base.join(detected))?, &report::read_mask(base.join(truth))?)?;
        rows.push(EvalRow { sample_id: id.into(), impactor_type: kind.into(), result });
    }
    if rows.is_empty() {
        return Err(Failure::usage(format!("{} lists no samples", list.display())));
    }
    Ok(rows)
}

fn eval_json(r: &EvalResult) -> Value {
    json!({
        "precision": r.precision,
        "recall": r.recall,
        "tp": r.tp,
        "fp": r.fp,
        "fn": r.fn_,
        "no_detections": r.no_detections,
        "empty_truth": r.empty_truth,
    })
}

pub fn evaluation_text(rows: &[EvalRow], overall: &EvalResult, format: Format) -> String {
    match format {
        Format::Csv => report::eval_csv(rows, Some(overall)),
        Format::Json => {
            let samples: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = eval_json(&r.result);
                    v["sample_id"] = json!(r.sample_id);
                    v["impactor_type"] = json!(r.impactor_type);
                    v
                })
                .collect();
            pretty(&json!({ "samples": samples, "overall": eval_json(overall) }))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// An output directory plus the table format.
pub struct Out {
    dir: PathBuf,
    format: Format,
}

impl Out {
    pub fn new(dir: &Path, format: Format) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), format })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn table(&self, stem: &str, text: &str) -> Result<PathBuf, Failure> {
        let path = self.path(&format!("{stem}.{}", self.format.ext()));
        report::write_text(&path, text)?;
        Ok(path)
    }

    pub fn regions(&self, features: &[RegionFeatures]) -> Result<PathBuf, Failure> {
        let text = match self.format {
            Format::Csv => report::regions_csv(features),
            Format::Json => pretty(&Value::Array(
                features
                    .iter()
                    .map(|f| {
                        json!({
                            "label": f.label,
                            "area": f.area,
                            "perimeter": f.perimeter,
                            "centroid_row": f.centroid.0,
                            "centroid_col": f.centroid.1,
                            "major": f.major_axis,
                            "minor": f.minor_axis,
                            "orientation": f.orientation,
                            "roundness": f.roundness,
                            "rmm": f.rmm,
                        })
                    })
                    .collect(),
            )),
        };
        self.table("regions", &text)
    }

    pub fn evaluation(&self, rows: &[EvalRow], overall: &EvalResult) -> Result<PathBuf, Failure> {
        self.table("evaluation", &evaluation_text(rows, overall, self.format))
    }

    /// Long-format table of every ROI plus one `profile_<name>` table each.
    pub fn profiles(&self, profiles: &[SpectralProfile<f64>]) -> Result<PathBuf, Failure> {
        let json_of = |p: &SpectralProfile<f64>| {
            json!({ "roi": p.name, "pixels": p.n, "wavelength_nm": p.wavelengths, "mean": p.mean, "std": p.std })
        };
        for p in profiles {
            let text = match self.format {
                Format::Csv => report::profile_csv(p),
                Format::Json => pretty(&json_of(p)),
            };
            self.table(&format!("profile_{}", p.name), &text)?;
        }
        let text = match self.format {
            Format::Csv => report::profiles_long_csv(profiles),
            Format::Json => pretty(&Value::Array(profiles.iter().map(json_of).collect())),
        };
        self.table("profiles", &text)
    }
}
