mod io;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hsindt::detect::{detect_damage, DetectConfig, ThresholdPolicy};
use hsindt::evaluate::{pool, precision_recall};
use hsindt::geometry::{stitch, tilt_correct, Blend, StitchSpec, TiltSpec};
use hsindt::hypercube::envi::{ByteOrder, DataType, Interleave, WriteOptions};
use hsindt::preprocess::{bin, calibrate, first_component, jbf_pc1, pca, snv_correct, CalibrationRefs, JbfParams, SnvMode};
use hsindt::profile::{profile_crossings, roi_profile, Roi};
use hsindt::report::{self, EvalRow};
use hsindt::synth::{generate_scene, pushbroom_scan, ScanSpec, SceneSpec, DEFAULT_LINE_RATE};

use crate::io::{read_cube, write_cube, Format, Out};

#[derive(Parser)]
#[command(name = "hsindt", version, about = "Hyperspectral inspection of composite surfaces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "HSINDT_THREADS")]
    threads: Option<usize>,
    /// Report format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Endian {
    Little,
    Big,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an ENVI cube with another interleave, data type or byte order.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "bsq")]
        interleave: Interleave,
        /// ENVI data type code: 1, 2, 4, 5 or 12.
        #[arg(long, default_value_t = 5)]
        data_type: u32,
        #[arg(long, value_enum, default_value_t = Endian::Little)]
        byte_order: Endian,
    },
    /// Raw counts to reflectance with dark and white recordings.
    Calibrate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dark: PathBuf,
        #[arg(long)]
        white: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Binning, SNV, joint bilateral filtering and PCA, applied in that order.
    Preprocess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Spatial binning factor.
        #[arg(long, default_value_t = 1)]
        bin: usize,
        /// Spectral binning factor.
        #[arg(long, default_value_t = 1)]
        bin_spectral: usize,
        /// SNV mode: per-band or per-spectrum.
        #[arg(long)]
        snv: Option<SnvMode>,
        /// Apply the PC1-guided joint bilateral filter.
        #[arg(long)]
        jbf: bool,
        #[arg(long, requires = "jbf")]
        sigma_d: Option<f64>,
        #[arg(long, requires = "jbf")]
        sigma_r: Option<f64>,
        /// Replace the cube with its first k principal component scores.
        #[arg(long)]
        pca: Option<usize>,
    },
    /// Damage detection: regions table, mask and saliency images.
    Detect {
        #[arg(long)]
        input: PathBuf,
        /// Output directory.
        #[arg(long)]
        output: PathBuf,
        /// Fixed threshold in [0, 1] or "otsu".
        #[arg(long, default_value = "0.5")]
        threshold: ThresholdPolicy,
        #[arg(long, default_value_t = 5)]
        min_area: usize,
        #[arg(long)]
        no_jbf: bool,
        #[arg(long)]
        sigma_d: Option<f64>,
        #[arg(long)]
        sigma_r: Option<f64>,
        /// Ground-truth mask (PGM/PNG); adds an evaluation table.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Pixel precision and recall of detected masks against truth.
    Evaluate {
        /// Detected mask, or omit and pass --list.
        #[arg(long, requires = "truth", conflicts_with = "list")]
        detected: Option<PathBuf>,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value = "sample")]
        sample_id: String,
        #[arg(long, default_value = "unknown")]
        impactor: String,
        /// CSV with columns sample_id,impactor_type,detected,truth.
        #[arg(long)]
        list: Option<PathBuf>,
        /// Output table; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Join two scans with a fixed column overlap.
    Stitch {
        /// Left then right scan.
        #[arg(long, num_args = 2, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        overlap: usize,
        #[arg(long, default_value = "average")]
        blend: Blend,
        #[arg(long)]
        output: PathBuf,
    },
    /// Restore a scan acquired with the sample tilted by theta degrees.
    Tilt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        output: PathBuf,
    },
    /// ROI mean and std spectra, crossings and an optional chart.
    Profile {
        #[arg(long)]
        input: PathBuf,
        /// name:row0,col0,rows,cols (repeatable).
        #[arg(long, required = true)]
        roi: Vec<Roi>,
        /// Output directory.
        #[arg(long)]
        output: PathBuf,
        /// Also render profiles.png.
        #[arg(long)]
        chart: bool,
    },
    /// Generate a synthetic scene: raw cube, references, truth masks.
    Synth {
        /// Scene description (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Push-broom scan at this stage speed (mm/s) instead of direct sampling.
        #[arg(long)]
        speed: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_LINE_RATE, requires = "speed")]
        line_rate: f64,
        #[arg(long, requires = "speed")]
        path_length: Option<f64>,
        #[arg(long, default_value_t = 0.0, requires = "speed")]
        tilt: f64,
    },
    /// Run a staged pipeline from a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's input cube.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Overrides the config's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the seed of an in-process scene.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Exit status and message of a failed command.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<hsindt::Error> for Failure {
    fn from(e: hsindt::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command, cli.format) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command, format: Format) -> Result<(), Failure> {
    match command {
        Command::Convert { input, output, interleave, data_type, byte_order } => {
            let cube = read_cube(&input)?;
            let mut opts = WriteOptions::new(interleave, DataType::from_code(data_type)?);
            opts.byte_order = match byte_order {
                Endian::Little => ByteOrder::Little,
                Endian::Big => ByteOrder::Big,
            };
            let hdr = io::write_cube_with(&cube, &output, &opts)?;
            println!("convert: {} -> {}", io::dims(&cube), hdr.display());
        }
        Command::Calibrate { input, dark, white, output } => {
            let raw = read_cube(&input)?;
            let refs = CalibrationRefs::from_recordings(&read_cube(&dark)?, &read_cube(&white)?)?;
            let (refl, report) = calibrate(&raw, &refs)?;
            write_cube(&refl, &output)?;
            println!("calibrate: {} reflectance, {} dead positions", io::dims(&refl), report.dead.len());
        }
        Command::Preprocess { input, output, bin: spatial, bin_spectral, snv, jbf, sigma_d, sigma_r, pca: k } => {
            let mut cube = read_cube(&input)?;
            if spatial > 1 || bin_spectral > 1 {
                cube = bin(&cube, spatial, bin_spectral)?;
            }
            if let Some(mode) = snv {
                cube = snv_correct(&cube, mode)?.0;
            }
            if jbf {
                let params = jbf_override(&cube, sigma_d, sigma_r)?;
                cube = jbf_pc1(&cube, params)?.0;
            }
            if let Some(k) = k {
                cube = pca(&cube, k)?.1;
            }
            write_cube(&cube, &output)?;
            println!("preprocess: {} {} [{}]", io::dims(&cube), cube.kind(), cube.provenance_string());
        }
        Command::Detect { input, output, threshold, min_area, no_jbf, sigma_d, sigma_r, truth } => {
            let cube = read_cube(&input)?;
            let jbf = jbf_override(&cube, sigma_d, sigma_r)?;
            let config = DetectConfig { jbf, skip_jbf: no_jbf, threshold, min_area, ..Default::default() };
            let det = detect_damage(&cube, &config)?;
            let out = Out::new(&output, format)?;
            out.regions(&det.features)?;
            report::write_mask_pgm(out.path("mask.pgm"), &det.mask.mask)?;
            report::write_mask_envi(out.path("mask.img"), &det.mask.mask)?;
            report::write_plane_pgm(out.path("saliency.pgm"), &det.saliency.values)?;
            print!(
                "detect: {} regions, {} mask pixels, threshold {}",
                det.regions.len(),
                det.mask.mask.count(),
                det.mask.threshold_used
            );
            if let Some(truth) = truth {
                let result = precision_recall(&det.mask.mask, &report::read_mask(&truth)?)?;
                let row = EvalRow { sample_id: io::stem(&input), impactor_type: "unknown".into(), result };
                out.evaluation(&[row], &result)?;
                print!(", precision {:.4} recall {:.4}", result.precision, result.recall);
            }
            println!();
        }
        Command::Evaluate { detected, truth, sample_id, impactor, list, output } => {
            let rows = match (detected, list) {
                (Some(d), None) => {
                    let truth = truth.ok_or_else(|| Failure::usage("--detected needs --truth"))?;
                    let result = precision_recall(&report::read_mask(&d)?, &report::read_mask(&truth)?)?;
                    vec![EvalRow { sample_id, impactor_type: impactor, result }]
                }
                (None, Some(list)) => io::evaluate_list(&list)?,
                _ => return Err(Failure::usage("pass either --detected/--truth or --list")),
            };
            let overall = pool(&rows.iter().map(|r| r.result).collect::<Vec<_>>())?;
            let text = io::evaluation_text(&rows, &overall, format);
            match output {
                Some(path) => report::write_text(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Stitch { input, overlap, blend, output } => {
            let (a, b) = (read_cube(&input[0])?, read_cube(&input[1])?);
            let out = stitch(&a, &b, StitchSpec { overlap, blend })?;
            write_cube(&out, &output)?;
            println!("stitch: {} + {} -> {}", io::dims(&a), io::dims(&b), io::dims(&out));
        }
        Command::Tilt { input, theta, output } => {
            let cube = read_cube(&input)?;
            let out = tilt_correct(&cube, TiltSpec::new(theta)?)?;
            write_cube(&out, &output)?;
            println!("tilt: {} -> {}", io::dims(&cube), io::dims(&out));
        }
        Command::Profile { input, roi, output, chart } => {
            let cube = read_cube(&input)?;
            let profiles = roi.iter().map(|r| roi_profile(&cube, r)).collect::<hsindt::Result<Vec<_>>>()?;
            let out = Out::new(&output, format)?;
            out.profiles(&profiles)?;
            if chart {
                report::write_profile_chart(out.path("profiles.png"), &profiles)?;
            }
            for pair in profiles.windows(2).filter(|p| !p[0].wavelengths.is_empty()) {
                let c = profile_crossings(&pair[0], &pair[1])?;
                println!("profile: {} vs {} crossings at {:?} nm", pair[0].name, pair[1].name, c.crossings);
            }
            println!("profile: {} ROIs over {} bands", profiles.len(), cube.bands());
        }
        Command::Synth { config, output, seed, speed, line_rate, path_length, tilt } => {
            let mut spec = io::read_scene(&config)?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            std::fs::create_dir_all(&output).map_err(|e| Failure { code: 1, message: e.to_string() })?;
            match speed {
                None => write_scene(&spec, &output)?,
                Some(speed) => {
                    let path = path_length.unwrap_or(spec.size.0 as f64 * speed / line_rate);
                    let scan = pushbroom_scan(&spec, &ScanSpec::new(speed, line_rate, path, tilt)?)?;
                    write_cube(&scan.raw, &output.join("raw.img"))?;
                    let (dark, white) = scan.refs.to_cubes();
                    write_cube(&dark, &output.join("dark.img"))?;
                    write_cube(&white, &output.join("white.img"))?;
                    report::write_mask_pgm(output.join("truth.pgm"), &scan.truth)?;
                    println!("synth: push-broom scan {} at {tilt} deg", io::dims(&scan.raw));
                }
            }
        }
        Command::Run { config, input, output, seed } => {
            let cfg = pipeline::load(&config, input, output, seed)?;
            pipeline::run(&cfg, format)?;
        }
    }
    Ok(())
}

/// Default JBF parameters for the cube's PC1 guide with user overrides applied;
/// `None` when nothing is overridden.
pub fn jbf_override(
    cube: &hsindt::Cube,
    sigma_d: Option<f64>,
    sigma_r: Option<f64>,
) -> hsindt::Result<Option<JbfParams<f64>>> {
    if sigma_d.is_none() && sigma_r.is_none() {
        return Ok(None);
    }
    let (_, guide) = first_component(cube)?;
    let base = JbfParams::for_guide(&guide);
    JbfParams::with_rule(sigma_d.unwrap_or(base.sigma_d), sigma_r.unwrap_or(base.sigma_r), base.window).map(Some)
}

fn write_scene(spec: &SceneSpec, dir: &std::path::Path) -> Result<(), Failure> {
    let scene = generate_scene(spec)?;
    write_cube(&scene.raw, &dir.join("raw.img"))?;
    let (dark, white) = scene.refs.to_cubes();
    write_cube(&dark, &dir.join("dark.img"))?;
    write_cube(&white, &dir.join("white.img"))?;
    write_cube(&scene.reflectance, &dir.join("reflectance.img"))?;
    report::write_mask_pgm(dir.join("truth.pgm"), &scene.truth)?;
    for (k, t) in scene.truths.iter().enumerate() {
        report::write_mask_pgm(dir.join(format!("truth_{k}.pgm")), t)?;
    }
    println!(
        "synth: {} raw cube, {} damages, {} truth pixels, seed {}",
        io::dims(&scene.raw),
        scene.truths.len(),
        scene.truth.count(),
        spec.seed
    );
    Ok(())
}
