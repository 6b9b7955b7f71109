//! Acceptance suite: one line per criterion, `PASS`/`FAIL` with timing.
//! Runs without the libtest harness so the lines always reach stdout.

use std::time::{Duration, Instant};

use hsindt::detect::{detect_damage, region_features, DetectConfig, Region};
use hsindt::evaluate::{pool, precision_recall};
use hsindt::geometry::{stitch, tilt_correct, StitchSpec, TiltSpec};
use hsindt::hypercube::envi::{read_envi, write_envi, ByteOrder, DataType, Interleave, WriteOptions};
use hsindt::preprocess::{
    bin, calibrate, jbf_weights, joint_bilateral_filter, pca, snv_correct, CalibrationRefs, JbfParams, SnvMode,
};
use hsindt::profile::{profile_crossings, roi_profile, Roi};
use hsindt::synth::{crossing_pair, generate_scene, pushbroom_scan, DamageSpec, Patch, ScanSpec, SceneSpec};
use hsindt::{CubeKind, Hypercube, Image, Mask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_cube(r: &mut ChaCha8Rng, l: usize, s: usize, b: usize, kind: CubeKind) -> Hypercube<f64> {
    Hypercube::from_fn(l, s, b, kind, |_, _, _| r.random_range(0.0..1.0))
}

// 1
fn stitch_arithmetic() -> Outcome {
    let a = Hypercube::<f64>::from_fn(620, 320, 2, CubeKind::Reflectance, |i, j, b| (i + j + b) as f64);
    let out = stitch(&a, &a, StitchSpec { overlap: 110, ..Default::default() }).map_err(|e| e.to_string())?;
    ensure(out.samples() == 530 && out.lines() == 620, || format!("got {}x{}", out.samples(), out.lines()))?;
    Ok("530x620".into())
}

// 2
fn binning_arithmetic() -> Outcome {
    let c = Hypercube::<f64>::from_fn(2, 1344, 2, CubeKind::RawRadiance, |_, j, _| j as f64);
    let out = bin(&c, 4, 1).map_err(|e| e.to_string())?;
    ensure(out.samples() == 336, || format!("got {}", out.samples()))?;
    Ok("1344 -> 336".into())
}

// 3
fn calibration_identities() -> Outcome {
    let (l, s, b) = (64, 64, 32);
    let mut r = rng(3);
    let dark: Vec<f64> = (0..s * b).map(|_| r.random_range(50.0..150.0)).collect();
    let white: Vec<f64> = dark.iter().map(|d| d + r.random_range(100.0..4000.0)).collect();
    let refs = CalibrationRefs::new(s, b, dark, white).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (target, f) in [(0.0, 0.0), (1.0, 1.0), (0.5, 0.5)] {
        let raw = Hypercube::from_fn(l, s, b, CubeKind::RawRadiance, |_, j, k| {
            let (d, w) = (refs.dark(j, k), refs.white(j, k));
            d + f * (w - d)
        });
        let (refl, _) = calibrate(&raw, &refs).map_err(|e| e.to_string())?;
        for v in refl.values() {
            worst = worst.max((v - target).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max error {worst:e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

// 4
fn snv_per_band() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for seed in 0..10 {
        let mut r = rng(400 + seed);
        let (l, s, b) = (r.random_range(8..40), r.random_range(8..40), r.random_range(3..20));
        let offset: f64 = r.random_range(-5.0..5.0);
        let scale: f64 = r.random_range(0.1..10.0);
        let c = Hypercube::from_fn(l, s, b, CubeKind::Reflectance, |_, _, _| offset + scale * r.random_range(0.0..1.0));
        let (out, _) = snv_correct(&c, SnvMode::PerBand).map_err(|e| e.to_string())?;
        let n = (l * s) as f64;
        for k in 0..b {
            let plane = out.band_plane(k);
            let mu = plane.iter().sum::<f64>() / n;
            let sd = (plane.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n).sqrt();
            worst.0 = worst.0.max(mu.abs());
            worst.1 = worst.1.max((sd - 1.0).abs());
        }
    }
    ensure(worst.0 <= 1e-9 && worst.1 <= 1e-9, || format!("|mu| {:e}, |std-1| {:e}", worst.0, worst.1))?;
    Ok(format!("|mu| <= {:.1e}, |std-1| <= {:.1e}", worst.0, worst.1))
}

/// Straight-line evaluation of the joint bilateral filter: for every output
/// pixel, sum over the clipped square window of spatial Gaussian × range
/// Gaussian on guide differences, then normalize.
fn naive_jbf(cube: &Hypercube<f64>, guide: &Image<f64>, sd: f64, sr: f64) -> Vec<f64> {
    let (l, s, b) = cube.dims();
    let h = (2.0 * sd).ceil() as isize;
    let mut out = vec![0.0; l * s * b];
    for k in 0..b {
        for i in 0..l as isize {
            for j in 0..s as isize {
                let (mut num, mut den) = (0.0, 0.0);
                for p in i - h..=i + h {
                    for q in j - h..=j + h {
                        if p < 0 || q < 0 || p >= l as isize || q >= s as isize {
                            continue;
                        }
                        let dist2 = ((p - i).pow(2) + (q - j).pow(2)) as f64;
                        let dg = guide.get(i as usize, j as usize) - guide.get(p as usize, q as usize);
                        let w = (-dist2 / (2.0 * sd * sd)).exp() * (-(dg * dg) / (2.0 * sr * sr)).exp();
                        num += w * cube.at(p as usize, q as usize, k);
                        den += w;
                    }
                }
                out[(k * l + i as usize) * s + j as usize] = num / den;
            }
        }
    }
    out
}

// 5
fn jbf_oracle() -> Outcome {
    let (mut worst, mut worst_sum) = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let mut r = rng(500 + seed);
        let c = random_cube(&mut r, 7, 7, 3, CubeKind::Reflectance);
        let guide = Image::from_fn(7, 7, |_, _| r.random_range(-1.0..1.0));
        let sd: f64 = r.random_range(0.5..2.5);
        let sr: f64 = r.random_range(0.05..1.0);
        let params = JbfParams::new(sd, sr).map_err(|e| e.to_string())?;
        let out = joint_bilateral_filter(&c, &guide, &params).map_err(|e| e.to_string())?;
        for (a, b) in out.values().iter().zip(naive_jbf(&c, &guide, sd, sr)) {
            worst = worst.max((a - b).abs());
        }
        for i in 0..7 {
            for j in 0..7 {
                let sum: f64 = jbf_weights(&guide, &params, i, j).iter().map(|w| w.2).sum();
                worst_sum = worst_sum.max((sum - 1.0).abs());
            }
        }
    }
    ensure(worst <= 1e-10 && worst_sum <= 1e-12, || format!("diff {worst:e}, weight sum {worst_sum:e}"))?;
    Ok(format!("max diff {worst:.1e}, weight sums within {worst_sum:.1e}"))
}

// 6
fn jbf_edge_preservation() -> Outcome {
    let (l, s) = (32, 32);
    let step = 1.0;
    let clean = |j: usize| if j < s / 2 { 0.0 } else { step };
    let cube = Hypercube::from_fn(l, s, 1, CubeKind::Reflectance, |_, j, _| clean(j));
    let guide = cube.slice_band(0).map_err(|e| e.to_string())?;
    let sd = 2.0;
    let bilateral = JbfParams::new(sd, 0.1 * step).map_err(|e| e.to_string())?;
    let gaussian = JbfParams::new(sd, 1e6).map_err(|e| e.to_string())?;
    let dev = |p: &JbfParams<f64>| -> Result<f64, String> {
        let out = joint_bilateral_filter(&cube, &guide, p).map_err(|e| e.to_string())?;
        Ok((0..l * s).map(|n| (out.values()[n] - clean(n % s)).abs()).fold(0.0, f64::max))
    };
    let (b, g) = (dev(&bilateral)?, dev(&gaussian)?);
    ensure(b < g, || format!("bilateral {b:e} vs gaussian {g:e}"))?;
    Ok(format!("max deviation {b:.1e} vs gaussian {g:.3}"))
}

// 7
fn pca_oracle() -> Outcome {
    let (mut worst, mut worst_ortho) = (0.0f64, 0.0f64);
    for seed in 0..10 {
        let mut r = rng(700 + seed);
        let c = random_cube(&mut r, 8, 8, 5, CubeKind::Reflectance);
        let (model, _) = pca(&c, 5).map_err(|e| e.to_string())?;
        let n = 64.0;
        let mean: Vec<f64> = (0..5).map(|b| c.band_plane(b).iter().sum::<f64>() / n).collect();
        let cov = nalgebra::DMatrix::from_fn(5, 5, |a, b| {
            (0..64).map(|p| (c.band_plane(a)[p] - mean[a]) * (c.band_plane(b)[p] - mean[b])).sum::<f64>() / n
        });
        let eig = nalgebra::SymmetricEigen::new(cov);
        let mut order: Vec<usize> = (0..5).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
        for (k, &o) in order.iter().enumerate() {
            worst = worst.max((model.explained_variance[k] - eig.eigenvalues[o]).abs());
            let v = eig.eigenvectors.column(o);
            let dot: f64 = (0..5).map(|b| v[b] * model.components[k][b]).sum();
            let sign = dot.signum();
            for b in 0..5 {
                worst = worst.max((model.components[k][b] - sign * v[b]).abs());
            }
        }
        for a in 0..5 {
            for b in 0..5 {
                let dot: f64 = (0..5).map(|t| model.components[a][t] * model.components[b][t]).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                worst_ortho = worst_ortho.max((dot - expect).abs());
            }
        }
    }
    ensure(worst <= 1e-8 && worst_ortho <= 1e-9, || format!("diff {worst:e}, orthonormality {worst_ortho:e}"))?;
    Ok(format!("max diff {worst:.1e}, orthonormality {worst_ortho:.1e}"))
}

fn features_of(mask: &Mask) -> hsindt::detect::RegionFeatures {
    let pixels: Vec<(usize, usize)> =
        (0..mask.rows()).flat_map(|r| (0..mask.cols()).map(move |c| (r, c))).filter(|&(r, c)| mask.get(r, c)).collect();
    region_features(&Region { label: 1, pixels })
}

fn scene_with(size: usize, damages: Vec<DamageSpec>, noise: f64, seed: u64) -> SceneSpec {
    let mut spec = SceneSpec::new(size, size);
    spec.damages = damages;
    spec.noise = noise;
    spec.seed = seed;
    spec.illumination = (0.85, 1.15);
    spec
}

/// Detection run on a calibrated synthetic scene.
fn detect_scene(spec: &SceneSpec) -> Result<(hsindt::synth::Scene, hsindt::detect::Detection<f64>), String> {
    let scene = generate_scene(spec).map_err(|e| e.to_string())?;
    let (refl, _) = calibrate(&scene.raw, &scene.refs).map_err(|e| e.to_string())?;
    let det = detect_damage(&refl, &DetectConfig::default()).map_err(|e| e.to_string())?;
    Ok((scene, det))
}

/// Index of the detected region overlapping `truth` the most.
fn best_match(regions: &[Region], truth: &Mask) -> Option<usize> {
    regions
        .iter()
        .enumerate()
        .map(|(k, r)| (k, r.pixels.iter().filter(|&&(i, j)| truth.get(i, j)).count()))
        .filter(|&(_, n)| n > 0)
        .max_by_key(|&(_, n)| n)
        .map(|(k, _)| k)
}

fn region_mask(region: &Region, rows: usize, cols: usize) -> Mask {
    let mut m = Image::filled(rows, cols, false);
    for &(i, j) in &region.pixels {
        m.set(i, j, true);
    }
    m
}

// 8
fn shape_features() -> Outcome {
    let (cr, cc, rad) = (60.0, 60.0, 50.0);
    let disk = Image::from_fn(121, 121, |r, c| (r as f64 - cr).powi(2) + (c as f64 - cc).powi(2) <= rad * rad);
    let f = features_of(&disk);
    ensure((0.92..=1.02).contains(&f.roundness) && (0.99..=1.01).contains(&f.rmm), || {
        format!("disk R_d {} rmm {}", f.roundness, f.rmm)
    })?;
    let rect = Image::from_fn(100, 100, |r, c| (10..30).contains(&r) && (10..90).contains(&c));
    let g = features_of(&rect);
    ensure((g.rmm - 4.0).abs() <= 0.05, || format!("rect rmm {}", g.rmm))?;

    let mut detail = format!("disk R_d {:.3} rmm {:.4}; rect rmm {:.3}", f.roundness, f.rmm, g.rmm);
    for (k, orient) in [0.0, 30.0, 60.0, 90.0, 135.0].into_iter().enumerate() {
        let blob = DamageSpec::ellipse((48.0, 48.0), 12.0, 12.0, 0.0, 0.6);
        let spec = scene_with(96, vec![blob], 0.01, 800 + k as u64);
        let (scene, det) = detect_scene(&spec)?;
        let m = best_match(&det.regions, &scene.truths[0]).ok_or("point blob not detected")?;
        let fb = &det.features[m];
        ensure(fb.rmm <= 1.1 && (0.65..=1.0).contains(&fb.roundness), || {
            format!("blob rmm {} R_d {}", fb.rmm, fb.roundness)
        })?;

        let bar = DamageSpec::bar((48.0, 48.0), 68.0, 8.0, orient, 0.6);
        let spec = scene_with(96, vec![bar], 0.01, 850 + k as u64);
        let (scene, det) = detect_scene(&spec)?;
        let m = best_match(&det.regions, &scene.truths[0]).ok_or("bar not detected")?;
        let fw = &det.features[m];
        ensure((3.8..=8.8).contains(&fw.rmm) && (0.13..=0.35).contains(&fw.roundness), || {
            format!("bar at {orient} deg: rmm {} R_d {}", fw.rmm, fw.roundness)
        })?;
        if k == 0 {
            detail += &format!(
                "; blob rmm {:.3} R_d {:.3}; bar rmm {:.2} R_d {:.3}",
                fb.rmm, fb.roundness, fw.rmm, fw.roundness
            );
        }
    }
    Ok(detail)
}

// 9
fn precision_recall_oracle() -> Outcome {
    let mut r = rng(9);
    let mut pairs = Vec::new();
    for _ in 0..100 {
        let pd: f64 = r.random_range(0.0..1.0);
        let pt: f64 = r.random_range(0.0..1.0);
        let d: Mask = Image::from_fn(16, 16, |_, _| r.random_bool(pd));
        let t: Mask = Image::from_fn(16, 16, |_, _| r.random_bool(pt));
        let got = precision_recall(&d, &t).map_err(|e| e.to_string())?;
        let (mut tp, mut fp, mut fn_) = (0u64, 0u64, 0u64);
        for i in 0..16 {
            for j in 0..16 {
                match (d.get(i, j), t.get(i, j)) {
                    (true, true) => tp += 1,
                    (true, false) => fp += 1,
                    (false, true) => fn_ += 1,
                    _ => {}
                }
            }
        }
        let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
        let rc = if tp + fn_ == 0 { 1.0 } else { tp as f64 / (tp + fn_) as f64 };
        ensure((got.tp, got.fp, got.fn_) == (tp, fp, fn_) && got.precision == p && got.recall == rc, || {
            format!("mismatch: {got:?} vs ({tp}, {fp}, {fn_})")
        })?;
        pairs.push((d, t, got));
    }
    let pooled = pool(&pairs.iter().map(|p| p.2).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    let concat = |pick: fn(&(Mask, Mask, _)) -> &Mask| -> Mask {
        Image::new(16 * pairs.len(), 16, pairs.iter().flat_map(|p| pick(p).as_slice().to_vec()).collect())
            .expect("stacked")
    };
    let whole = precision_recall(&concat(|p| &p.0), &concat(|p| &p.1)).map_err(|e| e.to_string())?;
    ensure(pooled == whole, || format!("pooled {pooled:?} vs concatenated {whole:?}"))?;
    Ok("100 pairs exact; pooling == concatenation".into())
}

// 10
fn end_to_end_detection() -> Outcome {
    let (mut min_p, mut min_r) = (1.0f64, 1.0f64);
    let (mut round_max, mut bar_min) = (0.0f64, f64::INFINITY);
    for seed in 0..10u64 {
        let mut r = rng(1000 + seed);
        let ellipse = DamageSpec::ellipse(
            (r.random_range(24.0..34.0), r.random_range(24.0..34.0)),
            r.random_range(11.0..13.0),
            r.random_range(10.0..11.0),
            r.random_range(0.0..180.0),
            0.6,
        );
        let bar = DamageSpec::bar(
            (r.random_range(80.0..88.0), r.random_range(80.0..88.0)),
            68.0,
            8.0,
            r.random_range(0.0..180.0),
            0.6,
        );
        let spec = scene_with(128, vec![ellipse, bar], 0.01, seed);
        let (scene, det) = detect_scene(&spec)?;
        let em = best_match(&det.regions, &scene.truths[0]).ok_or(format!("scene {seed}: ellipse missed"))?;
        let bm = best_match(&det.regions, &scene.truths[1]).ok_or(format!("scene {seed}: bar missed"))?;
        ensure(em != bm, || format!("scene {seed}: damages merged into one region"))?;
        let eval = precision_recall(&region_mask(&det.regions[em], 128, 128), &scene.truths[0]).map_err(|e| e.to_string())?;
        ensure(eval.precision >= 0.9 && eval.recall >= 0.9, || {
            format!("scene {seed}: ellipse precision {:.3} recall {:.3}", eval.precision, eval.recall)
        })?;
        let (fe, fb) = (&det.features[em], &det.features[bm]);
        ensure(fe.rmm < 2.0 && fb.rmm >= 2.0, || format!("scene {seed}: rmm ellipse {} bar {}", fe.rmm, fb.rmm))?;
        for (k, reg) in det.regions.iter().enumerate() {
            ensure(k == em || k == bm, || format!("scene {seed}: spurious region of area {}", reg.area()))?;
        }
        min_p = min_p.min(eval.precision);
        min_r = min_r.min(eval.recall);
        round_max = round_max.max(fe.rmm);
        bar_min = bar_min.min(fb.rmm);
    }
    Ok(format!(
        "min precision {min_p:.3}, min recall {min_r:.3}; rmm round <= {round_max:.2}, bar >= {bar_min:.2}"
    ))
}

// 11
fn tilt_round_trip() -> Outcome {
    let mut spec = scene_with(128, vec![DamageSpec::ellipse((45.0, 48.0), 16.0, 10.0, 90.0, 0.6)], 0.01, 11);
    spec.size = (128, 96);
    let scan_at = |tilt: f64| -> Result<Hypercube<f64>, String> {
        let scan = pushbroom_scan(&spec, &ScanSpec::new(16.0, 16.0, 128.0, tilt).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        Ok(calibrate(&scan.raw, &scan.refs).map_err(|e| e.to_string())?.0)
    };
    let rmm_of = |cube: &Hypercube<f64>| -> Result<f64, String> {
        let det = detect_damage(cube, &DetectConfig::default()).map_err(|e| e.to_string())?;
        det.features.iter().max_by_key(|f| f.area).map(|f| f.rmm).ok_or_else(|| "no region".to_string())
    };
    let flat = scan_at(0.0)?;
    let tilted = scan_at(30.0)?;
    let restored = tilt_correct(&tilted, TiltSpec::new(30.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let (r0, rt, rr) = (rmm_of(&flat)?, rmm_of(&tilted)?, rmm_of(&restored)?);
    let rel = (rr - r0).abs() / r0;
    ensure(rel <= 0.05, || format!("rmm untilted {r0:.3}, tilted {rt:.3}, restored {rr:.3}"))?;
    let same = tilt_correct(&flat, TiltSpec::new(0.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(same.values() == flat.values(), || "theta = 0 is not the identity".into())?;
    Ok(format!("rmm untilted {r0:.3}, tilted {rt:.3}, restored {rr:.3} ({:.1}%)", 100.0 * rel))
}

// 12
fn envi_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut r = rng(12);
    for n in 0..50 {
        let il = Interleave::ALL[n % 3];
        let dt = DataType::ALL[(n / 3) % 5];
        let (l, s, b) = (r.random_range(1..9), r.random_range(1..9), r.random_range(1..6));
        let c = Hypercube::from_fn(l, s, b, CubeKind::RawRadiance, |_, _, _| match dt {
            DataType::U8 => r.random_range(0..=255) as f64,
            DataType::I16 => r.random_range(-32768..=32767) as f64,
            DataType::U16 => r.random_range(0..=65535) as f64,
            DataType::F32 => r.random_range(-1e3f32..1e3) as f64,
            DataType::F64 => r.random_range(-1e6..1e6),
        });
        let c = c.with_wavelengths((0..b).map(|k| 950.0 + 10.0 * k as f64).collect()).map_err(|e| e.to_string())?;
        let mut opts = WriteOptions::new(il, dt);
        if n % 2 == 1 {
            opts.byte_order = ByteOrder::Big;
        }
        let data = dir.path().join(format!("c{n}.img"));
        let (hdr, data) = write_envi(&c, &data, &opts).map_err(|e| e.to_string())?;
        let back: Hypercube<f64> = read_envi(&hdr, &data).map_err(|e| e.to_string())?;
        let same = back.dims() == c.dims()
            && back.wavelengths() == c.wavelengths()
            && back.values().iter().zip(c.values()).all(|(a, b)| a.to_bits() == b.to_bits());
        ensure(same, || format!("cube {n} ({il}, {dt:?}) differs after round trip"))?;
    }
    Ok("50 cubes bit-identical".into())
}

// 13
fn profile_crossing() -> Outcome {
    let (adhesive, normal) = crossing_pair(1147.0);
    let mut spec = SceneSpec::new(40, 40);
    spec.materials = vec![adhesive.clone(), normal.clone()];
    spec.background = normal.name.clone();
    spec.patches.push(Patch { material: adhesive.name.clone(), rect: [0, 0, 20, 40] });
    spec.noise = 0.005;
    spec.seed = 13;
    let scene = generate_scene(&spec).map_err(|e| e.to_string())?;
    let (refl, _) = calibrate(&scene.raw, &scene.refs).map_err(|e| e.to_string())?;
    let pa = roi_profile(&refl, &Roi::rect("adhesive", 2, 2, 16, 36)).map_err(|e| e.to_string())?;
    let pn = roi_profile(&refl, &Roi::rect("normal", 22, 2, 16, 36)).map_err(|e| e.to_string())?;
    let c = profile_crossings(&pa, &pn).map_err(|e| e.to_string())?;
    let spacing = spec.wavelengths.step;
    ensure(c.crossings.iter().any(|w| (w - 1147.0).abs() <= spacing), || format!("crossings {:?}", c.crossings))?;
    Ok(format!("crossings at {:?} nm", c.crossings.iter().map(|w| (w * 10.0).round() / 10.0).collect::<Vec<_>>()))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("stitch arithmetic", 1, stitch_arithmetic),
        ("binning arithmetic", 1, binning_arithmetic),
        ("calibration identities", 1, calibration_identities),
        ("SNV per-band moments", 5, snv_per_band),
        ("JBF oracle equivalence", 10, jbf_oracle),
        ("JBF edge preservation", 1, jbf_edge_preservation),
        ("PCA oracle", 5, pca_oracle),
        ("shape features", 5, shape_features),
        ("precision/recall oracle", 2, precision_recall_oracle),
        ("end-to-end synthetic detection", 60, end_to_end_detection),
        ("tilt round trip", 5, tilt_round_trip),
        ("ENVI round trip", 10, envi_round_trip),
        ("profile crossings", 1, profile_crossing),
    ];
    let mut failed = 0;
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} #{:<2} {name} ({:.3}s / {budget}s): {detail}", n + 1, took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
