//! Text and image artifacts: CSV reports, PGM masks, profile charts.
//!
//! Every float in a CSV goes through [`sig6`], so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, GrayImage, ImageEncoder, Rgb, RgbImage};

use crate::detect::RegionFeatures;
use crate::error::{Error, Result};
use crate::evaluate::EvalResult;
use crate::format::sig6;
use crate::hypercube::envi::{write_envi, DataType, Interleave, WriteOptions};
use crate::hypercube::{CubeKind, Hypercube, Step};
use crate::image::{Image, Mask};
use crate::profile::SpectralProfile;
use crate::scalar::Scalar;

pub const REGION_HEADER: &str =
    "label,area,perimeter,centroid_row,centroid_col,major,minor,orientation,roundness,rmm";

pub fn regions_csv(features: &[RegionFeatures]) -> String {
    let mut out = String::from(REGION_HEADER);
    out.push('\n');
    for f in features {
        let cells = [
            f.perimeter,
            f.centroid.0,
            f.centroid.1,
            f.major_axis,
            f.minor_axis,
            f.orientation,
            f.roundness,
            f.rmm,
        ]
        .map(sig6);
        let _ = writeln!(out, "{},{},{}", f.label, f.area, cells.join(","));
    }
    out
}

/// One evaluated sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub sample_id: String,
    pub impactor_type: String,
    pub result: EvalResult,
}

/// Rows in input order, then the `overall` row when given.
pub fn eval_csv(rows: &[EvalRow], overall: Option<&EvalResult>) -> String {
    let mut out = String::from("sample_id,impactor_type,precision,recall\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&r.sample_id),
            csv_field(&r.impactor_type),
            sig6(r.result.precision),
            sig6(r.result.recall)
        );
    }
    if let Some(o) = overall {
        let _ = writeln!(out, "overall,all,{},{}", sig6(o.precision), sig6(o.recall));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn profile_csv<T: Scalar>(p: &SpectralProfile<T>) -> String {
    let mut out = String::from("wavelength_nm,mean,std\n");
    for b in 0..p.mean.len() {
        let _ = writeln!(out, "{},{},{}", wl(p, b), sig6(p.mean[b].as_f64()), sig6(p.std[b].as_f64()));
    }
    out
}

/// All profiles in one table: `roi,wavelength_nm,mean,std`.
pub fn profiles_long_csv<T: Scalar>(profiles: &[SpectralProfile<T>]) -> String {
    let mut out = String::from("roi,wavelength_nm,mean,std\n");
    for p in profiles {
        for b in 0..p.mean.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                csv_field(&p.name),
                wl(p, b),
                sig6(p.mean[b].as_f64()),
                sig6(p.std[b].as_f64())
            );
        }
    }
    out
}

// band index stands in when the cube has no wavelength axis
fn wl<T>(p: &SpectralProfile<T>, b: usize) -> String {
    p.wavelengths.get(b).map_or_else(|| b.to_string(), |&w| sig6(w))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes a mask as binary PGM (P5), 255 for set pixels.
pub fn write_mask_pgm(path: impl AsRef<Path>, mask: &Mask) -> Result<()> {
    let bytes: Vec<u8> = mask.as_slice().iter().map(|&m| if m { 255 } else { 0 }).collect();
    write_pgm(path.as_ref(), mask.rows(), mask.cols(), &bytes)
}

/// Writes a `[0, 1]` plane as binary PGM, scaled to 0..=255 and clamped.
pub fn write_plane_pgm<T: Scalar>(path: impl AsRef<Path>, plane: &Image<T>) -> Result<()> {
    let bytes: Vec<u8> = plane
        .as_slice()
        .iter()
        .map(|v| (v.as_f64().clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    write_pgm(path.as_ref(), plane.rows(), plane.cols(), &bytes)
}

fn write_pgm(path: &Path, rows: usize, cols: usize, bytes: &[u8]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let enc = PnmEncoder::new(std::io::BufWriter::new(file))
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary));
    enc.write_image(bytes, cols as u32, rows as u32, ExtendedColorType::L8)?;
    Ok(())
}

/// Reads a PGM/PNG mask; pixels above 127 are set.
pub fn read_mask(path: impl AsRef<Path>) -> Result<Mask> {
    let img: GrayImage = image::open(path.as_ref())?.into_luma8();
    let (w, h) = img.dimensions();
    Image::new(h as usize, w as usize, img.into_raw().into_iter().map(|v| v > 127).collect())
}

/// A mask as a one-band `Feature` cube with values 0 and 1.
pub fn mask_cube(mask: &Mask) -> Hypercube<f64> {
    Hypercube::from_fn(mask.rows(), mask.cols(), 1, CubeKind::Feature, |i, j, _| {
        if mask.get(i, j) { 1.0 } else { 0.0 }
    })
    .record(Step::new("mask"))
}

/// Writes [`mask_cube`] as an 8-bit BSQ ENVI file pair.
pub fn write_mask_envi(data_path: impl AsRef<Path>, mask: &Mask) -> Result<()> {
    write_envi(&mask_cube(mask), data_path, &WriteOptions::new(Interleave::Bsq, DataType::U8))?;
    Ok(())
}

const PALETTE: [[u8; 3]; 6] = [[31, 119, 180], [214, 39, 40], [44, 160, 44], [148, 103, 189], [255, 127, 14], [23, 190, 207]];

/// Renders profiles as a line chart: mean lines over shaded ±std bands on a
/// white canvas with a frame. No text is drawn.
pub fn profile_chart<T: Scalar>(profiles: &[SpectralProfile<T>], width: u32, height: u32) -> Result<RgbImage> {
    let bands = profiles.first().map_or(0, |p| p.mean.len());
    if bands < 2 || profiles.iter().any(|p| p.mean.len() != bands) {
        return Err(Error::InvalidParameter("chart needs >= 2 bands and equal-length profiles".into()));
    }
    if width < 40 || height < 40 {
        return Err(Error::InvalidParameter("chart must be at least 40x40".into()));
    }
    let x_of = |p: &SpectralProfile<T>, b: usize| p.wavelengths.get(b).copied().unwrap_or(b as f64);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in profiles {
        for b in 0..bands {
            let (m, s) = (p.mean[b].as_f64(), p.std[b].as_f64());
            x0 = x0.min(x_of(p, b));
            x1 = x1.max(x_of(p, b));
            y0 = y0.min(m - s);
            y1 = y1.max(m + s);
        }
    }
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let margin = 20.0;
    let (w, h) = (width as f64 - 2.0 * margin, height as f64 - 2.0 * margin);
    let px = |x: f64| margin + (x - x0) / (x1 - x0) * w;
    let py = |y: f64| margin + (y1 - y) / (y1 - y0) * h;

    let mut img = RgbImage::from_pixel(width, height, Rgb([255, 255, 255]));
    for (k, p) in profiles.iter().enumerate() {
        let c = PALETTE[k % PALETTE.len()];
        let shade = Rgb(c.map(|v| (v as f64 * 0.25 + 255.0 * 0.75) as u8));
        for b in 0..bands - 1 {
            let (xa, xb) = (px(x_of(p, b)), px(x_of(p, b + 1)));
            for x in xa.round() as i64..=xb.round() as i64 {
                let t = if xb > xa { ((x as f64 - xa) / (xb - xa)).clamp(0.0, 1.0) } else { 0.0 };
                let lerp = |v: &[T]| v[b].as_f64() + (v[b + 1].as_f64() - v[b].as_f64()) * t;
                let (m, s) = (lerp(&p.mean), lerp(&p.std));
                for y in py(m + s).round() as i64..=py(m - s).round() as i64 {
                    blend(&mut img, x, y, shade);
                }
            }
        }
    }
    for (k, p) in profiles.iter().enumerate() {
        let c = Rgb(PALETTE[k % PALETTE.len()]);
        for b in 0..bands - 1 {
            let a = (px(x_of(p, b)), py(p.mean[b].as_f64()));
            let z = (px(x_of(p, b + 1)), py(p.mean[b + 1].as_f64()));
            line(&mut img, a, z, c);
        }
    }
    let frame = Rgb([0, 0, 0]);
    let (l, r, t, bt) = (margin, width as f64 - margin, margin, height as f64 - margin);
    line(&mut img, (l, t), (r, t), frame);
    line(&mut img, (l, bt), (r, bt), frame);
    line(&mut img, (l, t), (l, bt), frame);
    line(&mut img, (r, t), (r, bt), frame);
    Ok(img)
}

// darker-wins so overlapping bands stay visible
fn blend(img: &mut RgbImage, x: i64, y: i64, c: Rgb<u8>) {
    if x < 0 || y < 0 || x >= img.width() as i64 || y >= img.height() as i64 {
        return;
    }
    let p = img.get_pixel_mut(x as u32, y as u32);
    for k in 0..3 {
        p.0[k] = p.0[k].min(c.0[k]);
    }
}

fn line(img: &mut RgbImage, a: (f64, f64), b: (f64, f64), c: Rgb<u8>) {
    let n = ((b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil() as usize).max(1);
    for k in 0..=n {
        let t = k as f64 / n as f64;
        let (x, y) = ((a.0 + (b.0 - a.0) * t).round() as i64, (a.1 + (b.1 - a.1) * t).round() as i64);
        if x >= 0 && y >= 0 && x < img.width() as i64 && y < img.height() as i64 {
            img.put_pixel(x as u32, y as u32, c);
        }
    }
}

pub fn write_profile_chart<T: Scalar>(path: impl AsRef<Path>, profiles: &[SpectralProfile<T>]) -> Result<()> {
    profile_chart(profiles, 800, 500)?.save_with_format(path.as_ref(), image::ImageFormat::Png)?;
    Ok(())
}
