//! Detection stages checked against slow, direct re-implementations.

use std::collections::VecDeque;

use hsindt::detect::{extract_regions, otsu_threshold, saliency_map};
use hsindt::{Mask, Plane};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Breadth-first flood fill over the 8-neighbourhood, seeded in row-major order.
fn flood_regions(mask: &Mask) -> Vec<Vec<(usize, usize)>> {
    let (rows, cols) = mask.shape();
    let mut seen = vec![false; rows * cols];
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if !mask.get(r, c) || seen[r * cols + c] {
                continue;
            }
            let mut px = Vec::new();
            let mut queue = VecDeque::from([(r, c)]);
            seen[r * cols + c] = true;
            while let Some((y, x)) = queue.pop_front() {
                px.push((y, x));
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        let (ny, nx) = (y as isize + dy, x as isize + dx);
                        if ny < 0 || nx < 0 || ny >= rows as isize || nx >= cols as isize {
                            continue;
                        }
                        let (ny, nx) = (ny as usize, nx as usize);
                        if mask.get(ny, nx) && !seen[ny * cols + nx] {
                            seen[ny * cols + nx] = true;
                            queue.push_back((ny, nx));
                        }
                    }
                }
            }
            px.sort_unstable();
            out.push(px);
        }
    }
    out
}

#[test]
fn regions_match_flood_fill() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for density in [0.2, 0.4, 0.55, 0.7] {
        for _ in 0..10 {
            let mask = Mask::from_fn(23, 31, |_, _| rng.random_bool(density));
            let expect = flood_regions(&mask);
            let got = extract_regions(&mask, 1);
            assert_eq!(got.len(), expect.len());
            for (n, (g, e)) in got.iter().zip(&expect).enumerate() {
                assert_eq!(g.label, n + 1);
                assert_eq!(&g.pixels, e);
            }
            for min_area in [2, 5] {
                let kept: Vec<_> = expect.iter().filter(|r| r.len() >= min_area).collect();
                let got = extract_regions(&mask, min_area);
                assert_eq!(got.len(), kept.len());
                assert!(got.iter().zip(kept).all(|(g, e)| &g.pixels == e));
            }
        }
    }
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

fn rank_percentile(s: &[f64], q: f64) -> f64 {
    let rank = q / 100.0 * (s.len() - 1) as f64;
    let (lo, hi) = (rank.floor() as usize, rank.ceil() as usize);
    s[lo] + (s[hi] - s[lo]) * (rank - lo as f64)
}

#[test]
fn saliency_matches_direct_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (rows, cols, sigma) = (21usize, 17usize, 2.0f64);
    let guide = Plane::from_fn(rows, cols, |r, c| {
        let blob = if (r as f64 - 8.0).powi(2) + (c as f64 - 9.0).powi(2) < 16.0 { 3.0 } else { 0.0 };
        blob + rng.random_range(-0.5..0.5)
    });

    // Truncated 2-D Gaussian with renormalised borders, radius ceil(3σ).
    let radius = 6isize;
    let mut blurred = vec![0.0; rows * cols];
    for y in 0..rows as isize {
        for x in 0..cols as isize {
            let (mut acc, mut norm) = (0.0, 0.0);
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    let (p, q) = (y + dy, x + dx);
                    if p < 0 || q < 0 || p >= rows as isize || q >= cols as isize {
                        continue;
                    }
                    let w = (-((dy * dy + dx * dx) as f64) / (2.0 * sigma * sigma)).exp();
                    acc += w * guide.get(p as usize, q as usize);
                    norm += w;
                }
            }
            blurred[y as usize * cols + x as usize] = acc / norm;
        }
    }
    let median = rank_percentile(&sorted(&blurred), 50.0);
    let dev: Vec<f64> = blurred.iter().map(|v| (v - median).abs()).collect();
    let scale = rank_percentile(&sorted(&dev), 99.5);

    let map = saliency_map(&guide).unwrap();
    for (k, d) in dev.iter().enumerate() {
        let expect = (d / scale).min(1.0);
        assert!((map.values.as_slice()[k] - expect).abs() < 1e-12, "pixel {k}");
    }
}

/// Every split after bin k scored from the raw values, not a histogram.
fn otsu_exhaustive(values: &[f64]) -> f64 {
    let bin = |v: f64| ((v * 256.0).floor() as i64).clamp(0, 255) as usize;
    let center = |b: usize| (b as f64 + 0.5) / 256.0;
    let mut scores = Vec::new();
    for k in 0..255 {
        let (mut lo, mut hi) = (Vec::new(), Vec::new());
        for &v in values {
            let b = bin(v);
            if b <= k {
                lo.push(center(b));
            } else {
                hi.push(center(b));
            }
        }
        if lo.is_empty() || hi.is_empty() {
            scores.push(None);
            continue;
        }
        let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        scores.push(Some(lo.len() as f64 * hi.len() as f64 * (mean(&lo) - mean(&hi)).powi(2)));
    }
    let best = scores.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return 1.0;
    }
    let near: Vec<usize> = (0..255).filter(|&k| scores[k].is_some_and(|s| s >= best - best * 1e-12)).collect();
    ((near[0] + near[near.len() - 1]) / 2 + 1) as f64 / 256.0
}

#[test]
fn otsu_matches_exhaustive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..40 {
        let n = 50 + case * 7;
        let values: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.3) {
                    rng.random_range(0.55..1.0)
                } else {
                    rng.random_range(0.0..0.4)
                }
            })
            .collect();
        assert_eq!(otsu_threshold(&values), otsu_exhaustive(&values), "case {case}");
    }
    // Two spikes: the whole gap between them ties, and the middle split wins.
    let spikes: Vec<f64> = (0..20).map(|k| if k < 10 { 0.1 } else { 0.9 }).collect();
    assert_eq!(otsu_threshold(&spikes), otsu_exhaustive(&spikes));
    assert_eq!(otsu_threshold(&[0.3f64; 8]), 1.0);
}
