use std::collections::VecDeque;

use crate::image::Mask;

/// One 8-connected foreground component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    /// 1-based, in row-major order of each region's first pixel.
    pub label: usize,
    /// `(row, col)` pixels in row-major order.
    pub pixels: Vec<(usize, usize)>,
}

impl Region {
    pub fn area(&self) -> usize {
        self.pixels.len()
    }
}

/// 8-connected components with at least `min_area` pixels.
pub fn extract_regions(mask: &Mask, min_area: usize) -> Vec<Region> {
    let (rows, cols) = mask.shape();
    let mut seen = vec![false; rows * cols];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for r0 in 0..rows {
        for c0 in 0..cols {
            if !mask.get(r0, c0) || seen[r0 * cols + c0] {
                continue;
            }
            let mut pixels = Vec::new();
            seen[r0 * cols + c0] = true;
            queue.push_back((r0, c0));
            while let Some((r, c)) = queue.pop_front() {
                pixels.push((r, c));
                for dr in -1isize..=1 {
                    for dc in -1isize..=1 {
                        let (nr, nc) = (r as isize + dr, c as isize + dc);
                        if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                            continue;
                        }
                        let (nr, nc) = (nr as usize, nc as usize);
                        if mask.get(nr, nc) && !seen[nr * cols + nc] {
                            seen[nr * cols + nc] = true;
                            queue.push_back((nr, nc));
                        }
                    }
                }
            }
            if pixels.len() >= min_area.max(1) {
                pixels.sort_unstable();
                out.push(Region { label: out.len() + 1, pixels });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Image;

    fn mask(rows: &[&str]) -> Mask {
        let cols = rows[0].len();
        Image::from_fn(rows.len(), cols, |r, c| rows[r].as_bytes()[c] == b'#')
    }

    #[test]
    fn two_blocks() {
        let m = mask(&["##...", "##...", ".....", "...##", "...##"]);
        let regions = extract_regions(&m, 1);
        assert_eq!(regions.len(), 2);
        assert!(regions.iter().all(|r| r.area() == 4));
        assert_eq!(regions[0].pixels[0], (0, 0));
        assert_eq!(regions[1].label, 2);
    }

    #[test]
    fn diagonal_touching_is_one_region() {
        let m = mask(&["#..", ".#.", "..#"]);
        assert_eq!(extract_regions(&m, 1).len(), 1);
    }

    #[test]
    fn min_area_filters_and_relabels() {
        let m = mask(&["#....", ".....", "..###"]);
        let r = extract_regions(&m, 2);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].label, 1);
        assert_eq!(r[0].area(), 3);
        assert!(extract_regions(&mask(&["..."]), 1).is_empty());
    }
}
