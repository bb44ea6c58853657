//! Koch-type snowflake with level-dependent subdivision ratios.
//!
//! Starting from an equilateral triangle with unit sides, the middle
//! `alpha_{k+1}` portion of every length-`l_k` segment is replaced by the two
//! free sides of an outward-pointing isosceles tent, producing four segments
//! of length `l_{k+1} = l_k (1 - alpha_{k+1}) / 2`. The ratios follow the
//! recurrence `alpha_{k+1} = l_k^{1-2s} (1 - alpha_{k+1}) / 2`, which in
//! closed form is `alpha = x / (2 + x)` with `x = l_k^{1-2s}`.

use crate::error::{Error, Result};

use super::Point;

/// One directed boundary segment with its subdivision address.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    /// Digits over `{1,2,3,4}`, left to right per level.
    pub address: String,
    pub a: Point,
    pub b: Point,
}

/// Subdivision levels of the bottom side of the snowflake.
#[derive(Debug, Clone)]
pub struct SnowflakeLevels {
    pub s: f64,
    pub depth: u32,
    /// `alpha_1 ..= alpha_K`.
    pub alphas: Vec<f64>,
    /// `l_0 ..= l_K`.
    pub lengths: Vec<f64>,
    /// `levels[k]` holds the `4^k` segments of level `k`, left to right.
    pub levels: Vec<Vec<Segment>>,
}

/// Solves the ratio recurrence in closed form and enumerates all segments of
/// the bottom side up to level `depth`.
pub fn snowflake_build(s: f64, depth: u32) -> SnowflakeLevels {
    assert!(s > 0.0 && s < 0.5, "exponent must lie in (0, 1/2)");
    assert!(depth >= 1, "need at least one level");

    let mut alphas = Vec::with_capacity(depth as usize);
    let mut lengths: Vec<f64> = Vec::with_capacity(depth as usize + 1);
    lengths.push(1.0);
    for k in 0..depth {
        let x = lengths[k as usize].powf(1.0 - 2.0 * s);
        let alpha = x / (2.0 + x);
        alphas.push(alpha);
        lengths.push(lengths[k as usize] * (1.0 - alpha) / 2.0);
    }

    let base = Segment {
        address: String::new(),
        a: Point::new(0.0, 0.0),
        b: Point::new(1.0, 0.0),
    };
    let mut levels = vec![vec![base]];
    for k in 0..depth as usize {
        let alpha = alphas[k];
        let next: Vec<Segment> = levels[k]
            .iter()
            .flat_map(|seg| subdivide(seg, alpha))
            .collect();
        levels.push(next);
    }

    SnowflakeLevels {
        s,
        depth,
        alphas,
        lengths,
        levels,
    }
}

impl SnowflakeLevels {
    /// Dumps every built segment, level by level.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "address,x0,y0,x1,y1,level,length")?;
        for (level, segs) in self.levels.iter().enumerate() {
            for seg in segs {
                writeln!(
                    w,
                    "{},{:.17e},{:.17e},{:.17e},{:.17e},{},{:.17e}",
                    seg.address,
                    seg.a.x,
                    seg.a.y,
                    seg.b.x,
                    seg.b.y,
                    level,
                    seg.a.dist(seg.b),
                )?;
            }
        }
        Ok(())
    }
}

/// Splits a segment into its four children. The tent apex sits on the right
/// side of the direction `a -> b`, which is the outward side for the
/// counter-clockwise boundary orientation used throughout.
fn subdivide(seg: &Segment, alpha: f64) -> [Segment; 4] {
    let len = seg.a.dist(seg.b);
    let child_len = len * (1.0 - alpha) / 2.0;
    let ux = (seg.b.x - seg.a.x) / len;
    let uy = (seg.b.y - seg.a.y) / len;
    // Outward normal: rotate the direction by -90 degrees.
    let (nx, ny) = (uy, -ux);

    let p1 = Point::new(seg.a.x + ux * child_len, seg.a.y + uy * child_len);
    let p2 = Point::new(seg.b.x - ux * child_len, seg.b.y - uy * child_len);
    let half_gap = alpha * len / 2.0;
    let apex_h = (child_len * child_len - half_gap * half_gap).sqrt();
    let mx = (seg.a.x + seg.b.x) / 2.0;
    let my = (seg.a.y + seg.b.y) / 2.0;
    let apex = Point::new(mx + nx * apex_h, my + ny * apex_h);

    let child = |digit: char, a: Point, b: Point| {
        let mut address = seg.address.clone();
        address.push(digit);
        Segment { address, a, b }
    };
    [
        child('1', seg.a, p1),
        child('2', p1, apex),
        child('3', apex, p2),
        child('4', p2, seg.b),
    ]
}

/// Left endpoint of the addressed segment; the empty address names the whole
/// bottom side. Addresses over `{2,3}` stay on the accumulating tent apexes.
pub fn snowflake_point(levels: &SnowflakeLevels, address: &str) -> Result<Point> {
    let mut idx = 0usize;
    for (k, ch) in address.chars().enumerate() {
        let digit = match ch {
            '1'..='4' => ch as usize - '1' as usize,
            other => return Err(Error::InvalidDigit(other)),
        };
        assert!(k < levels.depth as usize, "address longer than built depth");
        idx = idx * 4 + digit;
    }
    Ok(levels.levels[address.len()][idx].a)
}

/// The closed level-`depth` boundary polygon: three copies of the refined
/// bottom side mapped onto the sides of the base triangle, counter-clockwise.
pub(super) fn full_polygon(levels: &SnowflakeLevels) -> Vec<Point> {
    let apex = Point::new(0.5, 3f64.sqrt() / 2.0);
    let corners = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), apex];
    let bottom = levels.levels.last().unwrap();
    let mut poly = Vec::with_capacity(3 * bottom.len());
    for side in 0..3 {
        let a = corners[side];
        let b = corners[(side + 1) % 3];
        // Affine map taking (0,0)->a and (1,0)->b, orientation preserved.
        let (ex, ey) = (b.x - a.x, b.y - a.y);
        for seg in bottom {
            poly.push(Point::new(
                a.x + ex * seg.a.x - ey * seg.a.y,
                a.y + ey * seg.a.x + ex * seg.a.y,
            ));
        }
    }
    poly
}

/// `n` distinct vertices of the refined bottom side, spaced by arc length.
pub(super) fn sample_bottom_vertices(levels: &SnowflakeLevels, n: usize) -> Vec<Point> {
    let segs = levels.levels.last().unwrap();
    let m = segs.len(); // m+1 vertices, all edges share the same length
    let mut picked = Vec::with_capacity(n);
    let mut last_idx = usize::MAX;
    for i in 0..n {
        let target = i as f64 / (n - 1) as f64 * m as f64;
        let mut idx = target.round() as usize;
        if last_idx != usize::MAX && idx <= last_idx {
            idx = last_idx + 1;
        }
        let idx = idx.min(m);
        last_idx = idx;
        picked.push(vertex(segs, idx));
    }
    picked
}

fn vertex(segs: &[Segment], idx: usize) -> Point {
    if idx == segs.len() {
        segs[segs.len() - 1].b
    } else {
        segs[idx].a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_level_ratios() {
        // l_0 = 1 forces x = 1, hence alpha_1 = 1/3 and l_1 = 1/3.
        let levels = snowflake_build(0.25, 1);
        assert!((levels.alphas[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((levels.lengths[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn alpha2_satisfies_the_recurrence() {
        let levels = snowflake_build(0.4, 2);
        let (l1, a2, l2) = (levels.lengths[1], levels.alphas[1], levels.lengths[2]);
        let x = (1.0f64 / 3.0).powf(0.2);
        assert!((a2 - x / (2.0 + x)).abs() < 1e-15);
        assert!((a2 - l1.powf(1.0 - 2.0 * 0.4) * (1.0 - a2) / 2.0).abs() < 1e-12);
        assert!((l2 - l1 * (1.0 - a2) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn length_ratio_bounds_hold() {
        let levels = snowflake_build(0.4, 8);
        for k in 0..8 {
            let (lk, lk1) = (levels.lengths[k], levels.lengths[k + 1]);
            assert!(lk / 4.0 < lk1 && lk1 < lk / 2.0);
            assert!((lk1 - lk * (1.0 - levels.alphas[k]) / 2.0).abs() < 1e-12);
        }
        // alpha_k strictly decreasing to 0.
        for k in 1..8 {
            assert!(levels.alphas[k] < levels.alphas[k - 1]);
        }
    }

    #[test]
    fn addressed_points() {
        let levels = snowflake_build(0.4, 3);
        let root = snowflake_point(&levels, "").unwrap();
        assert_eq!(root, Point::new(0.0, 0.0));
        // The leftmost child shares the left endpoint of its parent.
        assert_eq!(snowflake_point(&levels, "1").unwrap(), root);
        assert!(matches!(
            snowflake_point(&levels, "5"),
            Err(Error::InvalidDigit('5'))
        ));
    }

    #[test]
    fn address_23_matches_direct_construction() {
        let levels = snowflake_build(0.4, 2);
        // Two explicit subdivision steps of the base segment.
        let seg0 = Segment {
            address: String::new(),
            a: Point::new(0.0, 0.0),
            b: Point::new(1.0, 0.0),
        };
        let level1 = subdivide(&seg0, levels.alphas[0]);
        let level2 = subdivide(&level1[1], levels.alphas[1]);
        let expected = level2[2].a;
        let got = snowflake_point(&levels, "23").unwrap();
        assert!(got.dist(expected) < 1e-15);
    }

    #[test]
    fn build_is_deterministic() {
        let a = snowflake_build(0.37, 5);
        let b = snowflake_build(0.37, 5);
        for (la, lb) in a.levels.iter().zip(&b.levels) {
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn segment_count_and_lengths() {
        let levels = snowflake_build(0.3, 4);
        for (k, level) in levels.levels.iter().enumerate() {
            assert_eq!(level.len(), 4usize.pow(k as u32));
            for seg in level {
                assert!((seg.a.dist(seg.b) - levels.lengths[k]).abs() < 1e-12);
            }
        }
    }
    #[test]
    fn csv_export_shape() {
        let levels = snowflake_build(0.3, 2);
        let mut buf = Vec::new();
        levels.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "address,x0,y0,x1,y1,level,length");
        // 1 + 4 + 16 segments over three levels.
        assert_eq!(lines.len(), 1 + 1 + 4 + 16);
        assert!(lines[2].starts_with("1,"));
        assert!(lines.last().unwrap().starts_with("44,"));
    }
}
