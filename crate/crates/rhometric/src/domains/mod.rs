//! Planar domain geometry: membership, Euclidean boundary distance, boundary
//! sampling, and the Koch-type snowflake construction.

mod snowflake;

pub use snowflake::{snowflake_build, snowflake_point, Segment, SnowflakeLevels};

use crate::error::{Error, Result};

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Distance from `self` to the segment `[a, b]`.
    pub fn dist_to_segment(self, a: Point, b: Point) -> f64 {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.dist(a);
        }
        let t = ((self.x - a.x) * dx + (self.y - a.y) * dy) / len2;
        let t = t.clamp(0.0, 1.0);
        self.dist(Point::new(a.x + t * dx, a.y + t * dy))
    }
}

/// Domain variants understood by the grid and density machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    /// The upper half-plane restricted to `[x_lo, x_hi] x (0, y_max)`.
    /// The boundary is the bottom segment; side and top walls are treated
    /// as reflecting (no graph edges cross them, and they do not contribute
    /// to the boundary distance).
    HalfPlaneWindow { x_lo: f64, x_hi: f64, y_max: f64 },
    /// The open unit disk.
    UnitDisk,
    /// Koch-type snowflake of Example-style exponent `s` built to `depth`
    /// subdivision levels; the boundary is the level-`depth` polygon.
    Snowflake { s: f64, depth: u32 },
}

impl DomainSpec {
    /// `key=value` lines in the CLI config format.
    pub fn config_lines(&self) -> String {
        match self {
            DomainSpec::HalfPlaneWindow { x_lo, x_hi, y_max } => format!(
                "domain.type=half-plane\ndomain.x_lo={x_lo:?}\ndomain.x_hi={x_hi:?}\ndomain.y_max={y_max:?}\n"
            ),
            DomainSpec::UnitDisk => "domain.type=disk\n".to_string(),
            DomainSpec::Snowflake { s, depth } => {
                format!("domain.type=snowflake\ndomain.s={s:?}\ndomain.depth={depth}\n")
            }
        }
    }
}

/// A planar domain together with optional John-constant metadata and, for the
/// snowflake, its precomputed boundary polygon.
#[derive(Debug, Clone)]
pub struct Domain {
    pub spec: DomainSpec,
    pub john_alpha: Option<f64>,
    /// Closed boundary polygon of the snowflake (level-`depth`), empty otherwise.
    polygon: Vec<Point>,
    /// Subdivision levels of the bottom side, kept for boundary sampling.
    levels: Option<SnowflakeLevels>,
}

impl Domain {
    pub fn half_plane_window(x_lo: f64, x_hi: f64, y_max: f64) -> Self {
        assert!(x_lo < x_hi && y_max > 0.0, "invalid window");
        Domain {
            spec: DomainSpec::HalfPlaneWindow { x_lo, x_hi, y_max },
            john_alpha: Some(1.0),
            polygon: Vec::new(),
            levels: None,
        }
    }

    pub fn unit_disk() -> Self {
        Domain {
            spec: DomainSpec::UnitDisk,
            john_alpha: Some(1.0),
            polygon: Vec::new(),
            levels: None,
        }
    }

    pub fn snowflake(s: f64, depth: u32) -> Self {
        let levels = snowflake_build(s, depth);
        let polygon = snowflake::full_polygon(&levels);
        Domain {
            spec: DomainSpec::Snowflake { s, depth },
            john_alpha: None,
            polygon,
            levels: Some(levels),
        }
    }

    pub fn snowflake_levels(&self) -> Option<&SnowflakeLevels> {
        self.levels.as_ref()
    }

    /// Strict-interior membership test.
    pub fn is_inside(&self, p: Point) -> bool {
        match self.spec {
            DomainSpec::HalfPlaneWindow { x_lo, x_hi, y_max } => {
                p.x > x_lo && p.x < x_hi && p.y > 0.0 && p.y < y_max
            }
            DomainSpec::UnitDisk => p.x.hypot(p.y) < 1.0,
            DomainSpec::Snowflake { .. } => even_odd_inside(&self.polygon, p),
        }
    }

    /// Euclidean distance from an interior point to the domain boundary.
    ///
    /// For the half-plane window this is the distance to the bottom segment
    /// only; for the snowflake it is the distance to the level-`depth`
    /// polygon.
    pub fn boundary_distance(&self, p: Point) -> Result<f64> {
        if !self.is_inside(p) {
            return Err(Error::PointOutsideDomain(p.x, p.y));
        }
        Ok(self.boundary_distance_unchecked(p))
    }

    /// Same as [`boundary_distance`](Self::boundary_distance) but defined on
    /// the whole plane (zero on the boundary itself).
    pub fn boundary_distance_unchecked(&self, p: Point) -> f64 {
        match self.spec {
            DomainSpec::HalfPlaneWindow { x_lo, x_hi, .. } => {
                p.dist_to_segment(Point::new(x_lo, 0.0), Point::new(x_hi, 0.0))
            }
            DomainSpec::UnitDisk => (1.0 - p.x.hypot(p.y)).abs(),
            DomainSpec::Snowflake { .. } => {
                let mut best = f64::INFINITY;
                for w in polygon_edges(&self.polygon) {
                    best = best.min(p.dist_to_segment(w.0, w.1));
                }
                best
            }
        }
    }

    /// True when the whole square cell of the given center and side length
    /// lies outside the closed domain. Used to prune quadtree recursion.
    pub fn cell_outside(&self, center: Point, size: f64) -> bool {
        if self.is_inside(center) {
            return false;
        }
        let half_diag = size * std::f64::consts::FRAC_1_SQRT_2;
        match self.spec {
            DomainSpec::HalfPlaneWindow { x_lo, x_hi, y_max } => {
                let dx = (x_lo - center.x).max(center.x - x_hi).max(0.0);
                let dy = (0.0 - center.y).max(center.y - y_max).max(0.0);
                dx.hypot(dy) > half_diag
            }
            DomainSpec::UnitDisk => center.x.hypot(center.y) - 1.0 > half_diag,
            DomainSpec::Snowflake { .. } => self.boundary_distance_unchecked(center) > half_diag,
        }
    }

    /// True when `p` lies on the boundary up to `tol`.
    pub fn on_boundary(&self, p: Point, tol: f64) -> bool {
        match self.spec {
            DomainSpec::HalfPlaneWindow { x_lo, x_hi, .. } => {
                p.y.abs() <= tol && p.x >= x_lo - tol && p.x <= x_hi + tol
            }
            DomainSpec::UnitDisk => (p.x.hypot(p.y) - 1.0).abs() <= tol,
            DomainSpec::Snowflake { .. } => self.boundary_distance_unchecked(p) <= tol,
        }
    }

    /// Axis-aligned bounding box `(lo, hi)` of the domain.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self.spec {
            DomainSpec::HalfPlaneWindow { x_lo, x_hi, y_max } => {
                (Point::new(x_lo, 0.0), Point::new(x_hi, y_max))
            }
            DomainSpec::UnitDisk => (Point::new(-1.0, -1.0), Point::new(1.0, 1.0)),
            DomainSpec::Snowflake { .. } => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in &self.polygon {
                    lo.x = lo.x.min(v.x);
                    lo.y = lo.y.min(v.y);
                    hi.x = hi.x.max(v.x);
                    hi.y = hi.y.max(v.y);
                }
                (lo, hi)
            }
        }
    }
}

/// Boundary sampling mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Uniform in the boundary parameter.
    Uniform,
    /// Endpoints of an embedded set; only meaningful where such a set exists,
    /// so domains reject it and callers use the set's own endpoints instead.
    EndpointsOfSet,
}

/// `n` distinct boundary points, uniformly spaced in the boundary parameter.
/// Deterministic given its inputs.
pub fn sample_boundary(domain: &Domain, n: usize, mode: SampleMode) -> Result<Vec<Point>> {
    assert!(n >= 2, "need at least two sample points");
    if mode == SampleMode::EndpointsOfSet {
        return Err(Error::UnsupportedMode);
    }
    match domain.spec {
        DomainSpec::HalfPlaneWindow { x_lo, x_hi, .. } => {
            let step = (x_hi - x_lo) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| Point::new(x_lo + i as f64 * step, 0.0))
                .collect())
        }
        DomainSpec::UnitDisk => {
            let step = std::f64::consts::TAU / n as f64;
            Ok((0..n)
                .map(|i| {
                    let a = i as f64 * step;
                    Point::new(a.cos(), a.sin())
                })
                .collect())
        }
        DomainSpec::Snowflake { .. } => {
            let levels = domain.levels.as_ref().expect("snowflake levels");
            Ok(snowflake::sample_bottom_vertices(levels, n))
        }
    }
}

pub(crate) fn polygon_edges(poly: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..poly.len()).map(move |i| (poly[i], poly[(i + 1) % poly.len()]))
}

fn even_odd_inside(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    for (a, b) in polygon_edges(poly) {
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plane_boundary_distance() {
        let d = Domain::half_plane_window(0.0, 1.0, 1.0);
        assert_eq!(d.boundary_distance(Point::new(0.3, 0.25)).unwrap(), 0.25);
    }

    #[test]
    fn disk_center_distance() {
        let d = Domain::unit_disk();
        assert_eq!(d.boundary_distance(Point::new(0.0, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn membership() {
        let w = Domain::half_plane_window(0.0, 1.0, 1.0);
        assert!(w.is_inside(Point::new(0.5, 0.5)));
        assert!(!Domain::unit_disk().is_inside(Point::new(2.0, 0.0)));
    }

    #[test]
    fn outside_point_is_an_error() {
        let d = Domain::half_plane_window(0.0, 1.0, 1.0);
        assert!(matches!(
            d.boundary_distance(Point::new(0.5, -0.1)),
            Err(Error::PointOutsideDomain(..))
        ));
    }

    #[test]
    fn snowflake_incenter_distance_matches_brute_force() {
        let dom = Domain::snowflake(0.4, 3);
        let p = Point::new(0.5, 3f64.sqrt() / 6.0);
        let fast = dom.boundary_distance(p).unwrap();
        // Independent brute-force scan over every boundary segment.
        let mut best = f64::INFINITY;
        for (a, b) in polygon_edges(&dom.polygon) {
            best = best.min(p.dist_to_segment(a, b));
        }
        assert!((fast - best).abs() < 1e-15);
        assert!(fast > 0.0);
    }

    #[test]
    fn snowflake_notch_vertex_is_outside() {
        let dom = Domain::snowflake(0.4, 2);
        let levels = dom.snowflake_levels().unwrap();
        // Apex of the first tent on the bottom side: the tent points outward
        // (below the base line), and the apex vertex itself is not interior.
        let apex = snowflake_point(levels, "3").unwrap();
        assert!(apex.y < 0.0);
        assert!(!dom.is_inside(Point::new(apex.x, apex.y - 1e-6)));
        assert!(dom.is_inside(Point::new(apex.x, apex.y + 1e-3)));
        assert!(dom.is_inside(Point::new(0.5, 0.3)));
    }

    #[test]
    fn sample_boundary_half_plane() {
        let d = Domain::half_plane_window(0.0, 1.0, 1.0);
        let pts = sample_boundary(&d, 3, SampleMode::Uniform).unwrap();
        assert_eq!(pts, vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0)
        ]);
    }

    #[test]
    fn sample_boundary_disk() {
        let pts = sample_boundary(&Domain::unit_disk(), 4, SampleMode::Uniform).unwrap();
        assert_eq!(pts.len(), 4);
        let angles: Vec<f64> = pts.iter().map(|p| p.y.atan2(p.x)).collect();
        assert!((angles[0] - 0.0).abs() < 1e-12);
        assert!((angles[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn sample_boundary_snowflake_vertices() {
        let dom = Domain::snowflake(0.4, 3);
        let pts = sample_boundary(&dom, 10, SampleMode::Uniform).unwrap();
        assert_eq!(pts.len(), 10);
        // All samples lie on the boundary of the closure.
        for p in &pts {
            assert!(dom.boundary_distance_unchecked(*p) <= 1e-9);
        }
        // Distinctness.
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert!(pts[i].dist(pts[j]) > 0.0);
            }
        }
    }

    #[test]
    fn endpoints_mode_rejected() {
        let d = Domain::half_plane_window(0.0, 1.0, 1.0);
        assert!(matches!(
            sample_boundary(&d, 3, SampleMode::EndpointsOfSet),
            Err(Error::UnsupportedMode)
        ));
    }

    #[test]
    fn boundary_distance_positive_iff_inside() {
        let dom = Domain::snowflake(0.3, 2);
        let (lo, hi) = dom.bounding_box();
        let mut k = 0u32;
        for i in 0..40 {
            for j in 0..40 {
                let p = Point::new(
                    lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / 40.0,
                    lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / 40.0,
                );
                let d = dom.boundary_distance_unchecked(p);
                if dom.is_inside(p) {
                    assert!(d > 0.0);
                    k += 1;
                }
            }
        }
        assert!(k > 100);
    }
}
