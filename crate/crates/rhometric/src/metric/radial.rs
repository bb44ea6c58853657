//! Radial and tent-path distance oracles.
//!
//! For boundary points of the disk or the half-plane window, the density
//! metric is comparable to the cost of an explicit path: two legs along the
//! inward normals (plus, in the half-plane, the connecting top segment at
//! height `|x - y|`). Leg integrals are evaluated in closed form whenever the
//! density is an exact power of the leg coordinate, and by graded quadrature
//! otherwise.

use crate::densities::{eval_density, CantorSet, Density, TwoPhaseParams};
use crate::domains::{Domain, DomainSpec, Point};
use crate::error::{Error, Result};

/// Unit inward normal at a boundary point.
pub(super) fn inward_normal(domain: &Domain, a: Point) -> (f64, f64) {
    match domain.spec {
        DomainSpec::HalfPlaneWindow { .. } => (0.0, 1.0),
        DomainSpec::UnitDisk => {
            let r = a.x.hypot(a.y);
            (-a.x / r, -a.y / r)
        }
        DomainSpec::Snowflake { .. } => {
            // Probe axis directions; take the first that steps inside.
            let eps = 1e-7;
            for (nx, ny) in [(0.0, 1.0), (0.0, -1.0), (1.0, 0.0), (-1.0, 0.0)] {
                let q = Point::new(a.x + nx * eps, a.y + ny * eps);
                if domain.is_inside(q) {
                    return (nx, ny);
                }
            }
            (0.0, 1.0)
        }
    }
}

/// Line integral of the density over the segment from `a` to `b`, where `a`
/// may sit on the boundary (the midpoint rule never evaluates the endpoints).
/// Nodes are graded toward `a` to absorb the boundary singularity.
fn graded_segment_integral(
    density: &Density,
    domain: &Domain,
    a: Point,
    b: Point,
    rel_tol: f64,
) -> Result<f64> {
    let len = a.dist(b);
    let eval_at = |t: f64| -> Result<f64> {
        let p = Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
        eval_density(density, p, domain)
    };
    // Composite midpoint on nodes t_i = (i/n)^3, doubled until stable.
    let mut prev = f64::NAN;
    let mut n = 64usize;
    loop {
        let mut sum = 0.0;
        let mut left = 0.0f64;
        for i in 1..=n {
            let right = ((i as f64) / (n as f64)).powi(3);
            let mid = (left + right) / 2.0;
            sum += eval_at(mid)? * (right - left);
            left = right;
        }
        let value = sum * len;
        if (value - prev).abs() <= rel_tol * value.abs() || n >= (1 << 20) {
            return Ok(value);
        }
        prev = value;
        n *= 2;
    }
}

/// Integral of the density along the inward normal from boundary point `x` up
/// to height `h`: closed form `h^(1+beta)/(1+beta)` for exact power
/// densities, graded quadrature otherwise.
pub fn vertical_integral(density: &Density, domain: &Domain, x: Point, h: f64) -> Result<f64> {
    if let Some(beta) = density.leg_exponent() {
        return Ok(density.scale * h.powf(1.0 + beta) / (1.0 + beta));
    }
    let n = inward_normal(domain, x);
    let top = Point::new(x.x + n.0 * h, x.y + n.1 * h);
    graded_segment_integral(density, domain, x, top, 1e-6)
}

/// Weight of a boundary-anchor leg to a nearby cell center.
pub(super) fn leg_weight(
    density: &Density,
    domain: &Domain,
    anchor: Point,
    center: Point,
) -> Result<f64> {
    let h = anchor.dist(center);
    if let Some(beta) = density.leg_exponent() {
        return Ok(density.scale * h.powf(1.0 + beta) / (1.0 + beta));
    }
    // Midpoint rule on 8 sub-segments, graded toward the anchor.
    let mut sum = 0.0;
    let mut left = 0.0f64;
    for i in 1..=8usize {
        let right = ((i as f64) / 8.0).powi(3);
        let mid = (left + right) / 2.0;
        let p = Point::new(
            anchor.x + (center.x - anchor.x) * mid,
            anchor.y + (center.y - anchor.y) * mid,
        );
        sum += eval_density(density, p, domain)? * (right - left);
        left = right;
    }
    Ok(sum * h)
}

/// Cost of the canonical boundary-to-boundary path: two radial legs of length
/// `|x - y|` for the disk, or leg + top segment + leg for the half-plane
/// window.
pub fn radial_path_distance(
    density: &Density,
    domain: &Domain,
    x: Point,
    y: Point,
) -> Result<f64> {
    let r = x.dist(y);
    if r == 0.0 {
        return Ok(0.0);
    }
    match domain.spec {
        DomainSpec::UnitDisk => Ok(vertical_integral(density, domain, x, r)?
            + vertical_integral(density, domain, y, r)?),
        DomainSpec::HalfPlaneWindow { .. } => {
            let legs = vertical_integral(density, domain, x, r)?
                + vertical_integral(density, domain, y, r)?;
            let top = if let Some(beta) = density.leg_exponent() {
                // Boundary distance is constant r along the top segment.
                density.scale * r * r.powf(beta)
            } else {
                let a = Point::new(x.x, x.y + r);
                let b = Point::new(y.x, y.y + r);
                graded_segment_integral(density, domain, a, b, 1e-6)?
            };
            Ok(legs + top)
        }
        DomainSpec::Snowflake { .. } => Err(Error::UnsupportedDomain),
    }
}

/// Tree approximation of the two-phase metric on the Cantor set: the distance
/// between two set points is `h_m` at the deepest construction level `m` whose
/// interval contains both. Coinciding points report the resolution value
/// `h_k` of the deepest built level.
pub fn tree_distance_twophase(
    params: &TwoPhaseParams,
    set: &CantorSet,
    x: f64,
    y: f64,
) -> Result<f64> {
    let tol = 1e-12;
    if set.distance(x) > tol || set.distance(y) > tol {
        return Err(Error::PointsNotInSet);
    }
    let m = if (x - y).abs() <= tol {
        set.level
    } else {
        set.deepest_common_level(x, y, tol)
            .ok_or(Error::PointsNotInSet)?
    };
    Ok(params.integral(set.lengths[m as usize].min(1.0)))
}
