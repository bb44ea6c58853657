//! Density families `rho: Omega -> (0, inf)`.
//!
//! Every density here is one of a handful of closed families: powers of the
//! boundary distance, powers of the distance to a Cantor set embedded in the
//! boundary, the triadic multifractal, the two-phase radial profile, the
//! `exp(-1/d)` example, and constants. The `scale` factor on [`Density`] is
//! applied exactly, so rescaling a density rescales every induced distance by
//! the same factor with no further floating-point error.

pub mod cantor;
pub mod profile;
pub mod triadic;

pub use cantor::{cantor_build, CantorSet, CantorSpec, CantorStyle, RatioSchedule};
pub use profile::{two_phase_solve, TwoPhaseParams};
pub use triadic::{triadic_weight, TriadicDensity};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::{Domain, Point};
use crate::error::{Error, Result};

/// The density families.
#[derive(Debug, Clone)]
pub enum DensityKind {
    /// `rho(p) = d(p, boundary)^beta`, `beta > -1`.
    PowerBoundary { beta: f64 },
    /// `rho(p) = max(d(p, C), floor)^beta` for a Cantor set `C` embedded in
    /// the boundary. The floor (0 disables it) keeps pointwise values finite
    /// for `beta < 0`; path integrals remain accurate because boundary legs
    /// are integrated in closed form by the graph builder.
    PowerDistToSet {
        beta: f64,
        set: CantorSet,
        floor: f64,
    },
    /// The interpolated cell-weight density; `beta` weights the middle digit,
    /// `lambda` the outer ones.
    TriadicMultifractal { rho: TriadicDensity },
    /// `rho(p) = profile(d(p, C))` for the two-phase Cantor set `C`.
    TwoPhaseProfile {
        params: TwoPhaseParams,
        set: CantorSet,
    },
    /// `rho(p) = exp(-1/d(p, boundary))`.
    ExpReciprocal,
    Constant { c: f64 },
}

/// A density together with an exact scalar multiplier.
#[derive(Debug, Clone)]
pub struct Density {
    pub kind: DensityKind,
    pub scale: f64,
}

impl Density {
    pub fn new(kind: DensityKind) -> Result<Self> {
        match &kind {
            DensityKind::PowerBoundary { beta } => {
                if *beta <= -1.0 {
                    return Err(Error::ConstraintViolated(format!(
                        "power-boundary exponent {beta} must exceed -1"
                    )));
                }
            }
            DensityKind::PowerDistToSet { beta, .. } => {
                if *beta <= -1.0 {
                    return Err(Error::ConstraintViolated(format!(
                        "power-dist-to-set exponent {beta} must exceed -1"
                    )));
                }
            }
            DensityKind::TriadicMultifractal { rho } => {
                let (b, l) = (rho.beta, rho.lambda);
                if !(-1.0 < b && b < 0.0 && -1.0 < l && l < 0.0) || b == l {
                    return Err(Error::ConstraintViolated(format!(
                        "triadic exponents beta={b}, lambda={l} must be distinct in (-1, 0)"
                    )));
                }
            }
            DensityKind::Constant { c } => {
                if *c <= 0.0 {
                    return Err(Error::ConstraintViolated(format!(
                        "constant density {c} must be positive"
                    )));
                }
            }
            _ => {}
        }
        Ok(Density { kind, scale: 1.0 })
    }

    /// The same density multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Density {
        Density {
            kind: self.kind.clone(),
            scale: self.scale * c,
        }
    }

    /// Exponent for closed-form boundary-leg integration, when the density is
    /// an exact power of the relevant distance near the boundary.
    pub fn leg_exponent(&self) -> Option<f64> {
        match &self.kind {
            DensityKind::PowerBoundary { beta } => Some(*beta),
            DensityKind::PowerDistToSet { beta, .. } => Some(*beta),
            DensityKind::Constant { .. } => Some(0.0),
            _ => None,
        }
    }
}

/// Distance from `p` to the embedded set, which lives on the stretch of the
/// boundary line `y = 0`.
fn planar_set_distance(set: &CantorSet, p: Point) -> f64 {
    set.distance(p.x).hypot(p.y)
}

/// Evaluates the density at a point of the domain.
pub fn eval_density(density: &Density, p: Point, domain: &Domain) -> Result<f64> {
    let value = match &density.kind {
        DensityKind::PowerBoundary { beta } => domain.boundary_distance(p)?.powf(*beta),
        DensityKind::PowerDistToSet { beta, set, floor } => {
            domain.boundary_distance(p)?; // inside check
            planar_set_distance(set, p).max(*floor).powf(*beta)
        }
        DensityKind::TriadicMultifractal { rho } => {
            domain.boundary_distance(p)?;
            rho.eval(p.x, p.y)
        }
        DensityKind::TwoPhaseProfile { params, set } => {
            domain.boundary_distance(p)?;
            params.eval(planar_set_distance(set, p))
        }
        DensityKind::ExpReciprocal => (-domain.boundary_distance(p)?.recip()).exp(),
        DensityKind::Constant { c } => {
            domain.boundary_distance(p)?;
            *c
        }
    };
    Ok(value * density.scale)
}

/// Monte Carlo bound on the Harnack ratio: the max over sampled `x` and
/// `y in B(x, d(x)/2)` of `max(rho(y)/rho(x), rho(x)/rho(y))`. Each sample
/// draws from its own seeded stream, so the result does not depend on
/// evaluation order.
pub fn harnack_check(
    density: &Density,
    domain: &Domain,
    samples: u32,
    seed: u64,
) -> Result<f64> {
    let one = |i: u32| -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64) << 24 | 0x9e37_79b9));
        let (lo, hi) = domain.bounding_box();
        // Rejection-sample an interior point.
        let x = loop {
            let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
            if domain.is_inside(p) {
                break p;
            }
        };
        let d = domain.boundary_distance(x)?;
        let y = loop {
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rad = d / 2.0 * rng.gen_range(0.0..1.0f64).sqrt();
            let q = Point::new(x.x + rad * ang.cos(), x.y + rad * ang.sin());
            if domain.is_inside(q) {
                break q;
            }
        };
        let (rx, ry) = (eval_density(density, x, domain)?, eval_density(density, y, domain)?);
        Ok((rx / ry).max(ry / rx))
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..samples)
            .into_par_iter()
            .map(one)
            .try_reduce(|| 1.0, |a, b| Ok(a.max(b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut max = 1.0f64;
        for i in 0..samples {
            max = max.max(one(i)?);
        }
        Ok(max)
    }
}
