//! Closed-form dimension formulas, spectra, and parameter solvers.
//!
//! These are the reference values the numerical experiments are checked
//! against: the sup formula over a dimension profile, the triadic
//! multifractal spectrum and its maximum, Cantor-set dimensions, the
//! admissible `h`-schedule, and the snowflake path-cost bound.

use std::io::Write;

use crate::densities::{CantorSpec, RatioSchedule};
use crate::domains::SnowflakeLevels;
use crate::error::{Error, Result};

const LN3: f64 = 1.0986122886681098;

/// Which boundary-dimension function the profile tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileTag {
    /// Hausdorff dimension of the lower-exponent level sets.
    LowerHausdorff,
    /// Packing flavor of the same.
    LowerPacking,
    UpperHausdorff,
    UpperPacking,
    /// Radial-exponent variant.
    RadialLower,
}

/// A tabulated function `beta -> value` on a grid over `(-1, beta_max]`.
#[derive(Debug, Clone)]
pub struct DimensionProfile {
    pub tag: ProfileTag,
    /// Strictly increasing grid, each entry `> -1`.
    pub betas: Vec<f64>,
    pub values: Vec<f64>,
    /// True when the tabulated values stay positive all the way down to
    /// `beta = -1`, making the sup formula diverge.
    pub extends_to_minus_one: bool,
}

impl DimensionProfile {
    pub fn new(
        tag: ProfileTag,
        points: &[(f64, f64)],
        extends_to_minus_one: bool,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for &(beta, value) in &sorted {
            if beta <= -1.0 {
                return Err(Error::ConstraintViolated(format!(
                    "profile grid point beta={beta} must exceed -1"
                )));
            }
            if !(0.0..=2.0).contains(&value) {
                return Err(Error::ConstraintViolated(format!(
                    "profile value {value} outside [0, 2]"
                )));
            }
        }
        Ok(DimensionProfile {
            tag,
            betas: sorted.iter().map(|p| p.0).collect(),
            values: sorted.iter().map(|p| p.1).collect(),
            extends_to_minus_one,
        })
    }

    /// Piecewise-linear interpolation, clamped at the grid ends.
    fn value_at(&self, beta: f64) -> f64 {
        let n = self.betas.len();
        if beta <= self.betas[0] {
            return self.values[0];
        }
        if beta >= self.betas[n - 1] {
            return self.values[n - 1];
        }
        let i = self.betas.partition_point(|&b| b <= beta);
        let (b0, b1) = (self.betas[i - 1], self.betas[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (beta - b0) / (b1 - b0)
    }
}

/// Outcome of the sup formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupFormula {
    Finite { beta_star: f64, value: f64 },
    /// The ratio `value / (1 + beta)` is unbounded as `beta` decreases to -1.
    Divergent,
}

/// `sup value(beta) / (1 + beta)` over the profile: grid scan followed by
/// golden-section refinement on the winning bracket (tolerance `1e-8` in
/// `beta`).
pub fn sup_formula(profile: &DimensionProfile) -> Result<SupFormula> {
    if profile.betas.is_empty() {
        return Err(Error::EmptyProfile);
    }
    if profile.extends_to_minus_one && profile.values[0] > 0.0 {
        return Ok(SupFormula::Divergent);
    }
    let g = |beta: f64| profile.value_at(beta) / (1.0 + beta);
    let mut best = 0usize;
    for (i, &b) in profile.betas.iter().enumerate() {
        if g(b) > g(profile.betas[best]) {
            best = i;
        }
    }
    let lo = profile.betas[best.saturating_sub(1)];
    let hi = profile.betas[(best + 1).min(profile.betas.len() - 1)];
    let (beta_star, value) = golden_max(g, lo, hi, 1e-8);
    Ok(SupFormula::Finite { beta_star, value })
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
fn golden_max(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.6180339887498949;
    if hi - lo < tol {
        let mid = (lo + hi) / 2.0;
        return (mid, g(mid));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    while hi - lo > tol {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        }
    }
    let mid = (lo + hi) / 2.0;
    (mid, g(mid))
}

/// Hausdorff dimension of the digit-frequency set `A_t` in the internal
/// metric: `(-t log t + (t - 1) log((1 - t)/2)) / log 3`, with the endpoint
/// conventions `0 log 0 := 0`.
pub fn spectrum_dim_d(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TOutOfRange(t));
    }
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    Ok((-xlnx(t) - xlnx(1.0 - t) + (1.0 - t) * 2f64.ln()) / LN3)
}

/// The same set measured in the multifractal density metric.
pub fn spectrum_dim_rho(t: f64, beta: f64, lambda: f64) -> Result<f64> {
    let denom = 1.0 + t * beta + (1.0 - t) * lambda;
    if denom <= 0.0 {
        return Err(Error::NonpositiveDenominator(t));
    }
    Ok(spectrum_dim_d(t)? / denom)
}

/// Maximum of the density-metric spectrum over `t in [0, 1]`: a `1e-3` grid
/// scan plus golden-section refinement to `1e-8` in `t`. Returns
/// `(t_star, value)`.
pub fn f_max(beta: f64, lambda: f64) -> (f64, f64) {
    let g = |t: f64| spectrum_dim_rho(t, beta, lambda).unwrap_or(0.0);
    let mut best = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    let n = 1000;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let v = g(t);
        if v > best_val {
            best_val = v;
            best = t;
        }
    }
    let lo = (best - 1.0 / n as f64).max(0.0);
    let hi = (best + 1.0 / n as f64).min(1.0);
    golden_max(g, lo, hi, 1e-8)
}

/// JSON-style rendering of an `f_max` result.
pub fn f_max_json(beta: f64, lambda: f64) -> String {
    let (t_star, value) = f_max(beta, lambda);
    format!("{{\"beta\":{beta},\"lambda\":{lambda},\"t_star\":{t_star:.10},\"value\":{value:.10}}}")
}

/// CSV export of the spectrum: `t,dim_d,dim_rho`.
pub fn spectrum_csv<W: Write>(ts: &[f64], beta: f64, lambda: f64, mut w: W) -> Result<()> {
    writeln!(w, "t,dim_d,dim_rho")?;
    for &t in ts {
        writeln!(
            w,
            "{t:.10},{:.10},{:.10}",
            spectrum_dim_d(t)?,
            spectrum_dim_rho(t, beta, lambda)?
        )?;
    }
    Ok(())
}

/// Internal-metric dimension proxies of a Cantor construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorDims {
    /// Hausdorff-flavor value (`-log 2 / log a`).
    pub lower: f64,
    /// Packing-flavor value (`-log 2 / log b`; equal to `lower` for a
    /// constant ratio).
    pub upper: f64,
    /// Set when the formulas are used outside their asymptotic regime: the
    /// two-phase values are exact only when the schedule ratios
    /// `N_i/n_i` and `n_{i+1}/N_i` grow without bound.
    pub schedule_warning: bool,
}

/// Dimension formulas for constant-ratio and two-phase specs.
pub fn cantor_dims(spec: &CantorSpec) -> Result<CantorDims> {
    match &spec.schedule {
        RatioSchedule::Constant { a } => {
            let d = -2f64.ln() / a.ln();
            Ok(CantorDims {
                lower: d,
                upper: d,
                schedule_warning: false,
            })
        }
        RatioSchedule::TwoPhase { a, b, schedule } => {
            let ratios: Vec<f64> = schedule
                .windows(2)
                .map(|w| w[1] as f64 / w[0] as f64)
                .collect();
            let growing = ratios.windows(2).all(|w| w[1] > w[0]);
            Ok(CantorDims {
                lower: -2f64.ln() / a.ln(),
                upper: -2f64.ln() / b.ln(),
                schedule_warning: !growing || ratios.len() < 2,
            })
        }
        RatioSchedule::Explicit { .. } => Err(Error::InvalidSpec(
            "no closed-form dimensions for explicit ratio lists".into(),
        )),
    }
}

/// Predicted density-metric dimension of the two-phase Cantor set under its
/// matched radial profile: `-log 2 / ((1 + lambda) log a)`.
pub fn two_phase_dim_rho(a: f64, lambda: f64) -> f64 {
    -2f64.ln() / ((1.0 + lambda) * a.ln())
}

/// Predictions for the boundary with an embedded set of dimensions `s`
/// (Hausdorff) and `t` (packing) under `rho = d(., C)^beta` in ambient
/// dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example43Prediction {
    pub dim_rho: f64,
    pub packing_dim_rho: f64,
    /// The set-only contributions `s/(1+beta)` and `t/(1+beta)`.
    pub set_dim: f64,
    pub set_packing_dim: f64,
}

pub fn example43_prediction(s: f64, t: f64, beta: f64, n: u32) -> Example43Prediction {
    let flat = (n - 1) as f64;
    let set_dim = s / (1.0 + beta);
    let set_packing_dim = t / (1.0 + beta);
    Example43Prediction {
        dim_rho: flat.max(set_dim),
        packing_dim_rho: flat.max(set_packing_dim),
        set_dim,
        set_packing_dim,
    }
}

/// Admissible height schedule for a length sequence `l_1 > l_2 > ...`:
/// `h_n = min(h_{n-1}, l_n, 2^(-n^2)/l_n)`, which enforces
/// `2^n l_n^(1/n) h_n^(1/n) <= 1` by construction.
pub fn h_schedule(lengths: &[f64]) -> Vec<f64> {
    let mut hs: Vec<f64> = Vec::with_capacity(lengths.len());
    let mut prev = f64::INFINITY;
    for (i, &l) in lengths.iter().enumerate() {
        let n = (i + 1) as f64;
        let h = prev.min(l).min(2f64.powf(-n * n) / l);
        hs.push(h);
        prev = h;
    }
    hs
}

/// Partial path-cost sum for the snowflake boundary.
#[derive(Debug, Clone)]
pub struct SnowflakePathBound {
    /// Terms `alpha_n^(-1/2) l_n^(1/2)` for `n = k ..= depth`.
    pub terms: Vec<f64>,
    pub partial_sum: f64,
    /// Worst deviation of a term from the identity value `l_(n-1)^s`.
    pub identity_error: f64,
    /// `partial_sum / l_k^s` (the bounded tail-to-scale ratio).
    pub ratio_to_scale: f64,
}

/// Evaluates the tail sum from level `k` and checks the term identity
/// `alpha_n^(-1/2) l_n^(1/2) = l_(n-1)^s`.
pub fn snowflake_path_bound(levels: &SnowflakeLevels, k: u32) -> SnowflakePathBound {
    assert!(k >= 1 && k <= levels.depth, "level out of the built range");
    let mut terms = Vec::new();
    let mut identity_error = 0.0f64;
    for n in k..=levels.depth {
        let alpha = levels.alphas[(n - 1) as usize];
        let l = levels.lengths[n as usize];
        let term = l.sqrt() / alpha.sqrt();
        let identity = levels.lengths[(n - 1) as usize].powf(levels.s);
        identity_error = identity_error.max((term - identity).abs());
        terms.push(term);
    }
    let partial_sum: f64 = terms.iter().sum();
    let ratio_to_scale = partial_sum / levels.lengths[k as usize].powf(levels.s);
    SnowflakePathBound {
        terms,
        partial_sum,
        identity_error,
        ratio_to_scale,
    }
}
