//! Covering/packing counts from a distance oracle and log-log slope fits.
//!
//! A single greedy epsilon-net drives both count flavors: a greedy pass with
//! separation `s` yields simultaneously a covering count at radius `s` and a
//! packing count at radius `s/2`. The packing variant therefore runs the
//! greedy at separation `2r` when asked for radius `r`. Exact covering numbers
//! are NP-hard in general; the net sandwich keeps both proxies within a factor
//! two of the truth, which perturbs fitted slopes negligibly over several
//! octaves.

use std::io::Write;

use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;

/// Pairwise distances over a finite indexed point set.
pub trait DistanceOracle: Sync {
    fn len(&self) -> usize;
    fn dist(&self, i: usize, j: usize) -> f64;
    /// Smallest scale the oracle resolves; counting below twice this value is
    /// refused.
    fn resolution(&self) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Points on the real line with exact Euclidean distances.
#[derive(Debug, Clone)]
pub struct LineOracle {
    pub xs: Vec<f64>,
    pub resolution: f64,
}

impl DistanceOracle for LineOracle {
    fn len(&self) -> usize {
        self.xs.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        (self.xs[i] - self.xs[j]).abs()
    }
    fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// Planar points with exact Euclidean distances.
#[derive(Debug, Clone)]
pub struct PlanarOracle {
    pub points: Vec<crate::domains::Point>,
    pub resolution: f64,
}

impl DistanceOracle for PlanarOracle {
    fn len(&self) -> usize {
        self.points.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.points[i].dist(self.points[j])
    }
    fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// A precomputed distance matrix (graph geodesics, tree distances, ...).
#[derive(Debug, Clone)]
pub struct MatrixOracle {
    pub matrix: DistanceMatrix,
    pub resolution: f64,
}

impl DistanceOracle for MatrixOracle {
    fn len(&self) -> usize {
        self.matrix.n
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }
    fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// Geometric radius ladder `r_j = r_0 * factor^j`.
#[derive(Debug, Clone, Copy)]
pub struct ScaleLadder {
    pub r0: f64,
    pub factor: f64,
    pub count: usize,
}

impl ScaleLadder {
    pub fn new(r0: f64, factor: f64, count: usize) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::InvalidLadder(format!("r0={r0} must be positive")));
        }
        if !(0.0 < factor && factor < 1.0) {
            return Err(Error::InvalidLadder(format!(
                "factor={factor} must lie in (0, 1)"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidLadder("need at least two scales".into()));
        }
        Ok(ScaleLadder { r0, factor, count })
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count)
            .map(|j| self.r0 * self.factor.powi(j as i32))
            .collect()
    }
}

/// Greedy net: a fixed-order pass keeping every point at distance >= `r`
/// from all kept points. The kept set is simultaneously an `r`-covering and
/// an `r/2`-packing of the input.
pub fn net_count(oracle: &dyn DistanceOracle, r: f64) -> usize {
    assert!(r > 0.0, "net radius must be positive");
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..oracle.len() {
        if kept.iter().all(|&j| oracle.dist(i, j) >= r) {
            kept.push(i);
        }
    }
    kept.len()
}

/// Which count the curve records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountVariant {
    NetCover,
    Packing,
}

impl CountVariant {
    pub fn label(self) -> &'static str {
        match self {
            CountVariant::NetCover => "net-cover",
            CountVariant::Packing => "packing",
        }
    }
}

/// Counts along a radius ladder. Counts are stored as floats so analytic
/// curves (e.g. `2^k` interval counts) can exceed enumerable sizes.
#[derive(Debug, Clone)]
pub struct CountCurve {
    pub entries: Vec<(f64, f64)>,
    pub variant: CountVariant,
}

impl CountCurve {
    /// CSV export: `r,count,variant`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r,count,variant")?;
        for &(r, n) in &self.entries {
            writeln!(w, "{r:.17e},{n},{}", self.variant.label())?;
        }
        Ok(())
    }
}

/// Runs the greedy net at every ladder scale.
pub fn count_curve(
    oracle: &dyn DistanceOracle,
    ladder: &ScaleLadder,
    variant: CountVariant,
) -> Result<CountCurve> {
    let floor = 2.0 * oracle.resolution();
    let radii = ladder.radii();
    for &r in &radii {
        if r < floor {
            return Err(Error::ResolutionFloor(r, floor));
        }
    }
    let count_at = |r: f64| -> f64 {
        let sep = match variant {
            CountVariant::NetCover => r,
            CountVariant::Packing => 2.0 * r,
        };
        net_count(oracle, sep) as f64
    };
    #[cfg(feature = "parallel")]
    let counts: Vec<f64> = {
        use rayon::prelude::*;
        radii.par_iter().map(|&r| count_at(r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let counts: Vec<f64> = radii.iter().map(|&r| count_at(r)).collect();

    Ok(CountCurve {
        entries: radii.into_iter().zip(counts).collect(),
        variant,
    })
}

/// Analytic count curve of a Cantor construction: `N(l_k) = 2^k` intervals,
/// with no point enumeration. Levels are given as `(l_k, k)` pairs.
pub fn analytic_cantor_curve(lengths: &[f64], levels: &[u32]) -> CountCurve {
    let entries = levels
        .iter()
        .map(|&k| (lengths[k as usize], 2f64.powi(k as i32)))
        .collect();
    CountCurve {
        entries,
        variant: CountVariant::NetCover,
    }
}

/// Log-log slope fit of a count curve.
#[derive(Debug, Clone, Copy)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r2: f64,
    pub window: (usize, usize),
    pub slope_min: f64,
    pub slope_max: f64,
}

impl DimensionEstimate {
    /// CSV export: header plus one row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "slope,stderr,r2,win_lo,win_hi,slope_min,slope_max")?;
        writeln!(
            w,
            "{:.12},{:.12},{:.12},{},{},{:.12},{:.12}",
            self.slope, self.stderr, self.r2, self.window.0, self.window.1, self.slope_min,
            self.slope_max
        )
    }
}

/// Least squares of `log N` on `log(1/r)` over `window = [lo, hi)` of the
/// curve entries; adjacent-pair slopes provide liminf/limsup proxies.
pub fn fit_dimension(curve: &CountCurve, window: (usize, usize)) -> Result<DimensionEstimate> {
    let (lo, hi) = window;
    if hi > curve.entries.len() || hi.saturating_sub(lo) < 3 {
        return Err(Error::DegenerateWindow);
    }
    let pts: Vec<(f64, f64)> = curve.entries[lo..hi]
        .iter()
        .map(|&(r, n)| ((1.0 / r).ln(), n.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateWindow);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let dof = (pts.len() as f64 - 2.0).max(1.0);
    let stderr = (ss_res / dof / sxx).sqrt();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    let mut slope_min = f64::INFINITY;
    let mut slope_max = f64::NEG_INFINITY;
    for w in pts.windows(2) {
        let s = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        slope_min = slope_min.min(s);
        slope_max = slope_max.max(s);
    }
    Ok(DimensionEstimate {
        slope,
        intercept,
        stderr,
        r2,
        window,
        slope_min,
        slope_max,
    })
}

/// Triadic points of `[0, 1]` whose digit-1 frequency is exactly `t = p/q` in
/// every consecutive `q`-digit block, together with their natural-measure
/// weights. When the full family exceeds `2^16` points, a deterministic
/// seeded sample of `2^16` is returned instead.
pub fn digit_frequency_points(p: u32, q: u32, k: u32) -> Result<Vec<(f64, f64)>> {
    if q == 0 || q > 12 || p > q {
        return Err(Error::InvalidSpec(format!(
            "digit frequency {p}/{q} must satisfy 0 <= p/q <= 1 and q <= 12"
        )));
    }
    if k == 0 || k % q != 0 {
        return Err(Error::IncompatibleLevel(k, q));
    }
    // All q-digit blocks with exactly p ones.
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    let mut digits = vec![0u8; q as usize];
    enumerate_blocks(&mut digits, 0, p, &mut blocks);
    let per_block = blocks.len() as u128;
    let n_blocks = (k / q) as u32;
    let total = per_block.checked_pow(n_blocks).unwrap_or(u128::MAX);

    let t = p as f64 / q as f64;
    // All admissible points carry the same natural-measure weight:
    // t per digit 1 and (1-t)/2 per outer digit.
    let ones = (k / q * p) as f64;
    let weight = if total == 0 {
        0.0
    } else {
        t.powf(ones) * ((1.0 - t) / 2.0).powf(k as f64 - ones)
    };

    let point_of = |choice: &dyn Fn(u32) -> usize| -> f64 {
        let mut x = 0.0;
        let mut scale = 1.0 / 3.0;
        for b in 0..n_blocks {
            for &d in &blocks[choice(b)] {
                x += d as f64 * scale;
                scale /= 3.0;
            }
        }
        x
    };

    let limit: u128 = 1 << 16;
    let mut out = Vec::new();
    if total <= limit {
        for mut idx in 0..total {
            let mut picks = vec![0usize; n_blocks as usize];
            for slot in picks.iter_mut().rev() {
                *slot = (idx % per_block) as usize;
                idx /= per_block;
            }
            out.push((point_of(&|b| picks[b as usize]), weight));
        }
    } else {
        use rand::{Rng, SeedableRng};
        for i in 0..limit {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed ^ i as u64);
            let picks: Vec<usize> = (0..n_blocks)
                .map(|_| rng.gen_range(0..blocks.len()))
                .collect();
            out.push((point_of(&|b| picks[b as usize]), weight));
        }
    }
    Ok(out)
}

fn enumerate_blocks(digits: &mut Vec<u8>, pos: u32, ones_left: u32, out: &mut Vec<Vec<u8>>) {
    let q = digits.len() as u32;
    if pos == q {
        if ones_left == 0 {
            out.push(digits.clone());
        }
        return;
    }
    if q - pos < ones_left {
        return;
    }
    for d in [0u8, 1, 2] {
        if d == 1 && ones_left == 0 {
            continue;
        }
        digits[pos as usize] = d;
        enumerate_blocks(digits, pos + 1, ones_left - (d == 1) as u32, out);
    }
}
