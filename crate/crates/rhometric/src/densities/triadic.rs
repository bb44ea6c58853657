//! Triadic multifractal density on the upper half-plane.
//!
//! Weights are assigned to triadic intervals of `[0, 1]`: the root has weight
//! 1, and a child multiplies its parent's weight by `3^-lambda` (outer digits
//! 0 and 2) or `3^-beta` (middle digit 1). A level-`n` interval of index `i`
//! therefore has `log_3 weight = -(lambda (n - c) + beta c)` where `c` counts
//! the `1` digits of `i` in base 3 -- the weight only depends on digit counts.
//!
//! The discrete weights extend to a continuous density on the strip
//! `0 < y < 2` by interpolating `log rho` bilinearly in `(x, log y)` between
//! the level anchors `y_n = 2 * 3^-n` (values at interval midpoints, piecewise
//! linear in `x`). For `y >= 2` the density is 1. Interpolation in log space
//! keeps local ratios bounded by the same constant as the discrete weights.

/// `ln` of the weight of the level-`level` triadic interval with index `idx`.
pub fn triadic_log_weight(lambda: f64, beta: f64, level: u32, idx: u64) -> f64 {
    let mut ones = 0u32;
    let mut rest = idx;
    for _ in 0..level {
        if rest % 3 == 1 {
            ones += 1;
        }
        rest /= 3;
    }
    debug_assert_eq!(rest, 0, "index out of range for the level");
    let ones = ones as f64;
    -(lambda * (level as f64 - ones) + beta * ones) * 3f64.ln()
}

/// Weight of the triadic interval addressed by digits over `{0, 1, 2}`.
pub fn triadic_weight(lambda: f64, beta: f64, address: &[u8]) -> f64 {
    let ones = address.iter().filter(|&&d| d == 1).count() as f64;
    let n = address.len() as f64;
    (-(lambda * (n - ones) + beta * ones) * 3f64.ln()).exp()
}

/// The interpolated density.
#[derive(Debug, Clone, Copy)]
pub struct TriadicDensity {
    pub lambda: f64,
    pub beta: f64,
    /// Deepest interpolation level; below `y = 2 * 3^-max_depth` the deepest
    /// level's profile is used unchanged.
    pub max_depth: u32,
}

/// Levels beyond this would overflow the `u64` interval indices.
pub const TRIADIC_DEPTH_LIMIT: u32 = 37;

impl TriadicDensity {
    pub fn new(lambda: f64, beta: f64, max_depth: u32) -> crate::Result<Self> {
        if max_depth > TRIADIC_DEPTH_LIMIT {
            return Err(crate::Error::DepthExceeded(max_depth, TRIADIC_DEPTH_LIMIT));
        }
        Ok(TriadicDensity {
            lambda,
            beta,
            max_depth,
        })
    }

    /// `ln rho` of the piecewise-linear level profile at horizontal `x`.
    fn level_profile(&self, level: u32, x: f64) -> f64 {
        let n3 = 3f64.powi(level as i32);
        let count = n3 as u64;
        // Offset so interval midpoints are the interpolation knots.
        let u = (x.clamp(0.0, 1.0) * n3 - 0.5).clamp(0.0, n3 - 1.0);
        let i0 = (u.floor() as u64).min(count - 1);
        let i1 = (i0 + 1).min(count - 1);
        let frac = u - u.floor();
        let w0 = triadic_log_weight(self.lambda, self.beta, level, i0);
        if i1 == i0 {
            return w0;
        }
        let w1 = triadic_log_weight(self.lambda, self.beta, level, i1);
        w0 + frac * (w1 - w0)
    }

    /// The density at `(x, y)`, `y > 0`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        assert!(y > 0.0, "density lives on the open upper half-plane");
        if y >= 2.0 {
            return 1.0;
        }
        // y sits between the anchors y_{n+1} <= y <= y_n, y_n = 2 * 3^-n.
        let n = (2.0 / y).log(3.0).floor() as u32;
        if n >= self.max_depth {
            return self.level_profile(self.max_depth, x).exp();
        }
        let y_hi = 2.0 * 3f64.powi(-(n as i32));
        // s = 1 at the upper anchor, 0 at the lower one; log y interpolation.
        let s = 1.0 + (y / y_hi).log(3.0);
        let upper = self.level_profile(n, x);
        let lower = self.level_profile(n + 1, x);
        (s * upper + (1.0 - s) * lower).exp()
    }

    /// Upper bound on `rho(p)/rho(q)` over unit-ratio displacements, i.e. the
    /// factor by which the density can change between points with
    /// `|p - q| <= y / 3`.
    pub fn harnack_constant(&self) -> f64 {
        let (l, b) = (self.lambda, self.beta);
        3f64.powf(2.0 * (b - l).abs() + l.abs().max(b.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = -1.0 / 3.0;
    const BETA: f64 = -1.0 / 2.0;

    #[test]
    fn discrete_weights_first_levels() {
        assert_eq!(triadic_weight(LAMBDA, BETA, &[]), 1.0);
        let outer = 3f64.powf(-LAMBDA);
        let middle = 3f64.powf(-BETA);
        assert!((triadic_weight(LAMBDA, BETA, &[0]) - outer).abs() < 1e-15);
        assert!((triadic_weight(LAMBDA, BETA, &[2]) - outer).abs() < 1e-15);
        assert!((triadic_weight(LAMBDA, BETA, &[1]) - middle).abs() < 1e-15);
        assert!((triadic_weight(LAMBDA, BETA, &[1, 0]) - outer * middle).abs() < 1e-14);
    }

    #[test]
    fn index_and_address_forms_agree() {
        for level in 0..6u32 {
            for idx in 0..3u64.pow(level) {
                let mut digits = Vec::new();
                let mut rest = idx;
                for _ in 0..level {
                    digits.push((rest % 3) as u8);
                    rest /= 3;
                }
                digits.reverse();
                let via_addr = triadic_weight(LAMBDA, BETA, &digits).ln();
                let via_idx = triadic_log_weight(LAMBDA, BETA, level, idx);
                assert!((via_addr - via_idx).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weight_only_counts_digits() {
        let a = triadic_weight(LAMBDA, BETA, &[0, 1, 2, 1, 0]);
        let b = triadic_weight(LAMBDA, BETA, &[1, 1, 0, 0, 2]);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn constant_above_two() {
        let rho = TriadicDensity::new(LAMBDA, BETA, 20).unwrap();
        assert_eq!(rho.eval(0.3, 2.0), 1.0);
        assert_eq!(rho.eval(0.9, 5.0), 1.0);
    }

    #[test]
    fn equal_exponents_give_a_pure_power() {
        // With lambda = beta the level profiles are flat, so the log-space
        // interpolation reproduces (y/2)^lambda exactly.
        let rho = TriadicDensity::new(-0.4, -0.4, 30).unwrap();
        for &(x, y) in &[(0.1, 1.7), (0.5, 0.3), (0.8, 0.01), (0.33, 1e-4)] {
            let want = (y / 2.0f64).powf(-0.4);
            let got = rho.eval(x, y);
            assert!((got - want).abs() / want < 1e-10, "({x},{y}): {got} vs {want}");
        }
    }

    #[test]
    fn anchors_reproduce_cell_weights() {
        let rho = TriadicDensity::new(LAMBDA, BETA, 20).unwrap();
        for level in 1..6u32 {
            let y = 2.0 * 3f64.powi(-(level as i32));
            for idx in 0..3u64.pow(level) {
                let x = (idx as f64 + 0.5) * 3f64.powi(-(level as i32));
                let want = triadic_log_weight(LAMBDA, BETA, level, idx).exp();
                let got = rho.eval(x, y * (1.0 - 1e-13));
                assert!(
                    (got - want).abs() / want < 1e-9,
                    "level {level} idx {idx}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn mirror_symmetry() {
        // Reflecting x swaps digits 0 and 2, which carry the same weight.
        let rho = TriadicDensity::new(LAMBDA, BETA, 25).unwrap();
        for &(x, y) in &[(0.12, 0.9), (0.4, 0.05), (0.07, 0.004), (0.63, 1.4)] {
            let a = rho.eval(x, y);
            let b = rho.eval(1.0 - x, y);
            assert!((a - b).abs() / a < 1e-10);
        }
    }

    #[test]
    fn local_ratios_are_bounded() {
        let rho = TriadicDensity::new(LAMBDA, BETA, 25).unwrap();
        let c = rho.harnack_constant();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20_000 {
            let y: f64 = rng.gen_range(-8.0..0.5f64);
            let y = 2.0 * 3f64.powf(y);
            let x: f64 = rng.gen_range(0.0..1.0);
            let dx: f64 = rng.gen_range(-1.0..1.0f64);
            let dy: f64 = rng.gen_range(-0.25..0.25f64);
            let (x2, y2) = (x + dx * y / 3.0, y * (1.0 + dy));
            let ratio = rho.eval(x, y) / rho.eval(x2.clamp(0.0, 1.0), y2);
            assert!(ratio < c * 1.01 && ratio > 1.0 / (c * 1.01), "ratio {ratio}");
        }
    }

    #[test]
    fn depth_limit_is_enforced() {
        assert!(TriadicDensity::new(LAMBDA, BETA, 40).is_err());
        assert!(TriadicDensity::new(LAMBDA, BETA, 37).is_ok());
    }
}
