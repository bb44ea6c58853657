//! Two-phase radial density profile.
//!
//! For the two-ratio Cantor construction (keep-ratios `a` and `b` alternating
//! along a schedule `n_1 < N_1 < n_2 < ...`) the profile `rho(t)` is a
//! piecewise power of the scale `t`: exponent `lambda` on the `a`-phase scale
//! ranges and `eta = (1 + lambda) ln a / ln b - 1` on the `b`-phase ranges,
//! glued continuously with `rho(1) = 1`. The choice of `eta` makes
//! `rho(l_k) * l_k = xi^k` with `xi = a^(1+lambda)` on every level, no matter
//! which phase the level falls in.

use crate::error::{Error, Result};

/// One continuous branch `coeff * t^exponent` on `t in [lo, hi]`.
#[derive(Debug, Clone, Copy)]
struct Branch {
    hi: f64,
    lo: f64,
    coeff: f64,
    exponent: f64,
}

/// The solved profile, valid on `(0, inf)`.
#[derive(Debug, Clone)]
pub struct TwoPhaseParams {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    /// Derived exponent of the `b`-phase branches.
    pub eta: f64,
    /// `xi = a^(1+lambda)`; `rho(l_k) l_k = xi^k`.
    pub xi: f64,
    /// Flat phase-switch schedule `n_1, N_1, n_2, N_2, ...`.
    pub schedule: Vec<u32>,
    /// `lengths[k] = l_k`, down to the deepest solved level.
    pub lengths: Vec<f64>,
    /// Lower ends of the `a`-phase scale ranges: `r_0 = 1`, `r_i = l_{n_i}`.
    pub r: Vec<f64>,
    /// Upper ends of the `a`-phase scale ranges: `R_1 = 1`, `R_i = l_{N_{i-1}}`.
    pub big_r: Vec<f64>,
    /// Branches ordered from `[l_1, l_0]` downwards; the last one extends to 0.
    branches: Vec<Branch>,
}

/// Solves the profile down to level `depth`; below `l_depth` the profile
/// continues with the `a`-phase exponent `lambda`.
pub fn two_phase_solve(
    a: f64,
    b: f64,
    lambda: f64,
    schedule: &[u32],
    depth: u32,
) -> Result<TwoPhaseParams> {
    if !(0.0 < a && a < 0.5 && 0.0 < b && b < 0.5) {
        return Err(Error::ConstraintViolated(format!(
            "ratios a={a}, b={b} must lie in (0, 1/2)"
        )));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ScheduleNotIncreasing);
    }
    let eta = (1.0 + lambda) * a.ln() / b.ln() - 1.0;
    if !(-1.0 < lambda && lambda < eta && eta < 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "need -1 < lambda < eta < 0, got lambda={lambda}, eta={eta}"
        )));
    }
    let xi = a.powf(1.0 + lambda);
    let (lo, hi) = (0.5, std::f64::consts::FRAC_1_SQRT_2);
    if !(lo < xi && xi < hi) {
        return Err(Error::ConstraintViolated(format!(
            "xi={xi} must lie in (1/2, 1/sqrt(2))"
        )));
    }
    if depth == 0 {
        return Err(Error::EmptyProfile);
    }

    let mut lengths: Vec<f64> = vec![1.0];
    let mut branches: Vec<Branch> = Vec::with_capacity(depth as usize + 1);
    let mut coeff = 1.0;
    for n in 1..=depth {
        let b_phase = in_b_phase(schedule, n);
        let (ratio, exponent) = if b_phase { (b, eta) } else { (a, lambda) };
        let hi = lengths[(n - 1) as usize];
        if let Some(prev) = branches.last() {
            // Continuity at the previous breakpoint.
            coeff = prev.coeff * hi.powf(prev.exponent - exponent);
        }
        lengths.push(hi * ratio);
        branches.push(Branch {
            hi,
            lo: hi * ratio,
            coeff,
            exponent,
        });
    }
    // Tail below l_depth: the a-phase resumes.
    let last = *branches.last().unwrap();
    let coeff = last.coeff * last.lo.powf(last.exponent - lambda);
    branches.push(Branch {
        hi: last.lo,
        lo: 0.0,
        coeff,
        exponent: lambda,
    });

    let mut r = vec![1.0];
    let mut big_r = vec![f64::NAN, 1.0]; // 1-based: R_1 = 1.
    for (i, &edge) in schedule.iter().enumerate() {
        if edge > depth {
            break;
        }
        let l = lengths[edge as usize];
        if i % 2 == 0 {
            r.push(l); // edge = n_{i/2+1}
        } else {
            big_r.push(l); // edge = N_{i/2+1}, the top of the next a-range
        }
    }

    Ok(TwoPhaseParams {
        a,
        b,
        lambda,
        eta,
        xi,
        schedule: schedule.to_vec(),
        lengths,
        r,
        big_r,
        branches,
    })
}

/// True when construction step `n` (1-based) uses ratio `b`.
fn in_b_phase(schedule: &[u32], n: u32) -> bool {
    let crossed = schedule.iter().take_while(|&&edge| n > edge).count();
    crossed % 2 == 1
}

impl TwoPhaseParams {
    /// `rho(t)`; above scale 1 the profile continues as `t^lambda`.
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0, "profile is defined for positive scales");
        if t >= 1.0 {
            return t.powf(self.lambda);
        }
        let br = self.branch_at(t);
        br.coeff * t.powf(br.exponent)
    }

    /// `rho(t)` restricted to the scale range `(0, 1]` of the construction.
    pub fn profile_eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::TOutOfRange(t));
        }
        Ok(self.eval(t))
    }

    /// `h(r) = int_0^r rho(t) dt`, in closed form per branch.
    pub fn integral(&self, r: f64) -> f64 {
        assert!(r > 0.0);
        if r > 1.0 {
            return self.integral(1.0) + (r.powf(1.0 + self.lambda) - 1.0) / (1.0 + self.lambda);
        }
        let mut total = 0.0;
        for br in self.branches.iter().rev() {
            if r <= br.lo {
                continue;
            }
            let upper = r.min(br.hi);
            total += br.coeff
                * (upper.powf(1.0 + br.exponent) - br.lo.powf(1.0 + br.exponent))
                / (1.0 + br.exponent);
            if r <= br.hi {
                break;
            }
        }
        total
    }

    /// `h(l_k)`.
    pub fn h_at_level(&self, k: u32) -> f64 {
        self.integral(self.lengths[k as usize])
    }

    fn branch_at(&self, t: f64) -> &Branch {
        // Branches are sorted by decreasing scale; the last extends to 0.
        let idx = self.branches.partition_point(|br| br.lo >= t);
        &self.branches[idx.min(self.branches.len() - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> TwoPhaseParams {
        // a = 0.3, lambda = -0.5 gives xi = 0.3^0.5 ~ 0.5477 in (1/2, 1/sqrt 2).
        two_phase_solve(0.3, 0.45, -0.5, &[4, 8, 16, 32], 40).unwrap()
    }

    #[test]
    fn derived_constants() {
        let p = reference();
        let eta = 0.5 * 0.3f64.ln() / 0.45f64.ln() - 1.0;
        assert!((p.eta - eta).abs() < 1e-15);
        assert!((p.xi - 0.3f64.sqrt()).abs() < 1e-15);
        assert!(-1.0 < p.lambda && p.lambda < p.eta && p.eta < 0.0);
    }

    #[test]
    fn constraint_violations_are_rejected() {
        // lambda too negative.
        assert!(two_phase_solve(0.3, 0.45, -1.1, &[4, 8], 10).is_err());
        // b > a flips the exponent order (eta < lambda).
        assert!(two_phase_solve(0.45, 0.3, -0.5, &[4, 8], 10).is_err());
        // xi out of range.
        assert!(two_phase_solve(0.3, 0.45, -0.9, &[4, 8], 10).is_err());
        assert!(two_phase_solve(0.3, 0.45, -0.5, &[8, 4], 10).is_err());
    }

    #[test]
    fn level_products_follow_the_schedule() {
        let p = reference();
        // Steps 1..4 and 9..16 use a, steps 5..8 and 17..32 use b.
        let l8 = 0.3f64.powi(4) * 0.45f64.powi(4);
        assert!((p.lengths[8] - l8).abs() < 1e-15);
        let l16 = l8 * 0.3f64.powi(8);
        assert!((p.lengths[16] - l16).abs() < 1e-14 * l16.recip().min(1.0));
        assert!((p.lengths[16] - l16).abs() / l16 < 1e-12);
    }

    #[test]
    fn profile_is_continuous_and_nonincreasing() {
        let p = reference();
        let mut t = 2.0;
        let mut prev = p.eval(t);
        while t > p.lengths[38] {
            t *= 0.993;
            let v = p.eval(t);
            assert!(v >= prev * (1.0 - 1e-12), "profile must not increase");
            prev = v;
        }
        // Continuity across every breakpoint.
        for &l in &p.lengths {
            let (lo, hi) = (p.eval(l * (1.0 - 1e-9)), p.eval(l * (1.0 + 1e-9)));
            assert!((lo - hi).abs() / hi < 1e-6);
        }
    }

    #[test]
    fn level_identity_holds_in_both_phases() {
        let p = reference();
        for k in 0..=39u32 {
            let l = p.lengths[k as usize];
            let got = p.eval(l) * l;
            let want = p.xi.powi(k as i32);
            assert!(
                (got - want).abs() / want < 1e-10,
                "level {k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn integral_matches_quadrature() {
        let p = reference();
        for &r in &[0.7, 0.2, 0.05, p.lengths[5], p.lengths[9] * 1.3] {
            // Graded trapezoid rule clustered at 0 to handle the singularity.
            let n = 40_000usize;
            let mut sum = 0.0;
            let mut prev_t = 0.0f64;
            let mut prev_v = 0.0f64;
            for i in 1..=n {
                let t = r * (i as f64 / n as f64).powi(3);
                let v = p.eval(t);
                sum += 0.5 * (v + prev_v) * (t - prev_t);
                prev_t = t;
                prev_v = v;
            }
            let exact = p.integral(r);
            assert!((sum - exact).abs() / exact < 1e-3, "r={r}: {sum} vs {exact}");
        }
    }

    #[test]
    fn integral_at_levels_is_comparable_to_xi_powers() {
        let p = reference();
        let c0 = p.xi / ((1.0 - p.xi) * p.a.min(p.b));
        for k in 0..=39u32 {
            let h = p.h_at_level(k);
            let xi_k = p.xi.powi(k as i32);
            assert!(h >= xi_k / 2.0, "level {k}: {h} < {}", xi_k / 2.0);
            assert!(h <= c0 * xi_k, "level {k}: {h} > {}", c0 * xi_k);
        }
    }

    #[test]
    fn a_phase_branches_match_the_product_form() {
        // On the k-th a-phase range [r_k, R_k] the profile equals
        // (R_1 R_2 .. R_k / (r_0 r_1 .. r_{k-1}))^(eta - lambda) * t^lambda.
        let p = reference();
        assert_eq!(p.r.len(), 3); // r_0, r_1, r_2 within depth 40
        assert_eq!(p.big_r.len(), 4); // placeholder + R_1, R_2, R_3
        assert!((p.r[1] - 0.3f64.powi(4)).abs() < 1e-15);
        assert!((p.big_r[2] - 0.3f64.powi(4) * 0.45f64.powi(4)).abs() < 1e-15);
        for k in 1..=3usize {
            let big_prod: f64 = p.big_r[1..=k].iter().product();
            let small_prod: f64 = p.r[..k].iter().product();
            let coeff = (big_prod / small_prod).powf(p.eta - p.lambda);
            // A point strictly inside the k-th a-range; past the last
            // schedule entry the a-phase extends all the way down to 0.
            let t = if k < p.r.len() {
                (p.r[k] * p.big_r[k]).sqrt()
            } else {
                p.big_r[k] * 0.3
            };
            let got = p.profile_eval(t).unwrap();
            let want = coeff * t.powf(p.lambda);
            assert!((got - want).abs() / want < 1e-10, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn profile_eval_range_is_checked() {
        let p = reference();
        assert!(matches!(p.profile_eval(0.0), Err(Error::TOutOfRange(_))));
        assert!(matches!(p.profile_eval(1.5), Err(Error::TOutOfRange(_))));
        assert!((p.profile_eval(0.9).unwrap() - 0.9f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn dimension_formula_value() {
        let p = reference();
        let dim = 2f64.ln() / -p.xi.ln();
        let alt = -2f64.ln() / ((1.0 + p.lambda) * p.a.ln());
        assert!((dim - alt).abs() < 1e-14);
        assert!((dim - 1.1514).abs() < 5e-4);
    }
}
