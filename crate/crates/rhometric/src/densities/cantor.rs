//! Cantor-set constructions on the line.
//!
//! Two parameterizations are kept distinct and flagged: the keep-ratio style
//! (each interval keeps a copy of relative length `a` at both ends, so
//! `l_{k+1} = a * l_k`) and the remove-ratio style (the middle `alpha_{k+1}`
//! portion is removed, so `l_{k+1} = l_k (1 - alpha_{k+1}) / 2`). Both reduce
//! to a per-step child ratio in `(0, 1/2)`.

use std::io::Write;

use crate::error::{Error, Result};

/// Which of the two conventions the ratio schedule is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CantorStyle {
    /// Children have relative length `a` (remove the middle `1 - 2a`).
    KeepRatio,
    /// Remove the middle `alpha` portion (children have ratio `(1-alpha)/2`).
    RemoveRatio,
}

/// Ratio schedule of the construction.
#[derive(Debug, Clone, PartialEq)]
pub enum RatioSchedule {
    Constant { a: f64 },
    /// Alternate ratio `a` (steps `1..=n_1`), ratio `b` (steps `n_1+1..=N_1`),
    /// then `a` again, and so on; the flat list is `n_1, N_1, n_2, N_2, ...`.
    /// Steps beyond the last entry continue with ratio `a`.
    TwoPhase { a: f64, b: f64, schedule: Vec<u32> },
    /// Explicit removal ratios `alpha_1, alpha_2, ...` (remove-ratio style).
    Explicit { alphas: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CantorSpec {
    pub style: CantorStyle,
    pub schedule: RatioSchedule,
}

impl CantorSpec {
    pub fn middle_thirds() -> Self {
        CantorSpec {
            style: CantorStyle::KeepRatio,
            schedule: RatioSchedule::Constant { a: 1.0 / 3.0 },
        }
    }

    /// Child ratio of step `n` (1-based), in `(0, 1/2)`.
    fn child_ratio(&self, n: u32) -> Result<f64> {
        let ratio = match &self.schedule {
            RatioSchedule::Constant { a } => *a,
            RatioSchedule::TwoPhase { a, b, schedule } => {
                let mut in_b = false;
                let mut r = *a;
                for (i, &edge) in schedule.iter().enumerate() {
                    if n > edge {
                        in_b = i % 2 == 0;
                        r = if in_b { *b } else { *a };
                    } else {
                        break;
                    }
                }
                let _ = in_b;
                r
            }
            RatioSchedule::Explicit { alphas } => {
                let alpha = alphas[(n - 1) as usize];
                if !(0.0..1.0).contains(&alpha) {
                    return Err(Error::InvalidRatio(alpha));
                }
                (1.0 - alpha) / 2.0
            }
        };
        let ratio = match self.style {
            CantorStyle::KeepRatio => ratio,
            CantorStyle::RemoveRatio => match &self.schedule {
                // Explicit alphas were already converted above.
                RatioSchedule::Explicit { .. } => ratio,
                // Constant/TwoPhase parameters are removal ratios here.
                _ => (1.0 - ratio) / 2.0,
            },
        };
        if ratio <= 0.0 || ratio >= 0.5 {
            return Err(Error::InvalidRatio(ratio));
        }
        Ok(ratio)
    }

    fn validate(&self) -> Result<()> {
        if let RatioSchedule::TwoPhase { schedule, .. } = &self.schedule {
            if schedule.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::ScheduleNotIncreasing);
            }
        }
        Ok(())
    }
}

/// One construction interval with its natural-measure weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
    pub weight: f64,
}

/// A Cantor set built to a finite level inside `[0, 1]` (or an affine image).
#[derive(Debug, Clone)]
pub struct CantorSet {
    pub spec: CantorSpec,
    pub level: u32,
    /// `levels[k]` holds the `2^k` intervals of level `k`, left to right.
    pub levels: Vec<Vec<Interval>>,
    /// `lengths[k] = l_k`.
    pub lengths: Vec<f64>,
}

/// Interval lengths `l_0 ..= l_k` without enumerating the `2^k` intervals.
pub fn cantor_lengths(spec: &CantorSpec, k: u32) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut lengths = vec![1.0f64];
    for n in 1..=k {
        let ratio = spec.child_ratio(n)?;
        lengths.push(lengths[(n - 1) as usize] * ratio);
    }
    Ok(lengths)
}

/// Builds the construction to level `k`.
pub fn cantor_build(spec: &CantorSpec, k: u32) -> Result<CantorSet> {
    spec.validate()?;
    let mut levels = vec![vec![Interval {
        left: 0.0,
        right: 1.0,
        weight: 1.0,
    }]];
    let mut lengths = vec![1.0];
    for n in 1..=k {
        let ratio = spec.child_ratio(n)?;
        let len = lengths[(n - 1) as usize] * ratio;
        let next: Vec<Interval> = levels[(n - 1) as usize]
            .iter()
            .flat_map(|iv| {
                let w = iv.weight / 2.0;
                [
                    Interval {
                        left: iv.left,
                        right: iv.left + len,
                        weight: w,
                    },
                    Interval {
                        left: iv.right - len,
                        right: iv.right,
                        weight: w,
                    },
                ]
            })
            .collect();
        levels.push(next);
        lengths.push(len);
    }
    Ok(CantorSet {
        spec: spec.clone(),
        level: k,
        levels,
        lengths,
    })
}

impl CantorSet {
    pub fn deepest(&self) -> &[Interval] {
        self.levels.last().unwrap()
    }

    /// Exact distance from `x` to the union of level-`level` intervals,
    /// via binary search over the sorted interval list.
    pub fn distance(&self, x: f64) -> f64 {
        let ivs = self.deepest();
        // First interval whose left endpoint exceeds x.
        let idx = ivs.partition_point(|iv| iv.left <= x);
        let mut best = f64::INFINITY;
        if idx > 0 {
            let iv = &ivs[idx - 1];
            if x <= iv.right {
                return 0.0;
            }
            best = best.min(x - iv.right);
        }
        if idx < ivs.len() {
            best = best.min(ivs[idx].left - x);
        }
        best
    }

    /// True when `x` lies in the level-`level` approximation (within `tol`).
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Deepest level at which `x` and `y` share a construction interval,
    /// or `None` if either point escapes the top interval.
    pub fn deepest_common_level(&self, x: f64, y: f64, tol: f64) -> Option<u32> {
        let mut deepest = None;
        for (k, level) in self.levels.iter().enumerate() {
            let shared = level
                .iter()
                .any(|iv| within(iv, x, tol) && within(iv, y, tol));
            if shared {
                deepest = Some(k as u32);
            } else if k == 0 {
                return None;
            }
        }
        deepest
    }

    /// Left endpoints of the level-`k` intervals.
    pub fn left_endpoints(&self, k: u32) -> Vec<f64> {
        self.levels[k as usize].iter().map(|iv| iv.left).collect()
    }

    /// All endpoints of the level-`k` intervals, sorted.
    pub fn endpoints(&self, k: u32) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 << k);
        for iv in &self.levels[k as usize] {
            out.push(iv.left);
            out.push(iv.right);
        }
        out
    }

    /// Affine image of the construction on `[lo, hi]`.
    pub fn embedded(&self, lo: f64, hi: f64) -> CantorSet {
        let scale = hi - lo;
        let map = |t: f64| lo + scale * t;
        CantorSet {
            spec: self.spec.clone(),
            level: self.level,
            levels: self
                .levels
                .iter()
                .map(|lv| {
                    lv.iter()
                        .map(|iv| Interval {
                            left: map(iv.left),
                            right: map(iv.right),
                            weight: iv.weight,
                        })
                        .collect()
                })
                .collect(),
            lengths: self.lengths.iter().map(|l| l * scale).collect(),
        }
    }

    /// CSV export: `level,index,left,right,weight`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "level,index,left,right,weight")?;
        for (k, level) in self.levels.iter().enumerate() {
            for (i, iv) in level.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{:.17e},{:.17e},{:.17e}",
                    k, i, iv.left, iv.right, iv.weight
                )?;
            }
        }
        Ok(())
    }
}

fn within(iv: &Interval, x: f64, tol: f64) -> bool {
    x >= iv.left - tol && x <= iv.right + tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_thirds_level_two() {
        let set = cantor_build(&CantorSpec::middle_thirds(), 2).unwrap();
        let lv = &set.levels[2];
        assert_eq!(lv.len(), 4);
        let expected = [
            (0.0, 1.0 / 9.0),
            (2.0 / 9.0, 1.0 / 3.0),
            (2.0 / 3.0, 7.0 / 9.0),
            (8.0 / 9.0, 1.0),
        ];
        for (iv, (l, r)) in lv.iter().zip(expected) {
            assert!((iv.left - l).abs() < 1e-15 && (iv.right - r).abs() < 1e-15);
            assert!((iv.weight - 0.25).abs() < 1e-15);
        }
        assert!((set.lengths[2] - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn explicit_alphas_lengths() {
        let alphas = vec![0.5, 0.25, 0.125];
        let spec = CantorSpec {
            style: CantorStyle::RemoveRatio,
            schedule: RatioSchedule::Explicit {
                alphas: alphas.clone(),
            },
        };
        let set = cantor_build(&spec, 3).unwrap();
        let expected: f64 = alphas.iter().map(|a| (1.0 - a) / 2.0).product();
        assert!((set.lengths[3] - expected).abs() < 1e-15);
    }

    #[test]
    fn two_phase_level_eight_length() {
        let spec = CantorSpec {
            style: CantorStyle::KeepRatio,
            schedule: RatioSchedule::TwoPhase {
                a: 0.3,
                b: 0.45,
                schedule: vec![4, 8],
            },
        };
        let set = cantor_build(&spec, 8).unwrap();
        let expected = 0.3f64.powi(4) * 0.45f64.powi(4);
        assert!((set.lengths[8] - expected).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let spec = CantorSpec {
            style: CantorStyle::KeepRatio,
            schedule: RatioSchedule::Constant { a: 0.6 },
        };
        assert!(matches!(cantor_build(&spec, 2), Err(Error::InvalidRatio(_))));
        let spec = CantorSpec {
            style: CantorStyle::KeepRatio,
            schedule: RatioSchedule::TwoPhase {
                a: 0.3,
                b: 0.45,
                schedule: vec![4, 4],
            },
        };
        assert!(matches!(
            cantor_build(&spec, 2),
            Err(Error::ScheduleNotIncreasing)
        ));
    }

    #[test]
    fn nesting_lengths_and_weight_sums() {
        let spec = CantorSpec {
            style: CantorStyle::KeepRatio,
            schedule: RatioSchedule::TwoPhase {
                a: 0.3,
                b: 0.45,
                schedule: vec![2, 5],
            },
        };
        let set = cantor_build(&spec, 7).unwrap();
        for k in 1..=7usize {
            let parent = &set.levels[k - 1];
            let total: f64 = set.levels[k].iter().map(|iv| iv.weight).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for iv in &set.levels[k] {
                assert!((iv.right - iv.left - set.lengths[k]).abs() < 1e-12);
                assert!(parent
                    .iter()
                    .any(|p| iv.left >= p.left - 1e-15 && iv.right <= p.right + 1e-15));
            }
        }
    }

    #[test]
    fn distance_trivial_cases() {
        let set = cantor_build(&CantorSpec::middle_thirds(), 1).unwrap();
        assert_eq!(set.distance(0.2), 0.0);
        assert!((set.distance(0.5) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn distance_matches_linear_scan() {
        use rand::{Rng, SeedableRng};
        let set = cantor_build(&CantorSpec::middle_thirds(), 8).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-0.2..1.2);
            let fast = set.distance(x);
            let slow = set
                .deepest()
                .iter()
                .map(|iv| {
                    if x < iv.left {
                        iv.left - x
                    } else if x > iv.right {
                        x - iv.right
                    } else {
                        0.0
                    }
                })
                .fold(f64::INFINITY, f64::min);
            assert!((fast - slow).abs() <= 1e-15);
        }
    }

    #[test]
    fn csv_export_shape() {
        let set = cantor_build(&CantorSpec::middle_thirds(), 2).unwrap();
        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("level,index,left,right,weight\n"));
        assert_eq!(text.lines().count(), 1 + 1 + 2 + 4);
    }
}
