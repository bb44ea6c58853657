//! Line-oriented experiment configuration.
//!
//! Format: one `key=value` per line, `#` starts a comment, blank lines are
//! ignored. Unknown keys are errors so that a typo cannot silently fall back
//! to a default. Every value the experiment actually uses is echoed back into
//! the report, and the resolved configuration is hashed (FNV-1a, 64 bit) so
//! reruns can be matched to their artifacts.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};

/// A parsed experiment configuration. Optional fields fall back to the
/// per-experiment defaults; `experiment` and `seed` are mandatory.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// `half-plane`, `disk` or `snowflake`.
    pub domain_type: Option<String>,
    pub domain_x_lo: Option<f64>,
    pub domain_x_hi: Option<f64>,
    pub domain_y_max: Option<f64>,
    pub domain_s: Option<f64>,
    pub domain_depth: Option<u32>,
    pub density_type: Option<String>,
    pub density_beta: Option<f64>,
    pub density_lambda: Option<f64>,
    pub density_a: Option<f64>,
    pub density_b: Option<f64>,
    /// Phase-switch schedule for two-phase constructions.
    pub schedule: Option<Vec<u32>>,
    pub grid_depth: Option<u32>,
    pub anchors_count: Option<usize>,
    pub ladder_r0: Option<f64>,
    pub ladder_factor: Option<f64>,
    pub ladder_count: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: String::new(),
            seed: 0,
            out_dir: PathBuf::from("."),
            domain_type: None,
            domain_x_lo: None,
            domain_x_hi: None,
            domain_y_max: None,
            domain_s: None,
            domain_depth: None,
            density_type: None,
            density_beta: None,
            density_lambda: None,
            density_a: None,
            density_b: None,
            schedule: None,
            grid_depth: None,
            anchors_count: None,
            ladder_r0: None,
            ladder_factor: None,
            ladder_count: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        msg: format!("cannot parse {key}={value}"),
    })
}

/// Parses the strict `key=value` format.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut have_experiment = false;
    let mut have_seed = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected key=value, got '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "experiment" => {
                cfg.experiment = value.to_string();
                have_experiment = true;
            }
            "seed" => {
                cfg.seed = parse_num(line, key, value)?;
                have_seed = true;
            }
            "out.dir" => cfg.out_dir = PathBuf::from(value),
            "domain.type" => cfg.domain_type = Some(value.to_string()),
            "domain.x_lo" => cfg.domain_x_lo = Some(parse_num(line, key, value)?),
            "domain.x_hi" => cfg.domain_x_hi = Some(parse_num(line, key, value)?),
            "domain.y_max" => cfg.domain_y_max = Some(parse_num(line, key, value)?),
            "domain.s" => cfg.domain_s = Some(parse_num(line, key, value)?),
            "domain.depth" => cfg.domain_depth = Some(parse_num(line, key, value)?),
            "density.type" => cfg.density_type = Some(value.to_string()),
            "density.beta" => cfg.density_beta = Some(parse_num(line, key, value)?),
            "density.lambda" => cfg.density_lambda = Some(parse_num(line, key, value)?),
            "density.a" => cfg.density_a = Some(parse_num(line, key, value)?),
            "density.b" => cfg.density_b = Some(parse_num(line, key, value)?),
            "schedule" => {
                cfg.schedule = Some(
                    value
                        .split(',')
                        .map(|v| parse_num(line, key, v.trim()))
                        .collect::<Result<_>>()?,
                )
            }
            "grid.depth" => cfg.grid_depth = Some(parse_num(line, key, value)?),
            "anchors.count" => cfg.anchors_count = Some(parse_num(line, key, value)?),
            "ladder.r0" => cfg.ladder_r0 = Some(parse_num(line, key, value)?),
            "ladder.factor" => cfg.ladder_factor = Some(parse_num(line, key, value)?),
            "ladder.count" => cfg.ladder_count = Some(parse_num(line, key, value)?),
            _ => {
                return Err(Error::Config {
                    line,
                    msg: format!("unknown key '{key}'"),
                })
            }
        }
    }
    if !have_experiment {
        return Err(Error::Config {
            line: 0,
            msg: "missing mandatory key 'experiment'".into(),
        });
    }
    if !have_seed {
        return Err(Error::Config {
            line: 0,
            msg: "missing mandatory key 'seed'".into(),
        });
    }
    Ok(cfg)
}

impl ExperimentConfig {
    /// Canonical `key=value` rendering of the resolved configuration; optional
    /// fields are emitted only when set, in a fixed key order.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment={}", self.experiment);
        let _ = writeln!(s, "seed={}", self.seed);
        let opt = |s: &mut String, key: &str, v: Option<f64>| {
            if let Some(v) = v {
                let _ = writeln!(s, "{key}={v:?}");
            }
        };
        if let Some(t) = &self.domain_type {
            let _ = writeln!(s, "domain.type={t}");
        }
        opt(&mut s, "domain.x_lo", self.domain_x_lo);
        opt(&mut s, "domain.x_hi", self.domain_x_hi);
        opt(&mut s, "domain.y_max", self.domain_y_max);
        opt(&mut s, "domain.s", self.domain_s);
        if let Some(d) = self.domain_depth {
            let _ = writeln!(s, "domain.depth={d}");
        }
        if let Some(t) = &self.density_type {
            let _ = writeln!(s, "density.type={t}");
        }
        opt(&mut s, "density.beta", self.density_beta);
        opt(&mut s, "density.lambda", self.density_lambda);
        opt(&mut s, "density.a", self.density_a);
        opt(&mut s, "density.b", self.density_b);
        if let Some(sched) = &self.schedule {
            let parts: Vec<String> = sched.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "schedule={}", parts.join(","));
        }
        if let Some(d) = self.grid_depth {
            let _ = writeln!(s, "grid.depth={d}");
        }
        if let Some(n) = self.anchors_count {
            let _ = writeln!(s, "anchors.count={n}");
        }
        opt(&mut s, "ladder.r0", self.ladder_r0);
        opt(&mut s, "ladder.factor", self.ladder_factor);
        if let Some(n) = self.ladder_count {
            let _ = writeln!(s, "ladder.count={n}");
        }
        s
    }

    /// Builds the configured domain; `half-plane` with the window defaults
    /// when no type is given.
    pub fn build_domain(&self) -> Result<crate::domains::Domain> {
        use crate::domains::Domain;
        match self.domain_type.as_deref().unwrap_or("half-plane") {
            "half-plane" => Ok(Domain::half_plane_window(
                self.domain_x_lo.unwrap_or(0.0),
                self.domain_x_hi.unwrap_or(1.0),
                self.domain_y_max.unwrap_or(1.0),
            )),
            "disk" => Ok(Domain::unit_disk()),
            "snowflake" => Ok(Domain::snowflake(
                self.domain_s.unwrap_or(0.4),
                self.domain_depth.unwrap_or(6),
            )),
            other => Err(Error::InvalidSpec(format!("unknown domain type '{other}'"))),
        }
    }

    /// Builds the configured density from the `density.*` and `schedule`
    /// keys.
    pub fn build_density(&self) -> Result<crate::densities::Density> {
        use crate::densities::{
            cantor_build, two_phase_solve, CantorSpec, CantorStyle, Density, DensityKind,
            RatioSchedule, TriadicDensity,
        };
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::InvalidSpec(format!("missing {key}")))
        };
        let kind = match self
            .density_type
            .as_deref()
            .ok_or_else(|| Error::InvalidSpec("missing density.type".into()))?
        {
            "constant" => DensityKind::Constant {
                c: self.density_a.unwrap_or(1.0),
            },
            "power-boundary" => DensityKind::PowerBoundary {
                beta: need(self.density_beta, "density.beta")?,
            },
            "power-dist-to-set" => DensityKind::PowerDistToSet {
                beta: need(self.density_beta, "density.beta")?,
                set: cantor_build(&CantorSpec::middle_thirds(), 10)?,
                floor: 0.0,
            },
            "triadic" => DensityKind::TriadicMultifractal {
                rho: TriadicDensity::new(
                    need(self.density_lambda, "density.lambda")?,
                    need(self.density_beta, "density.beta")?,
                    37,
                )?,
            },
            "two-phase" => {
                let (a, b) = (
                    need(self.density_a, "density.a")?,
                    need(self.density_b, "density.b")?,
                );
                let schedule = self
                    .schedule
                    .clone()
                    .ok_or_else(|| Error::InvalidSpec("missing schedule".into()))?;
                let params = two_phase_solve(
                    a,
                    b,
                    need(self.density_lambda, "density.lambda")?,
                    &schedule,
                    schedule.last().copied().unwrap_or(10).max(10),
                )?;
                let spec = CantorSpec {
                    style: CantorStyle::KeepRatio,
                    schedule: RatioSchedule::TwoPhase { a, b, schedule },
                };
                DensityKind::TwoPhaseProfile {
                    params,
                    set: cantor_build(&spec, 10)?,
                }
            }
            "exp-reciprocal" => DensityKind::ExpReciprocal,
            other => {
                return Err(Error::InvalidSpec(format!("unknown density type '{other}'")))
            }
        };
        Density::new(kind)
    }

    /// FNV-1a hash of the canonical form, as fixed-width hex.
    pub fn hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.canonical().bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}
