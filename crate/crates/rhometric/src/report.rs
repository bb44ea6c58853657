//! Experiment reports: named checks against predicted values, serialized to
//! JSON alongside the CSV artifacts.

use std::io::Write;

use serde::Serialize;

/// One predicted-vs-measured comparison. `pass` is set by the constructor so
/// the invariant `pass == |measured - predicted| <= tolerance` (or the ratio
/// form for bound checks) cannot drift from the recorded numbers.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub predicted: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|measured - predicted| <= tolerance`.
    pub fn within(name: &str, predicted: f64, measured: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            predicted,
            measured,
            tolerance,
            pass: (measured - predicted).abs() <= tolerance,
        }
    }

    /// `measured <= bound`; `predicted` records the bound, tolerance 0.
    pub fn upper_bound(name: &str, bound: f64, measured: f64) -> Check {
        Check {
            name: name.to_string(),
            predicted: bound,
            measured,
            tolerance: 0.0,
            pass: measured <= bound,
        }
    }

    /// `measured >= bound`; `predicted` records the bound, tolerance 0.
    pub fn lower_bound(name: &str, bound: f64, measured: f64) -> Check {
        Check {
            name: name.to_string(),
            predicted: bound,
            measured,
            tolerance: 0.0,
            pass: measured >= bound,
        }
    }

    /// `lo <= measured <= hi`, recorded as the midpoint with half-width
    /// tolerance.
    pub fn in_interval(name: &str, lo: f64, hi: f64, measured: f64) -> Check {
        Check::within(name, (lo + hi) / 2.0, measured, (hi - lo) / 2.0)
    }
}

/// The full record of one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    /// Resolved configuration, canonical key=value lines.
    pub config: Vec<String>,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub runtime_secs: f64,
}

impl ExperimentReport {
    pub fn new(
        experiment: &str,
        config_hash: String,
        seed: u64,
        config_echo: &str,
        checks: Vec<Check>,
    ) -> ExperimentReport {
        let pass = checks.iter().all(|c| c.pass);
        ExperimentReport {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            seed,
            config: config_echo.lines().map(str::to_string).collect(),
            checks,
            pass,
            runtime_secs: 0.0,
        }
    }

    pub fn write_json<W: Write>(&self, w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(std::io::Error::other)
    }
}
