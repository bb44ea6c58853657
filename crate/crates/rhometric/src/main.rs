//! `rhometric` command line front end.
//!
//! Exit codes: 0 = experiment passed, 2 = experiment ran but a check failed,
//! 1 = operational error (bad config, unknown experiment, IO).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rhometric::config::parse_config;
use rhometric::experiments::{run_experiment, EXPERIMENTS};
use rhometric::theory;

#[derive(Parser)]
#[command(name = "rhometric", version, about = "Density-metric boundary dimension experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment from a config file.
    Run {
        /// Path to the key=value config file.
        config: PathBuf,
        /// Output directory override.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Grid depth override.
        #[arg(long)]
        depth: Option<u32>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the multifractal spectrum for one (beta, lambda) pair as CSV.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Number of interior grid points of (0, 1).
        #[arg(long, default_value_t = 199)]
        steps: usize,
    },
    /// List the available experiments.
    List,
}

fn run(cli: Cli) -> Result<bool, rhometric::Error> {
    match cli.command {
        Command::Run {
            config,
            out,
            depth,
            seed,
        } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg = parse_config(&text)?;
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            if let Some(depth) = depth {
                cfg.grid_depth = Some(depth);
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            eprintln!("running {} (seed {})", cfg.experiment, cfg.seed);
            let report = run_experiment(&cfg)?;
            for check in &report.checks {
                eprintln!(
                    "  {} {}: measured {:.6} vs {:.6} +/- {:.3}",
                    if check.pass { "pass" } else { "FAIL" },
                    check.name,
                    check.measured,
                    check.predicted,
                    check.tolerance,
                );
            }
            eprintln!(
                "wrote {} ({:.2}s)",
                cfg.out_dir.join("report.json").display(),
                report.runtime_secs
            );
            Ok(report.pass)
        }
        Command::Spectrum { beta, lambda, steps } => {
            let ts: Vec<f64> = (1..=steps)
                .map(|i| i as f64 / (steps + 1) as f64)
                .collect();
            theory::spectrum_csv(&ts, beta, lambda, std::io::stdout().lock())?;
            Ok(true)
        }
        Command::List => {
            for name in EXPERIMENTS {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
