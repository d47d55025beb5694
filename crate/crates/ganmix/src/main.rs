//! Command-line front end: reproduce demo trajectories, sweep heatmaps,
//! run the small-step convergence experiment, and render results as SVG.
//!
//! Exit codes: 0 on success, 2 for invalid configuration or malformed
//! input, 3 for I/O failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ganmix::dynamics::Variant;
use ganmix::harness::{
    parse_csv, render_heatmap_svg, render_trajectory_svg, reproduce_trajectory, run_heatmap,
    theorem1_sweep, write_heatmap_csv, write_sweep_json, write_trajectory_csv, FigureId,
    FigureOverrides, HeatmapConfig, ParsedCsv, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "ganmix",
    version,
    about = "Closed-form GAN training dynamics on two-component Gaussian mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named demo trajectory and write it as CSV.
    Trajectory {
        /// Demo id: 1a, 1b, 1c, 1d, or 3.
        #[arg(long)]
        figure: String,
        /// Override the step size (applies to both players).
        #[arg(long)]
        eta: Option<f64>,
        /// Override the iteration budget.
        #[arg(long)]
        iters: Option<usize>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep initial generator means over a grid and write success
    /// statistics as CSV.
    Heatmap {
        /// Training dynamics: optimal, first-order, unrolled,
        /// optimal-abs, first-order-abs, or unrolled-abs.
        #[arg(long, default_value = "first-order")]
        variant: String,
        /// Discriminator ascent steps differentiated through per
        /// generator update (unrolled variants).
        #[arg(long)]
        unroll_k: Option<usize>,
        /// Grid resolution per axis.
        #[arg(long)]
        grid_n: Option<usize>,
        /// Independent runs per grid cell.
        #[arg(long)]
        trials: Option<usize>,
        /// Step size (applies to both players).
        #[arg(long)]
        eta: Option<f64>,
        /// Iteration budget per run.
        #[arg(long)]
        iters: Option<usize>,
        /// Total-variation threshold counted as success.
        #[arg(long)]
        success_tv: Option<f64>,
        /// Master seed for discriminator initialization.
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run many small-step optimal-discriminator trainings from random
    /// well-separated starts and write a convergence summary as JSON.
    Theorem1 {
        /// Number of independent runs.
        #[arg(long, default_value_t = 500)]
        runs: usize,
        /// Half-width of the box means are drawn from.
        #[arg(long, default_value_t = 3.0)]
        c: f64,
        /// Required separation and target accuracy.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a trajectory or heatmap CSV as a standalone SVG.
    Plot {
        /// Input CSV (as produced by `trajectory` or `heatmap`).
        #[arg(long = "in")]
        input: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Splits failures into the two non-zero exit codes.
enum CliError {
    /// Bad flags, unknown names, out-of-range values, unparsable input
    /// files — exit code 2.
    Config(ganmix::Error),
    /// Filesystem trouble — exit code 3.
    Io(std::io::Error),
}

impl From<ganmix::Error> for CliError {
    fn from(e: ganmix::Error) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Trajectory {
            figure,
            eta,
            iters,
            out,
        } => {
            let id: FigureId = figure.parse()?;
            let run = reproduce_trajectory(id, &FigureOverrides { eta, iterations: iters })?;
            let mut buf = Vec::new();
            write_trajectory_csv(&mut buf, &run)?;
            write_file(&out, &buf)?;
            eprintln!(
                "wrote {} ({} iterates, status {})",
                out.display(),
                run.trajectory.records.len(),
                run.trajectory.status
            );
        }
        Command::Heatmap {
            variant,
            unroll_k,
            grid_n,
            trials,
            eta,
            iters,
            success_tv,
            seed,
            out,
        } => {
            let variant: Variant = variant.parse()?;
            let mut config = HeatmapConfig::new(variant);
            if let Some(k) = unroll_k {
                config.unroll_k = k;
            }
            if let Some(n) = grid_n {
                config.grid_n = n;
            }
            if let Some(t) = trials {
                config.trials = t;
            }
            if let Some(e) = eta {
                config.eta_g = e;
                config.eta_d = e;
            }
            if let Some(t) = iters {
                config.iterations = t;
            }
            if let Some(s) = success_tv {
                config.success_tv = s;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let result = run_heatmap(&config)?;
            let mut buf = Vec::new();
            write_heatmap_csv(&mut buf, &result)?;
            write_file(&out, &buf)?;
            eprintln!(
                "wrote {} (mean success {:.4}, off-diagonal {:.4})",
                out.display(),
                result.mean_success(),
                result.mean_offdiagonal_success()
            );
        }
        Command::Theorem1 {
            runs,
            c,
            delta,
            seed,
            out,
        } => {
            let config = SweepConfig::new(runs, c, delta, seed);
            let summary = theorem1_sweep(&config)?;
            let mut buf = Vec::new();
            write_sweep_json(&mut buf, &summary)?;
            write_file(&out, &buf)?;
            eprintln!(
                "wrote {} (converged {}/{})",
                out.display(),
                summary.n_converged,
                config.n_runs
            );
        }
        Command::Plot { input, out } => {
            let text = fs::read_to_string(&input)?;
            let svg = match parse_csv(&text)? {
                ParsedCsv::Trajectory(t) => render_trajectory_svg(&t),
                ParsedCsv::Heatmap(h) => render_heatmap_svg(&h),
            };
            write_file(&out, svg.as_bytes())?;
            eprintln!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with code 2 on usage errors, matching the invalid-config
    // convention below.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(3)
        }
    }
}
