//! Experiment orchestration: heatmaps, curated trajectories, convergence
//! sweeps, and deterministic seeding.
//!
//! Everything here is bitwise reproducible: parallel work is split into
//! independently seeded units (grid cell x trial, or sweep run) whose seeds
//! are derived from the master seed by a stable hash, and results are merged
//! by index, so thread scheduling cannot affect any output byte.

mod csvio;
mod svg;

pub use csvio::{
    parse_csv, write_heatmap_csv, write_sweep_json, write_trajectory_csv, HeatmapData, ParsedCsv,
    TrajectoryData,
};
pub use svg::{render_heatmap_svg, render_trajectory_svg};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    run, run_outcome, DynamicsConfig, FirstOrderState, Status, Trajectory, Variant,
};
use crate::gaussmix::MixtureParams;
use crate::loss::EndpointVector;
use crate::Error;

/// One round of the splitmix64 output function over `z + golden`.
fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from an ordered tuple of parts (master seed first).
///
/// The scheme — fold each part into the state with xor, then one splitmix64
/// round — is part of the output contract: reruns of any experiment with the
/// same master seed reproduce byte-identical results, regardless of thread
/// count or scheduling.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h = 0x6A09_E667_F3BC_C909; // fractional bits of sqrt(2)
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

// ---------------------------------------------------------------------------
// Success-probability heatmaps over initial means
// ---------------------------------------------------------------------------

/// Configuration of a heatmap experiment: a `grid_n x grid_n` grid of initial
/// mean pairs, each run `trials` times with discriminator endpoints drawn
/// uniformly at random.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapConfig {
    pub target: MixtureParams,
    /// Initial-mean grid spans `[grid_lo, grid_hi]` in both coordinates.
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// Points per axis (>= 2).
    pub grid_n: usize,
    /// Independent runs per cell (>= 1).
    pub trials: usize,
    pub variant: Variant,
    pub eta_g: f64,
    pub eta_d: f64,
    pub iterations: usize,
    pub unroll_k: usize,
    pub success_tv: f64,
    /// Each trial draws four i.i.d. `Uniform[disc_init_lo, disc_init_hi)`
    /// values, sorts them, and uses them as `(l1, r1, l2, r2)`.
    pub disc_init_lo: f64,
    pub disc_init_hi: f64,
    pub seed: u64,
}

impl HeatmapConfig {
    /// Protocol defaults: target `(-0.5, 0.5)`, 41x41 grid over `[-1, 1]`,
    /// 120 trials, step sizes 0.3, 3000 iterations, lookahead depth 5,
    /// success threshold 0.1, endpoint draws from `[-2, 2]`.
    pub fn new(variant: Variant) -> Self {
        Self {
            target: MixtureParams::new(-0.5, 0.5).expect("finite"),
            grid_lo: -1.0,
            grid_hi: 1.0,
            grid_n: 41,
            trials: 120,
            variant,
            eta_g: 0.3,
            eta_d: 0.3,
            iterations: 3000,
            unroll_k: 5,
            success_tv: 0.1,
            disc_init_lo: -2.0,
            disc_init_hi: 2.0,
            seed: 0,
        }
    }

    /// Checks grid and dynamics ranges.
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.grid_n < 2 {
            return bad(format!("grid_n must be at least 2, got {}", self.grid_n));
        }
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if !(self.grid_lo.is_finite() && self.grid_hi.is_finite() && self.grid_lo < self.grid_hi) {
            return bad(format!(
                "grid bounds must be finite with lo < hi, got [{}, {}]",
                self.grid_lo, self.grid_hi
            ));
        }
        if !(self.disc_init_lo.is_finite()
            && self.disc_init_hi.is_finite()
            && self.disc_init_lo < self.disc_init_hi)
        {
            return bad(format!(
                "endpoint draw bounds must be finite with lo < hi, got [{}, {}]",
                self.disc_init_lo, self.disc_init_hi
            ));
        }
        self.dynamics_config(0).validate()
    }

    /// The axis values `grid_lo..=grid_hi`, evenly spaced.
    pub fn grid_values(&self) -> Vec<f64> {
        let n = self.grid_n;
        (0..n)
            .map(|k| self.grid_lo + (self.grid_hi - self.grid_lo) * k as f64 / (n - 1) as f64)
            .collect()
    }

    fn dynamics_config(&self, seed: u64) -> DynamicsConfig {
        DynamicsConfig {
            variant: self.variant,
            eta_g: self.eta_g,
            eta_d: self.eta_d,
            iterations: self.iterations,
            unroll_k: self.unroll_k,
            noise_sigma: 0.0,
            seed,
            success_tv: self.success_tv,
            lookahead: false,
            stop_when_converged: false,
        }
    }
}

/// Terminal-status tally for one grid cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellCounts {
    pub converged: usize,
    pub diverged: usize,
    pub mode_collapsed: usize,
    pub disc_collapsed: usize,
    pub budget: usize,
}

impl CellCounts {
    fn add(&mut self, status: Status) {
        match status {
            Status::Converged => self.converged += 1,
            Status::Diverged => self.diverged += 1,
            Status::ModeCollapsed => self.mode_collapsed += 1,
            Status::DiscriminatorCollapsed => self.disc_collapsed += 1,
            Status::BudgetExhausted => self.budget += 1,
        }
    }

    /// Total runs tallied.
    pub fn total(&self) -> usize {
        self.converged + self.diverged + self.mode_collapsed + self.disc_collapsed + self.budget
    }
}

/// Completed heatmap: per-cell status counts in row-major order
/// (`cells[i * grid_n + j]` holds initial means `(value[i], value[j])`).
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapResult {
    pub config: HeatmapConfig,
    pub cells: Vec<CellCounts>,
}

impl HeatmapResult {
    /// Counts for the cell with initial means `(value[i], value[j])`.
    pub fn cell(&self, i: usize, j: usize) -> &CellCounts {
        &self.cells[i * self.config.grid_n + j]
    }

    /// Success probability (fraction converged) for cell `(i, j)`.
    pub fn success_prob(&self, i: usize, j: usize) -> f64 {
        self.cell(i, j).converged as f64 / self.config.trials as f64
    }

    /// Mean success probability over all cells.
    pub fn mean_success(&self) -> f64 {
        let s: usize = self.cells.iter().map(|c| c.converged).sum();
        s as f64 / (self.cells.len() * self.config.trials) as f64
    }

    /// Mean success probability over off-diagonal cells (`i != j`).
    pub fn mean_offdiagonal_success(&self) -> f64 {
        let n = self.config.grid_n;
        let mut s = 0usize;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self.cell(i, j).converged;
                }
            }
        }
        s as f64 / ((n * n - n) * self.config.trials) as f64
    }

    /// Maximum success probability over diagonal cells (`i == j`).
    pub fn max_diagonal_success(&self) -> f64 {
        (0..self.config.grid_n)
            .map(|i| self.success_prob(i, i))
            .fold(0.0, f64::max)
    }
}

/// Runs the heatmap experiment, parallelized over grid cells.
///
/// Every `(cell, trial)` unit derives its seed as
/// `mix_seed([seed, min(i,j), max(i,j), trial])`; using the *unordered* cell
/// index makes the transposed cell's trials draw identical endpoints, and
/// since the dynamics are exactly symmetric under swapping the raw means,
/// the resulting count grid is exactly symmetric too.
pub fn run_heatmap(config: &HeatmapConfig) -> Result<HeatmapResult, Error> {
    config.validate()?;
    let n = config.grid_n;
    let values = config.grid_values();

    let cells: Vec<CellCounts> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let mu0 = [values[i], values[j]];
            let (a, b) = (i.min(j) as u64, i.max(j) as u64);
            let mut counts = CellCounts::default();
            if config.variant.uses_optimal_oracle() {
                // Optimal-family runs recompute their witness from the
                // means alone and heatmap runs are noiseless, so every
                // trial of a cell is the same deterministic run. Run it
                // once and weight the count; the result is identical to
                // looping over trials.
                let init = FirstOrderState::new(mu0, EndpointVector::from_array([0.0; 4]));
                let cfg = config.dynamics_config(mix_seed(&[config.seed, a, b, 0]));
                let out = run_outcome(config.target, &init, &cfg).expect("config validated");
                for _ in 0..config.trials {
                    counts.add(out.status);
                }
            } else {
                for trial in 0..config.trials {
                    let seed = mix_seed(&[config.seed, a, b, trial as u64]);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut draws = [0.0f64; 4];
                    for d in &mut draws {
                        *d = rng.gen_range(config.disc_init_lo..config.disc_init_hi);
                    }
                    draws.sort_by(|x, y| x.partial_cmp(y).expect("draws are finite"));
                    let init = FirstOrderState::new(mu0, EndpointVector::from_array(draws));
                    let out = run_outcome(config.target, &init, &config.dynamics_config(seed))
                        .expect("config validated");
                    counts.add(out.status);
                }
            }
            counts
        })
        .collect();

    Ok(HeatmapResult {
        config: config.clone(),
        cells,
    })
}

// ---------------------------------------------------------------------------
// Bounded-regime convergence sweep
// ---------------------------------------------------------------------------

/// Configuration of a convergence sweep: random well-separated target and
/// initial means in a bounded box, run under small-step, low-noise
/// optimal-discriminator dynamics until the TV threshold is reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_runs: usize,
    /// Means are drawn uniformly from `[-c, c]`.
    pub c: f64,
    /// Both the separation floor for sampled pairs and the TV success
    /// threshold.
    pub delta: f64,
    pub seed: u64,
    pub eta_g: f64,
    pub max_iterations: usize,
    pub noise_sigma: f64,
}

impl SweepConfig {
    /// Defaults matching the regime where convergence is provable: step
    /// 0.01, budget 100000, noise 1e-12.
    pub fn new(n_runs: usize, c: f64, delta: f64, seed: u64) -> Self {
        Self {
            n_runs,
            c,
            delta,
            seed,
            eta_g: 0.01,
            max_iterations: 100_000,
            noise_sigma: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_runs < 1 {
            return bad("n_runs must be at least 1".into());
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c must be positive and finite, got {}", self.c));
        }
        if !(self.delta > 0.0 && self.delta < 2.0 * self.c) {
            return bad(format!(
                "delta must lie in (0, 2c) so separated pairs exist, got {}",
                self.delta
            ));
        }
        if !(self.eta_g > 0.0 && self.eta_g.is_finite()) {
            return bad(format!("eta_g must be positive and finite, got {}", self.eta_g));
        }
        if self.max_iterations < 1 {
            return bad("max_iterations must be at least 1".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!(
                "noise_sigma must be non-negative and finite, got {}",
                self.noise_sigma
            ));
        }
        Ok(())
    }
}

/// Aggregated sweep results (serialized as the JSON report).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: SweepConfig,
    pub n_converged: usize,
    pub fraction_converged: f64,
    /// Minimum over runs of (minimum mean separation along the run) divided
    /// by min(initial separation, target separation). Values >= 0.5 mean no
    /// run ever lost more than half its starting separation.
    pub min_separation_ratio: f64,
    /// Largest |mean coordinate| seen at any iterate of any run.
    pub max_abs_coordinate: f64,
    pub iterations_min: usize,
    pub iterations_max: usize,
    pub iterations_mean: f64,
}

/// Draws a mean pair from `[-c, c]^2`, rejecting pairs closer than `delta`.
fn draw_separated(rng: &mut ChaCha8Rng, c: f64, delta: f64) -> [f64; 2] {
    loop {
        let a = rng.gen_range(-c..c);
        let b = rng.gen_range(-c..c);
        if (a - b).abs() >= delta {
            return [a, b];
        }
    }
}

/// Runs the convergence sweep, parallelized over runs.
///
/// Each run samples a delta-separated target pair and initial pair from
/// `[-c, c]`, then runs optimal-discriminator dynamics with success
/// threshold `delta`, stopping at the first iterate whose TV distance
/// reaches it.
pub fn theorem1_sweep(config: &SweepConfig) -> Result<SweepSummary, Error> {
    config.validate()?;

    struct Row {
        converged: bool,
        sep_ratio: f64,
        max_abs: f64,
        iterations: usize,
    }

    let rows: Vec<Row> = (0..config.n_runs)
        .into_par_iter()
        .map(|run_idx| {
            let draw_seed = mix_seed(&[config.seed, run_idx as u64, 0]);
            let mut rng = ChaCha8Rng::seed_from_u64(draw_seed);
            let t = draw_separated(&mut rng, config.c, config.delta);
            let m0 = draw_separated(&mut rng, config.c, config.delta);
            let target = MixtureParams::new(t[0], t[1]).expect("finite draw");

            let dyn_cfg = DynamicsConfig {
                variant: Variant::OptimalDiscriminator,
                eta_g: config.eta_g,
                eta_d: 0.0,
                iterations: config.max_iterations,
                unroll_k: 0,
                noise_sigma: config.noise_sigma,
                seed: mix_seed(&[config.seed, run_idx as u64, 1]),
                success_tv: config.delta,
                lookahead: false,
                stop_when_converged: true,
            };
            let init = FirstOrderState::new(m0, EndpointVector::from_array([0.0; 4]));
            let out = run_outcome(target, &init, &dyn_cfg).expect("config validated");

            let init_sep = (m0[0] - m0[1]).abs();
            let base_sep = init_sep.min(target.separation());
            Row {
                converged: out.status == Status::Converged,
                sep_ratio: out.min_separation / base_sep,
                max_abs: out.max_abs_mu,
                iterations: out.iterations_run,
            }
        })
        .collect();

    let n_converged = rows.iter().filter(|r| r.converged).count();
    let min_separation_ratio = rows.iter().map(|r| r.sep_ratio).fold(f64::INFINITY, f64::min);
    let max_abs_coordinate = rows.iter().map(|r| r.max_abs).fold(0.0, f64::max);
    let iterations_min = rows.iter().map(|r| r.iterations).min().expect("n_runs >= 1");
    let iterations_max = rows.iter().map(|r| r.iterations).max().expect("n_runs >= 1");
    let iterations_mean =
        rows.iter().map(|r| r.iterations as f64).sum::<f64>() / rows.len() as f64;

    Ok(SweepSummary {
        config: config.clone(),
        n_converged,
        fraction_converged: n_converged as f64 / rows.len() as f64,
        min_separation_ratio,
        max_abs_coordinate,
        iterations_min,
        iterations_max,
        iterations_mean,
    })
}

// ---------------------------------------------------------------------------
// Curated single-trajectory reproductions
// ---------------------------------------------------------------------------

/// Identifier of a curated demonstration trajectory.
///
/// The five demos cover the qualitative regimes of the dynamics:
/// first-order convergence (1a), mode collapse with oscillation (1b),
/// optimal-discriminator convergence (1c), vanishing gradients after the
/// discriminator dies (1d), and two-interval discriminator collapse under
/// simultaneous training (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig3,
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "1a" => Ok(FigureId::Fig1a),
            "1b" => Ok(FigureId::Fig1b),
            "1c" => Ok(FigureId::Fig1c),
            "1d" => Ok(FigureId::Fig1d),
            "3" => Ok(FigureId::Fig3),
            other => Err(Error::UnknownFigure(other.to_string())),
        }
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FigureId::Fig1a => "1a",
            FigureId::Fig1b => "1b",
            FigureId::Fig1c => "1c",
            FigureId::Fig1d => "1d",
            FigureId::Fig3 => "3",
        })
    }
}

/// Optional overrides for a demo run: the shared step size (`eta` sets both
/// players') and the iteration budget. Everything else is pinned by the demo
/// definition.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FigureOverrides {
    pub eta: Option<f64>,
    pub iterations: Option<usize>,
}

/// A completed demo run plus everything needed to serialize it
/// self-describingly.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureRun {
    pub figure: FigureId,
    pub target: MixtureParams,
    pub init: FirstOrderState,
    pub config: DynamicsConfig,
    /// True when the initial condition was hand-picked to exhibit the
    /// regime (rather than being forced by the construction).
    pub curated: bool,
    pub trajectory: Trajectory,
}

/// Runs one of the curated demonstration trajectories.
pub fn reproduce_trajectory(
    figure: FigureId,
    overrides: &FigureOverrides,
) -> Result<FigureRun, Error> {
    let mk = |a: f64, b: f64| MixtureParams::new(a, b).expect("finite");
    let ep = EndpointVector::new;

    // (target, init mu, init endpoints, variant, eta, iterations, curated)
    let (target, mu0, d0, variant, eta, iterations, curated) = match figure {
        // Hand-picked start that first-order training actually pulls onto
        // the target.
        FigureId::Fig1a => (
            mk(-0.5, 0.5),
            [-1.0, 0.8],
            ep(-1.6, -0.1, 0.2, 1.5),
            Variant::FirstOrder,
            0.1,
            3000,
            true,
        ),
        // Both means start on one side; they swing back and forth chasing
        // the moving intervals, then merge instead of splitting across the
        // target bumps.
        FigureId::Fig1b => (
            mk(-0.5, 0.5),
            [-0.56, -1.2],
            ep(-1.9, 0.88, 1.12, 1.93),
            Variant::FirstOrder,
            0.1,
            3000,
            true,
        ),
        // Optimal-discriminator dynamics converge from any separated start;
        // this one is fixed but nothing about the outcome depends on it.
        FigureId::Fig1c => (
            mk(-0.5, 0.5),
            [-1.0, 0.75],
            ep(0.0, 0.0, 0.0, 0.0),
            Variant::OptimalDiscriminator,
            0.1,
            3000,
            false,
        ),
        // Thin intervals seeded where the model out-weighs the target:
        // ascent shrinks them to nothing almost immediately, the gradient
        // on the means vanishes, and the generator freezes far from the
        // target.
        FigureId::Fig1d => (
            mk(-0.5, 0.5),
            [-1.4, 0.86],
            ep(-1.35, -1.19, 1.25, 1.42),
            Variant::FirstOrder,
            0.1,
            3000,
            true,
        ),
        // Two-interval discriminator collapse under simultaneous training.
        FigureId::Fig3 => (
            mk(-2.0, 2.0),
            [-1.0, 2.5],
            ep(-1.0, 0.2, -1.0, 2.5),
            Variant::FirstOrder,
            0.3,
            3000,
            false,
        ),
    };

    let eta = overrides.eta.unwrap_or(eta);
    let config = DynamicsConfig {
        eta_g: eta,
        eta_d: eta,
        iterations: overrides.iterations.unwrap_or(iterations),
        ..DynamicsConfig::new(variant)
    };
    let init = FirstOrderState::new(mu0, d0);
    let trajectory = run(target, &init, &config)?;
    Ok(FigureRun {
        figure,
        target,
        init,
        config,
        curated,
        trajectory,
    })
}
