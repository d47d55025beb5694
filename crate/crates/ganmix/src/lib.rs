//! Exact training dynamics for a two-Gaussian-mixture GAN.
//!
//! The model under study is deliberately small enough to admit closed forms:
//! generators are 1/2-1/2 mixtures of two unit-variance Gaussians (parametrized
//! by the pair of means), and discriminators are indicators of at most two
//! disjoint real intervals. Within it, everything that is usually estimated is
//! computed exactly:
//!
//! - [`gaussmix`] — mixture densities and CDFs, the signed difference density
//!   `F = target − model`, and isolation of its (at most three) zeros;
//! - [`discriminator`] — the optimal-discriminator oracle (the best
//!   two-interval witness) and total-variation distance between generators;
//! - [`loss`] — the minimax loss, its exact first- and second-order
//!   derivatives, the generator gradient unrolled through `k` discriminator
//!   ascent steps, and the absolute-value loss variant;
//! - [`dynamics`] — optimal-discriminator, first-order, and unrolled training
//!   dynamics as iterated maps with trajectory recording;
//! - [`harness`] — experiment orchestration: success-probability heatmaps over
//!   initial means, curated single-trajectory reproductions, bounded-regime
//!   convergence sweeps, CSV/JSON/SVG output, and a deterministic seeding
//!   scheme that makes parallel runs schedule-independent.
//!
//! The `ganmix` binary exposes the harness as a small CLI
//! (`trajectory`, `heatmap`, `theorem1`, `plot`); the `examples/` directory
//! demonstrates each capability as a library consumer.

pub mod discriminator;
pub mod dynamics;
pub mod gaussmix;
pub mod harness;
pub mod loss;

/// Errors reported by library operations.
///
/// Numerical-impossibility conditions (more than three zeros of the
/// difference density, more than two positive regions) are asserted and panic
/// instead: they indicate a bug, not a caller mistake.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Mixture means must be finite.
    #[error("mixture means must be finite, got ({0}, {1})")]
    NotFinite(f64, f64),
    /// Target and model coincide, so the difference density is identically
    /// zero and no witness or zero set is defined.
    #[error("target and model parameters are identical; the difference density is identically zero")]
    IdenticalParameters,
    /// Interval endpoints violate `lo <= hi` (or are the forbidden
    /// `(+inf, -inf)` pair).
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    /// The mass gap is zero, so the sign of the absolute-value loss is
    /// undefined; the caller perturbs or skips.
    #[error("mass gap is zero; the absolute-value subgradient is undefined")]
    ZeroGap,
    /// A run or experiment configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// An input file could not be parsed.
    #[error("malformed input: {0}")]
    MalformedInput(String),
    /// Unrecognized figure identifier.
    #[error("unknown figure id {0:?} (expected one of 1a, 1b, 1c, 1d, 3)")]
    UnknownFigure(String),
}
