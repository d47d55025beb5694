//! Training dynamics: the generator and discriminator as an iterated map.
//!
//! Three families are implemented, all sharing the same exact gradients:
//!
//! - **optimal-discriminator**: each iteration recomputes the optimal
//!   two-interval witness and the generator descends against it;
//! - **first-order**: generator and a persistent discriminator state take
//!   simultaneous gradient steps (descent and ascent respectively);
//! - **unrolled**: like first-order, but the generator differentiates
//!   through `k` lookahead ascent steps of the discriminator (the stored
//!   discriminator still advances by a single plain step).
//!
//! Each family has an absolute-value variant that trains on `|L - 1|` (the
//! absolute mass gap): every gradient is multiplied by `sign(L - 1)`, and a
//! step is skipped when the gap is exactly zero.
//!
//! # Discriminator collapse
//!
//! An interval whose signed width falls to [`COLLAPSE_EPS`] or below is
//! *collapsed*: it snaps to its midpoint (width exactly zero) and freezes.
//! A zero-width interval carries zero mass and exerts a bitwise-zero
//! generator gradient, and its own endpoint gradients are equal, so the
//! exact flow can never reopen it; freezing makes that absorbing property
//! explicit instead of leaving the pair to drift through inversion. A run
//! whose intervals have both collapsed terminates with
//! [`Status::DiscriminatorCollapsed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discriminator::{optimal_discriminator, tv_distance, DiscriminatorSet};
use crate::gaussmix::MixtureParams;
use crate::loss::{
    grad_discriminator, grad_generator, lookahead_generator_grad, loss_value,
    unrolled_generator_grad, EndpointVector, ZERO_GAP_EPS,
};
use crate::Error;

/// A run is declared diverged when any generator mean exceeds this in
/// absolute value.
pub const DIVERGENCE_BOUND: f64 = 100.0;

/// Width at or below which a discriminator interval is considered collapsed,
/// and mean separation below which the generator is considered
/// mode-collapsed.
pub const COLLAPSE_EPS: f64 = 1e-3;

/// Which dynamics to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Re-solve for the optimal discriminator every iteration.
    OptimalDiscriminator,
    /// Simultaneous gradient descent/ascent.
    FirstOrder,
    /// Generator differentiates through `unroll_k` discriminator steps.
    Unrolled,
    /// Optimal-discriminator dynamics on the absolute mass gap.
    OptimalAbs,
    /// First-order dynamics on the absolute mass gap.
    FirstOrderAbs,
    /// Unrolled dynamics on the absolute mass gap.
    UnrolledAbs,
}

impl Variant {
    /// Does this variant recompute the optimal witness each iteration?
    pub fn uses_optimal_oracle(self) -> bool {
        matches!(self, Variant::OptimalDiscriminator | Variant::OptimalAbs)
    }

    /// Does this variant differentiate through discriminator lookahead?
    pub fn unrolls(self) -> bool {
        matches!(self, Variant::Unrolled | Variant::UnrolledAbs)
    }

    /// Does this variant train on the absolute mass gap?
    pub fn is_abs(self) -> bool {
        matches!(
            self,
            Variant::OptimalAbs | Variant::FirstOrderAbs | Variant::UnrolledAbs
        )
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "optimal" => Ok(Variant::OptimalDiscriminator),
            "first-order" => Ok(Variant::FirstOrder),
            "unrolled" => Ok(Variant::Unrolled),
            "optimal-abs" => Ok(Variant::OptimalAbs),
            "first-order-abs" => Ok(Variant::FirstOrderAbs),
            "unrolled-abs" => Ok(Variant::UnrolledAbs),
            _ => Err(Error::InvalidConfig(format!(
                "unknown variant {s:?} (expected optimal, first-order, unrolled, \
                 optimal-abs, first-order-abs, or unrolled-abs)"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::OptimalDiscriminator => "optimal",
            Variant::FirstOrder => "first-order",
            Variant::Unrolled => "unrolled",
            Variant::OptimalAbs => "optimal-abs",
            Variant::FirstOrderAbs => "first-order-abs",
            Variant::UnrolledAbs => "unrolled-abs",
        })
    }
}

/// Terminal classification of a run, in decreasing precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// A mean left `[-DIVERGENCE_BOUND, DIVERGENCE_BOUND]` (terminates the
    /// run immediately).
    Diverged,
    /// Both discriminator intervals collapsed to zero width (terminates the
    /// run immediately; first-order and unrolled families only).
    DiscriminatorCollapsed,
    /// Mean separation below [`COLLAPSE_EPS`] at the final iterate.
    ModeCollapsed,
    /// Final TV distance at or below the configured success threshold.
    Converged,
    /// None of the above by the final iterate.
    BudgetExhausted,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Diverged => "diverged",
            Status::DiscriminatorCollapsed => "disc-collapsed",
            Status::ModeCollapsed => "mode-collapsed",
            Status::Converged => "converged",
            Status::BudgetExhausted => "budget-exhausted",
        })
    }
}

/// Full configuration of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    pub variant: Variant,
    /// Generator step size (> 0).
    pub eta_g: f64,
    /// Discriminator step size (>= 0; unused by the optimal family).
    pub eta_d: f64,
    /// Iteration budget `T` (>= 1): a run visits iterates `0..=T` unless it
    /// terminates early.
    pub iterations: usize,
    /// Lookahead depth for the unrolled family (0 reduces it to first-order).
    pub unroll_k: usize,
    /// Standard deviation of i.i.d. Gaussian noise added to each mean after
    /// every generator step (0 disables the draw entirely, keeping the RNG
    /// untouched).
    pub noise_sigma: f64,
    /// Seed for the noise stream.
    pub seed: u64,
    /// TV threshold at or below which the final iterate counts as converged.
    pub success_tv: f64,
    /// Use the cheaper lookahead gradient (no chain rule) for the unrolled
    /// family.
    pub lookahead: bool,
    /// Stop as soon as an iterate's TV reaches `success_tv` instead of
    /// classifying only the final iterate.
    pub stop_when_converged: bool,
}

impl DynamicsConfig {
    /// Defaults shared by the experiment harness: step sizes 0.3, budget
    /// 3000, lookahead depth 5, no noise, success threshold 0.1.
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            eta_g: 0.3,
            eta_d: 0.3,
            iterations: 3000,
            unroll_k: 5,
            noise_sigma: 0.0,
            seed: 0,
            success_tv: 0.1,
            lookahead: false,
            stop_when_converged: false,
        }
    }

    /// Checks numeric ranges; every run entry point calls this.
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.eta_g > 0.0 && self.eta_g.is_finite()) {
            return bad(format!("eta_g must be positive and finite, got {}", self.eta_g));
        }
        if !(self.eta_d >= 0.0 && self.eta_d.is_finite()) {
            return bad(format!("eta_d must be non-negative and finite, got {}", self.eta_d));
        }
        if self.iterations < 1 {
            return bad("iterations must be at least 1".to_string());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!(
                "noise_sigma must be non-negative and finite, got {}",
                self.noise_sigma
            ));
        }
        if !(self.success_tv > 0.0 && self.success_tv.is_finite()) {
            return bad(format!(
                "success_tv must be positive and finite, got {}",
                self.success_tv
            ));
        }
        Ok(())
    }
}

/// Generator means plus persistent discriminator state for the first-order
/// and unrolled families.
///
/// The mean pair is raw (unsorted): the two coordinates are tracked as
/// distinct trajectory components. Collapse normalization is applied at
/// construction: any interval slot of signed width at most [`COLLAPSE_EPS`]
/// (including inverted and empty `(+inf, +inf)` slots) snaps to its midpoint
/// and is marked collapsed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderState {
    mu: [f64; 2],
    endpoints: EndpointVector,
    collapsed: [bool; 2],
}

impl FirstOrderState {
    /// Builds and normalizes a state.
    ///
    /// # Panics
    ///
    /// On NaN means or endpoints, non-finite means, or a slot pairing two
    /// infinities of opposite sign (which has no midpoint).
    pub fn new(mu: [f64; 2], endpoints: EndpointVector) -> Self {
        assert!(
            mu[0].is_finite() && mu[1].is_finite(),
            "generator means must be finite, got {mu:?}"
        );
        let mut e = endpoints.as_array();
        assert!(
            e.iter().all(|x| !x.is_nan()),
            "endpoints must not be NaN, got {e:?}"
        );
        let mut collapsed = [false; 2];
        for i in 0..2 {
            let (l, r) = (e[2 * i], e[2 * i + 1]);
            assert!(
                !(l.is_infinite() && r.is_infinite() && l != r),
                "slot ({l}, {r}) pairs opposite infinities"
            );
            let width = if l == r { 0.0 } else { r - l };
            if width <= COLLAPSE_EPS {
                let mid = if l == r { l } else { 0.5 * (l + r) };
                e[2 * i] = mid;
                e[2 * i + 1] = mid;
                collapsed[i] = true;
            }
        }
        Self {
            mu,
            endpoints: EndpointVector::from_array(e),
            collapsed,
        }
    }

    /// Raw generator means.
    #[inline]
    pub fn mu(&self) -> [f64; 2] {
        self.mu
    }

    /// Discriminator endpoints.
    #[inline]
    pub fn endpoints(&self) -> EndpointVector {
        self.endpoints
    }

    /// Which interval slots have collapsed and frozen.
    #[inline]
    pub fn collapsed(&self) -> [bool; 2] {
        self.collapsed
    }
}

/// One recorded iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub iter: usize,
    pub mu: [f64; 2],
    /// Persistent discriminator state, or the optimal witness for the
    /// optimal family (empty slots padded with `(+inf, +inf)`).
    pub endpoints: EndpointVector,
    pub loss: f64,
    pub tv: f64,
}

/// A fully recorded run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Iterates `0..=n`, in order; never empty (index 0 is the initial
    /// state).
    pub records: Vec<TrajectoryRecord>,
    pub status: Status,
}

impl Trajectory {
    /// The last iterate.
    pub fn final_record(&self) -> &TrajectoryRecord {
        self.records.last().expect("a trajectory records at least the initial iterate")
    }
}

/// Condensed result of a run, for experiments that sweep many runs and do
/// not need per-iterate records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub status: Status,
    /// Index of the final iterate (equals steps actually taken).
    pub iterations_run: usize,
    pub final_mu: [f64; 2],
    pub final_tv: f64,
    pub final_loss: f64,
    /// Minimum of `|mu1 - mu2|` over all iterates, initial state included.
    pub min_separation: f64,
    /// Maximum of `max(|mu1|, |mu2|)` over all iterates.
    pub max_abs_mu: f64,
}

/// One optimal-discriminator step from raw means `mu`: recompute the witness
/// and descend the generator against it. Returns the new means and the
/// witness used.
///
/// # Errors
///
/// [`Error::IdenticalParameters`] when the model equals the target exactly
/// or within float noise (the run driver treats that as a converged fixed
/// point instead).
pub fn step_optimal(
    target: MixtureParams,
    mu: [f64; 2],
    eta_g: f64,
) -> Result<([f64; 2], DiscriminatorSet), Error> {
    let model = MixtureParams::new(mu[0], mu[1])?;
    let wit = optimal_discriminator(target, model)?;
    let g = grad_generator(mu, wit.endpoints());
    Ok(([mu[0] - eta_g * g[0], mu[1] - eta_g * g[1]], wit))
}

/// Shared first-order/unrolled step. `sign` scales every gradient (+1 plain,
/// -1 for a negative absolute-value gap); `k = 0` is the plain first-order
/// step.
fn fo_step(
    target: MixtureParams,
    state: &FirstOrderState,
    eta_g: f64,
    eta_d: f64,
    k: usize,
    sign: f64,
    lookahead: bool,
) -> FirstOrderState {
    let mu = state.mu;
    let d = state.endpoints;
    let frozen = state.collapsed;

    let g_mu = if k == 0 {
        grad_generator(mu, d)
    } else if lookahead {
        lookahead_generator_grad(target, mu, d, k, eta_d, frozen)
    } else {
        unrolled_generator_grad(target, mu, d, k, eta_d, frozen)
    };
    let (d_l, d_r) = grad_discriminator(target, mu, d);

    let mu_next = [
        mu[0] - eta_g * (sign * g_mu[0]),
        mu[1] - eta_g * (sign * g_mu[1]),
    ];

    let mut e = d.as_array();
    let mut collapsed = frozen;
    for i in 0..2 {
        if collapsed[i] {
            continue;
        }
        let l = e[2 * i] + eta_d * (sign * d_l[i]);
        let r = e[2 * i + 1] + eta_d * (sign * d_r[i]);
        let width = if l == r { 0.0 } else { r - l };
        if width <= COLLAPSE_EPS {
            let mid = if l == r { l } else { 0.5 * (l + r) };
            e[2 * i] = mid;
            e[2 * i + 1] = mid;
            collapsed[i] = true;
        } else {
            e[2 * i] = l;
            e[2 * i + 1] = r;
        }
    }

    FirstOrderState {
        mu: mu_next,
        endpoints: EndpointVector::from_array(e),
        collapsed,
    }
}

/// One simultaneous descent/ascent step.
pub fn step_first_order(
    target: MixtureParams,
    state: &FirstOrderState,
    eta_g: f64,
    eta_d: f64,
) -> FirstOrderState {
    fo_step(target, state, eta_g, eta_d, 0, 1.0, false)
}

/// One unrolled step: the generator differentiates through `k` discriminator
/// ascent steps, while the stored discriminator advances by one plain step.
/// With `k = 0` this is bitwise-identical to [`step_first_order`].
pub fn step_unrolled(
    target: MixtureParams,
    state: &FirstOrderState,
    eta_g: f64,
    eta_d: f64,
    k: usize,
) -> FirstOrderState {
    fo_step(target, state, eta_g, eta_d, k, 1.0, false)
}

/// Runs the configured dynamics, recording every iterate.
///
/// The initial state is iterate 0. For the optimal family the `init`
/// endpoints are ignored (the witness is recomputed each iterate and is what
/// gets recorded). Noise, when enabled, is added to each mean after every
/// generator step from a `ChaCha8` stream seeded with `config.seed`.
///
/// # Errors
///
/// [`Error::InvalidConfig`] for out-of-range configuration.
pub fn run(
    target: MixtureParams,
    init: &FirstOrderState,
    config: &DynamicsConfig,
) -> Result<Trajectory, Error> {
    let (records, status, _) = run_impl(target, init, config, true)?;
    Ok(Trajectory { records, status })
}

/// Runs the configured dynamics without per-iterate records; see [`run`].
pub fn run_outcome(
    target: MixtureParams,
    init: &FirstOrderState,
    config: &DynamicsConfig,
) -> Result<RunOutcome, Error> {
    let (_, _, outcome) = run_impl(target, init, config, false)?;
    Ok(outcome)
}

/// Status for a run that reached its final iterate without terminating
/// early.
fn final_status(mu: [f64; 2], tv: f64, success_tv: f64) -> Status {
    if (mu[0] - mu[1]).abs() < COLLAPSE_EPS {
        Status::ModeCollapsed
    } else if tv <= success_tv {
        Status::Converged
    } else {
        Status::BudgetExhausted
    }
}

fn run_impl(
    target: MixtureParams,
    init: &FirstOrderState,
    config: &DynamicsConfig,
    record: bool,
) -> Result<(Vec<TrajectoryRecord>, Status, RunOutcome), Error> {
    config.validate()?;
    let optimal = config.variant.uses_optimal_oracle();
    let is_abs = config.variant.is_abs();
    let k = if config.variant.unrolls() { config.unroll_k } else { 0 };
    let noisy = config.noise_sigma > 0.0;
    let mut rng = noisy.then(|| ChaCha8Rng::seed_from_u64(config.seed));

    let mut state = *init;
    let mut records = Vec::new();
    if record {
        records.reserve(config.iterations + 1);
    }
    let mut min_separation = f64::INFINITY;
    let mut max_abs_mu = 0.0f64;
    let inf4 = EndpointVector::new(f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY);

    let mut iter = 0usize;
    let (status, final_tv, final_loss) = loop {
        let mu = state.mu;
        min_separation = min_separation.min((mu[0] - mu[1]).abs());
        max_abs_mu = max_abs_mu.max(mu[0].abs().max(mu[1].abs()));

        let finite = mu[0].is_finite() && mu[1].is_finite();
        let at_budget = iter == config.iterations;
        let diverged = !finite || mu[0].abs() > DIVERGENCE_BOUND || mu[1].abs() > DIVERGENCE_BOUND;
        let both_collapsed = !optimal && state.collapsed == [true, true];
        let terminal = at_budget || diverged || both_collapsed;

        // Witness (optimal family) plus loss/tv for this iterate. TV is
        // skipped in condensed mode for non-terminal first-order iterates
        // where nothing consumes it.
        let model = finite.then(|| MixtureParams::new(mu[0], mu[1]).expect("means are finite"));
        let witness = match model {
            Some(m) if optimal && m != target => match optimal_discriminator(target, m) {
                Ok(w) => Some(w),
                // Model within float noise of the target: no resolvable
                // witness, zero gradient, distance indistinguishable from 0.
                Err(Error::IdenticalParameters) => None,
                Err(e) => return Err(e),
            },
            _ => None,
        };
        let endpoints = if optimal {
            witness.as_ref().map_or(inf4, DiscriminatorSet::endpoints)
        } else {
            state.endpoints
        };

        let need_tv = record || terminal || config.stop_when_converged || optimal;
        let tv = match (&witness, model) {
            _ if !need_tv => f64::NAN, // placeholder, never read
            (Some(w), Some(m)) => w.mass_gap(target, m).max(0.0),
            // Optimal family with no witness: model equals the target
            // exactly or within float noise.
            (None, Some(_)) if optimal => 0.0,
            (None, Some(m)) => tv_distance(target, m),
            (_, None) => f64::NAN, // non-finite means: no defined distance
        };
        let loss = if optimal {
            1.0 + tv
        } else if record || terminal || is_abs {
            loss_value(target, mu, endpoints)
        } else {
            f64::NAN // placeholder, never read
        };

        if record {
            records.push(TrajectoryRecord { iter, mu, endpoints, loss, tv });
        }

        if diverged {
            break (Status::Diverged, tv, loss);
        }
        if both_collapsed {
            break (Status::DiscriminatorCollapsed, tv, loss);
        }
        if config.stop_when_converged && tv <= config.success_tv {
            break (Status::Converged, tv, loss);
        }
        if at_budget {
            break (final_status(mu, tv, config.success_tv), tv, loss);
        }

        // The gradient step. For abs variants the sign of the mass gap
        // scales every gradient; a zero gap has no defined sign, so the
        // gradient step is skipped (noise still applies).
        let sign = if !is_abs {
            1.0
        } else {
            let gap = if optimal { tv } else { loss - 1.0 };
            if gap.abs() < ZERO_GAP_EPS {
                0.0
            } else if gap > 0.0 {
                1.0
            } else {
                -1.0
            }
        };

        if sign != 0.0 {
            if optimal {
                let g = witness
                    .as_ref()
                    .map_or([0.0; 2], |w| grad_generator(mu, w.endpoints()));
                state.mu = [
                    mu[0] - config.eta_g * (sign * g[0]),
                    mu[1] - config.eta_g * (sign * g[1]),
                ];
            } else {
                state = fo_step(
                    target,
                    &state,
                    config.eta_g,
                    config.eta_d,
                    k,
                    sign,
                    config.lookahead,
                );
            }
        }

        if let Some(rng) = rng.as_mut() {
            use rand::Rng;
            let n1: f64 = rng.sample(rand_distr::StandardNormal);
            let n2: f64 = rng.sample(rand_distr::StandardNormal);
            state.mu[0] += config.noise_sigma * n1;
            state.mu[1] += config.noise_sigma * n2;
        }

        iter += 1;
    };

    let outcome = RunOutcome {
        status,
        iterations_run: iter,
        final_mu: state.mu,
        final_tv,
        final_loss,
        min_separation,
        max_abs_mu,
    };
    Ok((records, status, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mk(a: f64, b: f64) -> MixtureParams {
        MixtureParams::new(a, b).unwrap()
    }

    fn live_state(mu: [f64; 2], d: [f64; 4]) -> FirstOrderState {
        FirstOrderState::new(mu, EndpointVector::from_array(d))
    }

    #[test]
    fn config_validation_rejects_bad_ranges() {
        let mut c = DynamicsConfig::new(Variant::FirstOrder);
        c.eta_g = 0.0;
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
        let mut c = DynamicsConfig::new(Variant::FirstOrder);
        c.eta_d = -1.0;
        assert!(c.validate().is_err());
        let mut c = DynamicsConfig::new(Variant::FirstOrder);
        c.iterations = 0;
        assert!(c.validate().is_err());
        let mut c = DynamicsConfig::new(Variant::FirstOrder);
        c.success_tv = 0.0;
        assert!(c.validate().is_err());
        assert!(DynamicsConfig::new(Variant::Unrolled).validate().is_ok());
    }

    #[test]
    fn variant_round_trips_through_strings() {
        for v in [
            Variant::OptimalDiscriminator,
            Variant::FirstOrder,
            Variant::Unrolled,
            Variant::OptimalAbs,
            Variant::FirstOrderAbs,
            Variant::UnrolledAbs,
        ] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("second-order".parse::<Variant>().is_err());
    }

    #[test]
    fn state_normalization_snaps_thin_and_inverted_slots() {
        let s = live_state([0.0, 1.0], [-1.0, -1.0 + 5e-4, 2.0, 1.0]);
        assert_eq!(s.collapsed(), [true, true]);
        let e = s.endpoints().as_array();
        assert_eq!(e[0], e[1]);
        assert!((e[0] - -0.99975).abs() < 1e-12);
        assert_eq!(e[2], 1.5);
        assert_eq!(e[3], 1.5);

        let s = live_state([0.0, 1.0], [-1.0, 0.0, f64::INFINITY, f64::INFINITY]);
        assert_eq!(s.collapsed(), [false, true]);
    }

    #[test]
    fn first_order_step_matches_manual_euler() {
        let t = mk(-0.7, 0.9);
        let s = live_state([-1.3, 1.8], [-2.1, -0.4, 0.3, 2.2]);
        let (eta_g, eta_d) = (0.05, 0.07);
        let next = step_first_order(t, &s, eta_g, eta_d);

        let g = grad_generator(s.mu(), s.endpoints());
        let (dl, dr) = grad_discriminator(t, s.mu(), s.endpoints());
        assert_eq!(next.mu()[0], -1.3 - eta_g * g[0]);
        assert_eq!(next.mu()[1], 1.8 - eta_g * g[1]);
        let e = next.endpoints().as_array();
        assert_eq!(e[0], -2.1 + eta_d * dl[0]);
        assert_eq!(e[1], -0.4 + eta_d * dr[0]);
        assert_eq!(e[2], 0.3 + eta_d * dl[1]);
        assert_eq!(e[3], 2.2 + eta_d * dr[1]);
        assert_eq!(next.collapsed(), [false, false]);
    }

    #[test]
    fn unrolled_step_with_zero_lookahead_is_first_order() {
        let t = mk(-0.5, 0.5);
        let s = live_state([-0.9, 0.4], [-1.7, -0.2, 0.1, 1.9]);
        let a = step_first_order(t, &s, 0.3, 0.3);
        let b = step_unrolled(t, &s, 0.3, 0.3, 0);
        assert_eq!(a, b); // bitwise, not approximately
    }

    #[test]
    fn optimal_run_converges_from_separated_start() {
        let t = mk(-0.5, 0.5);
        let init = live_state([-1.0, 0.75], [0.0; 4]);
        let mut cfg = DynamicsConfig::new(Variant::OptimalDiscriminator);
        cfg.eta_g = 0.1;
        cfg.iterations = 500;
        let traj = run(t, &init, &cfg).unwrap();
        assert_eq!(traj.status, Status::Converged);
        assert!(traj.final_record().tv <= 0.1);
        // Loss at the witness is 1 + TV by construction.
        for rec in &traj.records {
            assert!((rec.loss - 1.0 - rec.tv).abs() < 1e-12);
        }
    }

    #[test]
    fn runs_that_hit_the_target_to_float_noise_still_finish() {
        // Unrolled training at this step size drives the means onto the
        // target so hard that the difference density drops below float
        // resolution; terminal TV must come back 0 instead of tripping the
        // zero-scan on round-off sign flips.
        let t = mk(-0.5, 0.5);
        let init = live_state([-1.0, 0.8], [-1.6, -0.1, 0.2, 1.5]);
        let mut cfg = DynamicsConfig::new(Variant::Unrolled);
        cfg.unroll_k = 5;
        let out = run_outcome(t, &init, &cfg).unwrap();
        assert_eq!(out.status, Status::Converged);
        assert_eq!(out.final_tv, 0.0);
        assert!((out.final_mu[0] - -0.5).abs() < 1e-12);
        assert!((out.final_mu[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oversized_steps_diverge_and_terminate_early() {
        let t = mk(-0.5, 0.5);
        let init = live_state([-1.0, 0.75], [0.0; 4]);
        let mut cfg = DynamicsConfig::new(Variant::OptimalDiscriminator);
        cfg.eta_g = 1e4;
        cfg.iterations = 3000;
        let traj = run(t, &init, &cfg).unwrap();
        assert_eq!(traj.status, Status::Diverged);
        assert!(traj.records.len() < 100);
        let f = traj.final_record();
        assert!(f.mu[0].abs() > DIVERGENCE_BOUND || f.mu[1].abs() > DIVERGENCE_BOUND);
    }

    #[test]
    fn equal_means_stay_locked_and_mode_collapse() {
        // With mu1 == mu2 exactly, every gradient expression is evaluated
        // identically for both coordinates, so they remain equal bit for bit
        // and the run classifies as mode collapse.
        let t = mk(-0.5, 0.5);
        let init = live_state([0.3, 0.3], [-1.5, -0.3, 0.2, 1.8]);
        let mut cfg = DynamicsConfig::new(Variant::FirstOrder);
        cfg.iterations = 200;
        let traj = run(t, &init, &cfg).unwrap();
        assert_eq!(traj.status, Status::ModeCollapsed);
        for rec in &traj.records {
            assert_eq!(rec.mu[0], rec.mu[1]);
        }
    }

    #[test]
    fn both_intervals_collapsing_terminates_the_run() {
        // Both intervals straddle regions where the model out-weighs the
        // target, so ascent shrinks them to nothing.
        let t = mk(-2.0, 2.0);
        let init = live_state([-1.0, 2.5], [-1.0, 0.2, -1.0, 2.5]);
        let mut cfg = DynamicsConfig::new(Variant::FirstOrder);
        cfg.iterations = 3000;
        let traj = run(t, &init, &cfg).unwrap();
        assert_eq!(traj.status, Status::DiscriminatorCollapsed);
        let f = traj.final_record();
        let w = f.endpoints.widths();
        assert_eq!(w, [0.0, 0.0]);
        // A collapsed discriminator exerts exactly zero generator gradient.
        let g = grad_generator(f.mu, f.endpoints);
        assert_eq!(g, [0.0, 0.0]);
        assert!(traj.records.len() < 3000);
    }

    #[test]
    fn collapse_is_absorbing_along_the_run() {
        let t = mk(-2.0, 2.0);
        let init = live_state([-1.0, 2.5], [-1.0, 0.2, -1.0, 2.5]);
        let mut cfg = DynamicsConfig::new(Variant::FirstOrder);
        cfg.iterations = 2000;
        let traj = run(t, &init, &cfg).unwrap();
        let mut seen_zero = [false, false];
        for rec in &traj.records {
            let w = rec.endpoints.widths();
            for i in 0..2 {
                if seen_zero[i] {
                    assert_eq!(w[i], 0.0, "slot {i} reopened at iter {}", rec.iter);
                }
                if w[i] == 0.0 {
                    seen_zero[i] = true;
                }
            }
        }
        assert_eq!(seen_zero, [true, true]);
    }

    #[test]
    fn noise_stream_is_seed_deterministic() {
        let t = mk(-0.5, 0.5);
        let init = live_state([-1.0, 0.75], [-1.8, -0.2, 0.1, 1.7]);
        let mut cfg = DynamicsConfig::new(Variant::FirstOrder);
        cfg.noise_sigma = 1e-3;
        cfg.iterations = 50;
        cfg.seed = 7;
        let a = run(t, &init, &cfg).unwrap();
        let b = run(t, &init, &cfg).unwrap();
        assert_eq!(a, b);
        cfg.seed = 8;
        let c = run(t, &init, &cfg).unwrap();
        assert_ne!(a.final_record().mu, c.final_record().mu);
    }

    #[test]
    fn run_outcome_matches_full_run() {
        let t = mk(-0.5, 0.5);
        let init = live_state([-0.8, 0.9], [-1.8, -0.2, 0.1, 1.7]);
        let mut cfg = DynamicsConfig::new(Variant::Unrolled);
        cfg.iterations = 300;
        cfg.unroll_k = 3;
        let traj = run(t, &init, &cfg).unwrap();
        let out = run_outcome(t, &init, &cfg).unwrap();
        assert_eq!(out.status, traj.status);
        let f = traj.final_record();
        assert_eq!(out.final_mu, f.mu);
        assert_eq!(out.final_tv, f.tv);
        assert_eq!(out.iterations_run, f.iter);
        let min_sep = traj
            .records
            .iter()
            .map(|r| (r.mu[0] - r.mu[1]).abs())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(out.min_separation, min_sep);
    }

    #[test]
    fn abs_optimal_matches_plain_optimal_bitwise() {
        let t = mk(-0.5, 0.5);
        let init = live_state([-1.1, 0.6], [0.0; 4]);
        let mut plain = DynamicsConfig::new(Variant::OptimalDiscriminator);
        plain.eta_g = 0.1;
        plain.iterations = 400;
        let mut abs = plain.clone();
        abs.variant = Variant::OptimalAbs;
        let a = run(t, &init, &plain).unwrap();
        let b = run(t, &init, &abs).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn locked_means_never_separate(
            m in -2.0..2.0f64,
            l1 in -3.0..0.0f64, w1 in 0.01..2.0f64,
            l2 in 0.5..3.0f64, w2 in 0.01..2.0f64,
            k in 0usize..4,
        ) {
            let t = mk(-0.5, 0.5);
            let init = live_state([m, m], [l1, l1 + w1, l2 + 1.0, l2 + 1.0 + w2]);
            let mut cfg = DynamicsConfig::new(Variant::Unrolled);
            cfg.unroll_k = k;
            cfg.iterations = 40;
            let traj = run(t, &init, &cfg).unwrap();
            for rec in &traj.records {
                prop_assert_eq!(rec.mu[0], rec.mu[1]);
            }
            // Locked means can only end in mode collapse (or in the
            // discriminator dying first); never in convergence.
            prop_assert!(matches!(
                traj.status,
                Status::ModeCollapsed | Status::DiscriminatorCollapsed
            ));
        }

        #[test]
        fn swapped_initial_means_mirror_exactly(
            m1 in -2.0..2.0f64, m2 in -2.0..2.0f64,
            l1 in -3.0..0.0f64, w1 in 0.01..2.0f64,
            k in 0usize..3,
        ) {
            let t = mk(-0.5, 0.5);
            let d = [l1, l1 + w1, 0.5, 2.0];
            let a = run(
                t,
                &live_state([m1, m2], d),
                &DynamicsConfig { unroll_k: k, iterations: 30, ..DynamicsConfig::new(Variant::Unrolled) },
            ).unwrap();
            let b = run(
                t,
                &live_state([m2, m1], d),
                &DynamicsConfig { unroll_k: k, iterations: 30, ..DynamicsConfig::new(Variant::Unrolled) },
            ).unwrap();
            prop_assert_eq!(a.status, b.status);
            for (ra, rb) in a.records.iter().zip(&b.records) {
                prop_assert_eq!(ra.mu[0], rb.mu[1]);
                prop_assert_eq!(ra.mu[1], rb.mu[0]);
                prop_assert_eq!(ra.endpoints, rb.endpoints);
            }
        }
    }
}
