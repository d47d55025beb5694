//! Optimal discriminators and total-variation distance.
//!
//! For mixtures `target` and `model`, the discriminator maximizing
//! `E_target[D] + E_model[1 - D]` over indicator functions is the indicator
//! of `{F > 0}` where `F = target - model` is the difference density. Since
//! `F` has at most three zeros, that set is a union of at most two disjoint
//! intervals (possibly half-infinite), and the attained objective is
//! `1 + TV(target, model)`.

use crate::gaussmix::{diff_pdf, find_zeros, MixtureParams, DEFAULT_ZERO_TOL};
use crate::loss::EndpointVector;
use crate::Error;

/// A closed real interval `[lo, hi]` with `lo <= hi`; endpoints may be
/// infinite (half-lines and the full line are allowed, the empty
/// `(+inf, -inf)` pair is not).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Validates `lo <= hi` (NaN endpoints are rejected).
    pub fn new(lo: f64, hi: f64) -> Result<Self, Error> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval(format!("NaN endpoint ({lo}, {hi})")));
        }
        if lo > hi {
            return Err(Error::InvalidInterval(format!("lo {lo} exceeds hi {hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// Left endpoint.
    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Right endpoint.
    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    /// `hi - lo`, with coincident endpoints (including infinite ones) giving
    /// exactly zero.
    #[inline]
    pub fn width(self) -> f64 {
        if self.lo == self.hi {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    /// Whether `x` lies in the closed interval.
    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Probability mass `params` assigns to the interval.
    #[inline]
    pub fn mass(self, params: MixtureParams) -> f64 {
        params.cdf(self.hi) - params.cdf(self.lo)
    }
}

/// A discriminator: the indicator of a union of at most two disjoint
/// intervals, kept sorted left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminatorSet {
    intervals: Vec<Interval>,
}

impl DiscriminatorSet {
    /// Validates ordering and strict disjointness of at most two intervals.
    pub fn new(intervals: Vec<Interval>) -> Result<Self, Error> {
        if intervals.len() > 2 {
            return Err(Error::InvalidInterval(format!(
                "a discriminator holds at most two intervals, got {}",
                intervals.len()
            )));
        }
        if let [a, b] = intervals[..] {
            if a.hi() >= b.lo() {
                return Err(Error::InvalidInterval(format!(
                    "intervals [{}, {}] and [{}, {}] are not disjoint and sorted",
                    a.lo(),
                    a.hi(),
                    b.lo(),
                    b.hi()
                )));
            }
        }
        Ok(Self { intervals })
    }

    /// The empty discriminator (`D = 0` everywhere).
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    /// The intervals, sorted left to right.
    #[inline]
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Discriminator value at `x` (0 or 1).
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// Signed mass gap `target(D) - model(D)` summed over the intervals.
    pub fn mass_gap(&self, target: MixtureParams, model: MixtureParams) -> f64 {
        self.intervals
            .iter()
            .map(|iv| iv.mass(target) - iv.mass(model))
            .sum()
    }

    /// Endpoints in the `(l1, r1, l2, r2)` layout used by the loss module.
    /// Unused interval slots are filled with `(+inf, +inf)`, which carry no
    /// mass and no gradient.
    pub fn endpoints(&self) -> EndpointVector {
        let f = f64::INFINITY;
        match self.intervals[..] {
            [] => EndpointVector::new(f, f, f, f),
            [a] => EndpointVector::new(a.lo(), a.hi(), f, f),
            [a, b] => EndpointVector::new(a.lo(), a.hi(), b.lo(), b.hi()),
            _ => unreachable!("at most two intervals by construction"),
        }
    }
}

/// Sign of `F` on the open region between `left` and `right`, evaluated at a
/// representative interior point.
fn region_sign(target: MixtureParams, model: MixtureParams, left: f64, right: f64) -> f64 {
    let rep = if left.is_infinite() && right.is_infinite() {
        // No zeros at all: try a few points spread over the mean hull.
        let c = 0.25 * (target.mu1() + target.mu2() + model.mu1() + model.mu2());
        for x in [c, c + 0.37, c - 0.71, c + 1.13] {
            let v = diff_pdf(target, model, x);
            if v != 0.0 {
                return v;
            }
        }
        return 0.0;
    } else if left.is_infinite() {
        right - 1.0
    } else if right.is_infinite() {
        left + 1.0
    } else {
        0.5 * (left + right)
    };
    diff_pdf(target, model, rep)
}

/// The optimal discriminator for distinguishing `target` from `model`: the
/// closure of `{x : F(x) > 0}`, a union of at most two disjoint intervals.
///
/// The attained objective value is `1 + TV(target, model)`; pass the returned
/// endpoints to [`crate::loss::loss_value`] to evaluate it.
///
/// # Errors
///
/// [`Error::IdenticalParameters`] when `target == model` (every discriminator
/// is optimal; no canonical witness exists), or when the parameters agree so
/// closely that the difference density sits below the zero-scan's noise
/// floor ([`crate::gaussmix::DEGENERATE_DENSITY`]).
pub fn optimal_discriminator(
    target: MixtureParams,
    model: MixtureParams,
) -> Result<DiscriminatorSet, Error> {
    let zeros = find_zeros(target, model, DEFAULT_ZERO_TOL)?;

    let mut edges = Vec::with_capacity(zeros.len() + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(zeros.zeros());
    edges.push(f64::INFINITY);

    let mut intervals = Vec::new();
    let mut prev_sign = 0.0;
    for w in edges.windows(2) {
        let s = region_sign(target, model, w[0], w[1]);
        if prev_sign != 0.0 && s != 0.0 {
            assert!(
                (s > 0.0) != (prev_sign > 0.0),
                "signs of the difference density must alternate across zeros"
            );
        }
        prev_sign = s;
        if s > 0.0 {
            intervals.push(Interval::new(w[0], w[1]).expect("edges are sorted"));
        }
    }

    assert!(
        intervals.len() <= 2,
        "difference density admits at most two positive regions, found {}",
        intervals.len()
    );
    DiscriminatorSet::new(intervals)
}

/// Total-variation distance between two mixture generators, computed exactly
/// as the mass gap at the optimal discriminator. Returns 0 for identical
/// parameters, including pairs close enough that the difference density is
/// numerically unresolvable (true distance below `~2e-10` there).
pub fn tv_distance(a: MixtureParams, b: MixtureParams) -> f64 {
    if a == b {
        return 0.0;
    }
    match optimal_discriminator(a, b) {
        Ok(wit) => wit.mass_gap(a, b).max(0.0),
        Err(Error::IdenticalParameters) => 0.0,
        Err(e) => unreachable!("unexpected oracle failure: {e}"),
    }
}

/// Optimal discriminator for two *single* Gaussians `N(target, 1)` vs
/// `N(model, 1)`: the half-line bounded by their midpoint, on the target's
/// side.
///
/// # Errors
///
/// [`Error::IdenticalParameters`] when the means coincide;
/// [`Error::NotFinite`] when either mean is not finite.
pub fn single_gaussian_optimal(target: f64, model: f64) -> Result<Interval, Error> {
    if !target.is_finite() || !model.is_finite() {
        return Err(Error::NotFinite(target, model));
    }
    if target == model {
        return Err(Error::IdenticalParameters);
    }
    let mid = 0.5 * (target + model);
    if target > model {
        Interval::new(mid, f64::INFINITY)
    } else {
        Interval::new(f64::NEG_INFINITY, mid)
    }
}
