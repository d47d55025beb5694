//! Two-component Gaussian mixtures and the signed difference density.
//!
//! A generator is the mixture `0.5 N(mu1, 1) + 0.5 N(mu2, 1)`. Every quantity
//! in this crate reduces to pointwise evaluations of such mixtures, their
//! CDFs, and the *difference density* `F(x) = target(x) - model(x)`, whose
//! sign structure determines the optimal discriminator. `F` is a linear
//! combination of four unit-variance Gaussians with coefficients
//! `(+1/2, +1/2, -1/2, -1/2)` and therefore has at most three real zeros,
//! all lying within the convex hull of the four means.

use crate::Error;

/// `1 / sqrt(2 pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Number of panels in the sign-scan used to bracket zeros of `F`.
const SCAN_PANELS: usize = 4096;

/// The scan window extends this far beyond the outermost mean. Beyond that
/// distance every Gaussian term is below `exp(-112.5) ~ 1.3e-49`, so no sign
/// structure of `F` outside the window is numerically distinguishable from
/// zero (nor can it carry probability mass above `~4e-51`).
const WINDOW_MARGIN: f64 = 15.0;

/// Any density the scan window cuts off must be below this bound; asserted at
/// the window boundaries as a self-check on window placement.
const BOUNDARY_NEGLIGIBLE: f64 = 1e-40;

/// Mixture pairs whose difference density stays below this absolute level
/// everywhere are treated as identical. The scan recurrence carries relative
/// drift up to `~3e-11` of the per-Gaussian magnitude (`~0.4` at a mean), so
/// below `1e-11` the computed sign pattern is round-off, not structure.
/// Collapsing such a pair to "identical" misstates its total variation
/// distance by at most `~2e-10` (half the window width times the level).
pub const DEGENERATE_DENSITY: f64 = 1e-11;

/// Default bisection tolerance for zero isolation.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// Standard normal density `phi(u)`.
#[inline]
pub fn normal_pdf(u: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * u * u).exp()
}

/// Standard normal CDF `Phi(u)`, accurate in both tails.
#[inline]
pub fn normal_cdf(u: f64) -> f64 {
    0.5 * libm::erfc(-u * std::f64::consts::FRAC_1_SQRT_2)
}

/// `u * phi(u)`, with the convention that infinite `u` yields exactly zero.
///
/// The product appears in every second-order term; evaluating it naively at
/// an infinite endpoint gives `inf * 0 = NaN`, while its true limit is zero.
#[inline]
pub fn xphi(u: f64) -> f64 {
    if u.is_infinite() {
        0.0
    } else {
        u * normal_pdf(u)
    }
}

/// Means of a two-component mixture `0.5 N(mu1,1) + 0.5 N(mu2,1)`, held in
/// canonical order `mu1 <= mu2`.
///
/// Construction sorts the pair and rejects non-finite means, so two parameter
/// values compare equal exactly when they denote the same distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    mu1: f64,
    mu2: f64,
}

impl MixtureParams {
    /// Canonicalizes `(a, b)` into a mixture parameter; order is irrelevant.
    pub fn new(a: f64, b: f64) -> Result<Self, Error> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NotFinite(a, b));
        }
        let (mu1, mu2) = if a <= b { (a, b) } else { (b, a) };
        Ok(Self { mu1, mu2 })
    }

    /// Smaller mean.
    #[inline]
    pub fn mu1(self) -> f64 {
        self.mu1
    }

    /// Larger mean.
    #[inline]
    pub fn mu2(self) -> f64 {
        self.mu2
    }

    /// Both means in canonical order.
    #[inline]
    pub fn means(self) -> [f64; 2] {
        [self.mu1, self.mu2]
    }

    /// `mu2 - mu1 >= 0`.
    #[inline]
    pub fn separation(self) -> f64 {
        self.mu2 - self.mu1
    }

    /// Mixture density at `x`.
    #[inline]
    pub fn pdf(self, x: f64) -> f64 {
        0.5 * normal_pdf(x - self.mu1) + 0.5 * normal_pdf(x - self.mu2)
    }

    /// Mixture CDF at `x` (extended reals map to 0 and 1).
    #[inline]
    pub fn cdf(self, x: f64) -> f64 {
        0.5 * normal_cdf(x - self.mu1) + 0.5 * normal_cdf(x - self.mu2)
    }
}

/// Mixture density of `params` at `x`. Free-function form of
/// [`MixtureParams::pdf`].
#[inline]
pub fn mixture_pdf(params: MixtureParams, x: f64) -> f64 {
    params.pdf(x)
}

/// Mixture CDF of `params` at `x`. Free-function form of
/// [`MixtureParams::cdf`].
#[inline]
pub fn mixture_cdf(params: MixtureParams, x: f64) -> f64 {
    params.cdf(x)
}

/// Difference density `F(x) = target(x) - model(x)`.
#[inline]
pub fn diff_pdf(target: MixtureParams, model: MixtureParams, x: f64) -> f64 {
    target.pdf(x) - model.pdf(x)
}

/// Zeros of the difference density, sorted ascending.
///
/// Each zero `z` is isolated to within `tol`: the enclosing bracket
/// `[z - tol, z + tol]` contains a sign change of `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    zeros: Vec<f64>,
    tol: f64,
}

impl ZeroSet {
    /// The zeros, ascending. At most three.
    #[inline]
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Isolation tolerance the zeros were bisected to.
    #[inline]
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of zeros found.
    #[inline]
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    /// True when `F` has no sign change in the scan window.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// Scan window `[lo, hi]` covering all four means plus [`WINDOW_MARGIN`].
fn scan_window(target: MixtureParams, model: MixtureParams) -> (f64, f64) {
    let lo = target.mu1().min(model.mu1()) - WINDOW_MARGIN;
    let hi = target.mu2().max(model.mu2()) + WINDOW_MARGIN;
    (lo, hi)
}

/// Adds `w * exp(-(x_k - m)^2 / 2)` to `f[k]` for the uniform grid
/// `x_k = lo + k h`.
///
/// The exponentials are produced by a multiplicative recurrence run outward
/// from the grid point nearest `m`: successive ratios of a Gaussian on a
/// uniform grid are `exp(-h (x - m) - h^2/2)`, themselves in geometric
/// progression with ratio `exp(-h^2)`. Two multiplications per point replace
/// one `exp` per point per mean. Running outward keeps both recurrences in
/// pure decay, so a tail underflow to zero is permanent and the loop can stop
/// early. Relative drift over a full sweep stays below ~1e-10, far finer than
/// the sign resolution the scan needs; brackets found here are refined by
/// bisection on directly evaluated `F`.
fn accumulate_gaussian(f: &mut [f64], lo: f64, h: f64, m: f64, w: f64) {
    let n = f.len();
    let k0 = (((m - lo) / h).round().max(0.0) as usize).min(n - 1);
    let x0 = lo + k0 as f64 * h;
    let u0 = x0 - m;
    let g0 = (-0.5 * u0 * u0).exp();
    let s = (-h * h).exp();
    f[k0] += w * g0;

    // Rightward: ratio d_k = exp(-h (x_k - m) - h^2/2).
    let mut g = g0;
    let mut d = (-h * u0 - 0.5 * h * h).exp();
    for slot in f.iter_mut().skip(k0 + 1) {
        g *= d;
        d *= s;
        if g == 0.0 {
            break;
        }
        *slot += w * g;
    }

    // Leftward: ratio e_k = exp(h (x_k - m) - h^2/2).
    let mut g = g0;
    let mut e = (h * u0 - 0.5 * h * h).exp();
    for slot in f[..k0].iter_mut().rev() {
        g *= e;
        e *= s;
        if g == 0.0 {
            break;
        }
        *slot += w * g;
    }
}

/// Evaluates `F / INV_SQRT_2PI` (i.e. with the `1/sqrt(2 pi)` factor pulled
/// out) on the scan grid. Accumulation order is fixed by the canonical mean
/// ordering inside each parameter, so the output is a deterministic function
/// of the two parameter values.
fn scan_diff(target: MixtureParams, model: MixtureParams, lo: f64, h: f64) -> Vec<f64> {
    let mut f = vec![0.0; SCAN_PANELS + 1];
    accumulate_gaussian(&mut f, lo, h, target.mu1(), 0.5);
    accumulate_gaussian(&mut f, lo, h, target.mu2(), 0.5);
    accumulate_gaussian(&mut f, lo, h, model.mu1(), -0.5);
    accumulate_gaussian(&mut f, lo, h, model.mu2(), -0.5);
    f
}

/// Bisects a sign-change bracket `[lo, hi]` of `F` down to width `tol`,
/// using direct (non-recurrence) evaluation. `f_lo_neg` is the sign of `F`
/// at the left edge.
fn bisect_zero(
    target: MixtureParams,
    model: MixtureParams,
    mut lo: f64,
    mut hi: f64,
    f_lo_neg: bool,
    tol: f64,
) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket narrower than float spacing
        }
        let fm = diff_pdf(target, model, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == f_lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locates the zeros of the difference density `F = target - model`.
///
/// `F` is scanned on a uniform grid over the window spanning all four means
/// plus a 15-unit margin on each side; each detected sign change is refined
/// by bisection until the bracket is narrower than `tol`. Grid points where
/// `F` evaluates to exactly zero are treated as part of the preceding sign
/// run, so a tangency that never crosses contributes no zero.
///
/// # Errors
///
/// [`Error::IdenticalParameters`] when `target == model`, and also when the
/// parameters are so close that the difference density never rises above
/// [`DEGENERATE_DENSITY`] in absolute value — at that level the scan sees
/// only rounding noise (hundreds of spurious sign flips), not signal, and
/// the mixtures are indistinguishable in `f64`.
///
/// # Panics
///
/// If more than three sign changes are detected on a resolved density
/// (impossible for a `(+,+,-,-)/2` combination of four unit Gaussians), or
/// if the density at a window boundary is not negligible (a
/// window-placement bug).
pub fn find_zeros(target: MixtureParams, model: MixtureParams, tol: f64) -> Result<ZeroSet, Error> {
    if target == model {
        return Err(Error::IdenticalParameters);
    }
    assert!(tol > 0.0 && tol.is_finite(), "tolerance must be positive and finite");

    let (lo, hi) = scan_window(target, model);
    let h = (hi - lo) / SCAN_PANELS as f64;
    let f = scan_diff(target, model, lo, h);

    let max_abs = f.iter().fold(0.0_f64, |m, &v| m.max(v.abs())) * INV_SQRT_2PI;
    if max_abs < DEGENERATE_DENSITY {
        return Err(Error::IdenticalParameters);
    }

    for boundary in [f[0], f[SCAN_PANELS]] {
        assert!(
            (boundary * INV_SQRT_2PI).abs() < BOUNDARY_NEGLIGIBLE,
            "difference density not negligible at the scan boundary"
        );
    }

    // Walk the grid tracking the last nonzero sign; a strict sign flip
    // brackets a zero between the flip point and the last nonzero point.
    let mut zeros = Vec::new();
    let mut last_sign = 0i8; // 0 until the first nonzero value
    let mut last_idx = 0usize;
    for (k, &v) in f.iter().enumerate() {
        let sign = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            continue;
        };
        if last_sign != 0 && sign != last_sign {
            let blo = lo + last_idx as f64 * h;
            let bhi = lo + k as f64 * h;
            zeros.push(bisect_zero(target, model, blo, bhi, last_sign < 0, tol));
        }
        last_sign = sign;
        last_idx = k;
    }

    assert!(
        zeros.len() <= 3,
        "difference density of two two-component mixtures admits at most 3 zeros; \
         found {} (parameters likely coincide below float resolution)",
        zeros.len()
    );
    Ok(ZeroSet { zeros, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL_FROZEN: f64 = 1e-15;

    fn mk(a: f64, b: f64) -> MixtureParams {
        MixtureParams::new(a, b).unwrap()
    }

    #[test]
    fn normal_pdf_matches_high_precision_values() {
        // Reference values computed with 50-digit arithmetic.
        assert!((normal_pdf(0.0) - 0.39894228040143268).abs() < TOL_FROZEN);
        assert!((normal_pdf(1.0) - 0.24197072451914335).abs() < TOL_FROZEN);
        assert!((normal_pdf(2.0) - 0.053990966513188052).abs() < TOL_FROZEN);
        assert_eq!(normal_pdf(f64::INFINITY), 0.0);
        assert_eq!(normal_pdf(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn normal_cdf_matches_high_precision_values() {
        assert!((normal_cdf(1.96) - 0.97500210485177957).abs() < TOL_FROZEN);
        assert!((normal_cdf(0.5) - 0.6914624612740131).abs() < TOL_FROZEN);
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_eq!(normal_cdf(f64::INFINITY), 1.0);
        assert_eq!(normal_cdf(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn xphi_is_zero_at_infinite_arguments() {
        assert_eq!(xphi(f64::INFINITY), 0.0);
        assert_eq!(xphi(f64::NEG_INFINITY), 0.0);
        assert!((xphi(1.0) - 0.24197072451914335).abs() < TOL_FROZEN);
        assert!((xphi(-1.0) + 0.24197072451914335).abs() < TOL_FROZEN);
    }

    #[test]
    fn params_canonicalize_and_reject_nonfinite() {
        let p = mk(2.0, -1.0);
        assert_eq!(p.means(), [-1.0, 2.0]);
        assert_eq!(p.separation(), 3.0);
        assert_eq!(mk(-1.0, 2.0), p);
        assert!(matches!(
            MixtureParams::new(f64::NAN, 0.0),
            Err(Error::NotFinite(_, _))
        ));
        assert!(matches!(
            MixtureParams::new(0.0, f64::INFINITY),
            Err(Error::NotFinite(_, _))
        ));
    }

    #[test]
    fn mixture_pdf_at_shared_symmetry_point() {
        // Both mixtures are symmetric about 0, so F(0) reduces to
        // phi(1) - phi(2); frozen from the 50-digit oracle.
        let t = mk(-1.0, 1.0);
        let m = mk(-2.0, 2.0);
        assert!((diff_pdf(t, m, 0.0) - 0.1879797580059553).abs() < TOL_FROZEN);
        assert!((mixture_pdf(t, 0.0) - normal_pdf(1.0)).abs() < TOL_FROZEN);
        assert!((mixture_cdf(t, 0.0) - 0.5).abs() < TOL_FROZEN);
    }

    #[test]
    fn find_zeros_symmetric_pair_is_antisymmetric() {
        // (-1,1) vs (-2,2): F is even, positive at 0, negative in the tails;
        // exactly two zeros at +/- z with z frozen from the oracle.
        let zs = find_zeros(mk(-1.0, 1.0), mk(-2.0, 2.0), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(zs.len(), 2);
        let z = 1.542616935899805;
        assert!((zs.zeros()[0] + z).abs() < 1e-11);
        assert!((zs.zeros()[1] - z).abs() < 1e-11);
    }

    #[test]
    fn find_zeros_nested_pair() {
        // (-2,2) vs (-0.3,0.3): target mass in the tails, model in the
        // middle; two zeros at +/- 1.3625914998483181 (oracle).
        let zs = find_zeros(mk(-2.0, 2.0), mk(-0.3, 0.3), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(zs.len(), 2);
        assert!((zs.zeros()[1] - 1.3625914998483181).abs() < 1e-11);
        assert!((zs.zeros()[0] + 1.3625914998483181).abs() < 1e-11);
    }

    #[test]
    fn find_zeros_identical_parameters_is_an_error() {
        assert_eq!(
            find_zeros(mk(0.0, 1.0), mk(1.0, 0.0), DEFAULT_ZERO_TOL),
            Err(Error::IdenticalParameters)
        );
    }

    #[test]
    fn find_zeros_treats_unresolvable_closeness_as_identical() {
        // Means agree to 1e-15: the difference density peaks around 4e-16,
        // far below the scan's round-off floor. Must not be mistaken for
        // sign structure.
        assert_eq!(
            find_zeros(mk(0.0, 1.0), mk(0.0, 1.0 + 1e-15), DEFAULT_ZERO_TOL),
            Err(Error::IdenticalParameters)
        );
        // At 1e-9 apart the density (~4e-10) is resolved again.
        assert!(find_zeros(mk(0.0, 1.0), mk(0.0, 1.0 + 1e-9), DEFAULT_ZERO_TOL).is_ok());
    }

    #[test]
    fn find_zeros_single_crossing_for_shifted_pair() {
        // Target strictly to the right of the model: one crossing.
        let zs = find_zeros(mk(3.0, 5.0), mk(-5.0, -3.0), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(zs.len(), 1);
        assert!((zs.zeros()[0]).abs() < 1e-9); // symmetric about 0
    }

    #[test]
    fn scan_recurrence_matches_direct_evaluation() {
        // Per-Gaussian relative drift: no cancellation, so relative error is
        // meaningful down to near-subnormal magnitudes.
        let (lo, hi) = (-16.4, 17.2);
        let h = (hi - lo) / SCAN_PANELS as f64;
        for mean in [-1.3, -0.4, 0.9, 2.2, lo + 0.123, hi - 0.456] {
            let mut f = vec![0.0; SCAN_PANELS + 1];
            accumulate_gaussian(&mut f, lo, h, mean, 1.0);
            let mut worst = 0.0f64;
            for (k, &v) in f.iter().enumerate() {
                let u = lo + k as f64 * h - mean;
                let direct = (-0.5 * u * u).exp();
                if direct > 1e-290 {
                    worst = worst.max((v - direct).abs() / direct);
                }
            }
            assert!(worst < 1e-10, "recurrence drift {worst:e} at mean {mean}");
        }

        // Summed difference: absolute agreement on the density scale.
        let t = mk(-1.3, 0.9);
        let m = mk(-0.4, 2.2);
        let (lo, hi) = scan_window(t, m);
        let h = (hi - lo) / SCAN_PANELS as f64;
        let f = scan_diff(t, m, lo, h);
        let mut worst = 0.0f64;
        for (k, &v) in f.iter().enumerate() {
            let x = lo + k as f64 * h;
            let direct = diff_pdf(t, m, x) / INV_SQRT_2PI;
            worst = worst.max((v - direct).abs());
        }
        assert!(worst < 1e-12, "summed drift {worst:e} too large");
    }

    proptest! {
        #[test]
        fn zeros_are_sorted_sign_changes(
            t1 in -5.0..5.0f64, t2 in -5.0..5.0f64,
            m1 in -5.0..5.0f64, m2 in -5.0..5.0f64,
        ) {
            let t = mk(t1, t2);
            let m = mk(m1, m2);
            prop_assume!(t != m);
            let zs = find_zeros(t, m, DEFAULT_ZERO_TOL).unwrap();
            prop_assert!(zs.len() <= 3);
            for w in zs.zeros().windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for &z in zs.zeros() {
                let a = diff_pdf(t, m, z - 2.0 * zs.tol());
                let b = diff_pdf(t, m, z + 2.0 * zs.tol());
                // A sign change within the widened bracket.
                prop_assert!(
                    a * b <= 0.0 || a.abs().min(b.abs()) < 1e-15,
                    "no sign change around z={z}: F={a:e},{b:e}"
                );
            }
        }

        #[test]
        fn cdf_is_monotone_and_matches_pdf(
            a in -5.0..5.0f64, b in -5.0..5.0f64, x in -8.0..8.0f64,
        ) {
            let p = mk(a, b);
            let h = 1e-5;
            let fd = (p.cdf(x + h) - p.cdf(x - h)) / (2.0 * h);
            prop_assert!((fd - p.pdf(x)).abs() < 1e-7);
            prop_assert!(p.cdf(x + 0.1) >= p.cdf(x));
        }

        #[test]
        fn pdf_integrates_to_one(a in -4.0..4.0f64, b in -4.0..4.0f64) {
            let p = mk(a, b);
            // Simpson's rule over [min-12, max+12], 4096 panels.
            let lo = p.mu1() - 12.0;
            let hi = p.mu2() + 12.0;
            let n = 4096;
            let h = (hi - lo) / n as f64;
            let mut s = p.pdf(lo) + p.pdf(hi);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                s += w * p.pdf(lo + k as f64 * h);
            }
            prop_assert!((s * h / 3.0 - 1.0).abs() < 1e-9);
        }
    }
}
