//! The minimax loss and its exact derivatives.
//!
//! With a target mixture `T`, a model mixture `M` with raw (unsorted) means
//! `mu_hat = (m1, m2)`, and a discriminator given by endpoint vector
//! `d = (l1, r1, l2, r2)`, the loss is
//!
//! ```text
//! L(mu_hat, d) = 1 + sum_i [ T([l_i, r_i]) - M([l_i, r_i]) ]
//! ```
//!
//! i.e. `E_T[D] + E_M[1 - D]` for the indicator `D` of the two intervals.
//! The generator *descends* `L` in `mu_hat`; the discriminator *ascends* it
//! in `d`. All derivatives are closed-form Gaussian expressions:
//!
//! ```text
//! dL/dm_j  = 1/2 sum_i [ phi(m_j - r_i) - phi(m_j - l_i) ]
//! dL/dr_i  =  F(r_i)        dL/dl_i = -F(l_i)        F = T' - M' (densities)
//! ```
//!
//! Endpoints may be infinite; an unused interval slot is conventionally
//! `(+inf, +inf)`, which contributes no mass and no gradient. Endpoint
//! vectors are *not* required to be sorted or even non-inverted (`l > r`
//! yields a signed, negative mass), so gradient flow can move an interval
//! through zero width.
//!
//! The model means are everywhere treated as a raw ordered pair. Because
//! each mixture evaluation combines the two component terms with a single
//! commutative addition, every function here is exactly symmetric (bitwise)
//! under swapping `(m1, m2)`.

use crate::gaussmix::{normal_cdf, normal_pdf, xphi, MixtureParams};
use crate::Error;

/// Gaps smaller than this make the absolute-value loss sign undefined.
pub const ZERO_GAP_EPS: f64 = 1e-15;

/// The four discriminator endpoints `(l1, r1, l2, r2)`.
///
/// Extended reals are allowed and no ordering is imposed, neither between
/// intervals nor within one: dynamics must be able to represent inverted
/// intervals mid-flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointVector {
    l1: f64,
    r1: f64,
    l2: f64,
    r2: f64,
}

impl EndpointVector {
    /// Builds the endpoint vector `(l1, r1, l2, r2)`.
    #[inline]
    pub fn new(l1: f64, r1: f64, l2: f64, r2: f64) -> Self {
        Self { l1, r1, l2, r2 }
    }

    /// From `[l1, r1, l2, r2]`.
    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// As `[l1, r1, l2, r2]`.
    #[inline]
    pub fn as_array(self) -> [f64; 4] {
        [self.l1, self.r1, self.l2, self.r2]
    }

    #[inline]
    pub fn l1(self) -> f64 {
        self.l1
    }

    #[inline]
    pub fn r1(self) -> f64 {
        self.r1
    }

    #[inline]
    pub fn l2(self) -> f64 {
        self.l2
    }

    #[inline]
    pub fn r2(self) -> f64 {
        self.r2
    }

    /// Signed widths `[r1 - l1, r2 - l2]`; coincident endpoints (including
    /// the infinite padding of an empty slot) give exactly zero.
    #[inline]
    pub fn widths(self) -> [f64; 2] {
        let w = |l: f64, r: f64| if l == r { 0.0 } else { r - l };
        [w(self.l1, self.r1), w(self.l2, self.r2)]
    }
}

/// All first-order derivatives of the loss at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossGradients {
    /// `dL/dm_j` for the two model means.
    pub d_mu: [f64; 2],
    /// `dL/dl_i` for the two left endpoints.
    pub d_l: [f64; 2],
    /// `dL/dr_i` for the two right endpoints.
    pub d_r: [f64; 2],
}

impl LossGradients {
    /// Every component multiplied by `s`.
    #[inline]
    pub fn scaled(self, s: f64) -> Self {
        Self {
            d_mu: [s * self.d_mu[0], s * self.d_mu[1]],
            d_l: [s * self.d_l[0], s * self.d_l[1]],
            d_r: [s * self.d_r[0], s * self.d_r[1]],
        }
    }
}

/// Model-mixture CDF with raw means.
#[inline]
fn raw_mix_cdf(mu_hat: [f64; 2], x: f64) -> f64 {
    0.5 * normal_cdf(x - mu_hat[0]) + 0.5 * normal_cdf(x - mu_hat[1])
}

/// Difference density `F(x) = target(x) - model(x)` with raw model means.
#[inline]
fn raw_diff_pdf(target: MixtureParams, mu_hat: [f64; 2], x: f64) -> f64 {
    target.pdf(x) - (0.5 * normal_pdf(x - mu_hat[0]) + 0.5 * normal_pdf(x - mu_hat[1]))
}

/// `F'(x)` with raw model means (derivative of the difference density).
#[inline]
fn raw_diff_pdf_prime(target: MixtureParams, mu_hat: [f64; 2], x: f64) -> f64 {
    let t = 0.5 * (xphi(x - target.mu1()) + xphi(x - target.mu2()));
    let m = 0.5 * (xphi(x - mu_hat[0]) + xphi(x - mu_hat[1]));
    m - t
}

/// Loss value `L = 1 + sum_i [T([l_i, r_i]) - M([l_i, r_i])]`.
///
/// At the optimal discriminator this equals `1 + TV(target, model)`; at a
/// zero-width or empty interval the contribution is exactly zero.
pub fn loss_value(target: MixtureParams, mu_hat: [f64; 2], d: EndpointVector) -> f64 {
    let seg = |l: f64, r: f64| {
        if l == r {
            0.0
        } else {
            (target.cdf(r) - target.cdf(l)) - (raw_mix_cdf(mu_hat, r) - raw_mix_cdf(mu_hat, l))
        }
    };
    1.0 + seg(d.l1(), d.r1()) + seg(d.l2(), d.r2())
}

/// Gradient of the loss in the model means,
/// `dL/dm_j = 1/2 sum_i [phi(m_j - r_i) - phi(m_j - l_i)]`.
///
/// The target does not appear: the generator only feels the discriminator's
/// interval edges. For a zero-width interval (`l_i == r_i`, including the
/// `(+inf, +inf)` empty slot) the two terms cancel exactly, contributing a
/// bitwise zero.
pub fn grad_generator(mu_hat: [f64; 2], d: EndpointVector) -> [f64; 2] {
    let term = |m: f64| {
        0.5 * ((normal_pdf(m - d.r1()) - normal_pdf(m - d.l1()))
            + (normal_pdf(m - d.r2()) - normal_pdf(m - d.l2())))
    };
    [term(mu_hat[0]), term(mu_hat[1])]
}

/// Gradient of the loss in the endpoints: `(dL/dl, dL/dr)` with
/// `dL/dl_i = -F(l_i)` and `dL/dr_i = F(r_i)`.
///
/// The discriminator ascends, so a right endpoint moves right where the
/// target out-weighs the model, and a left endpoint moves left there.
/// Infinite endpoints have exactly zero gradient.
pub fn grad_discriminator(
    target: MixtureParams,
    mu_hat: [f64; 2],
    d: EndpointVector,
) -> ([f64; 2], [f64; 2]) {
    let f = |x: f64| raw_diff_pdf(target, mu_hat, x);
    (
        [-f(d.l1()), -f(d.l2())],
        [f(d.r1()), f(d.r2())],
    )
}

/// All first-order derivatives at once.
pub fn gradients(target: MixtureParams, mu_hat: [f64; 2], d: EndpointVector) -> LossGradients {
    let (d_l, d_r) = grad_discriminator(target, mu_hat, d);
    LossGradients {
        d_mu: grad_generator(mu_hat, d),
        d_l,
        d_r,
    }
}

/// Derivatives of the absolute-value loss `|L - 1|` (the absolute mass gap):
/// the plain loss gradients multiplied by `sign(L - 1)`.
///
/// # Errors
///
/// [`Error::ZeroGap`] when `|L - 1| < ZERO_GAP_EPS`, where the sign (and so
/// the subgradient selection) is undefined.
pub fn abs_gradients(
    target: MixtureParams,
    mu_hat: [f64; 2],
    d: EndpointVector,
) -> Result<LossGradients, Error> {
    let gap = loss_value(target, mu_hat, d) - 1.0;
    if gap.abs() < ZERO_GAP_EPS {
        return Err(Error::ZeroGap);
    }
    let s = if gap > 0.0 { 1.0 } else { -1.0 };
    Ok(gradients(target, mu_hat, d).scaled(s))
}

/// Ascent direction for the endpoint vector packed as `[gl1, gr1, gl2, gr2]`,
/// with rows of frozen intervals zeroed.
#[inline]
fn endpoint_ascent(
    target: MixtureParams,
    mu_hat: [f64; 2],
    d: [f64; 4],
    frozen: [bool; 2],
) -> [f64; 4] {
    let f = |x: f64| raw_diff_pdf(target, mu_hat, x);
    let mut g = [0.0; 4];
    if !frozen[0] {
        g[0] = -f(d[0]);
        g[1] = f(d[1]);
    }
    if !frozen[1] {
        g[2] = -f(d[2]);
        g[3] = f(d[3]);
    }
    g
}

/// Generator gradient unrolled through `k` discriminator ascent steps.
///
/// The unrolled objective is `L(mu_hat, d_k(mu_hat))` where `d_k` is produced
/// from `d0` by `k` gradient-ascent steps of size `eta_d`, each step itself a
/// function of `mu_hat`. The total derivative is accumulated forward:
/// the Jacobian `J_t = d d_t / d mu_hat` (4x2) obeys
///
/// ```text
/// J_{t+1} = J_t + eta_d * (H_dd(d_t) . J_t + H_dmu(d_t)),
/// ```
///
/// where `H_dd` is the (diagonal) second derivative of the ascent direction
/// in the endpoints and `H_dmu` its mixed second derivative, and the result
/// is `grad_generator(mu_hat, d_k) + J_k^T ascent(d_k)`.
///
/// `frozen` marks intervals held constant through the chain (their endpoints
/// do not move and their Jacobian rows stay zero); pass `[false, false]` for
/// the plain operation. With `k = 0` this returns [`grad_generator`] at `d0`
/// exactly.
pub fn unrolled_generator_grad(
    target: MixtureParams,
    mu_hat: [f64; 2],
    d0: EndpointVector,
    k: usize,
    eta_d: f64,
    frozen: [bool; 2],
) -> [f64; 2] {
    if k == 0 {
        return grad_generator(mu_hat, d0);
    }

    let mut d = d0.as_array();
    let mut jac = [[0.0f64; 2]; 4];

    for _ in 0..k {
        let g = endpoint_ascent(target, mu_hat, d, frozen);
        let mut jac_next = jac;
        for i in 0..2 {
            if frozen[i] {
                continue;
            }
            let (li, ri) = (2 * i, 2 * i + 1);
            // d(gl)/dl = -F'(l), d(gr)/dr = +F'(r)
            let hdd_l = -raw_diff_pdf_prime(target, mu_hat, d[li]);
            let hdd_r = raw_diff_pdf_prime(target, mu_hat, d[ri]);
            for j in 0..2 {
                // d(gl)/dm_j = +xphi(l - m_j)/2, d(gr)/dm_j = -xphi(r - m_j)/2
                let hmu_l = 0.5 * xphi(d[li] - mu_hat[j]);
                let hmu_r = -0.5 * xphi(d[ri] - mu_hat[j]);
                jac_next[li][j] = jac[li][j] + eta_d * (hdd_l * jac[li][j] + hmu_l);
                jac_next[ri][j] = jac[ri][j] + eta_d * (hdd_r * jac[ri][j] + hmu_r);
            }
        }
        jac = jac_next;
        for (x, gi) in d.iter_mut().zip(g) {
            *x += eta_d * gi;
        }
    }

    let dk = EndpointVector::from_array(d);
    let base = grad_generator(mu_hat, dk);
    let g_final = endpoint_ascent(target, mu_hat, d, frozen);
    let mut total = base;
    for (j, t) in total.iter_mut().enumerate() {
        for (row, gi) in jac.iter().zip(g_final) {
            *t += row[j] * gi;
        }
    }
    total
}

/// Lookahead variant of the unrolled gradient: advance the discriminator by
/// `k` ascent steps but differentiate only at the endpoint (no chain rule
/// through the ascent path). Cheaper, and a useful baseline for how much of
/// the unrolled signal comes from the Jacobian term.
pub fn lookahead_generator_grad(
    target: MixtureParams,
    mu_hat: [f64; 2],
    d0: EndpointVector,
    k: usize,
    eta_d: f64,
    frozen: [bool; 2],
) -> [f64; 2] {
    let mut d = d0.as_array();
    for _ in 0..k {
        let g = endpoint_ascent(target, mu_hat, d, frozen);
        for (x, gi) in d.iter_mut().zip(g) {
            *x += eta_d * gi;
        }
    }
    grad_generator(mu_hat, EndpointVector::from_array(d))
}
