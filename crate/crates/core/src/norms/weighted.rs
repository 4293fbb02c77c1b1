use serde::Serialize;
use statrs::function::beta::ln_beta;

use crate::profile::Profile;
use crate::{Error, Result};

use super::quadrature::integrate;

const MAX_INTERVALS: usize = 20_000;
const GROWTH_CAP: f64 = 1e200;

/// Exponent `p`, dimension `N` and half-order `m` of the weighted space
/// `L^p(R_+, t^{(N-2m)/(2m)} dt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNormSpec {
    p: f64,
    dim: usize,
    m: u32,
}

impl WeightedNormSpec {
    pub fn new(p: f64, dim: usize, m: u32) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidArgument(format!("exponent p must be finite and >= 1, got {p}")));
        }
        if dim == 0 || m == 0 {
            return Err(Error::InvalidArgument("dimension and half-order must be positive".into()));
        }
        Ok(Self { p, dim, m })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `w = (N - 2m) / (2m)`.
    pub fn weight_exponent(&self) -> f64 {
        (self.dim as f64 - 2.0 * self.m as f64) / (2.0 * self.m as f64)
    }

    /// `p > N/m`, the condition for the resolvent profile to lie in the space.
    pub fn threshold_met(&self) -> bool {
        self.p > self.dim as f64 / self.m as f64
    }
}

/// A weighted norm that is either finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GNorm {
    Finite(f64),
    Divergent,
}

impl Serialize for GNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GNorm::Finite(v) => s.serialize_f64(*v),
            GNorm::Divergent => s.serialize_str("divergent"),
        }
    }
}

impl GNorm {
    pub fn finite(self) -> Option<f64> {
        match self {
            GNorm::Finite(v) => Some(v),
            GNorm::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, GNorm::Divergent)
    }
}

/// `(∫₀^∞ |g(t)|^p t^w dt)^{1/p}` by adaptive quadrature after `t = s/(1-s)`.
///
/// `tol` is the relative tolerance on the integral. If `g` reports a tail
/// exponent `κ` (`|g(t)| ~ t^{-κ}`), divergence at infinity is decided
/// analytically. Otherwise a non-decaying `t·|g(t)|^p t^w` far out, an
/// exhausted quadrature budget or a value above the growth cap is reported
/// as [`GNorm::Divergent`].
pub fn weighted_g_norm(g: &dyn Profile, spec: &WeightedNormSpec, tol: f64) -> Result<GNorm> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (p, w) = (spec.p, spec.weight_exponent());
    if let Some(kappa) = g.tail_exponent() {
        if p * kappa - w - 1.0 <= 0.0 {
            return Ok(GNorm::Divergent);
        }
    }
    // |g(t)|^p t^w times a Jacobian, evaluated in log space so that the far
    // tail neither overflows nor produces 0 · ∞.
    let weighted = |t: f64, log_jacobian: f64| {
        let v = g.eval(t).abs();
        if v == 0.0 {
            0.0
        } else {
            (p * v.ln() + w * t.ln() + log_jacobian).exp()
        }
    };
    // Backstop for profiles without a tail exponent: t·|g(t)|^p t^w must
    // decay at infinity.
    let (near, far) = (1e30, 1e60);
    let tail = |t: f64| weighted(t, t.ln());
    if tail(far) >= tail(near) && tail(far) > 0.0 {
        return Ok(GNorm::Divergent);
    }
    // s in (0, 1/2]: t = s/(1-s), dt = ds/(1-s)^2.
    let lower = integrate(
        |s| weighted(s / (1.0 - s), -2.0 * (1.0 - s).ln()),
        0.0,
        0.5,
        0.0,
        tol,
        MAX_INTERVALS,
    )?;
    // s in [1/2, 1) written through u = 1 - s so that the endpoint keeps full
    // floating-point resolution: t = (1-u)/u, dt = du/u^2. The lower limit
    // keeps t finite; the neglected piece is below any useful tolerance.
    let upper = integrate(
        |u| weighted((1.0 - u) / u, -2.0 * u.ln()),
        f64::MIN_POSITIVE,
        0.5,
        0.0,
        tol,
        MAX_INTERVALS,
    )?;
    let total = lower.value + upper.value;
    if !(lower.converged && upper.converged) || total > GROWTH_CAP {
        return Ok(GNorm::Divergent);
    }
    Ok(GNorm::Finite(total.max(0.0).powf(1.0 / p)))
}

/// `Beta(p/2 + N/(2m), p/2 - N/(2m))^{1/p}` for `g(t) = √t/(1+t)`, or
/// [`GNorm::Divergent`] when `p ≤ N/m`.
pub fn closed_form_g_star(spec: &WeightedNormSpec) -> GNorm {
    if !spec.threshold_met() {
        return GNorm::Divergent;
    }
    let ratio = spec.dim as f64 / (2.0 * spec.m as f64);
    let (x, y) = (spec.p / 2.0 + ratio, spec.p / 2.0 - ratio);
    GNorm::Finite((ln_beta(x, y) / spec.p).exp())
}
