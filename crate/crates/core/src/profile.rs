//! Scalar profiles `g: [0, ∞) → R` fed to the functional calculus `g(F)`.

use std::fmt;
use std::sync::Arc;

/// A bounded continuous function on `[0, ∞)` with `g(0) = 0`.
pub trait Profile: Send + Sync {
    fn eval(&self, t: f64) -> f64;

    /// Exponent `κ` with `g(t) ~ t^{-κ}` as `t → ∞`, when known analytically.
    /// Used to decide convergence of weighted norms without quadrature.
    fn tail_exponent(&self) -> Option<f64> {
        None
    }
}

/// `g(t) = t^{1/2} / (1 + t)`, so that `g(F) = F^{1/2}(F + 1)^{-1}`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ResolventProfile;

impl Profile for ResolventProfile {
    fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            t.sqrt() / (1.0 + t)
        }
    }

    fn tail_exponent(&self) -> Option<f64> {
        Some(0.5)
    }
}

/// Supremum of [`ResolventProfile`], attained at `t = 1`.
pub const RESOLVENT_PROFILE_SUP: f64 = 0.5;

/// Wraps a closure as a [`Profile`].
#[derive(Clone)]
pub struct FnProfile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    tail: Option<f64>,
}

impl FnProfile {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), tail: None }
    }

    pub fn with_tail_exponent(mut self, kappa: f64) -> Self {
        self.tail = Some(kappa);
        self
    }
}

impl fmt::Debug for FnProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnProfile").field("tail", &self.tail).finish_non_exhaustive()
    }
}

impl Profile for FnProfile {
    fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    fn tail_exponent(&self) -> Option<f64> {
        self.tail
    }
}
