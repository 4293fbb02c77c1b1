use crate::norms::GNorm;
use crate::CMatrix;

use super::identities::ZERO_DIFFERENCE_TOL;
use super::spectrum::SingularSpectrum;

/// One instance of an inequality `lhs ≤ constant · rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    /// `lhs / (constant · rhs)`; zero when `rhs = 0` and `lhs` is below
    /// [`ZERO_DIFFERENCE_TOL`], infinite when `rhs = 0` otherwise.
    pub ratio: f64,
}

impl BoundCheck {
    pub fn new(lhs: f64, rhs: f64, constant: f64) -> Self {
        let denom = constant * rhs;
        let ratio = if denom > 0.0 {
            lhs / denom
        } else if lhs <= ZERO_DIFFERENCE_TOL {
            0.0
        } else {
            f64::INFINITY
        };
        Self { lhs, rhs, constant, ratio }
    }

    pub fn holds_within(&self, slack: f64) -> bool {
        self.ratio <= slack
    }
}

/// `(1/2) c_cov^{1/p} ‖g‖_p^*`, the constant in
/// `‖(H̃+I)^{-1} - (H+I)^{-1}‖_{C^p} ≤ C ‖V‖_p`; divergent with `‖g‖_p^*`.
pub fn schatten_bound_constant(c_cov: f64, g_star: GNorm, p: f64) -> GNorm {
    match g_star {
        GNorm::Finite(g) => GNorm::Finite(0.5 * c_cov.powf(1.0 / p) * g),
        GNorm::Divergent => GNorm::Divergent,
    }
}

/// `‖(H̃+I)^{-1} - (H+I)^{-1}‖ ≤ ¼ ‖ã^{-1/2}(ã - a)a^{-1/2}‖_∞`.
pub fn remark_bound_check(delta: &CMatrix, v_sup: f64) -> BoundCheck {
    BoundCheck::new(SingularSpectrum::of(delta).largest(), v_sup, 0.25)
}
