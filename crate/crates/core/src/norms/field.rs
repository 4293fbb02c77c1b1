use rayon::prelude::*;

use crate::coeff::{inverse_sqrt, operator_norm, HermitianMatrixField};
use crate::torus::TorusGrid;
use crate::{CMatrix, Error, Result};

/// Samples of `V(x) = ã(x)^{-1/2} (ã(x) - a) a^{-1/2}` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationField {
    grid: TorusGrid,
    samples: Vec<CMatrix>,
}

impl PerturbationField {
    pub fn new(grid: TorusGrid, samples: Vec<CMatrix>) -> Result<Self> {
        if samples.len() != grid.points() {
            return Err(Error::DimensionMismatch { expected: grid.points(), actual: samples.len() });
        }
        if samples.iter().flat_map(|m| m.iter()).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("perturbation field has non-finite entries".into()));
        }
        Ok(Self { grid, samples })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[CMatrix] {
        &self.samples
    }

    /// `‖V‖_p` on the grid, see [`lp_matrix_field_norm`].
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_matrix_field_norm(&self.samples, self.grid.cell_volume(), p)
    }
}

/// `(h^N Σ_x ‖V(x)‖^p)^{1/p}` with the operator norm at each point; the
/// maximum over the grid for `p = ∞`.
pub fn lp_matrix_field_norm(samples: &[CMatrix], cell_volume: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("exponent p must be >= 1, got {p}")));
    }
    let norms: Vec<f64> = samples.par_iter().map(operator_norm).collect();
    if p.is_infinite() {
        return Ok(norms.iter().copied().fold(0.0, f64::max));
    }
    let top = norms.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    // Scale by the largest value to avoid overflow for large p.
    let sum: f64 = norms.iter().map(|s| (s / top).powf(p)).sum();
    Ok(top * (cell_volume * sum).powf(1.0 / p))
}

/// Builds `V` from a constant `a` and a (possibly constant) `ã`.
///
/// Fails with [`Error::NonPositiveDefinite`] listing the points where `ã` is
/// not positive definite.
pub fn perturbation_v(
    a: &HermitianMatrixField,
    a_tilde: &HermitianMatrixField,
    grid: &TorusGrid,
) -> Result<PerturbationField> {
    let a_const = a
        .constant_matrix()
        .ok_or_else(|| Error::InvalidArgument("reference coefficients must be constant".into()))?;
    if a.nu() != a_tilde.nu() {
        return Err(Error::DimensionMismatch { expected: a.nu(), actual: a_tilde.nu() });
    }
    let points = grid.points();
    if let Some(count) = a_tilde.sample_count() {
        if count != points {
            return Err(Error::DimensionMismatch { expected: points, actual: count });
        }
    }
    let a_inv_half = inverse_sqrt(a_const)?;
    let at_inv_half = a_tilde.to_sampled(points).inverse_sqrt()?;
    let samples = (0..points)
        .into_par_iter()
        .map(|x| at_inv_half.at(x) * (a_tilde.at(x) - a_const) * &a_inv_half)
        .collect();
    PerturbationField::new(*grid, samples)
}
