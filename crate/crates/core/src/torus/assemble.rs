//! Assembly of `D_m`, `H`, `H̃ = D_m* ã D_m`, `T = b D_m` and `F = T T*`.
//!
//! `D^α` carries the full multiplier `(iξ)^α`. In every pairing `|γ| = |δ| = m`,
//! so the powers of `i` cancel in `H` and `F`.

use crate::coeff::{quadratic_symbol, symbol_b, symbol_lg, FieldKind, HermitianMatrixField};
use crate::multiindex::{monomial, MultiIndexBasis};
use crate::profile::Profile;
use crate::{CMatrix, Error, Result, C64};

use super::{GridFunction, LinearOperatorRep, TorusGrid};

fn check_basis(grid: &TorusGrid, basis: &MultiIndexBasis) -> Result<()> {
    if grid.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), actual: basis.dim() });
    }
    Ok(())
}

fn field_matrices(field: &HermitianMatrixField, grid: &TorusGrid) -> Result<Vec<CMatrix>> {
    match field.kind() {
        FieldKind::Constant(m) => Ok(vec![m.clone()]),
        FieldKind::Sampled(s) => {
            if s.len() != grid.points() {
                return Err(Error::DimensionMismatch { expected: grid.points(), actual: s.len() });
            }
            Ok(s.clone())
        }
    }
}

/// `D_m u = (D^α u)_α`: scalar functions to `ν`-channel functions.
pub fn spectral_derivative(grid: &TorusGrid, basis: &MultiIndexBasis) -> Result<LinearOperatorRep> {
    check_basis(grid, basis)?;
    let symbols = (0..grid.points())
        .map(|f| {
            let ixi: Vec<C64> = grid.frequency(f).into_iter().map(|x| C64::new(0.0, x)).collect();
            CMatrix::from_iterator(basis.nu(), 1, basis.entries().iter().map(|g| monomial(&ixi, g)))
        })
        .collect();
    LinearOperatorRep::fourier_multiplier(*grid, 1, basis.nu(), symbols)
}

/// Applies `D_m` to a scalar grid function.
pub fn spectral_derivative_apply(u: &GridFunction, basis: &MultiIndexBasis) -> Result<GridFunction> {
    spectral_derivative(u.grid(), basis)?.apply(u)
}

/// Constant-coefficient `H` as the Fourier multiplier `A(ξ) = ⟨a ξ^{(m)}, ξ^{(m)}⟩`.
pub fn assemble_h_const(a: &HermitianMatrixField, grid: &TorusGrid) -> Result<LinearOperatorRep> {
    let basis = a.basis();
    check_basis(grid, basis)?;
    let matrix = a
        .constant_matrix()
        .ok_or_else(|| Error::InvalidArgument("assemble_h_const needs a constant field".into()))?;
    a.check_positive_definite()?;
    let symbols = (0..grid.points())
        .map(|f| {
            let s = quadratic_symbol(matrix, basis, &grid.frequency(f))?;
            Ok(CMatrix::from_element(1, 1, C64::new(s, 0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    LinearOperatorRep::fourier_multiplier(*grid, 1, 1, symbols)
}

/// `H̃ u = D_m*(ã · D_m u)` with pointwise sampled coefficients.
pub fn assemble_h_var(a: &HermitianMatrixField, grid: &TorusGrid) -> Result<LinearOperatorRep> {
    let basis = a.basis();
    let d = spectral_derivative(grid, basis)?;
    let mats = field_matrices(a, grid)?;
    a.check_positive_definite()?;
    let nu = basis.nu();
    let coeff = LinearOperatorRep::pointwise(*grid, nu, nu, mats)?;
    d.then(&coeff)?.then(&d.adjoint())
}

/// `T = b D_m`, where `b` is the pointwise square root of the coefficients.
pub fn assemble_t(b: &HermitianMatrixField, grid: &TorusGrid) -> Result<LinearOperatorRep> {
    let basis = b.basis();
    let d = spectral_derivative(grid, basis)?;
    let nu = basis.nu();
    let mult = LinearOperatorRep::pointwise(*grid, nu, nu, field_matrices(b, grid)?)?;
    d.then(&mult)
}

/// `F = T T*` acting on `ν`-channel functions.
pub fn assemble_f(b: &HermitianMatrixField, grid: &TorusGrid) -> Result<LinearOperatorRep> {
    let t = assemble_t(b, grid)?;
    t.adjoint().then(&t)
}

/// Constant-coefficient `F` as the multiplier `B(ξ) ⊗ B(ξ)`.
pub fn assemble_f_symbol(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    grid: &TorusGrid,
) -> Result<LinearOperatorRep> {
    check_basis(grid, basis)?;
    let symbols = (0..grid.points())
        .map(|f| {
            let bv = symbol_b(b, basis, &grid.frequency(f))?;
            Ok(&bv * bv.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    LinearOperatorRep::fourier_multiplier(*grid, basis.nu(), basis.nu(), symbols)
}

/// Constant-coefficient `g(F)` as the multiplier `Lg(ξ)`.
pub fn profile_multiplier(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    grid: &TorusGrid,
    g: &dyn Profile,
) -> Result<LinearOperatorRep> {
    check_basis(grid, basis)?;
    let symbols = (0..grid.points())
        .map(|f| symbol_lg(b, basis, &grid.frequency(f), g))
        .collect::<Result<Vec<_>>>()?;
    LinearOperatorRep::fourier_multiplier(*grid, basis.nu(), basis.nu(), symbols)
}
