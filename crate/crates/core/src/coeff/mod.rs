//! Coefficient-matrix algebra and the Fourier-side symbol calculus.
//!
//! For a constant Hermitian positive definite `a` with square root `b`, the
//! operator `F = T T*` with `T = b D_m` is the Fourier multiplier
//! `B(ξ) ⊗ B(ξ)` where `B(ξ)_α = Σ_γ b_{αγ} ξ^γ`, and for any profile `g`
//! with `g(0) = 0` the multiplier of `g(F)` is the rank-one matrix
//! `Lg(ξ) = g(|B|²) |B|^{-2} B ⊗ B`.

mod coarea;
mod field;
mod matrix;
mod symbol;

pub use coarea::{
    coarea_constant, coarea_constant_from_volume, lattice_profile_integral, sublevel_volume,
    unit_ball_volume, CoareaConstant, VolumeEstimate, MC_STREAMS,
};
pub use field::{clip_coefficients, FieldKind, HermitianMatrixField};
pub use matrix::{
    clip_spectrum, hermitian_eigen, hermitian_map, hermiticity_residual, inverse_sqrt,
    matrix_sqrt, operator_norm, HERMITIAN_TOL,
};
pub use symbol::{
    evaluate_symbol, polyharmonic_coefficients, principal_symbol, quadratic_symbol, symbol_b,
    symbol_lg, SymbolEvaluation,
};
