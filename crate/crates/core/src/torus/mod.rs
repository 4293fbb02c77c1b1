//! Spectral discretization on the periodic box `[-L/2, L/2)^N`.
//!
//! Functions are sampled at `n` points per axis; vector-valued functions are
//! stored channel-major (`index = channel · n^N + point`). All adjoints and
//! norms use the discrete inner product `⟨u, v⟩ = h^N Σ_x u(x) conj(v(x))`.
//! Because that weight is a uniform scalar, the matrix of an adjoint is the
//! conjugate transpose and singular values of dense matrices are those of the
//! operators.

mod assemble;
mod fft;
mod grid;
mod operator;

pub use assemble::{
    assemble_f, assemble_f_symbol, assemble_h_const, assemble_h_var, assemble_t,
    profile_multiplier, spectral_derivative, spectral_derivative_apply,
};
pub use fft::GridFft;
pub use grid::{GridFunction, TorusGrid};
pub use operator::{LinearOperatorRep, DEFAULT_DIMENSION_CAP};
