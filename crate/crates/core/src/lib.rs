//! Schatten-class estimates for the resolvent difference of two self-adjoint
//! elliptic operators of order `2m`, one of them with constant coefficients.
//!
//! The continuum operators
//!
//! ```text
//! H u = (-1)^m Σ_{|α|=|β|=m} D^α (a_{αβ} D^β u)
//! ```
//!
//! are discretized spectrally on a periodic box. On the grid every identity
//! used in the estimates is an exact finite-dimensional statement, so the crate
//! checks them to rounding error, and checks the inequalities against
//! constants derived from the continuum symbol calculus.
//!
//! Module map:
//!
//! - [`multiindex`]: multi-indices of length `m` and monomials `ξ^γ`.
//! - [`coeff`]: Hermitian matrix functions, coefficient fields, the symbols
//!   `B(ξ)`, `A(ξ)`, `Lg(ξ)` and the coarea constant.
//! - [`torus`]: the periodic grid, FFT pipelines and assembly of `D_m`, `H`,
//!   `H̃`, `T` and `F = T T*`.
//! - [`schatten`]: resolvents, singular spectra, Schatten norms and the
//!   operator identities.
//! - [`norms`]: the weighted profile norm `‖g‖_p^*`, `L^p` norms of matrix
//!   fields and the perturbation field `V = ã^{-1/2}(ã - a)a^{-1/2}`.
//! - [`harness`]: experiment configs, studies, reports and the CLI.

pub mod coeff;
pub mod error;
pub mod harness;
pub mod multiindex;
pub mod norms;
pub mod profile;
pub mod schatten;
pub mod torus;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
