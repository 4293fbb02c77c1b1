//! Resolvents, singular spectra and Schatten norms, plus numerical checks of
//! the operator identities behind the resolvent estimates.

mod bounds;
mod identities;
mod kernel;
mod resolvent;
mod spectrum;

pub use bounds::{remark_bound_check, schatten_bound_constant, BoundCheck};
pub use identities::{
    deift_residual, factorization_residual, polar_isometry_check, FactorizationCheck, PolarCheck,
    ZERO_DIFFERENCE_TOL,
};
pub use kernel::{kernel_of_gf, MatrixKernel};
pub use resolvent::{resolvent, resolvent_dense, ResolventDifference};
pub use spectrum::{schatten_norm, SingularSpectrum};
