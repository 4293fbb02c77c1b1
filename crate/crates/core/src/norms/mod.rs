//! Weighted profile norms, `L^p` norms of matrix fields and the perturbation
//! field `V`.

mod field;
pub mod quadrature;
mod weighted;

pub use field::{lp_matrix_field_norm, perturbation_v, PerturbationField};
pub use weighted::{closed_form_g_star, weighted_g_norm, GNorm, WeightedNormSpec};
