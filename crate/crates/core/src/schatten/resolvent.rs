use nalgebra::Cholesky;

use crate::torus::LinearOperatorRep;
use crate::{CMatrix, Error, Result};

/// `(A + I)^{-1}` for a Hermitian positive semi-definite dense `A`.
///
/// Cholesky inverse followed by one step of iterative refinement, then
/// symmetrized.
pub fn resolvent_dense(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), actual: a.ncols() });
    }
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let shifted = a + &id;
    let sym = (&shifted + shifted.adjoint()).scale(0.5);
    let r = match Cholesky::new(sym.clone()) {
        Some(ch) => ch.inverse(),
        None => sym
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Solver("shifted operator is singular".into()))?,
    };
    let residual = &id - &sym * &r;
    let refined = &r + &r * residual;
    Ok((&refined + refined.adjoint()).scale(0.5))
}

/// Dense resolvent `(op + I)^{-1}` of a self-adjoint non-negative operator.
pub fn resolvent(op: &LinearOperatorRep, cap: usize) -> Result<CMatrix> {
    resolvent_dense(&op.materialize(cap)?)
}

/// `(H̃ + I)^{-1} - (H + I)^{-1}` together with both resolvents.
#[derive(Debug, Clone)]
pub struct ResolventDifference {
    pub reference: CMatrix,
    pub perturbed: CMatrix,
    pub delta: CMatrix,
}

impl ResolventDifference {
    pub fn compute(h: &LinearOperatorRep, h_tilde: &LinearOperatorRep, cap: usize) -> Result<Self> {
        let reference = resolvent(h, cap)?;
        let perturbed = resolvent(h_tilde, cap)?;
        if reference.shape() != perturbed.shape() {
            return Err(Error::DimensionMismatch { expected: reference.nrows(), actual: perturbed.nrows() });
        }
        let delta = &perturbed - &reference;
        Ok(Self { reference, perturbed, delta })
    }
}
