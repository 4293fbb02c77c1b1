use crate::multiindex::{factorial, MultiIndexBasis};
use crate::profile::Profile;
use crate::{CMatrix, CVector, Error, Result, C64};

/// One evaluation of the symbol calculus at a frequency `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolEvaluation {
    pub xi: Vec<f64>,
    /// `B(ξ)_α = Σ_γ b_{αγ} ξ^γ`.
    pub b: CVector,
    /// `A(ξ) = |B(ξ)|²`.
    pub a: f64,
    /// `Lg(ξ)`, present when a profile was supplied.
    pub lg: Option<CMatrix>,
}

/// Diagonal `m!/α!`; by the multinomial theorem its symbol is `|ξ|^{2m}`.
pub fn polyharmonic_coefficients(basis: &MultiIndexBasis) -> CMatrix {
    let mfact = factorial(basis.half_order());
    let nu = basis.nu();
    let mut out = CMatrix::zeros(nu, nu);
    for (i, alpha) in basis.entries().iter().enumerate() {
        out[(i, i)] = C64::new(mfact / alpha.factorial(), 0.0);
    }
    out
}

fn check_inputs(b: &CMatrix, basis: &MultiIndexBasis, xi: &[f64]) -> Result<()> {
    let nu = basis.nu();
    if b.nrows() != nu || b.ncols() != nu {
        return Err(Error::DimensionMismatch { expected: nu, actual: b.nrows().max(b.ncols()) });
    }
    if xi.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), actual: xi.len() });
    }
    Ok(())
}

fn monomial_vector(basis: &MultiIndexBasis, xi: &[f64]) -> CVector {
    let mono = basis.monomials(xi);
    CVector::from_iterator(mono.len(), mono.into_iter().map(|v| C64::new(v, 0.0)))
}

/// `B(ξ) = b ξ^{(m)}`.
pub fn symbol_b(b: &CMatrix, basis: &MultiIndexBasis, xi: &[f64]) -> Result<CVector> {
    check_inputs(b, basis, xi)?;
    Ok(b * monomial_vector(basis, xi))
}

/// `A(ξ) = |B(ξ)|²`, the symbol of `H` with coefficients `b²`.
pub fn principal_symbol(b: &CMatrix, basis: &MultiIndexBasis, xi: &[f64]) -> Result<f64> {
    Ok(symbol_b(b, basis, xi)?.norm_squared())
}

/// `⟨a ξ^{(m)}, ξ^{(m)}⟩`, the symbol of `D_m* a D_m` computed from `a` itself.
pub fn quadratic_symbol(a: &CMatrix, basis: &MultiIndexBasis, xi: &[f64]) -> Result<f64> {
    check_inputs(a, basis, xi)?;
    let v = monomial_vector(basis, xi);
    Ok(v.dotc(&(a * &v)).re)
}

/// `Lg(ξ) = g(A) A^{-1} B ⊗ B`; zero at `A = 0` since `g(0) = 0`.
pub fn symbol_lg(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    xi: &[f64],
    g: &dyn Profile,
) -> Result<CMatrix> {
    let bv = symbol_b(b, basis, xi)?;
    Ok(lg_from_b(&bv, g))
}

pub(crate) fn lg_from_b(bv: &CVector, g: &dyn Profile) -> CMatrix {
    let a = bv.norm_squared();
    if a == 0.0 {
        return CMatrix::zeros(bv.len(), bv.len());
    }
    (bv * bv.adjoint()).scale(g.eval(a) / a)
}

pub fn evaluate_symbol(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    xi: &[f64],
    g: Option<&dyn Profile>,
) -> Result<SymbolEvaluation> {
    let bv = symbol_b(b, basis, xi)?;
    let a = bv.norm_squared();
    let lg = g.map(|g| lg_from_b(&bv, g));
    Ok(SymbolEvaluation { xi: xi.to_vec(), b: bv, a, lg })
}
