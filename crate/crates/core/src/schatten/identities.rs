//! The identity `(S*S + 1)^{-1} + S*(SS* + 1)^{-1}S = I`, the factorized
//! resolvent difference and the polar decomposition `a^{1/2} D_m = F^{1/2} U`.

use nalgebra::Cholesky;

use crate::coeff::{hermitian_map, inverse_sqrt, HermitianMatrixField};
use crate::torus::{assemble_f, assemble_t, LinearOperatorRep, TorusGrid};
use crate::{CMatrix, Error, Result};

use super::resolvent::resolvent_dense;
use super::spectrum::SingularSpectrum;

/// Below this operator norm the direct resolvent difference counts as zero
/// and [`factorization_residual`] reports an absolute residual.
pub const ZERO_DIFFERENCE_TOL: f64 = 1e-12;

/// `‖(S*S + I)^{-1} + S*(SS* + I)^{-1} S - I‖` in operator norm.
pub fn deift_residual(s: &CMatrix) -> Result<f64> {
    let cols = s.ncols();
    let sa = s.adjoint();
    let left = resolvent_dense(&(&sa * s))?;
    let right = &sa * resolvent_dense(&(s * &sa))? * s;
    let total = left + right - CMatrix::identity(cols, cols);
    Ok(SingularSpectrum::of(&total).largest())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCheck {
    /// `‖Δ₁ - Δ₂‖ / ‖Δ₁‖`, or `‖Δ₁ - Δ₂‖` when `relative` is false.
    pub residual: f64,
    pub relative: bool,
    /// `‖Δ₁‖` in operator norm.
    pub delta_norm: f64,
}

fn shifted_cholesky(op: &LinearOperatorRep, cap: usize) -> Result<Cholesky<crate::C64, nalgebra::Dyn>> {
    let dense = op.materialize(cap)?;
    let n = dense.nrows();
    let shifted = &dense + CMatrix::identity(n, n);
    let sym = (&shifted + shifted.adjoint()).scale(0.5);
    Cholesky::new(sym).ok_or_else(|| Error::Solver("F + I is not positive definite".into()))
}

fn solve_refined(ch: &Cholesky<crate::C64, nalgebra::Dyn>, op: &CMatrix, rhs: &CMatrix) -> CMatrix {
    let x = ch.solve(rhs);
    let r = rhs - (op * &x + &x);
    x + ch.solve(&r)
}

/// Compares the direct difference `Δ₁ = (H̃+I)^{-1} - (H+I)^{-1}` against the
/// coefficient-side chain
///
/// ```text
/// Δ₂ = D* ã^{1/2} (F̃+I)^{-1} ã^{-1/2} (a - ã) a^{-1/2} (F+I)^{-1} a^{1/2} D.
/// ```
pub fn factorization_residual(
    a: &HermitianMatrixField,
    a_tilde: &HermitianMatrixField,
    grid: &TorusGrid,
    direct: &CMatrix,
    cap: usize,
) -> Result<FactorizationCheck> {
    let a_const = a
        .constant_matrix()
        .ok_or_else(|| Error::InvalidArgument("reference coefficients must be constant".into()))?;
    let m = grid.points();
    let nu = a.nu();
    let b = a.sqrt()?;
    let b_tilde = a_tilde.sqrt()?;
    let a_inv_half = inverse_sqrt(a_const)?;

    let f_op = assemble_f(&b, grid)?;
    let f_tilde_op = assemble_f(&b_tilde, grid)?;
    let f_dense = f_op.materialize(cap)?;
    let f_tilde_dense = f_tilde_op.materialize(cap)?;
    let f_chol = shifted_cholesky(&f_op, cap)?;
    let f_tilde_chol = shifted_cholesky(&f_tilde_op, cap)?;

    // a^{1/2} D, then (F + I)^{-1}
    let x = assemble_t(&b, grid)?.materialize(cap)?;
    let y = solve_refined(&f_chol, &f_dense, &x);

    // ã^{-1/2} (a - ã) a^{-1/2}, pointwise
    let inner: Vec<CMatrix> = (0..m)
        .map(|p| {
            let at = a_tilde.at(p);
            Ok(inverse_sqrt(at)? * (a_const - at) * &a_inv_half)
        })
        .collect::<Result<_>>()?;
    let w = LinearOperatorRep::pointwise(*grid, nu, nu, inner)?.apply_columns(&y)?;

    // (F̃ + I)^{-1}, then D* ã^{1/2}
    let z = solve_refined(&f_tilde_chol, &f_tilde_dense, &w);
    let chain = assemble_t(&b_tilde, grid)?.adjoint().apply_columns(&z)?;

    if chain.shape() != direct.shape() {
        return Err(Error::DimensionMismatch { expected: direct.nrows(), actual: chain.nrows() });
    }
    let delta_norm = SingularSpectrum::of(direct).largest();
    let diff = SingularSpectrum::of(&(direct - &chain)).largest();
    Ok(if delta_norm < ZERO_DIFFERENCE_TOL {
        FactorizationCheck { residual: diff, relative: false, delta_norm }
    } else {
        FactorizationCheck { residual: diff / delta_norm, relative: true, delta_norm }
    })
}

#[derive(Debug, Clone)]
pub struct PolarCheck {
    /// The partial isometry `U` (`ν n^N × n^N`).
    pub isometry: CMatrix,
    /// `F^{1/2}` from the eigendecomposition of `F`.
    pub f_sqrt: CMatrix,
    /// `‖a^{1/2} D_m - F^{1/2} U‖`.
    pub factor_residual: f64,
    /// `‖U U* U - U‖`.
    pub partial_isometry_residual: f64,
    pub rank: usize,
}

/// Builds `U` from the SVD of `S = a^{1/2} D_m`, keeping only the nonzero
/// singular directions, and checks `S = F^{1/2} U`.
pub fn polar_isometry_check(
    a: &HermitianMatrixField,
    grid: &TorusGrid,
    cap: usize,
) -> Result<PolarCheck> {
    let b = a.sqrt()?;
    let s = assemble_t(&b, grid)?.materialize(cap)?;
    let svd = s.clone().svd(true, true);
    let (u, v_t) = match (&svd.u, &svd.v_t) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::Solver("SVD did not return singular vectors".into())),
    };
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = top * 1e-10;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cutoff)
        .collect();
    let mut isometry = CMatrix::zeros(s.nrows(), s.ncols());
    for &i in &keep {
        isometry += u.column(i) * v_t.row(i);
    }

    let f = assemble_f(&b, grid)?.materialize(cap)?;
    let f_sqrt = hermitian_map(&f, |l| l.max(0.0).sqrt());
    let factor_residual = SingularSpectrum::of(&(&s - &f_sqrt * &isometry)).largest();
    let uu = &isometry * isometry.adjoint() * &isometry;
    let partial_isometry_residual = SingularSpectrum::of(&(uu - &isometry)).largest();
    Ok(PolarCheck { isometry, f_sqrt, factor_residual, partial_isometry_residual, rank: keep.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{hermitian_eigen, hermiticity_residual};
    use crate::multiindex::enumerate_basis;
    use crate::schatten::ResolventDifference;
    use crate::testutil::{random_matrix, random_vector};
    use crate::torus::{assemble_h_const, assemble_h_var, DEFAULT_DIMENSION_CAP};
    use crate::{CVector, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const CAP: usize = DEFAULT_DIMENSION_CAP;

    #[test]
    fn deift_trivial_cases() {
        let one = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        assert!(deift_residual(&one).unwrap() < 1e-15);
        assert!(deift_residual(&CMatrix::zeros(3, 4)).unwrap() < 1e-15);
    }

    #[test]
    fn deift_random_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let r = rng.random_range(1..=20);
            let c = rng.random_range(1..=20);
            let s = random_matrix(&mut rng, r, c).scale(rng.random_range(0.1..3.0));
            assert!(deift_residual(&s).unwrap() < 1e-12);
        }
    }

    fn bump_field(dim: usize, m: u32, grid: &TorusGrid, amp: f64) -> (HermitianMatrixField, HermitianMatrixField) {
        let basis = enumerate_basis(dim, m).unwrap();
        let a = HermitianMatrixField::polyharmonic(basis.clone());
        let base = a.constant_matrix().unwrap().clone();
        let samples = (0..grid.points())
            .map(|p| {
                let r2: f64 = grid.coordinates(p).iter().map(|v| v * v).sum();
                let w = if r2 < 1.0 { (1.0 - 1.0 / (1.0 - r2)).exp() } else { 0.0 };
                base.scale(1.0 + amp * w)
            })
            .collect();
        (a, HermitianMatrixField::sampled(basis, samples).unwrap())
    }

    fn factorization(dim: usize, m: u32, n: usize, length: f64, amp: f64) -> FactorizationCheck {
        let grid = TorusGrid::new(dim, n, length).unwrap();
        let (a, at) = bump_field(dim, m, &grid, amp);
        let h = assemble_h_const(&a, &grid).unwrap();
        let ht = assemble_h_var(&at, &grid).unwrap();
        let diff = ResolventDifference::compute(&h, &ht, CAP).unwrap();
        factorization_residual(&a, &at, &grid, &diff.delta, CAP).unwrap()
    }

    #[test]
    fn factorization_trivial_when_unperturbed() {
        let check = factorization(1, 1, 32, 8.0, 0.0);
        assert!(!check.relative);
        assert!(check.residual < 1e-12, "{check:?}");
    }

    #[test]
    fn factorization_holds_for_bump() {
        let check = factorization(1, 1, 64, 16.0, 1.0);
        assert!(check.relative && check.residual < 1e-10, "{check:?}");
        let check = factorization(2, 1, 16, 12.0, 1.0);
        assert!(check.relative && check.residual < 1e-9, "{check:?}");
    }

    #[test]
    fn factorization_invariant_under_translation() {
        let grid = TorusGrid::new(1, 32, 8.0).unwrap();
        let basis = enumerate_basis(1, 1).unwrap();
        let a = HermitianMatrixField::polyharmonic(basis.clone());
        let make = |shift: usize| {
            let samples = (0..32)
                .map(|p| {
                    let q = (p + 32 - shift) % 32;
                    let x = grid.coordinates(q)[0];
                    CMatrix::from_element(1, 1, C64::new(1.0 + 0.8 * (-4.0 * x * x).exp(), 0.0))
                })
                .collect();
            let at = HermitianMatrixField::sampled(basis.clone(), samples).unwrap();
            let h = assemble_h_const(&a, &grid).unwrap();
            let ht = assemble_h_var(&at, &grid).unwrap();
            let diff = ResolventDifference::compute(&h, &ht, CAP).unwrap();
            factorization_residual(&a, &at, &grid, &diff.delta, CAP).unwrap().residual
        };
        let r0 = make(0);
        let r5 = make(5);
        assert!((r0 - r5).abs() < 1e-12, "{r0} {r5}");
    }

    #[test]
    fn polar_decomposition() {
        let grid = TorusGrid::new(1, 32, 8.0).unwrap();
        let a = HermitianMatrixField::polyharmonic(enumerate_basis(1, 1).unwrap());
        let check = polar_isometry_check(&a, &grid, CAP).unwrap();
        assert!(check.factor_residual < 1e-9, "{}", check.factor_residual);
        assert!(check.partial_isometry_residual < 1e-9);
        assert_eq!(check.rank, 31);
        assert!(hermiticity_residual(&check.f_sqrt) < 1e-12);
        let (vals, _) = hermitian_eigen(&check.f_sqrt);
        assert!(vals[0] >= -1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut u = random_vector(&mut rng, 32);
        let mean = u.iter().sum::<C64>() / 32.0;
        for v in u.iter_mut() {
            *v -= mean;
        }
        let u = CVector::from_vec(u);
        let uu = check.isometry.adjoint() * (&check.isometry * &u);
        assert!((uu - &u).norm() < 1e-9 * u.norm());
    }
}
