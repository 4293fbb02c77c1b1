//! Functions of small Hermitian matrices via full eigendecomposition.

use nalgebra::{DVector, SymmetricEigen};

use crate::{CMatrix, Error, Result, C64};

/// Relative tolerance for `‖a - a*‖ ≤ tol · ‖a‖`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `‖a - a*‖_F / ‖a‖_F`, or the absolute residual when `a = 0`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    let diff = (a - a.adjoint()).norm();
    let scale = a.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub(crate) fn ensure_hermitian(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), actual: a.ncols() });
    }
    let residual = hermiticity_residual(a);
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(a: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = CMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `f(a) = Q diag(f(λ)) Q*`, symmetrized.
pub fn hermitian_map(a: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    reassemble(&values, &vectors, f)
}

fn reassemble(values: &DVector<f64>, vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let s = C64::new(f(lambda), 0.0);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    let out = &scaled * vectors.adjoint();
    (&out + out.adjoint()).scale(0.5)
}

fn positive_spectrum(a: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    ensure_hermitian(a)?;
    let (values, vectors) = hermitian_eigen(a);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::NonPositiveDefinite { min_eigenvalue: min, points: Vec::new() });
    }
    Ok((values, vectors))
}

/// Principal square root of a Hermitian positive definite matrix.
pub fn matrix_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = positive_spectrum(a)?;
    Ok(reassemble(&values, &vectors, f64::sqrt))
}

/// `a^{-1/2}` for Hermitian positive definite `a`.
pub fn inverse_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = positive_spectrum(a)?;
    Ok(reassemble(&values, &vectors, |l| 1.0 / l.sqrt()))
}

/// Spectral clipping: every eigenvalue `λ` becomes `max(1/n, min(λ, n))`.
/// Eigenvectors are kept, so the result is Hermitian with spectrum in `[1/n, n]`.
pub fn clip_spectrum(a: &CMatrix, n: u32) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("clip level n must be positive".into()));
    }
    ensure_hermitian(a)?;
    let hi = f64::from(n);
    let lo = 1.0 / hi;
    Ok(hermitian_map(a, |l| l.min(hi).max(lo)))
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_hermitian_pd;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(vals: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| C64::new(v, 0.0)),
        ))
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let id = CMatrix::identity(3, 3);
        assert!((matrix_sqrt(&id).unwrap() - &id).norm() < 1e-15);
        let b = matrix_sqrt(&diag(&[4.0, 9.0])).unwrap();
        assert!((b - diag(&[2.0, 3.0])).norm() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        match matrix_sqrt(&diag(&[1.0, -0.5])) {
            Err(Error::NonPositiveDefinite { min_eigenvalue, .. }) => {
                assert!((min_eigenvalue + 0.5).abs() < 1e-14)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(matrix_sqrt(&diag(&[1.0, 0.0])), Err(Error::NonPositiveDefinite { .. })));
    }

    #[test]
    fn sqrt_rejects_non_hermitian() {
        let mut a = CMatrix::identity(2, 2);
        a[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(matrix_sqrt(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_squares_back_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let n = 1 + trial % 10;
            let a = random_hermitian_pd(&mut rng, n);
            let b = matrix_sqrt(&a).unwrap();
            assert!((&b * &b - &a).norm() <= 1e-10 * a.norm());
            assert!(hermiticity_residual(&b) < 1e-14);
            let ib = inverse_sqrt(&a).unwrap();
            assert!((&ib * &b - CMatrix::identity(n, n)).norm() < 1e-8);
        }
    }

    #[test]
    fn clip_examples() {
        let id = CMatrix::identity(2, 2);
        assert!((clip_spectrum(&id, 1).unwrap() - &id).norm() < 1e-15);
        let c = clip_spectrum(&diag(&[5.0, 0.01]), 2).unwrap();
        assert!((c - diag(&[2.0, 0.5])).norm() < 1e-14);
        assert!(clip_spectrum(&id, 0).is_err());
    }

    #[test]
    fn clip_handles_negative_spectrum_and_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_hermitian_pd(&mut rng, 5) - CMatrix::identity(5, 5).scale(2.0);
            let (vals, _) = hermitian_eigen(&a);
            assert!(vals[0] < 0.0);
            let c = clip_spectrum(&a, 10).unwrap();
            let (cv, _) = hermitian_eigen(&c);
            assert!(cv.iter().all(|&l| (0.1 - 1e-12..=10.0 + 1e-12).contains(&l)));
            let cc = clip_spectrum(&c, 10).unwrap();
            let (ccv, _) = hermitian_eigen(&cc);
            for (x, y) in cv.iter().zip(ccv.iter()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn clip_converges_once_level_exceeds_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_hermitian_pd(&mut rng, 4);
        let (vals, _) = hermitian_eigen(&a);
        let n = (vals[vals.len() - 1].max(1.0 / vals[0]).ceil() as u32) + 1;
        let c = clip_spectrum(&a, n).unwrap();
        assert!((c - &a).norm() < 1e-12 * a.norm().max(1.0));
    }
}
