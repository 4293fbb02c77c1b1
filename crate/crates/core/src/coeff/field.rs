use crate::multiindex::MultiIndexBasis;
use crate::{CMatrix, Error, Result};

use super::matrix::{clip_spectrum, ensure_hermitian, hermitian_eigen, inverse_sqrt, matrix_sqrt};
use super::symbol::polyharmonic_coefficients;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Constant(CMatrix),
    /// One matrix per grid point, in the grid's point order.
    Sampled(Vec<CMatrix>),
}

/// A `ν × ν` Hermitian matrix-valued coefficient, constant or sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrixField {
    basis: MultiIndexBasis,
    kind: FieldKind,
}

impl HermitianMatrixField {
    pub fn constant(basis: MultiIndexBasis, matrix: CMatrix) -> Result<Self> {
        check_shape(&basis, &matrix)?;
        ensure_hermitian(&matrix)?;
        Ok(Self { basis, kind: FieldKind::Constant(matrix) })
    }

    pub fn sampled(basis: MultiIndexBasis, samples: Vec<CMatrix>) -> Result<Self> {
        for s in &samples {
            check_shape(&basis, s)?;
            ensure_hermitian(s)?;
        }
        Ok(Self { basis, kind: FieldKind::Sampled(samples) })
    }

    /// Coefficients `δ_{αβ} m!/α!`, whose symbol is `|ξ|^{2m}`.
    pub fn polyharmonic(basis: MultiIndexBasis) -> Self {
        let matrix = polyharmonic_coefficients(&basis);
        Self { basis, kind: FieldKind::Constant(matrix) }
    }

    pub fn basis(&self) -> &MultiIndexBasis {
        &self.basis
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn nu(&self) -> usize {
        self.basis.nu()
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, FieldKind::Constant(_))
    }

    pub fn constant_matrix(&self) -> Option<&CMatrix> {
        match &self.kind {
            FieldKind::Constant(m) => Some(m),
            FieldKind::Sampled(_) => None,
        }
    }

    /// Number of samples, `None` for a constant field.
    pub fn sample_count(&self) -> Option<usize> {
        match &self.kind {
            FieldKind::Constant(_) => None,
            FieldKind::Sampled(s) => Some(s.len()),
        }
    }

    /// Matrix at grid point `i`; a constant field ignores `i`.
    pub fn at(&self, i: usize) -> &CMatrix {
        match &self.kind {
            FieldKind::Constant(m) => m,
            FieldKind::Sampled(s) => &s[i],
        }
    }

    /// Replicates a constant field over `points` samples.
    pub fn to_sampled(&self, points: usize) -> Self {
        let samples = match &self.kind {
            FieldKind::Constant(m) => vec![m.clone(); points],
            FieldKind::Sampled(s) => s.clone(),
        };
        Self { basis: self.basis.clone(), kind: FieldKind::Sampled(samples) }
    }

    /// Applies `f` to every matrix, collecting the points where it fails with
    /// [`Error::NonPositiveDefinite`].
    pub fn try_map(&self, f: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<Self> {
        let kind = match &self.kind {
            FieldKind::Constant(m) => FieldKind::Constant(f(m)?),
            FieldKind::Sampled(samples) => {
                let mut out = Vec::with_capacity(samples.len());
                let mut bad = Vec::new();
                let mut worst = f64::INFINITY;
                for (i, s) in samples.iter().enumerate() {
                    match f(s) {
                        Ok(v) => out.push(v),
                        Err(Error::NonPositiveDefinite { min_eigenvalue, .. }) => {
                            bad.push(i);
                            worst = worst.min(min_eigenvalue);
                        }
                        Err(e) => return Err(e),
                    }
                }
                if !bad.is_empty() {
                    return Err(Error::NonPositiveDefinite { min_eigenvalue: worst, points: bad });
                }
                FieldKind::Sampled(out)
            }
        };
        Ok(Self { basis: self.basis.clone(), kind })
    }

    /// Pointwise principal square root.
    pub fn sqrt(&self) -> Result<Self> {
        self.try_map(matrix_sqrt)
    }

    /// Pointwise `a^{-1/2}`.
    pub fn inverse_sqrt(&self) -> Result<Self> {
        self.try_map(inverse_sqrt)
    }

    /// Fails with the offending points unless every matrix is positive definite.
    pub fn check_positive_definite(&self) -> Result<()> {
        let (lo, _) = self.spectral_range();
        if lo > 0.0 {
            return Ok(());
        }
        let points = match &self.kind {
            FieldKind::Constant(_) => Vec::new(),
            FieldKind::Sampled(s) => s
                .iter()
                .enumerate()
                .filter(|(_, m)| hermitian_eigen(m).0[0] <= 0.0)
                .map(|(i, _)| i)
                .collect(),
        };
        Err(Error::NonPositiveDefinite { min_eigenvalue: lo, points })
    }

    /// Smallest and largest eigenvalue over all samples.
    pub fn spectral_range(&self) -> (f64, f64) {
        let mats: Vec<&CMatrix> = match &self.kind {
            FieldKind::Constant(m) => vec![m],
            FieldKind::Sampled(s) => s.iter().collect(),
        };
        mats.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| {
            let (v, _) = hermitian_eigen(m);
            (lo.min(v[0]), hi.max(v[v.len() - 1]))
        })
    }
}

fn check_shape(basis: &MultiIndexBasis, m: &CMatrix) -> Result<()> {
    let nu = basis.nu();
    if m.nrows() != nu || m.ncols() != nu {
        return Err(Error::DimensionMismatch { expected: nu, actual: m.nrows().max(m.ncols()) });
    }
    Ok(())
}

/// Pointwise spectral clipping `ã_n = max{1/n, min{ã, n}}`.
pub fn clip_coefficients(field: &HermitianMatrixField, n: u32) -> Result<HermitianMatrixField> {
    if n == 0 {
        return Err(Error::InvalidArgument("clip level n must be positive".into()));
    }
    field.try_map(|m| clip_spectrum(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::enumerate_basis;
    use crate::C64;

    #[test]
    fn polyharmonic_matches_multinomial_weights() {
        let f = HermitianMatrixField::polyharmonic(enumerate_basis(2, 2).unwrap());
        let m = f.constant_matrix().unwrap();
        // (0,2), (1,1), (2,0) -> 1, 2, 1
        let d: Vec<f64> = (0..3).map(|i| m[(i, i)].re).collect();
        assert_eq!(d, vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn sampled_field_reports_bad_points() {
        let basis = enumerate_basis(1, 1).unwrap();
        let s = |v: f64| CMatrix::from_element(1, 1, C64::new(v, 0.0));
        let f = HermitianMatrixField::sampled(basis, vec![s(1.0), s(-1.0), s(2.0), s(0.0)]).unwrap();
        match f.sqrt() {
            Err(Error::NonPositiveDefinite { points, min_eigenvalue }) => {
                assert_eq!(points, vec![1, 3]);
                assert_eq!(min_eigenvalue, -1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        match f.check_positive_definite() {
            Err(Error::NonPositiveDefinite { points, .. }) => assert_eq!(points, vec![1, 3]),
            other => panic!("unexpected {other:?}"),
        }
        let clipped = clip_coefficients(&f, 4).unwrap();
        assert!(clipped.check_positive_definite().is_ok());
        assert_eq!(clipped.spectral_range(), (0.25, 2.0));
    }

    #[test]
    fn rejects_wrong_shape() {
        let basis = enumerate_basis(2, 1).unwrap();
        assert!(HermitianMatrixField::constant(basis, CMatrix::identity(3, 3)).is_err());
    }
}
