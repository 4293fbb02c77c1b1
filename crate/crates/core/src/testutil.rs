use rand::Rng;

use crate::{CMatrix, C64};

pub(crate) fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub(crate) fn random_hermitian_pd(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = random_matrix(rng, n, n);
    &g * g.adjoint() + CMatrix::identity(n, n).scale(0.1)
}

pub(crate) fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}
