//! Multi-indices of fixed length `m` in `N` variables.
//!
//! Every `ν`-indexed vector or matrix in the crate (coefficient matrices,
//! symbols, vector-valued grid functions) uses the lexicographic order of
//! [`MultiIndexBasis::entries`].

use nalgebra::ComplexField;

use crate::{Error, Result};

/// A multi-index `α = (α_1, ..., α_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// `|α| = α_1 + ... + α_N`.
    pub fn order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `α! = α_1! ⋯ α_N!`.
    pub fn factorial(&self) -> f64 {
        self.exponents.iter().map(|&e| factorial(e)).product()
    }
}

pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// All multi-indices of order `m` in `N` variables, lexicographically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexBasis {
    dim: usize,
    half_order: u32,
    entries: Vec<MultiIndex>,
}

impl MultiIndexBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The half-order `m`; operators built on this basis have order `2m`.
    pub fn half_order(&self) -> u32 {
        self.half_order
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    /// `ν(m, N)`, the number of multi-indices of order `m`.
    pub fn nu(&self) -> usize {
        self.entries.len()
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.entries.binary_search(alpha).ok()
    }

    /// The vector `ξ^{(m)} = (ξ^γ)_γ` of all monomials of order `m`.
    pub fn monomials<T: ComplexField + Copy>(&self, xi: &[T]) -> Vec<T> {
        self.entries.iter().map(|g| monomial(xi, g)).collect()
    }
}

/// Enumerates the multi-indices of order `m` in `N` variables.
pub fn enumerate_basis(dim: usize, m: u32) -> Result<MultiIndexBasis> {
    if dim == 0 {
        return Err(Error::InvalidArgument("spatial dimension must be at least 1".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("half-order m must be at least 1".into()));
    }
    let mut entries = Vec::new();
    let mut current = vec![0u32; dim];
    fill(&mut current, 0, m, &mut entries);
    Ok(MultiIndexBasis { dim, half_order: m, entries })
}

// Lexicographic recursion: the first coordinate runs 0..=remaining, so
// output is sorted ascending.
fn fill(current: &mut [u32], axis: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if axis + 1 == current.len() {
        current[axis] = remaining;
        out.push(MultiIndex::new(current.to_vec()));
        return;
    }
    for e in 0..=remaining {
        current[axis] = e;
        fill(current, axis + 1, remaining - e, out);
    }
}

/// `ξ^γ = Π ξ_i^{γ_i}` with `0^0 = 1`.
pub fn monomial<T: ComplexField + Copy>(xi: &[T], gamma: &MultiIndex) -> T {
    debug_assert_eq!(xi.len(), gamma.dim());
    let mut acc = T::one();
    for (&x, &e) in xi.iter().zip(gamma.exponents()) {
        for _ in 0..e {
            acc *= x;
        }
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
