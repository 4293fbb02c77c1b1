//! Volume of the sublevel set `{A < 1}` and the coarea constant.
//!
//! Homogeneity of `A` gives `vol{A < t} = t^{N/2m} vol{A < 1}`, so for any
//! profile `g` and exponent `q`
//!
//! ```text
//! (2π)^{-N} ∫ |g(A(ξ))|^q dξ = c_cov · ∫_0^∞ |g(t)|^q t^{(N-2m)/2m} dt,
//! c_cov = (2π)^{-N} (N / 2m) vol{A < 1}.
//! ```

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::multiindex::MultiIndexBasis;
use crate::profile::Profile;
use crate::{CMatrix, Error, Result};

use super::matrix::{ensure_hermitian, hermitian_eigen};

/// Independent RNG streams per Monte Carlo estimate. Fixed so that results do
/// not depend on the thread count.
pub const MC_STREAMS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    /// Half side of the sampled cube `[-R, R]^N`.
    pub box_half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoareaConstant {
    pub value: f64,
    pub volume: VolumeEstimate,
}

/// Evaluates `A(ξ) = |b ξ^{(m)}|²` without allocating.
struct SymbolKernel<'a> {
    basis: &'a MultiIndexBasis,
    b: &'a CMatrix,
}

impl SymbolKernel<'_> {
    fn eval(&self, xi: &[f64], mono: &mut [f64]) -> f64 {
        for (slot, gamma) in mono.iter_mut().zip(self.basis.entries()) {
            *slot = crate::multiindex::monomial(xi, gamma);
        }
        let nu = mono.len();
        let mut acc = 0.0;
        for r in 0..nu {
            let (mut re, mut im) = (0.0, 0.0);
            for (c, &m) in mono.iter().enumerate() {
                let z = self.b[(r, c)];
                re += z.re * m;
                im += z.im * m;
            }
            acc += re * re + im * im;
        }
        acc
    }
}

fn min_eigenvalue_of_square(b: &CMatrix) -> Result<f64> {
    ensure_hermitian(b)?;
    let (vals, _) = hermitian_eigen(b);
    let lo = vals[0];
    if !(lo > 0.0) {
        return Err(Error::NonPositiveDefinite { min_eigenvalue: lo, points: Vec::new() });
    }
    Ok(lo * lo)
}

/// Monte Carlo estimate of `vol{ξ : A(ξ) < 1}` where `A` is built from the
/// square root `b` of a constant coefficient matrix.
///
/// Samples are drawn uniformly from the cube of half width
/// `√N · λ_min(a)^{-1/2m}`, which contains the sublevel set because
/// `A(ξ) ≥ λ_min(a) (|ξ|²/N)^m`.
pub fn sublevel_volume(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    samples: u64,
    seed: u64,
) -> Result<VolumeEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    if b.nrows() != basis.nu() {
        return Err(Error::DimensionMismatch { expected: basis.nu(), actual: b.nrows() });
    }
    let lambda_min = min_eigenvalue_of_square(b)?;
    let dim = basis.dim();
    let m = f64::from(basis.half_order());
    let half = (dim as f64).sqrt() * lambda_min.powf(-1.0 / (2.0 * m));
    let kernel = SymbolKernel { basis, b };

    let per = samples / MC_STREAMS;
    let extra = samples % MC_STREAMS;
    let hits: u64 = (0..MC_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let count = per + u64::from(stream < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut xi = vec![0.0; dim];
            let mut mono = vec![0.0; basis.nu()];
            let mut inside = 0u64;
            for _ in 0..count {
                for x in xi.iter_mut() {
                    *x = rng.random_range(-half..half);
                }
                if kernel.eval(&xi, &mut mono) < 1.0 {
                    inside += 1;
                }
            }
            inside
        })
        .collect::<Vec<u64>>()
        .into_iter()
        .sum();

    let box_volume = (2.0 * half).powi(dim as i32);
    let frac = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        estimate: box_volume * frac,
        std_error: box_volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
        box_half_width: half,
    })
}

/// Volume of the Euclidean unit ball in `R^N`; equals `vol{A < 1}` for the
/// polyharmonic operator.
pub fn unit_ball_volume(dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    PI.powf(half) / statrs::function::gamma::gamma(half + 1.0)
}

/// `c_cov = (2π)^{-N} (N / 2m) vol{A < 1}`.
pub fn coarea_constant_from_volume(volume: f64, dim: usize, m: u32) -> f64 {
    let n = dim as f64;
    (2.0 * PI).powf(-n) * (n / (2.0 * f64::from(m))) * volume
}

/// Coarea constant with the sublevel volume estimated by Monte Carlo.
pub fn coarea_constant(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    samples: u64,
    seed: u64,
) -> Result<CoareaConstant> {
    let volume = sublevel_volume(b, basis, samples, seed)?;
    Ok(CoareaConstant {
        value: coarea_constant_from_volume(volume.estimate, basis.dim(), basis.half_order()),
        volume,
    })
}

/// Riemann sum of `(2π)^{-N} ∫ |g(A(ξ))|^q dξ` over the lattice `spacing · Z^N`
/// truncated to the cube `[-radius, radius]^N`.
pub fn lattice_profile_integral(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    g: &dyn Profile,
    exponent: f64,
    spacing: f64,
    radius: f64,
) -> Result<f64> {
    if !(spacing > 0.0 && radius > 0.0) {
        return Err(Error::InvalidArgument("spacing and radius must be positive".into()));
    }
    if b.nrows() != basis.nu() || b.ncols() != basis.nu() {
        return Err(Error::DimensionMismatch { expected: basis.nu(), actual: b.nrows() });
    }
    let dim = basis.dim();
    let k = (radius / spacing).floor() as i64;
    let side = (2 * k + 1) as usize;
    let total = side.pow(dim as u32);
    let kernel = SymbolKernel { basis, b };
    // Outer index over the first axis, summed in order for reproducibility.
    let rows: Vec<f64> = (0..side)
        .into_par_iter()
        .map(|first| {
            let inner = total / side;
            let mut xi = vec![0.0; dim];
            let mut mono = vec![0.0; basis.nu()];
            let mut acc = 0.0;
            for rest in 0..inner {
                xi[0] = (first as i64 - k) as f64 * spacing;
                let mut r = rest;
                for d in (1..dim).rev() {
                    xi[d] = ((r % side) as i64 - k) as f64 * spacing;
                    r /= side;
                }
                acc += g.eval(kernel.eval(&xi, &mut mono)).abs().powf(exponent);
            }
            acc
        })
        .collect();
    let sum: f64 = rows.iter().sum();
    Ok(sum * spacing.powi(dim as i32) * (2.0 * PI).powi(-(dim as i32)))
}
