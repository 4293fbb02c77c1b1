use crate::coeff::symbol_lg;
use crate::multiindex::MultiIndexBasis;
use crate::profile::Profile;
use crate::torus::{GridFft, TorusGrid};
use crate::{CMatrix, Error, Result, C64};

/// Translation-invariant kernel `k_g(z)` of `g(F)` for constant coefficients,
/// one `ν × ν` matrix per displacement `z` on the grid.
///
/// `(g(F) v)(x) = h^N Σ_y k_g(x - y) v(y)`, with
/// `k_g(z) = L^{-N} Σ_k Lg(ξ_k) e^{i⟨ξ_k, z⟩}`.
#[derive(Debug, Clone)]
pub struct MatrixKernel {
    grid: TorusGrid,
    nu: usize,
    values: Vec<CMatrix>,
}

/// Computes `k_g` by an inverse FFT of `Lg` over the frequency lattice.
pub fn kernel_of_gf(
    b: &CMatrix,
    basis: &MultiIndexBasis,
    grid: &TorusGrid,
    g: &dyn Profile,
) -> Result<MatrixKernel> {
    if grid.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), actual: basis.dim() });
    }
    let m = grid.points();
    let nu = basis.nu();
    let symbols: Vec<CMatrix> = (0..m)
        .map(|f| symbol_lg(b, basis, &grid.frequency(f), g))
        .collect::<Result<_>>()?;
    let fft = GridFft::new(grid);
    // inverse() divides by n^N; k_g carries L^{-N} = n^{-N} h^{-N}.
    let scale = 1.0 / grid.cell_volume();
    let mut values = vec![CMatrix::zeros(nu, nu); m];
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for r in 0..nu {
        for c in 0..nu {
            for (slot, s) in buf.iter_mut().zip(&symbols) {
                *slot = s[(r, c)];
            }
            fft.inverse(&mut buf);
            for (z, v) in buf.iter().enumerate() {
                values[z][(r, c)] = v * scale;
            }
        }
    }
    Ok(MatrixKernel { grid: *grid, nu, values })
}

impl MatrixKernel {
    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// `k_g` at displacement index `z`.
    pub fn at(&self, z: usize) -> &CMatrix {
        &self.values[z]
    }

    /// Dense matrix of `V g(F)` with entries `V(x) k_g(x - y) h^N`.
    /// `field` holds one `ν × ν` matrix per point.
    pub fn weighted_dense(&self, field: &[CMatrix]) -> Result<CMatrix> {
        let m = self.grid.points();
        if field.len() != m {
            return Err(Error::DimensionMismatch { expected: m, actual: field.len() });
        }
        let w = self.grid.cell_volume();
        let nu = self.nu;
        let mut out = CMatrix::zeros(nu * m, nu * m);
        for x in 0..m {
            for y in 0..m {
                let block = &field[x] * &self.values[self.grid.difference(x, y)];
                for r in 0..nu {
                    for c in 0..nu {
                        out[(r * m + x, c * m + y)] = block[(r, c)] * w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Dense matrix of `g(F)` itself.
    pub fn dense(&self) -> CMatrix {
        let id = vec![CMatrix::identity(self.nu, self.nu); self.grid.points()];
        self.weighted_dense(&id).expect("identity field matches the grid")
    }

    /// `(h^{2N} Σ_{x,y} |V(x) k_g(x - y)|_F²)^{1/2}`, the Hilbert–Schmidt norm
    /// of `V g(F)` from the kernel.
    pub fn hilbert_schmidt_with(&self, field: &[CMatrix]) -> Result<f64> {
        let m = self.grid.points();
        if field.len() != m {
            return Err(Error::DimensionMismatch { expected: m, actual: field.len() });
        }
        let w2 = self.grid.cell_volume().powi(2);
        let mut acc = 0.0;
        for x in 0..m {
            for y in 0..m {
                acc += (&field[x] * &self.values[self.grid.difference(x, y)]).norm_squared();
            }
        }
        Ok((acc * w2).sqrt())
    }
}
