use std::sync::Arc;

use rayon::prelude::*;

use crate::{CMatrix, Error, Result, C64};

use super::{GridFft, GridFunction, TorusGrid};

/// Largest dense dimension `channels · n^N` materialized by default.
pub const DEFAULT_DIMENSION_CAP: usize = 8192;

#[derive(Debug, Clone)]
enum Node {
    Identity,
    /// Per-frequency `codomain × domain` symbol, indexed by FFT position.
    Multiplier(Arc<Vec<CMatrix>>),
    /// Per-point `codomain × domain` matrix (one entry means constant).
    Pointwise(Arc<Vec<CMatrix>>),
    /// Factors applied first to last.
    Chain(Vec<LinearOperatorRep>),
}

/// A linear map between grid functions, applied matrix-free through FFT and
/// pointwise stages, with optional dense materialization.
#[derive(Debug, Clone)]
pub struct LinearOperatorRep {
    grid: TorusGrid,
    domain: usize,
    codomain: usize,
    node: Node,
    fft: Arc<GridFft>,
}

impl LinearOperatorRep {
    pub fn identity(grid: TorusGrid, channels: usize) -> Self {
        Self {
            grid,
            domain: channels,
            codomain: channels,
            node: Node::Identity,
            fft: Arc::new(GridFft::new(&grid)),
        }
    }

    /// Fourier multiplier with one `codomain × domain` symbol per lattice
    /// frequency, in FFT order.
    pub fn fourier_multiplier(
        grid: TorusGrid,
        domain: usize,
        codomain: usize,
        symbols: Vec<CMatrix>,
    ) -> Result<Self> {
        check_blocks(&grid, domain, codomain, &symbols, false)?;
        Ok(Self {
            grid,
            domain,
            codomain,
            node: Node::Multiplier(Arc::new(symbols)),
            fft: Arc::new(GridFft::new(&grid)),
        })
    }

    /// Pointwise multiplication by a matrix field; a single matrix acts at
    /// every point.
    pub fn pointwise(
        grid: TorusGrid,
        domain: usize,
        codomain: usize,
        matrices: Vec<CMatrix>,
    ) -> Result<Self> {
        check_blocks(&grid, domain, codomain, &matrices, true)?;
        Ok(Self {
            grid,
            domain,
            codomain,
            node: Node::Pointwise(Arc::new(matrices)),
            fft: Arc::new(GridFft::new(&grid)),
        })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn domain_channels(&self) -> usize {
        self.domain
    }

    pub fn codomain_channels(&self) -> usize {
        self.codomain
    }

    /// `(rows, cols)` of the dense matrix.
    pub fn dense_shape(&self) -> (usize, usize) {
        let m = self.grid.points();
        (self.codomain * m, self.domain * m)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LinearOperatorRep) -> Result<Self> {
        if next.domain != self.codomain {
            return Err(Error::DimensionMismatch { expected: self.codomain, actual: next.domain });
        }
        if next.grid != self.grid {
            return Err(Error::InvalidArgument("operators live on different grids".into()));
        }
        let mut parts = Vec::new();
        for op in [self, next] {
            match &op.node {
                Node::Chain(inner) => parts.extend(inner.iter().cloned()),
                Node::Identity => {}
                _ => parts.push(op.clone()),
            }
        }
        let node = if parts.is_empty() { Node::Identity } else { Node::Chain(parts) };
        Ok(Self {
            grid: self.grid,
            domain: self.domain,
            codomain: next.codomain,
            node,
            fft: self.fft.clone(),
        })
    }

    /// Adjoint with respect to the discrete inner product.
    pub fn adjoint(&self) -> Self {
        let node = match &self.node {
            Node::Identity => Node::Identity,
            Node::Multiplier(s) => Node::Multiplier(Arc::new(s.iter().map(|m| m.adjoint()).collect())),
            Node::Pointwise(s) => Node::Pointwise(Arc::new(s.iter().map(|m| m.adjoint()).collect())),
            Node::Chain(parts) => Node::Chain(parts.iter().rev().map(|p| p.adjoint()).collect()),
        };
        Self {
            grid: self.grid,
            domain: self.codomain,
            codomain: self.domain,
            node,
            fft: self.fft.clone(),
        }
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        if u.channels() != self.domain {
            return Err(Error::DimensionMismatch { expected: self.domain, actual: u.channels() });
        }
        if *u.grid() != self.grid {
            return Err(Error::InvalidArgument("grid function lives on a different grid".into()));
        }
        GridFunction::from_values(self.grid, self.codomain, self.apply_slice(u.values()))
    }

    /// Applies the operator to a raw channel-major sample vector.
    pub fn apply_slice(&self, input: &[C64]) -> Vec<C64> {
        let m = self.grid.points();
        assert_eq!(input.len(), self.domain * m, "input length does not match operator domain");
        match &self.node {
            Node::Identity => input.to_vec(),
            Node::Pointwise(mats) => {
                let mut out = vec![C64::new(0.0, 0.0); self.codomain * m];
                for p in 0..m {
                    let a = if mats.len() == 1 { &mats[0] } else { &mats[p] };
                    for r in 0..self.codomain {
                        let mut acc = C64::new(0.0, 0.0);
                        for c in 0..self.domain {
                            acc += a[(r, c)] * input[c * m + p];
                        }
                        out[r * m + p] = acc;
                    }
                }
                out
            }
            Node::Multiplier(symbols) => {
                let mut hat = input.to_vec();
                for c in 0..self.domain {
                    self.fft.forward(&mut hat[c * m..(c + 1) * m]);
                }
                let mut out = vec![C64::new(0.0, 0.0); self.codomain * m];
                for (f, s) in symbols.iter().enumerate() {
                    for r in 0..self.codomain {
                        let mut acc = C64::new(0.0, 0.0);
                        for c in 0..self.domain {
                            acc += s[(r, c)] * hat[c * m + f];
                        }
                        out[r * m + f] = acc;
                    }
                }
                for r in 0..self.codomain {
                    self.fft.inverse(&mut out[r * m..(r + 1) * m]);
                }
                out
            }
            Node::Chain(parts) => {
                let mut v = input.to_vec();
                for p in parts {
                    v = p.apply_slice(&v);
                }
                v
            }
        }
    }

    /// Dense matrix in the point basis; columns are images of unit vectors.
    pub fn materialize(&self, cap: usize) -> Result<CMatrix> {
        let (rows, cols) = self.dense_shape();
        let dim = rows.max(cols);
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let columns: Vec<Vec<C64>> = (0..cols)
            .into_par_iter()
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); cols];
                e[j] = C64::new(1.0, 0.0);
                self.apply_slice(&e)
            })
            .collect();
        Ok(CMatrix::from_fn(rows, cols, |r, c| columns[c][r]))
    }

    /// Applies the operator to every column of a dense matrix.
    pub fn apply_columns(&self, x: &CMatrix) -> Result<CMatrix> {
        let (rows, cols) = self.dense_shape();
        if x.nrows() != cols {
            return Err(Error::DimensionMismatch { expected: cols, actual: x.nrows() });
        }
        let columns: Vec<Vec<C64>> = (0..x.ncols())
            .into_par_iter()
            .map(|j| self.apply_slice(x.column(j).as_slice()))
            .collect();
        Ok(CMatrix::from_fn(rows, x.ncols(), |r, c| columns[c][r]))
    }
}

fn check_blocks(
    grid: &TorusGrid,
    domain: usize,
    codomain: usize,
    blocks: &[CMatrix],
    allow_single: bool,
) -> Result<()> {
    let m = grid.points();
    if !(blocks.len() == m || (allow_single && blocks.len() == 1)) {
        return Err(Error::DimensionMismatch { expected: m, actual: blocks.len() });
    }
    for b in blocks {
        if b.nrows() != codomain || b.ncols() != domain {
            return Err(Error::DimensionMismatch {
                expected: codomain * domain,
                actual: b.nrows() * b.ncols(),
            });
        }
    }
    Ok(())
}
