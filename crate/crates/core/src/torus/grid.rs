use std::f64::consts::PI;

use crate::{Error, Result, C64};

/// Periodic box of side `length` with `n` points per axis (`n` even).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
    length: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("grid dimension must be at least 1".into()));
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!("points per axis must be even and >= 2, got {n}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("box length must be positive, got {length}")));
        }
        Ok(Self { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// `h = L / n`.
    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// `n^N`.
    pub fn points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// `h^N`, the quadrature weight of one grid point.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Per-axis indices of a point; the first axis varies slowest.
    pub fn axis_indices(&self, point: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        let mut r = point;
        for d in (0..self.dim).rev() {
            idx[d] = r % self.n;
            r /= self.n;
        }
        idx
    }

    pub fn point_index(&self, axis: &[usize]) -> usize {
        axis.iter().fold(0, |acc, &i| acc * self.n + (i % self.n))
    }

    /// Physical coordinates `x_j = -L/2 + j h`.
    pub fn coordinates(&self, point: usize) -> Vec<f64> {
        let h = self.spacing();
        self.axis_indices(point)
            .into_iter()
            .map(|j| -self.length / 2.0 + j as f64 * h)
            .collect()
    }

    /// Integer wave numbers `k ∈ {-n/2, ..., n/2 - 1}^N` of an FFT index.
    pub fn wave_numbers(&self, point: usize) -> Vec<i64> {
        let n = self.n as i64;
        self.axis_indices(point)
            .into_iter()
            .map(|j| {
                let j = j as i64;
                if j < n / 2 {
                    j
                } else {
                    j - n
                }
            })
            .collect()
    }

    /// Lattice frequency `ξ_k = 2π k / L` of an FFT index.
    pub fn frequency(&self, point: usize) -> Vec<f64> {
        let scale = 2.0 * PI / self.length;
        self.wave_numbers(point).into_iter().map(|k| k as f64 * scale).collect()
    }

    /// Index of the periodic difference `x - y`.
    pub fn difference(&self, x: usize, y: usize) -> usize {
        let xi = self.axis_indices(x);
        let yi = self.axis_indices(y);
        let diff: Vec<usize> = xi.iter().zip(&yi).map(|(a, b)| (a + self.n - b) % self.n).collect();
        self.point_index(&diff)
    }

    /// `h^N Σ u conj(v)` over raw sample vectors.
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        let s: C64 = u.iter().zip(v).map(|(a, b)| a * b.conj()).sum();
        s * self.cell_volume()
    }
}

/// Samples of a scalar (`channels = 1`) or `ν`-vector valued function.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: TorusGrid,
    channels: usize,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn zeros(grid: TorusGrid, channels: usize) -> Self {
        Self { grid, channels, values: vec![C64::new(0.0, 0.0); channels * grid.points()] }
    }

    pub fn from_values(grid: TorusGrid, channels: usize, values: Vec<C64>) -> Result<Self> {
        let expected = channels * grid.points();
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: values.len() });
        }
        Ok(Self { grid, channels, values })
    }

    /// Builds samples from `f(channel, coordinates)`.
    pub fn from_fn(grid: TorusGrid, channels: usize, f: impl Fn(usize, &[f64]) -> C64) -> Self {
        let m = grid.points();
        let mut values = Vec::with_capacity(channels * m);
        for c in 0..channels {
            for p in 0..m {
                values.push(f(c, &grid.coordinates(p)));
            }
        }
        Self { grid, channels, values }
    }

    /// The lattice plane wave `e^{i⟨ξ_k, x⟩}` at FFT index `freq`.
    pub fn plane_wave(grid: TorusGrid, freq: usize) -> Self {
        let xi = grid.frequency(freq);
        Self::from_fn(grid, 1, |_, x| {
            let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
            C64::from_polar(1.0, phase)
        })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn channel(&self, c: usize) -> &[C64] {
        let m = self.grid.points();
        &self.values[c * m..(c + 1) * m]
    }

    /// Discrete inner product summed over channels.
    pub fn inner(&self, other: &GridFunction) -> C64 {
        self.grid.inner(&self.values, &other.values)
    }

    /// `‖u‖ = ⟨u, u⟩^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }
}
