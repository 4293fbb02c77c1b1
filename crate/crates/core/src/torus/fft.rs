use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::C64;

use super::TorusGrid;

/// Separable `N`-dimensional FFT on a [`TorusGrid`] buffer.
///
/// `forward` is unnormalized and `inverse` divides by `n^N`, so the pair
/// round-trips exactly up to rounding.
#[derive(Clone)]
pub struct GridFft {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GridFft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridFft").field("dim", &self.dim).field("n", &self.n).finish()
    }
}

impl GridFft {
    pub fn new(grid: &TorusGrid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dim: grid.dim(),
            n: grid.n(),
            forward: planner.plan_fft_forward(grid.n()),
            inverse: planner.plan_fft_inverse(grid.n()),
        }
    }

    pub fn forward(&self, data: &mut [C64]) {
        self.run(&*self.forward, data);
    }

    pub fn inverse(&self, data: &mut [C64]) {
        self.run(&*self.inverse, data);
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn run(&self, plan: &dyn Fft<f64>, data: &mut [C64]) {
        let n = self.n;
        let total = n.pow(self.dim as u32);
        assert_eq!(data.len(), total, "buffer does not match grid");
        let mut line = vec![C64::new(0.0, 0.0); n];
        let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let outer = total / (n * stride);
            for o in 0..outer {
                for i in 0..stride {
                    let base = o * n * stride + i;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        data[base + j * stride] = *v;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_direct_dft_in_two_dimensions() {
        let grid = TorusGrid::new(2, 4, 1.0).unwrap();
        let fft = GridFft::new(&grid);
        let data: Vec<C64> = (0..16).map(|i| C64::new(i as f64, (i * i % 5) as f64)).collect();
        let mut out = data.clone();
        fft.forward(&mut out);
        for k in 0..16 {
            let ki = grid.axis_indices(k);
            let mut acc = C64::new(0.0, 0.0);
            for (x, v) in data.iter().enumerate() {
                let xi = grid.axis_indices(x);
                let phase = -2.0 * PI * (ki[0] * xi[0] + ki[1] * xi[1]) as f64 / 4.0;
                acc += v * C64::from_polar(1.0, phase);
            }
            assert!((acc - out[k]).norm() < 1e-12);
        }
        fft.inverse(&mut out);
        for (a, b) in out.iter().zip(&data) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
