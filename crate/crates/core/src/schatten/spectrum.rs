use crate::{CMatrix, Error, Result};

/// Singular values in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl SingularSpectrum {
    /// Full dense SVD.
    pub fn of(m: &CMatrix) -> Self {
        let values = if m.is_empty() {
            Vec::new()
        } else {
            m.clone().singular_values().iter().copied().collect()
        };
        Self::from_values(values, m.nrows(), m.ncols())
    }

    pub fn from_values(mut values: Vec<f64>, rows: usize, cols: usize) -> Self {
        for v in values.iter_mut() {
            *v = v.max(0.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values, rows, cols }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Operator norm `s_1`.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `(Σ s_j^p)^{1/p}`; `p = ∞` gives `s_1`.
    pub fn schatten(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let top = self.largest();
        if p.is_infinite() || top == 0.0 {
            return Ok(top);
        }
        let sum: f64 = self.values.iter().map(|s| (s / top).powf(p)).sum();
        Ok(top * sum.powf(1.0 / p))
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidArgument(format!("Schatten exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// `‖M‖_{C^p}` from the full SVD.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    SingularSpectrum::of(m).schatten(p)
}
