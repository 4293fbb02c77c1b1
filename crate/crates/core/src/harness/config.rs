//! JSON experiment configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeff::{hermitian_eigen, HermitianMatrixField};
use crate::multiindex::{enumerate_basis, MultiIndexBasis};
use crate::torus::{TorusGrid, DEFAULT_DIMENSION_CAP};
use crate::{CMatrix, Error, Result, C64};

/// Configuration bundled with the binary.
pub const DEFAULT_CONFIG: &str = include_str!("../../configs/default.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    #[serde(default = "default_mc_samples")]
    pub monte_carlo_samples: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub verify: Vec<ExperimentConfig>,
    #[serde(default)]
    pub scale: Option<ScaleConfig>,
    #[serde(default)]
    pub clip: Option<ClipConfig>,
    #[serde(default)]
    pub refine: Option<RefineConfig>,
}

fn default_seed() -> u64 {
    20_240_601
}

fn default_max_dim() -> usize {
    DEFAULT_DIMENSION_CAP
}

fn default_mc_samples() -> u64 {
    1_000_000
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Upper limit on every bound ratio.
    pub ratio_slack: f64,
    /// Upper limit on the factorization residual.
    pub factorization: f64,
    /// Upper limit on the Deift identity residual.
    pub deift: f64,
    /// Largest relative ratio change between the two finest refinement grids.
    pub refine_drift: f64,
    /// Largest deviation of the volume-scaling slope from `1/p`.
    pub slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ratio_slack: 1.05, factorization: 1e-9, deift: 1e-10, refine_drift: 0.02, slope: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub dim: usize,
    pub m: u32,
    pub grid: GridSpec,
    #[serde(default)]
    pub base: BaseSpec,
    #[serde(default)]
    pub perturbation: PerturbationSpec,
    pub p: Vec<f64>,
    /// Overrides the suite seed for this experiment.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Overrides individual suite tolerances.
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    /// Overrides the suite dimension cap.
    #[serde(default)]
    pub max_dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub length: f64,
}

/// Constant coefficients of the reference operator.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    #[default]
    Polyharmonic,
    Matrix(MatrixSpec),
}

/// A complex matrix given by real and optional imaginary parts, row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationSpec {
    #[default]
    None,
    /// `ã = a + b` on the region, `a` elsewhere.
    Impurity { region: Region, amplitude: Amplitude },
    /// `ã = a + φ(|x - c|/r) b` with the smooth bump `φ(0) = 1`.
    Bump { center: Vec<f64>, radius: f64, amplitude: Amplitude },
    /// On the region the smallest eigenvalue of `a` is replaced by `floor`.
    Degenerate { region: Region, floor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    /// Grid points with `lower ≤ x < upper` componentwise.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// Grid points with `|x - center| < radius`.
    Ball { center: Vec<f64>, radius: f64 },
}

/// The impurity amplitude `b`: a multiple of `a` or an explicit matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Amplitude {
    Scale(f64),
    Matrix(MatrixSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleConfig {
    /// Must carry an impurity perturbation; its region is replaced by centered
    /// boxes of the listed volumes.
    pub experiment: ExperimentConfig,
    pub volumes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClipConfig {
    pub experiment: ExperimentConfig,
    pub levels: Vec<u32>,
    /// First level from which `‖R_n - R_{2n}‖` must decrease. Below the
    /// grid's resolution the differences may still grow.
    #[serde(default = "first_level")]
    pub monotone_from: u32,
}

fn first_level() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefineConfig {
    /// Its grid size is replaced by each entry of `n`.
    pub experiment: ExperimentConfig,
    pub n: Vec<usize>,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn bundled() -> Self {
        Self::from_json(DEFAULT_CONFIG).expect("bundled config is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_dim == 0 || self.monte_carlo_samples == 0 {
            return Err(Error::Config("max_dim and monte_carlo_samples must be positive".into()));
        }
        self.tolerances.validate()?;
        for e in &self.verify {
            e.validate()?;
        }
        if let Some(s) = &self.scale {
            s.experiment.validate()?;
            if !matches!(s.experiment.perturbation, PerturbationSpec::Impurity { .. }) {
                return Err(Error::Config("scale: experiment must use an impurity perturbation".into()));
            }
            if s.volumes.len() < 2 || s.volumes.windows(2).any(|w| w[0] >= w[1]) || s.volumes[0] <= 0.0 {
                return Err(Error::Config("scale: volumes must be positive and strictly increasing".into()));
            }
        }
        if let Some(c) = &self.clip {
            c.experiment.validate()?;
            if c.levels.is_empty() || c.levels.contains(&0) || c.levels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("clip: levels must be positive and strictly increasing".into()));
            }
        }
        if let Some(r) = &self.refine {
            r.experiment.validate()?;
            if r.n.len() < 2 || r.n.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("refine: grid sizes must be strictly increasing".into()));
            }
            if r.n.iter().any(|&n| n < 2 || n % 2 == 1) {
                return Err(Error::Config("refine: grid sizes must be even".into()));
            }
        }
        Ok(())
    }

    /// Seed and tolerances in effect for one experiment.
    pub fn seed_for(&self, e: &ExperimentConfig) -> u64 {
        e.seed.unwrap_or(self.seed)
    }

    pub fn tolerances_for(&self, e: &ExperimentConfig) -> Tolerances {
        e.tolerances.unwrap_or(self.tolerances)
    }

    pub fn max_dim_for(&self, e: &ExperimentConfig) -> usize {
        e.max_dim.unwrap_or(self.max_dim)
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let all = [self.ratio_slack, self.factorization, self.deift, self.refine_drift, self.slope];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config("tolerances must be finite and positive".into()));
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(format!("experiment {:?}: {msg}", self.id)));
        if self.id.is_empty() || self.id.contains(',') || self.id.contains('"') {
            return fail("id must be non-empty and free of commas and quotes".into());
        }
        if self.dim == 0 || self.m == 0 {
            return fail("dim and m must be positive".into());
        }
        if self.grid.n < 2 || self.grid.n % 2 == 1 || !(self.grid.length > 0.0) {
            return fail("grid needs an even n >= 2 and a positive length".into());
        }
        if self.p.iter().any(|p| p.is_nan() || *p < 1.0) {
            return fail("every p must be >= 1".into());
        }
        if let Some(t) = &self.tolerances {
            t.validate()?;
        }
        let dim = self.dim;
        let check_point = |v: &[f64], what: &str| {
            if v.len() != dim {
                Err(Error::Config(format!("experiment {:?}: {what} needs {dim} coordinates", self.id)))
            } else {
                Ok(())
            }
        };
        let check_region = |r: &Region| match r {
            Region::Box { lower, upper } => {
                check_point(lower, "box lower corner")?;
                check_point(upper, "box upper corner")
            }
            Region::Ball { center, radius } => {
                check_point(center, "ball center")?;
                if *radius > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!("experiment {:?}: ball radius must be positive", self.id)))
                }
            }
        };
        match &self.perturbation {
            PerturbationSpec::None => {}
            PerturbationSpec::Impurity { region, .. } => check_region(region)?,
            PerturbationSpec::Bump { center, radius, .. } => {
                check_point(center, "bump center")?;
                if !(*radius > 0.0) {
                    return fail("bump radius must be positive".into());
                }
            }
            PerturbationSpec::Degenerate { region, floor } => {
                check_region(region)?;
                if !(*floor > 0.0) {
                    return fail("degenerate floor must be positive".into());
                }
            }
        }
        Ok(())
    }

    pub fn torus(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.dim, self.grid.n, self.grid.length)
    }

    pub fn basis(&self) -> Result<MultiIndexBasis> {
        enumerate_basis(self.dim, self.m)
    }

    /// The constant reference coefficients `a`.
    pub fn base_field(&self, basis: &MultiIndexBasis) -> Result<HermitianMatrixField> {
        match &self.base {
            BaseSpec::Polyharmonic => Ok(HermitianMatrixField::polyharmonic(basis.clone())),
            BaseSpec::Matrix(spec) => {
                let field = HermitianMatrixField::constant(basis.clone(), spec.to_matrix(basis.nu())?)?;
                field.check_positive_definite()?;
                Ok(field)
            }
        }
    }

    /// The perturbed coefficients `ã` sampled on `grid`. Positive
    /// definiteness is not checked here.
    pub fn perturbed_field(&self, a: &HermitianMatrixField, grid: &TorusGrid) -> Result<HermitianMatrixField> {
        let base = a
            .constant_matrix()
            .ok_or_else(|| Error::InvalidArgument("reference coefficients must be constant".into()))?;
        let nu = a.nu();
        let points = grid.points();
        let amplitude = |amp: &Amplitude| -> Result<CMatrix> {
            match amp {
                Amplitude::Scale(s) => Ok(base.scale(*s)),
                Amplitude::Matrix(spec) => spec.to_matrix(nu),
            }
        };
        let samples: Vec<CMatrix> = match &self.perturbation {
            PerturbationSpec::None => vec![base.clone(); points],
            PerturbationSpec::Impurity { region, amplitude: amp } => {
                let b = amplitude(amp)?;
                let inside = region.mask(grid);
                inside.iter().map(|&i| if i { base + &b } else { base.clone() }).collect()
            }
            PerturbationSpec::Bump { center, radius, amplitude: amp } => {
                let b = amplitude(amp)?;
                (0..points)
                    .map(|p| {
                        let x = grid.coordinates(p);
                        let r2: f64 = x.iter().zip(center).map(|(u, c)| (u - c).powi(2)).sum::<f64>() / radius.powi(2);
                        base + b.scale(bump(r2))
                    })
                    .collect()
            }
            PerturbationSpec::Degenerate { region, floor } => {
                let (vals, vecs) = hermitian_eigen(base);
                let v0 = vecs.column(0);
                let pinched = base + (v0 * v0.adjoint()).scale(floor - vals[0]);
                let inside = region.mask(grid);
                inside.iter().map(|&i| if i { pinched.clone() } else { base.clone() }).collect()
            }
        };
        HermitianMatrixField::sampled(a.basis().clone(), samples)
    }
}

/// `exp(1 - 1/(1 - r²))` for `r² < 1`, else 0.
fn bump(r2: f64) -> f64 {
    if r2 < 1.0 {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

impl Region {
    /// Membership of every grid point.
    pub fn mask(&self, grid: &TorusGrid) -> Vec<bool> {
        (0..grid.points())
            .map(|p| {
                let x = grid.coordinates(p);
                match self {
                    Region::Box { lower, upper } => {
                        x.iter().zip(lower.iter().zip(upper)).all(|(v, (lo, hi))| *lo <= *v && *v < *hi)
                    }
                    Region::Ball { center, radius } => {
                        x.iter().zip(center).map(|(v, c)| (v - c).powi(2)).sum::<f64>() < radius * radius
                    }
                }
            })
            .collect()
    }

    /// Grid-measured volume `h^N · #cells`.
    pub fn volume(&self, grid: &TorusGrid) -> f64 {
        self.mask(grid).iter().filter(|&&b| b).count() as f64 * grid.cell_volume()
    }
}

impl MatrixSpec {
    pub fn to_matrix(&self, nu: usize) -> Result<CMatrix> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == nu && rows.iter().all(|r| r.len() == nu);
        if !shape_ok(&self.re) || self.im.as_ref().is_some_and(|im| !shape_ok(im)) {
            return Err(Error::Config(format!("matrix must be {nu} x {nu}")));
        }
        Ok(CMatrix::from_fn(nu, nu, |r, c| {
            let im = self.im.as_ref().map_or(0.0, |im| im[r][c]);
            C64::new(self.re[r][c], im)
        }))
    }
}
