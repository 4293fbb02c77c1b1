//! The studies behind the CLI subcommands.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{
    clip_coefficients, coarea_constant, coarea_constant_from_volume, unit_ball_volume, HermitianMatrixField,
};
use crate::multiindex::MultiIndexBasis;
use crate::norms::{closed_form_g_star, perturbation_v, weighted_g_norm, GNorm, WeightedNormSpec};
use crate::profile::ResolventProfile;
use crate::schatten::{
    deift_residual, factorization_residual, remark_bound_check, resolvent, schatten_bound_constant, BoundCheck,
    FactorizationCheck, ResolventDifference, SingularSpectrum,
};
use crate::torus::{assemble_h_const, assemble_h_var, assemble_t, TorusGrid};
use crate::{CMatrix, Error, Result};

use super::config::{
    BaseSpec, ClipConfig, ExperimentConfig, PerturbationSpec, RefineConfig, Region, ScaleConfig, SuiteConfig,
    Tolerances,
};
use super::report::{row_assertions, Assertion, PValue, ReportRow};

/// Relative tolerance for the quadrature behind `‖g‖_p^*`.
const G_NORM_TOL: f64 = 1e-12;

/// Settings shared by every experiment of a run.
#[derive(Debug, Clone, Copy)]
pub struct RunContext {
    pub cap: usize,
    pub seed: u64,
    pub mc_samples: u64,
    pub tolerances: Tolerances,
    pub timings: bool,
}

impl RunContext {
    pub fn for_experiment(suite: &SuiteConfig, e: &ExperimentConfig, timings: bool) -> Self {
        Self {
            cap: suite.max_dim_for(e),
            seed: suite.seed_for(e),
            mc_samples: suite.monte_carlo_samples,
            tolerances: suite.tolerances_for(e),
            timings,
        }
    }
}

/// The coarea constant and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoareaInfo {
    pub value: f64,
    pub volume: f64,
    /// Zero for the exact polyharmonic volume.
    pub std_error: f64,
    pub exact: bool,
}

/// `c_cov` for the reference operator: exact for polyharmonic coefficients,
/// whose sublevel set is the unit ball, Monte Carlo otherwise.
pub fn coarea_for(
    e: &ExperimentConfig,
    basis: &MultiIndexBasis,
    a: &HermitianMatrixField,
    ctx: &RunContext,
) -> Result<CoareaInfo> {
    if e.base == BaseSpec::Polyharmonic {
        let volume = unit_ball_volume(e.dim);
        return Ok(CoareaInfo {
            value: coarea_constant_from_volume(volume, e.dim, e.m),
            volume,
            std_error: 0.0,
            exact: true,
        });
    }
    let b = a.sqrt()?;
    let b = b.constant_matrix().expect("reference coefficients are constant");
    let c = coarea_constant(b, basis, ctx.mc_samples, ctx.seed)?;
    Ok(CoareaInfo { value: c.value, volume: c.volume.estimate, std_error: c.volume.std_error, exact: false })
}

/// `(1/2) c_cov^{1/p} ‖g‖_p^*` for the resolvent profile.
pub fn resolvent_bound_constant(c_cov: f64, p: f64, dim: usize, m: u32) -> Result<GNorm> {
    let spec = WeightedNormSpec::new(p, dim, m)?;
    Ok(schatten_bound_constant(c_cov, closed_form_g_star(&spec), p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LhsNorm {
    Schatten,
    Operator,
}

/// Everything computed for one pair `(a, ã)`.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub rows: Vec<ReportRow>,
    pub difference: ResolventDifference,
    pub factorization: FactorizationCheck,
    pub deift: f64,
}

#[allow(clippy::too_many_arguments)]
fn evaluate_pair(
    id: &str,
    e: &ExperimentConfig,
    grid: &TorusGrid,
    a: &HermitianMatrixField,
    a_tilde: &HermitianMatrixField,
    coarea: &CoareaInfo,
    ctx: &RunContext,
    norm: LhsNorm,
) -> Result<Evaluation> {
    let start = Instant::now();
    a_tilde.check_positive_definite()?;
    let h = assemble_h_const(a, grid)?;
    let ht = assemble_h_var(a_tilde, grid)?;
    let difference = ResolventDifference::compute(&h, &ht, ctx.cap)?;
    let spectrum = SingularSpectrum::of(&difference.delta);
    let v = perturbation_v(a, a_tilde, grid)?;
    let factorization = factorization_residual(a, a_tilde, grid, &difference.delta, ctx.cap)?;
    let s = assemble_t(&a_tilde.sqrt()?, grid)?.materialize(ctx.cap)?;
    let deift = deift_residual(&s)?;

    let mut rows = Vec::with_capacity(e.p.len() + 1);
    let mut push = |p: PValue, lhs: f64, rhs: f64, constant: GNorm| {
        let ratio = constant.finite().map(|c| BoundCheck::new(lhs, rhs, c).ratio);
        rows.push(ReportRow {
            experiment: id.to_string(),
            p,
            lhs,
            rhs,
            constant,
            ratio,
            factorization_residual: Some(factorization.residual),
            deift_residual: Some(deift),
            n: grid.n(),
            length: grid.length(),
            seconds: None,
        });
    };
    for &p in &e.p {
        let lhs = match norm {
            LhsNorm::Schatten => spectrum.schatten(p)?,
            LhsNorm::Operator => spectrum.largest(),
        };
        let constant = resolvent_bound_constant(coarea.value, p, e.dim, e.m)?;
        push(PValue::Finite(p), lhs, v.lp_norm(p)?, constant);
    }
    let remark = remark_bound_check(&difference.delta, v.lp_norm(f64::INFINITY)?);
    push(PValue::Inf, remark.lhs, remark.rhs, GNorm::Finite(remark.constant));

    if ctx.timings {
        let secs = start.elapsed().as_secs_f64();
        for r in &mut rows {
            r.seconds = Some(secs);
        }
    }
    Ok(Evaluation { rows, difference, factorization, deift })
}

/// Builds `H` and `H̃` for one configured perturbation and reports every `p`
/// plus an operator-norm row against `(1/4)‖V‖_∞`.
pub fn impurity_experiment(e: &ExperimentConfig, ctx: &RunContext) -> Result<Evaluation> {
    run_with_id(&e.id, e, ctx)
}

fn run_with_id(id: &str, e: &ExperimentConfig, ctx: &RunContext) -> Result<Evaluation> {
    let grid = e.torus()?;
    let basis = e.basis()?;
    let a = e.base_field(&basis)?;
    let a_tilde = e.perturbed_field(&a, &grid)?;
    let coarea = coarea_for(e, &basis, &a, ctx)?;
    evaluate_pair(id, e, &grid, &a, &a_tilde, &coarea, ctx, LhsNorm::Schatten)
}

/// Schatten norms must not increase with `p` on one experiment.
pub fn monotonicity_assertions(rows: &[ReportRow]) -> Vec<Assertion> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let id = &rows[start].experiment;
        let end = start + rows[start..].iter().take_while(|r| &r.experiment == id).count();
        let mut finite: Vec<(f64, f64)> = rows[start..end]
            .iter()
            .filter_map(|r| match r.p {
                PValue::Finite(p) => Some((p, r.lhs)),
                PValue::Inf => None,
            })
            .collect();
        finite.sort_by(|x, y| x.0.total_cmp(&y.0));
        let ok = finite.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-12));
        out.push(Assertion::new(format!("schatten-monotone[{id}]"), ok, format!("{finite:?}")));
        start = end;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<ReportRow>,
    pub assertions: Vec<Assertion>,
}

/// Runs every experiment of the suite's `verify` list.
pub fn verify_suite(suite: &SuiteConfig, timings: bool) -> Result<VerifyReport> {
    let results: Vec<Result<(Vec<ReportRow>, Tolerances)>> = suite
        .verify
        .par_iter()
        .map(|e| {
            let ctx = RunContext::for_experiment(suite, e, timings);
            impurity_experiment(e, &ctx)
                .map(|ev| (ev.rows, ctx.tolerances))
                .map_err(|err| annotate(&e.id, err))
        })
        .collect();
    let mut rows = Vec::new();
    let mut assertions = Vec::new();
    for r in results {
        let (mut experiment_rows, tol) = r?;
        assertions.extend(row_assertions(&experiment_rows, tol.ratio_slack, tol.factorization, tol.deift));
        assertions.extend(monotonicity_assertions(&experiment_rows));
        rows.append(&mut experiment_rows);
    }
    Ok(VerifyReport { rows, assertions })
}

fn annotate(id: &str, err: Error) -> Error {
    match err {
        Error::NonPositiveDefinite { min_eigenvalue, points } => {
            Error::Config(format!(
                "experiment {id:?}: perturbed coefficients are not positive definite \
                 (min eigenvalue {min_eigenvalue} at points {points:?}); clip them first"
            ))
        }
        Error::DimensionCap { dim, cap } => {
            Error::Config(format!("experiment {id:?}: dense dimension {dim} exceeds cap {cap}"))
        }
        other => other,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub p: f64,
    pub rhs_slope: f64,
    pub lhs_slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleSummary {
    /// Grid-measured `|U|` per sweep point.
    pub volumes: Vec<f64>,
    pub fits: Vec<SlopeFit>,
    pub assertions: Vec<Assertion>,
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Centered grid-aligned box with `k` cells per axis.
fn centered_box(grid: &TorusGrid, k: usize) -> Region {
    let h = grid.spacing();
    let first = grid.n() / 2 - k / 2;
    let lower = -grid.length() / 2.0 + (first as f64 - 0.5) * h;
    Region::Box { lower: vec![lower; grid.dim()], upper: vec![lower + k as f64 * h; grid.dim()] }
}

/// Sweeps the impurity volume with the amplitude held fixed.
pub fn volume_scaling_study(sc: &ScaleConfig, ctx: &RunContext) -> Result<(Vec<ReportRow>, ScaleSummary)> {
    let e = &sc.experiment;
    let grid = e.torus()?;
    let mut configs = Vec::new();
    let mut volumes = Vec::new();
    for &target in &sc.volumes {
        let k = (target.powf(1.0 / e.dim as f64) / grid.spacing()).round().max(1.0) as usize;
        if k > grid.n() {
            return Err(Error::Config(format!("scale: volume {target} does not fit on the grid")));
        }
        let region = centered_box(&grid, k);
        let volume = region.volume(&grid);
        if volumes.last().is_some_and(|&v| v >= volume) {
            return Err(Error::Config(format!(
                "scale: volume {target} is not representable distinctly at spacing {}",
                grid.spacing()
            )));
        }
        volumes.push(volume);
        let mut c = e.clone();
        if let PerturbationSpec::Impurity { region: r, .. } = &mut c.perturbation {
            *r = region;
        }
        configs.push(c);
    }
    let evaluations: Vec<Result<Evaluation>> = configs
        .par_iter()
        .zip(&volumes)
        .map(|(c, v)| run_with_id(&format!("{}/U={v}", e.id), c, ctx))
        .collect();
    let mut rows = Vec::new();
    for ev in evaluations {
        rows.extend(ev.map_err(|err| annotate(&e.id, err))?.rows);
    }

    let tol = ctx.tolerances;
    let mut assertions = row_assertions(&rows, tol.ratio_slack, tol.factorization, tol.deift);
    let per_point = e.p.len() + 1;
    let log_v: Vec<f64> = volumes.iter().map(|v| v.ln()).collect();
    let mut fits = Vec::new();
    for (j, &p) in e.p.iter().enumerate() {
        let rhs: Vec<f64> = rows.iter().skip(j).step_by(per_point).map(|r| r.rhs).collect();
        let lhs: Vec<f64> = rows.iter().skip(j).step_by(per_point).map(|r| r.lhs).collect();
        let rhs_slope = slope(&log_v, &rhs.iter().map(|v| v.ln()).collect::<Vec<_>>());
        let lhs_slope = slope(&log_v, &lhs.iter().map(|v| v.ln()).collect::<Vec<_>>());
        assertions.push(Assertion::new(
            format!("scale-slope[{},p={p}]", e.id),
            (rhs_slope - 1.0 / p).abs() <= tol.slope,
            format!("rhs slope {rhs_slope}, expected {}", 1.0 / p),
        ));
        for k in 1..volumes.len() {
            if ((volumes[k] / volumes[k - 1]) - 2.0).abs() < 1e-12 {
                let got = rhs[k] / rhs[k - 1];
                let want = 2f64.powf(1.0 / p);
                assertions.push(Assertion::new(
                    format!("scale-doubling[{},p={p},U={}]", e.id, volumes[k]),
                    (got - want).abs() <= 1e-12 * want,
                    format!("rhs ratio {got}, expected {want}"),
                ));
            }
        }
        fits.push(SlopeFit { p, rhs_slope, lhs_slope });
    }
    let summary = ScaleSummary { volumes, fits, assertions };
    Ok((rows, summary))
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyStep {
    pub level: u32,
    /// `‖R_n - R_{2n}‖` in operator norm.
    pub difference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClipSummary {
    /// Extreme eigenvalues of the unclipped `ã`.
    pub spectral_range: (f64, f64),
    /// Smallest level at which clipping leaves `ã` unchanged.
    pub exact_level: f64,
    pub cauchy: Vec<CauchyStep>,
    pub assertions: Vec<Assertion>,
}

/// Clips `ã` at each level, checks the operator-norm bound and tracks
/// `‖R_n - R_{2n}‖`.
pub fn clipping_study(cc: &ClipConfig, ctx: &RunContext) -> Result<(Vec<ReportRow>, ClipSummary)> {
    let e = &cc.experiment;
    let grid = e.torus()?;
    let basis = e.basis()?;
    let a = e.base_field(&basis)?;
    let raw = e.perturbed_field(&a, &grid)?;
    let spectral_range = raw.spectral_range();
    let exact_level = (1.0 / spectral_range.0).max(spectral_range.1);
    let coarea = coarea_for(e, &basis, &a, ctx)?;

    let steps: Vec<Result<(Vec<ReportRow>, f64)>> = cc
        .levels
        .par_iter()
        .map(|&n| {
            let clipped = clip_coefficients(&raw, n)?;
            let id = format!("{}/clip={n}", e.id);
            let ev = evaluate_pair(&id, e, &grid, &a, &clipped, &coarea, ctx, LhsNorm::Operator)?;
            let doubled = clip_coefficients(&raw, 2 * n)?;
            let r2 = resolvent(&assemble_h_var(&doubled, &grid)?, ctx.cap)?;
            let diff: CMatrix = &ev.difference.perturbed - &r2;
            Ok((ev.rows, SingularSpectrum::of(&diff).largest()))
        })
        .collect();
    let mut rows = Vec::new();
    let mut cauchy = Vec::new();
    for (step, &level) in steps.into_iter().zip(&cc.levels) {
        let (r, d) = step.map_err(|err| annotate(&e.id, err))?;
        rows.extend(r);
        cauchy.push(CauchyStep { level, difference: d });
    }
    let tol = ctx.tolerances;
    let mut assertions = row_assertions(&rows, tol.ratio_slack, tol.factorization, tol.deift);
    let tail: Vec<&CauchyStep> = cauchy.iter().filter(|c| c.level >= cc.monotone_from).collect();
    let decreasing = tail
        .windows(2)
        .all(|w| w[1].difference < w[0].difference || (w[1].difference == 0.0 && w[0].difference == 0.0));
    assertions.push(Assertion::new(
        format!("clip-cauchy-decreasing[{},n>={}]", e.id, cc.monotone_from),
        decreasing,
        format!("{:?}", tail.iter().map(|c| (c.level, c.difference)).collect::<Vec<_>>()),
    ));
    for c in cauchy.iter().filter(|c| f64::from(c.level) >= exact_level) {
        assertions.push(Assertion::new(
            format!("clip-exact[{},n={}]", e.id, c.level),
            c.difference == 0.0,
            format!("clipping is the identity above {exact_level}; difference {}", c.difference),
        ));
    }
    let summary = ClipSummary { spectral_range, exact_level, cauchy, assertions };
    Ok((rows, summary))
}

#[derive(Debug, Clone, Serialize)]
pub struct RefineTrack {
    pub p: PValue,
    pub lhs: Vec<f64>,
    /// `|lhs_{k+1} - lhs_k| / |lhs_{k+1}|`.
    pub changes: Vec<f64>,
    pub ratios: Vec<Option<f64>>,
    /// Relative ratio change between the two finest grids.
    pub drift: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefineSummary {
    pub n: Vec<usize>,
    pub tracks: Vec<RefineTrack>,
    pub assertions: Vec<Assertion>,
}

/// Repeats one experiment on successively finer grids of the same box.
pub fn refinement_study(rc: &RefineConfig, ctx: &RunContext) -> Result<(Vec<ReportRow>, RefineSummary)> {
    let e = &rc.experiment;
    let evaluations: Vec<Result<Evaluation>> = rc
        .n
        .par_iter()
        .map(|&n| {
            let mut c = e.clone();
            c.grid.n = n;
            run_with_id(&format!("{}/n={n}", e.id), &c, ctx)
        })
        .collect();
    let mut rows = Vec::new();
    for ev in evaluations {
        rows.extend(ev.map_err(|err| annotate(&e.id, err))?.rows);
    }
    let tol = ctx.tolerances;
    let mut assertions = row_assertions(&rows, tol.ratio_slack, tol.factorization, tol.deift);
    let per_grid = e.p.len() + 1;
    let mut tracks = Vec::new();
    for j in 0..per_grid {
        let series: Vec<&ReportRow> = rows.iter().skip(j).step_by(per_grid).collect();
        let lhs: Vec<f64> = series.iter().map(|r| r.lhs).collect();
        let changes: Vec<f64> = lhs
            .windows(2)
            .map(|w| if w[1] == 0.0 { (w[1] - w[0]).abs() } else { ((w[1] - w[0]) / w[1]).abs() })
            .collect();
        let ratios: Vec<Option<f64>> = series.iter().map(|r| r.ratio).collect();
        let drift = match ratios[ratios.len() - 2..] {
            [Some(a), Some(b)] if b > 0.0 => Some(((b - a) / b).abs()),
            [Some(_), Some(_)] => Some(0.0),
            _ => None,
        };
        let p = series[0].p;
        if let Some(d) = drift {
            assertions.push(Assertion::new(
                format!("refine-drift[{},p={p}]", e.id),
                d < tol.refine_drift,
                format!("ratio drift {d} between n={} and n={}", rc.n[rc.n.len() - 2], rc.n[rc.n.len() - 1]),
            ));
        }
        // Successive changes should shrink by at least 4x per doubling until
        // they reach rounding level.
        let shrinking = changes.windows(2).all(|w: &[f64]| w[1] * 4.0 <= w[0] || w[1] < 1e-12);
        assertions.push(Assertion::new(
            format!("refine-shrink[{},p={p}]", e.id),
            shrinking,
            format!("successive relative changes {changes:?}"),
        ));
        tracks.push(RefineTrack { p, lhs, changes, ratios, drift });
    }
    Ok((rows, RefineSummary { n: rc.n.clone(), tracks, assertions }))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsEntry {
    pub experiment: String,
    pub dim: usize,
    pub m: u32,
    pub coarea: CoareaInfo,
    pub p: f64,
    /// `‖g‖_p^*` by quadrature, `None` when divergent.
    pub g_star_quadrature: Option<f64>,
    /// `‖g‖_p^*` from the Beta closed form, `None` when divergent.
    pub g_star_closed_form: Option<f64>,
    /// `(1/2) c_cov^{1/p} ‖g‖_p^*`, `None` when divergent.
    pub constant: Option<f64>,
}

/// Coarea constant, `‖g‖_p^*` and the bound constant for every verify
/// experiment and exponent.
pub fn constants_table(suite: &SuiteConfig) -> Result<Vec<ConstantsEntry>> {
    let mut out = Vec::new();
    for e in &suite.verify {
        let ctx = RunContext::for_experiment(suite, e, false);
        let basis = e.basis()?;
        let a = e.base_field(&basis)?;
        let coarea = coarea_for(e, &basis, &a, &ctx)?;
        for &p in &e.p {
            let spec = WeightedNormSpec::new(p, e.dim, e.m)?;
            let quad = weighted_g_norm(&ResolventProfile, &spec, G_NORM_TOL)?;
            let closed = closed_form_g_star(&spec);
            out.push(ConstantsEntry {
                experiment: e.id.clone(),
                dim: e.dim,
                m: e.m,
                coarea,
                p,
                g_star_quadrature: quad.finite(),
                g_star_closed_form: closed.finite(),
                constant: schatten_bound_constant(coarea.value, closed, p).finite(),
            });
        }
    }
    Ok(out)
}
