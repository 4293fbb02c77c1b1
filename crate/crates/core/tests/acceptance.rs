//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schatten_resolvent::coeff::{
    coarea_constant, lattice_profile_integral, matrix_sqrt, polyharmonic_coefficients, sublevel_volume,
    HermitianMatrixField,
};
use schatten_resolvent::harness::experiments::{
    clipping_study, refinement_study, verify_suite, volume_scaling_study, RunContext,
};
use schatten_resolvent::harness::{PValue, SuiteConfig};
use schatten_resolvent::multiindex::enumerate_basis;
use schatten_resolvent::norms::{weighted_g_norm, GNorm, WeightedNormSpec};
use schatten_resolvent::profile::ResolventProfile;
use schatten_resolvent::schatten::{deift_residual, polar_isometry_check};
use schatten_resolvent::torus::{assemble_t, TorusGrid, DEFAULT_DIMENSION_CAP};
use schatten_resolvent::{CMatrix, C64};
use statrs::function::gamma::ln_gamma;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn report(id: u32, name: &str, o: &Outcome) -> bool {
    let tag = if o.passed { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id:>2} {name}: {}", o.detail);
    o.passed
}

fn polyharmonic_b(dim: usize, m: u32) -> CMatrix {
    let basis = enumerate_basis(dim, m).unwrap();
    matrix_sqrt(&polyharmonic_coefficients(&basis)).unwrap()
}

fn deift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rows = rng.random_range(1..=20);
        let cols = rng.random_range(1..=20);
        let s = CMatrix::from_fn(rows, cols, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        worst = worst.max(deift_residual(&s).unwrap());
    }
    let grid = TorusGrid::new(1, 32, 8.0).unwrap();
    let basis = enumerate_basis(1, 1).unwrap();
    let b = HermitianMatrixField::polyharmonic(basis).sqrt().unwrap();
    let t = assemble_t(&b, &grid).unwrap().materialize(DEFAULT_DIMENSION_CAP).unwrap();
    let on_t = deift_residual(&t).unwrap();
    outcome(worst < 1e-12 && on_t < 1e-10, format!("random max {worst:.3e} (< 1e-12), T {on_t:.3e} (< 1e-10)"))
}

fn factorization(suite: &SuiteConfig, verify: &[schatten_resolvent::harness::ReportRow]) -> Outcome {
    let mut checked = 0;
    let mut ok = true;
    let mut worst: BTreeMap<(usize, u32, &str), f64> = BTreeMap::new();
    for e in &suite.verify {
        let kind = if e.id.contains("-box-") {
            "box"
        } else if e.id.contains("-bump-") {
            "bump"
        } else {
            continue;
        };
        let limit = match (e.dim, e.m, e.grid.n) {
            (1, 1 | 2, 64) => 1e-10,
            (2, 1, 16) => 1e-9,
            _ => continue,
        };
        let r = verify
            .iter()
            .find(|r| r.experiment == e.id)
            .and_then(|r| r.factorization_residual)
            .unwrap_or(f64::INFINITY);
        ok &= r < limit;
        checked += 1;
        let slot = worst.entry((e.dim, e.m, kind)).or_insert(0.0);
        *slot = slot.max(r);
    }
    let detail: Vec<String> =
        worst.iter().map(|((d, m, k), r)| format!("N={d} m={m} {k} {r:.2e}")).collect();
    outcome(ok && worst.len() == 6, format!("{checked} experiments, worst per case: {}", detail.join(", ")))
}

fn polar() -> Outcome {
    let grid = TorusGrid::new(1, 32, 8.0).unwrap();
    let a = HermitianMatrixField::polyharmonic(enumerate_basis(1, 1).unwrap());
    let c = polar_isometry_check(&a, &grid, DEFAULT_DIMENSION_CAP).unwrap();
    outcome(
        c.factor_residual < 1e-9 && c.partial_isometry_residual < 1e-9,
        format!(
            "factor {:.3e}, partial isometry {:.3e}, rank {}",
            c.factor_residual, c.partial_isometry_residual, c.rank
        ),
    )
}

/// `Beta(p/2 + N/2m, p/2 - N/2m)^{1/p}` from log-gamma.
fn g_star_oracle(p: f64, dim: usize, m: u32) -> f64 {
    let r = dim as f64 / (2.0 * f64::from(m));
    let (x, y) = (p / 2.0 + r, p / 2.0 - r);
    ((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)) / p).exp()
}

fn weighted_norm() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut ok = true;
    for dim in 1..=3 {
        for m in 1..=3u32 {
            let threshold = dim as f64 / f64::from(m);
            for p in [2.0, 3.0, 4.0, 6.0, 8.0] {
                let spec = WeightedNormSpec::new(p, dim, m).unwrap();
                let got = weighted_g_norm(&ResolventProfile, &spec, 1e-12).unwrap();
                if p > threshold {
                    let want = g_star_oracle(p, dim, m);
                    match got {
                        GNorm::Finite(v) => worst = worst.max((v - want).abs() / want),
                        GNorm::Divergent => ok = false,
                    }
                    cases += 1;
                } else {
                    ok &= got.is_divergent();
                }
            }
            // p = N/m exactly, and one below it when that is still ≥ 1.
            if threshold >= 1.0 {
                let at = WeightedNormSpec::new(threshold, dim, m).unwrap();
                ok &= weighted_g_norm(&ResolventProfile, &at, 1e-12).unwrap().is_divergent();
            }
            if threshold > 1.0 {
                let below = WeightedNormSpec::new((threshold + 1.0) / 2.0, dim, m).unwrap();
                ok &= weighted_g_norm(&ResolventProfile, &below, 1e-12).unwrap().is_divergent();
            }
        }
    }
    outcome(ok && worst < 1e-8, format!("{cases} finite cases, max relative error {worst:.3e}; divergence flags ok: {ok}"))
}

fn coarea() -> Outcome {
    let basis = enumerate_basis(2, 1).unwrap();
    let b = polyharmonic_b(2, 1);
    let vol = sublevel_volume(&b, &basis, 1_000_000, 7).unwrap();
    let sigmas = (vol.estimate - std::f64::consts::PI).abs() / vol.std_error;
    let mut ok = sigmas <= 3.0;
    let mut detail = format!("vol {:.5} ± {:.1e} ({sigmas:.2} SE)", vol.estimate, vol.std_error);

    // g²(A) = A/(1+A)² < 1e-6 once A > 1e6, i.e. |ξ| > 1e6^{1/2m}.
    for (dim, m, spacing, radius) in [(1usize, 1u32, 0.01, 1100.0), (2, 2, 0.02, 34.0)] {
        let basis = enumerate_basis(dim, m).unwrap();
        let b = polyharmonic_b(dim, m);
        let c = coarea_constant(&b, &basis, 1_000_000, 11).unwrap();
        let g2 = weighted_g_norm(&ResolventProfile, &WeightedNormSpec::new(2.0, dim, m).unwrap(), 1e-12)
            .unwrap()
            .finite()
            .unwrap();
        let lattice = lattice_profile_integral(&b, &basis, &ResolventProfile, 2.0, spacing, radius).unwrap();
        let predicted = c.value * g2 * g2;
        let rel = (lattice - predicted).abs() / predicted;
        ok &= rel < 0.02;
        detail.push_str(&format!("; lattice N={dim} m={m} relative gap {rel:.2e}"));
    }
    outcome(ok, detail)
}

fn main() {
    let total = Instant::now();
    let suite = SuiteConfig::bundled();
    let mut all = true;

    all &= report(1, "deift identity", &deift());

    let start = Instant::now();
    let verify = verify_suite(&suite, false).expect("verify battery runs");
    let verify_time = start.elapsed();

    all &= report(2, "factorization chain", &factorization(&suite, &verify.rows));
    all &= report(3, "polar decomposition", &polar());
    all &= report(4, "weighted norm", &weighted_norm());
    all &= report(5, "coarea constant", &coarea());

    let start = Instant::now();
    let rc = suite.refine.as_ref().expect("bundled refine study");
    let (_, refine) = refinement_study(rc, &RunContext::for_experiment(&suite, &rc.experiment, false)).unwrap();
    let refine_time = start.elapsed();
    {
        let finite: Vec<f64> = verify
            .rows
            .iter()
            .filter(|r| matches!(r.p, PValue::Finite(_)) && r.constant.finite().is_some())
            .map(|r| r.ratio.unwrap_or(f64::INFINITY))
            .collect();
        let max_ratio = finite.iter().copied().fold(0.0, f64::max);
        let drifts: Vec<f64> = refine
            .tracks
            .iter()
            .filter(|t| matches!(t.p, PValue::Finite(_)))
            .filter_map(|t| t.drift)
            .collect();
        let max_drift = drifts.iter().copied().fold(0.0, f64::max);
        let ok = !finite.is_empty() && max_ratio <= 1.05 && !drifts.is_empty() && max_drift < 0.02;
        all &= report(
            6,
            "schatten bound battery",
            &outcome(
                ok,
                format!(
                    "{} rows, max ratio {max_ratio:.4}; refinement drift {max_drift:.2e} (n={:?})",
                    finite.len(),
                    refine.n
                ),
            ),
        );
    }
    {
        let ratios: Vec<f64> = verify
            .rows
            .iter()
            .filter(|r| r.p == PValue::Inf)
            .map(|r| r.ratio.unwrap_or(f64::INFINITY))
            .collect();
        let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
        all &= report(
            7,
            "operator-norm bound",
            &outcome(ratios.len() == suite.verify.len() && max_ratio <= 1.05, format!("{} rows, max ratio {max_ratio:.4}", ratios.len())),
        );
    }

    let start = Instant::now();
    let sc = suite.scale.as_ref().expect("bundled scale study");
    let (rows, scale) = volume_scaling_study(sc, &RunContext::for_experiment(&suite, &sc.experiment, false)).unwrap();
    let scale_time = start.elapsed();
    {
        let slope_dev = scale.fits.iter().map(|f| (f.rhs_slope - 1.0 / f.p).abs()).fold(0.0, f64::max);
        let bound_ok = rows
            .iter()
            .filter(|r| matches!(r.p, PValue::Finite(_)))
            .all(|r| r.constant.finite().is_some_and(|c| r.lhs <= c * r.rhs));
        let ok = scale.volumes.len() >= 6 && slope_dev <= 1e-6 && bound_ok;
        all &= report(
            8,
            "impurity scaling",
            &outcome(
                ok,
                format!("{} volumes, max |slope - 1/p| {slope_dev:.2e}, lhs <= constant*rhs: {bound_ok}", scale.volumes.len()),
            ),
        );
    }

    let start = Instant::now();
    let cc = suite.clip.as_ref().expect("bundled clip study");
    let (rows, clip) = clipping_study(cc, &RunContext::for_experiment(&suite, &cc.experiment, false)).unwrap();
    let clip_time = start.elapsed();
    {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for level in [1u32, 4, 16, 64] {
            let id = format!("{}/clip={level}", cc.experiment.id);
            let level_rows: Vec<_> = rows.iter().filter(|r| r.experiment == id).collect();
            ok &= !level_rows.is_empty();
            for r in level_rows {
                let ratio = r.ratio.unwrap_or(f64::INFINITY);
                worst = worst.max(ratio);
                ok &= ratio <= 1.05;
            }
        }
        let beyond: Vec<f64> = clip
            .cauchy
            .iter()
            .filter(|c| f64::from(c.level) >= clip.exact_level)
            .map(|c| c.difference)
            .collect();
        let non_increasing = beyond.len() >= 2 && beyond.windows(2).all(|w| w[1] <= w[0]);
        let strict_from = clip.cauchy.iter().filter(|c| c.level >= cc.monotone_from).collect::<Vec<_>>();
        let decreasing = strict_from
            .windows(2)
            .all(|w| w[1].difference < w[0].difference || w[1].difference == 0.0 && w[0].difference == 0.0);
        ok &= non_increasing && decreasing;
        all &= report(
            9,
            "clipped coefficients",
            &outcome(
                ok,
                format!(
                    "max ratio {worst:.4} at n in {{1,4,16,64}}; spectral range {:.1e}..{:.1e}; \
                     Cauchy differences non-increasing beyond it: {non_increasing}, decreasing from n={}: {decreasing}",
                    clip.spectral_range.0, clip.spectral_range.1, cc.monotone_from
                ),
            ),
        );
    }

    {
        let dir = tempfile::tempdir().unwrap();
        let bin = env!("CARGO_BIN_EXE_schatten-verify");
        let mut runs = Vec::new();
        let mut codes = Vec::new();
        let start = Instant::now();
        for k in 0..2 {
            let out = dir.path().join(format!("run{k}"));
            let status = Command::new(bin)
                .args(["verify", "--seed", "20240601", "--out"])
                .arg(&out)
                .output()
                .expect("binary runs");
            codes.push(status.status.code());
            runs.push(std::fs::read(Path::new(&out).join("verify.csv")).unwrap_or_default());
        }
        let cli_time = start.elapsed() / 2;
        let suite_time: Duration = cli_time + refine_time + scale_time + clip_time;
        let identical = !runs[0].is_empty() && runs[0] == runs[1];
        let ok = codes.iter().all(|c| *c == Some(0)) && identical && suite_time < Duration::from_secs(600);
        all &= report(
            10,
            "end to end",
            &outcome(
                ok,
                format!(
                    "exit codes {codes:?}, identical CSV: {identical}, suite {:.1}s \
                     (verify {:.1}s, in-process verify {:.1}s)",
                    suite_time.as_secs_f64(),
                    cli_time.as_secs_f64(),
                    verify_time.as_secs_f64()
                ),
            ),
        );
    }

    println!("acceptance finished in {:.1}s", total.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
