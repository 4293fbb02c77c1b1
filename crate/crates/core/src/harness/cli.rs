//! Command-line entry point.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::{Error, Result};

use super::config::SuiteConfig;
use super::experiments::{
    clipping_study, constants_table, refinement_study, verify_suite, volume_scaling_study, RunContext,
};
use super::report::{format_f64, write_csv, Assertion, ReportRow, Summary};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SCHATTEN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "schatten-verify", version, about = "Checks Schatten-class resolvent bounds on periodic grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON suite config; the bundled default when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for the CSV table and JSON summary.
    #[arg(long, global = true, default_value = "results")]
    pub out: PathBuf,
    /// Overrides every seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides every dense dimension cap in the config.
    #[arg(long = "max-dim", global = true)]
    pub max_dim: Option<usize>,
    /// Fill the `seconds` column (makes the CSV run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bound battery over the `verify` experiments.
    Verify,
    /// Impurity volume sweep.
    Scale,
    /// Coefficient clipping sequence.
    Clip,
    /// Grid refinement sequence.
    Refine,
    /// Print the coarea constant, ‖g‖_p^* and the bound constant per p.
    Constants,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Scale => "scale",
            Command::Clip => "clip",
            Command::Refine => "refine",
            Command::Constants => "constants",
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code: 0 when every assertion passes, 1 when one fails, 2 on
/// configuration, I/O or numerical errors.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // Fails only if a pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn load_config(cli: &Cli) -> Result<SuiteConfig> {
    let mut suite = match &cli.config {
        Some(path) => SuiteConfig::from_path(path)?,
        None => SuiteConfig::bundled(),
    };
    let mut experiments: Vec<&mut super::config::ExperimentConfig> = suite.verify.iter_mut().collect();
    if let Some(s) = suite.scale.as_mut() {
        experiments.push(&mut s.experiment);
    }
    if let Some(c) = suite.clip.as_mut() {
        experiments.push(&mut c.experiment);
    }
    if let Some(r) = suite.refine.as_mut() {
        experiments.push(&mut r.experiment);
    }
    for e in experiments {
        if cli.seed.is_some() {
            e.seed = None;
        }
        if cli.max_dim.is_some() {
            e.max_dim = None;
        }
    }
    if let Some(seed) = cli.seed {
        suite.seed = seed;
    }
    if let Some(cap) = cli.max_dim {
        suite.max_dim = cap;
    }
    suite.validate()?;
    Ok(suite)
}

fn missing(section: &str) -> Error {
    Error::Config(format!("config has no `{section}` section"))
}

fn execute(cli: &Cli) -> Result<bool> {
    let suite = load_config(cli)?;
    let name = cli.command.name();
    let (rows, assertions, studies): (Vec<ReportRow>, Vec<Assertion>, serde_json::Value) = match cli.command {
        Command::Verify => {
            let report = verify_suite(&suite, cli.timings)?;
            (report.rows, report.assertions, serde_json::Value::Null)
        }
        Command::Scale => {
            let sc = suite.scale.as_ref().ok_or_else(|| missing("scale"))?;
            let ctx = RunContext::for_experiment(&suite, &sc.experiment, cli.timings);
            let (rows, summary) = volume_scaling_study(sc, &ctx)?;
            let assertions = summary.assertions.clone();
            (rows, assertions, to_value(&summary)?)
        }
        Command::Clip => {
            let cc = suite.clip.as_ref().ok_or_else(|| missing("clip"))?;
            let ctx = RunContext::for_experiment(&suite, &cc.experiment, cli.timings);
            let (rows, summary) = clipping_study(cc, &ctx)?;
            let assertions = summary.assertions.clone();
            (rows, assertions, to_value(&summary)?)
        }
        Command::Refine => {
            let rc = suite.refine.as_ref().ok_or_else(|| missing("refine"))?;
            let ctx = RunContext::for_experiment(&suite, &rc.experiment, cli.timings);
            let (rows, summary) = refinement_study(rc, &ctx)?;
            let assertions = summary.assertions.clone();
            (rows, assertions, to_value(&summary)?)
        }
        Command::Constants => {
            let table = constants_table(&suite)?;
            println!("experiment,p,c_cov,g_star_quadrature,g_star_closed_form,constant");
            for t in &table {
                let show = |v: Option<f64>| v.map(format_f64).unwrap_or_else(|| "divergent".into());
                println!(
                    "{},{},{},{},{},{}",
                    t.experiment,
                    t.p,
                    format_f64(t.coarea.value),
                    show(t.g_star_quadrature),
                    show(t.g_star_closed_form),
                    show(t.constant)
                );
            }
            let summary = Summary::new(name, &suite, Vec::new(), &table);
            write_file(&cli.out, &format!("{name}.json"), summary.to_json()?.as_bytes())?;
            return Ok(true);
        }
    };

    let mut csv = Vec::new();
    write_csv(&mut csv, &rows)?;
    write_file(&cli.out, &format!("{name}.csv"), &csv)?;
    let summary = Summary::new(name, &suite, assertions, studies);
    write_file(&cli.out, &format!("{name}.json"), summary.to_json()?.as_bytes())?;

    let failed: Vec<&Assertion> = summary.assertions.iter().filter(|a| !a.passed).collect();
    for a in &failed {
        eprintln!("FAIL {}: {}", a.name, a.detail);
    }
    println!(
        "{name}: {} rows, {}/{} assertions passed",
        rows.len(),
        summary.assertions.len() - failed.len(),
        summary.assertions.len()
    );
    Ok(summary.passed)
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
