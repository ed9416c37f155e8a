use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use btz_detector::params::{BranchIndex, ParamError};
use btz_detector::probability::{sweep_mass, sweep_position, SweepOptions, SweepPoint};
use btz_detector::response::{response_interference, response_single};
use btz_detector::spectrum::{singular_interference_contribution, w_hat_12, w_hat_btz, SpectrumSample};
use btz_detector::validation::{run_validation, ValidationSubset};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

mod config;
mod output;

use config::{ConventionName, Overrides, RunConfig, SweepKind};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0} validation check(s) failed")]
    Validation(usize),
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        Self::Config(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 1,
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "btz-detector", version, about = "Detector response near superposed BTZ black holes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Response of each branch, F/σ.
    SingleResponse(Common),
    /// Interference term F₁₂/σ.
    Interference(Common),
    /// Position or mass sweep to CSV.
    Sweep(Common),
    /// Spectral density over a frequency grid to CSV.
    Spectrum(Common),
    /// Oracle and cross-path consistency checks.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Skip the spectral checks.
        #[arg(long)]
        oracle_only: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Image cutoff N.
    #[arg(long)]
    cutoff: Option<u32>,
    /// Image-count normalisation.
    #[arg(long, value_parser = ["2N", "2N+1"])]
    convention: Option<String>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides { cutoff: self.cutoff, convention: self.convention.as_deref().and_then(ConventionName::parse) }
    }

    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Config(format!("cannot write output: {e}"))),
        }
    }
}

#[derive(Serialize)]
struct BranchRecord {
    branch: u8,
    mass: f64,
    radius: f64,
    ads_radius: f64,
    redshift: f64,
    f_over_sigma: f64,
    error_estimate: f64,
}

#[derive(Serialize)]
struct SingleRecord {
    omega: f64,
    t_f: f64,
    image_cutoff: u32,
    branches: Vec<BranchRecord>,
    runtime_seconds: f64,
}

#[derive(Serialize)]
struct InterferenceRecord {
    omega: f64,
    t_f: f64,
    image_cutoff: u32,
    f12_over_sigma: f64,
    regular_part: f64,
    singular_part: f64,
    error_estimate: f64,
    runtime_seconds: f64,
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    passed: bool,
    checks: &'a [btz_detector::validation::ValidationCheck],
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("record serializes");
    s.push('\n');
    s
}

fn numerical(e: impl ToString) -> CliError {
    CliError::Numerical(e.to_string())
}

fn single_response(common: &Common) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = RunConfig::load(&common.config)?;
    let r = cfg.resolve(common.overrides())?;
    let scn = &r.scenario;
    let mut which = vec![(1, BranchIndex::First)];
    if scn.branch2 != scn.branch1 {
        which.push((2, BranchIndex::Second));
    }
    let mut branches = Vec::new();
    for (index, w) in which {
        let f = response_single(scn, w, &r.numerics).map_err(numerical)?;
        let b = scn.branch(w);
        branches.push(BranchRecord {
            branch: index,
            mass: b.mass(),
            radius: b.radius(),
            ads_radius: b.ads_radius(),
            redshift: b.redshift(),
            f_over_sigma: f.value,
            error_estimate: f.abs_error_estimate,
        });
    }
    let record = SingleRecord {
        omega: scn.omega,
        t_f: r.t_f,
        image_cutoff: r.numerics.image_cutoff,
        branches,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    common.write(&json(&record))
}

fn interference(common: &Common) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = RunConfig::load(&common.config)?;
    let r = cfg.resolve(common.overrides())?;
    let f = response_interference(&r.scenario, &r.numerics).map_err(numerical)?;
    let singular = singular_interference_contribution(&r.scenario, &r.numerics).map_err(numerical)?;
    let record = InterferenceRecord {
        omega: r.scenario.omega,
        t_f: r.t_f,
        image_cutoff: r.numerics.image_cutoff,
        f12_over_sigma: f.value + singular,
        regular_part: f.value,
        singular_part: singular,
        error_estimate: f.abs_error_estimate,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    common.write(&json(&record))
}

fn sweep(common: &Common) -> Result<(), CliError> {
    let cfg = RunConfig::load(&common.config)?;
    let r = cfg.resolve(common.overrides())?;
    let (kind, grid) = cfg.sweep_grid(&r)?;
    let options = SweepOptions { workers: common.workers, phase: r.phase };
    let run = match kind {
        SweepKind::Position => sweep_position(&r.scenario, &grid, &r.numerics, options),
        SweepKind::Mass => sweep_mass(&r.scenario, &grid, &r.numerics, options),
    };
    let points: Vec<SweepPoint> = run.map_err(|e| CliError::Config(e.to_string()))?;
    common.write(&output::sweep_csv(&points))?;
    let failed: Vec<&SweepPoint> = points.iter().filter(|p| p.result.is_err()).collect();
    for p in &failed {
        if let Err(e) = &p.result {
            eprintln!("sweep point {}: {e}", p.coordinate);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{} of {} sweep points failed", failed.len(), points.len())))
    }
}

fn spectrum(common: &Common) -> Result<(), CliError> {
    let cfg = RunConfig::load(&common.config)?;
    let r = cfg.resolve(common.overrides())?;
    let grid = cfg.spectrum_grid()?;
    let scn = &r.scenario;
    let samples: Vec<SpectrumSample> = grid
        .iter()
        .map(|&k| {
            if scn.branch1 == scn.branch2 {
                w_hat_btz(k, &scn.branch1, &r.numerics)
            } else {
                w_hat_12(k, scn, &r.numerics)
            }
        })
        .collect::<Result<_, _>>()
        .map_err(numerical)?;
    common.write(&output::spectrum_csv(&samples))
}

fn validate(common: &Common, oracle_only: bool) -> Result<(), CliError> {
    let cfg = RunConfig::load(&common.config)?;
    let r = cfg.resolve(common.overrides())?;
    let v = cfg.validation();
    let subset = if oracle_only { ValidationSubset::OracleOnly } else { v.subset };
    let checks = run_validation(&r.scenario, &r.numerics, &v.tolerances, subset);
    let failed = checks.iter().filter(|c| !c.passed).count();
    common.write(&json(&ValidationReport { passed: failed == 0, checks: &checks }))?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Validation(failed))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SingleResponse(c) => single_response(c),
        Command::Interference(c) => interference(c),
        Command::Sweep(c) => sweep(c),
        Command::Spectrum(c) => spectrum(c),
        Command::Validate { common, oracle_only } => validate(common, *oracle_only),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("btz-detector: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
