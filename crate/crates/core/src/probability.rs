//! Interference probabilities and parameter sweeps.

use rayon::prelude::*;
use thiserror::Error;

use crate::params::{BranchIndex, NumericsControl, ParamError, Scenario};
use crate::response::{response_interference, response_single, ResponseError};
use crate::spectrum::{singular_interference_contribution, SpectrumError};

/// Allowed negativity of `P±/𝒩` relative to `(f1 + f2)/2` at non-resonant points.
pub const POSITIVITY_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep coordinate {0} must be positive and different from 1")]
    Coordinate(f64),
    #[error("mass sweeps need equal detector radii, got {0} and {1}")]
    UnequalRadii(f64, f64),
    #[error("could not start worker pool: {0}")]
    Workers(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("probabilities ({p_plus}, {p_minus}) fall below the positivity slack {floor}")]
    Negative { p_plus: f64, p_minus: f64, floor: f64 },
}

/// Responses and probabilities at one sweep point, in units where
/// `P±/𝒩 = (F₁/σ + F₂/σ ± 2cos(ΔΦ) F₁₂/σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSet {
    pub sweep_coordinate: f64,
    pub f1: f64,
    pub f2: f64,
    pub f12: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    /// Whether `f12` includes a resonant contribution.
    pub singular: bool,
    pub error_estimate: f64,
}

impl ResponseSet {
    /// `P±` from `P±/𝒩`, with `𝒩` from [`Scenario::normalization`].
    pub fn absolute(&self, normalization: f64) -> (f64, f64) {
        (normalization * self.p_plus, normalization * self.p_minus)
    }
}

pub fn assemble_probabilities(f1: f64, f2: f64, f12: f64, delta_phi: f64) -> (f64, f64) {
    let base = f1 + f2;
    let cross = 2.0 * delta_phi.cos() * f12;
    (0.5 * (base + cross), 0.5 * (base - cross))
}

/// Relative phase between the two branches at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PhaseConvention {
    /// Use `delta_phi` of the base scenario.
    #[default]
    Fixed,
    /// `ΔΦ = (√M₁ − √M₂) Δt`, with `Δt` in BTZ coordinate time.
    MassGap { delta_t: f64 },
}

impl PhaseConvention {
    pub fn phase(&self, scn: &Scenario) -> f64 {
        match *self {
            Self::Fixed => scn.delta_phi,
            Self::MassGap { delta_t } => (scn.branch1.mass().sqrt() - scn.branch2.mass().sqrt()) * delta_t,
        }
    }
}

/// Sweep point coordinate and either its responses or the reason it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub coordinate: f64,
    pub result: Result<ResponseSet, SweepError>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub phase: PhaseConvention,
}

/// All responses of one scenario. `f12` is the time-domain interference
/// plus the resonant constant when the scenario has one.
pub fn evaluate_point(
    scn: &Scenario,
    coordinate: f64,
    phase: PhaseConvention,
    ctrl: &NumericsControl,
) -> Result<ResponseSet, SweepError> {
    let f1 = response_single(scn, BranchIndex::First, ctrl)?;
    let f2 = response_single(scn, BranchIndex::Second, ctrl)?;
    let f12 = response_interference(scn, ctrl)?;
    let resonant = singular_interference_contribution(scn, ctrl)?;
    let delta_phi = phase.phase(scn);
    let cross = f12.value + resonant;
    let (p_plus, p_minus) = assemble_probabilities(f1.value, f2.value, cross, delta_phi);
    let set = ResponseSet {
        sweep_coordinate: coordinate,
        f1: f1.value,
        f2: f2.value,
        f12: cross,
        p_plus,
        p_minus,
        singular: resonant != 0.0,
        error_estimate: f1.abs_error_estimate + f2.abs_error_estimate + f12.abs_error_estimate,
    };
    // the resonant constant is outside the window approximation that the slack covers
    let floor = -POSITIVITY_SLACK * 0.5 * (set.f1 + set.f2);
    if !set.singular && (p_plus < floor || p_minus < floor) {
        return Err(SweepError::Negative { p_plus, p_minus, floor });
    }
    Ok(set)
}

fn check_coordinates(points: &[f64]) -> Result<(), SweepError> {
    match points.iter().find(|&&r| !(r.is_finite() && r > 0.0) || r == 1.0) {
        Some(&r) => Err(SweepError::Coordinate(r)),
        None => Ok(()),
    }
}

fn run<F>(points: &[f64], workers: usize, f: F) -> Result<Vec<SweepPoint>, SweepError>
where
    F: Fn(f64) -> Result<ResponseSet, SweepError> + Sync,
{
    let eval = || -> Vec<SweepPoint> {
        points.par_iter().map(|&coordinate| SweepPoint { coordinate, result: f(coordinate) }).collect()
    };
    if workers == 0 {
        return Ok(eval());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SweepError::Workers(e.to_string()))?;
    Ok(pool.install(eval))
}

/// Position superposition: branch 2 sits at `R₂ = ratio·R₁` with the mass
/// of branch 1.
pub fn sweep_position(
    base: &Scenario,
    ratios: &[f64],
    ctrl: &NumericsControl,
    options: SweepOptions,
) -> Result<Vec<SweepPoint>, SweepError> {
    check_coordinates(ratios)?;
    base.validate()?;
    ctrl.validate()?;
    run(ratios, options.workers, |ratio| {
        let b1 = base.branch1;
        let scn = Scenario { branch2: b1.at_radius(ratio * b1.radius())?, ..*base };
        scn.validate()?;
        evaluate_point(&scn, ratio, options.phase, ctrl)
    })
}

/// Mass superposition: branch 2 has `M₂ = ratio²·M₁` at the radius of
/// branch 1.
pub fn sweep_mass(
    base: &Scenario,
    sqrt_ratios: &[f64],
    ctrl: &NumericsControl,
    options: SweepOptions,
) -> Result<Vec<SweepPoint>, SweepError> {
    check_coordinates(sqrt_ratios)?;
    base.validate()?;
    ctrl.validate()?;
    if !base.equal_radii() {
        return Err(SweepError::UnequalRadii(base.branch1.radius(), base.branch2.radius()));
    }
    run(sqrt_ratios, options.workers, |ratio| {
        let b1 = base.branch1;
        let scn = Scenario { branch2: b1.with_mass(ratio * ratio * b1.mass())?, ..*base };
        scn.validate()?;
        evaluate_point(&scn, ratio, options.phase, ctrl)
    })
}

/// `count` evenly spaced points on `[start, stop]`.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| if i + 1 == count { stop } else { start + step * i as f64 }).collect()
        }
    }
}
