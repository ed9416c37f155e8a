//! Run configuration: a JSON document with `scenario`, `numerics` and
//! optional `sweep`, `spectrum`, `phase`, `validation` and `units` blocks.
//! Unknown keys are rejected.

use std::path::Path;

use btz_detector::params::{BoundaryCondition, BtzBranch, ImageCountConvention, NumericsControl, Scenario, Twist};
use btz_detector::probability::{linear_grid, PhaseConvention};
use btz_detector::validation::{ValidationSubset, ValidationTolerances};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationConfig>,
}

/// Times and lengths in the config are multiples of `time`; frequencies are
/// multiples of `1/time`. Without this block everything is in units of σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    pub mass: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryName {
    Neumann,
    #[default]
    Transparent,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistName {
    #[default]
    Untwisted,
    Twisted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ads_radius: f64,
    pub branch1: BranchConfig,
    /// Defaults to `branch1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch2: Option<BranchConfig>,
    #[serde(default)]
    pub theta: f64,
    pub omega: f64,
    pub sigma: f64,
    /// Half-window in detector proper time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_f: Option<f64>,
    /// Half-window in BTZ coordinate time of branch 1; alternative to `tau_f`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_f: Option<f64>,
    #[serde(default)]
    pub boundary: BoundaryName,
    #[serde(default)]
    pub twist: TwistName,
    #[serde(default)]
    pub delta_phi: f64,
    #[serde(default = "one")]
    pub coupling: f64,
    #[serde(default = "one")]
    pub matrix_element_sq: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConventionName {
    #[serde(rename = "2N")]
    TwoN,
    #[serde(rename = "2N+1")]
    TwoNPlusOne,
}

impl ConventionName {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "2N" => Some(Self::TwoN),
            "2N+1" => Some(Self::TwoNPlusOne),
            _ => None,
        }
    }
}

impl From<ConventionName> for ImageCountConvention {
    fn from(c: ConventionName) -> Self {
        match c {
            ConventionName::TwoN => Self::TwoN,
            ConventionName::TwoNPlusOne => Self::TwoNPlusOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericsConfig {
    pub image_cutoff: u32,
    pub epsilon: f64,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub rational_max_den: u64,
    pub rational_tol: f64,
    pub convention: ConventionName,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let d = NumericsControl::default();
        Self {
            image_cutoff: d.image_cutoff,
            epsilon: d.epsilon,
            quad_rel_tol: d.quad_rel_tol,
            quad_abs_tol: d.quad_abs_tol,
            rational_max_den: d.rational_max_den,
            rational_tol: d.rational_tol,
            convention: ConventionName::TwoNPlusOne,
        }
    }
}

// Partial numerics blocks fill in from the defaults.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialNumerics {
    image_cutoff: Option<u32>,
    epsilon: Option<f64>,
    quad_rel_tol: Option<f64>,
    quad_abs_tol: Option<f64>,
    rational_max_den: Option<u64>,
    rational_tol: Option<f64>,
    convention: Option<ConventionName>,
}

impl<'de> Deserialize<'de> for NumericsConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = PartialNumerics::deserialize(d)?;
        let def = Self::default();
        Ok(Self {
            image_cutoff: p.image_cutoff.unwrap_or(def.image_cutoff),
            epsilon: p.epsilon.unwrap_or(def.epsilon),
            quad_rel_tol: p.quad_rel_tol.unwrap_or(def.quad_rel_tol),
            quad_abs_tol: p.quad_abs_tol.unwrap_or(def.quad_abs_tol),
            rational_max_den: p.rational_max_den.unwrap_or(def.rational_max_den),
            rational_tol: p.rational_tol.unwrap_or(def.rational_tol),
            convention: p.convention.unwrap_or(def.convention),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Position,
    Mass,
}

/// Evenly spaced `start..=stop` with `count` points, or explicit `points`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
}

impl GridConfig {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if let Some(p) = &self.points {
            if self.start.is_some() || self.stop.is_some() || self.count.is_some() {
                return Err(CliError::Config("grid: give either points or start/stop/count".into()));
            }
            if p.is_empty() {
                return Err(CliError::Config("grid: empty point list".into()));
            }
            return Ok(p.clone());
        }
        match (self.start, self.stop, self.count) {
            (Some(start), Some(stop), Some(count)) => {
                if count < 1 {
                    return Err(CliError::Config("grid: count must be at least 1".into()));
                }
                if !(start < stop) {
                    return Err(CliError::Config(format!("grid: start {start} must be below stop {stop}")));
                }
                Ok(linear_grid(start, stop, count))
            }
            _ => Err(CliError::Config("grid: start, stop and count are required".into())),
        }
    }

    fn scaled(&self, factor: f64) -> Self {
        let s = |v: Option<f64>| v.map(|x| x * factor);
        Self {
            start: s(self.start),
            stop: s(self.stop),
            count: self.count,
            points: self.points.as_ref().map(|p| p.iter().map(|x| x * factor).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub kind: SweepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
}

impl SweepConfig {
    pub fn grid(&self) -> GridConfig {
        GridConfig { start: self.start, stop: self.stop, count: self.count, points: self.points.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "convention", rename_all = "snake_case")]
pub enum PhaseConfig {
    /// `scenario.delta_phi` at every point.
    Fixed,
    /// `(√M₁ − √M₂)Δt`; `delta_t` defaults to twice the coordinate half-window.
    MassGap {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_t: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ValidationConfig {
    #[serde(default)]
    pub tolerances: ValidationTolerances,
    #[serde(default)]
    pub subset: ValidationSubset,
}

/// Flags that override the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub cutoff: Option<u32>,
    pub convention: Option<ConventionName>,
}

/// Parsed configuration in library types, in σ units.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub numerics: NumericsControl,
    pub phase: PhaseConvention,
    /// Coordinate half-window of branch 1.
    pub t_f: f64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    #[cfg(test)]
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn time_unit(&self) -> Result<f64, CliError> {
        let t = self.units.map_or(1.0, |u| u.time);
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!("units.time must be positive, got {t}")));
        }
        Ok(t)
    }

    pub fn resolve(&self, overrides: Overrides) -> Result<Resolved, CliError> {
        let unit = self.time_unit()?;
        let s = &self.scenario;
        let boundary = match s.boundary {
            BoundaryName::Neumann => BoundaryCondition::Neumann,
            BoundaryName::Transparent => BoundaryCondition::Transparent,
            BoundaryName::Dirichlet => BoundaryCondition::Dirichlet,
        };
        let twist = match s.twist {
            TwistName::Untwisted => Twist::Untwisted,
            TwistName::Twisted => Twist::Twisted,
        };
        let l = s.ads_radius * unit;
        let branch = |b: &BranchConfig| BtzBranch::with_field(b.mass, l, b.radius * unit, boundary, twist);
        let b1 = branch(&s.branch1)?;
        let b2 = branch(s.branch2.as_ref().unwrap_or(&s.branch1))?;
        let (tau_f, t_f) = match (s.tau_f, s.t_f) {
            (Some(tau), None) => (tau * unit, tau * unit / b1.redshift()),
            (None, Some(t)) => (t * unit * b1.redshift(), t * unit),
            _ => return Err(CliError::Config("scenario: exactly one of tau_f and t_f is required".into())),
        };
        let mut scenario = Scenario::new(b1, b2, s.theta, s.omega / unit, s.sigma * unit, tau_f)?;
        scenario.delta_phi = s.delta_phi;
        scenario.coupling = s.coupling;
        scenario.matrix_element_sq = s.matrix_element_sq;
        scenario.validate()?;

        let n = &self.numerics;
        let numerics = NumericsControl {
            image_cutoff: overrides.cutoff.unwrap_or(n.image_cutoff),
            epsilon: n.epsilon,
            quad_rel_tol: n.quad_rel_tol,
            quad_abs_tol: n.quad_abs_tol,
            rational_max_den: n.rational_max_den,
            rational_tol: n.rational_tol,
            convention: overrides.convention.unwrap_or(n.convention).into(),
        };
        numerics.validate()?;

        let phase = match self.phase {
            None | Some(PhaseConfig::Fixed) => PhaseConvention::Fixed,
            Some(PhaseConfig::MassGap { delta_t }) => {
                PhaseConvention::MassGap { delta_t: delta_t.map_or(2.0 * t_f, |d| d * unit) }
            }
        };
        Ok(Resolved { scenario, numerics, phase, t_f })
    }

    /// Sweep kind and coordinates, checked against the scenario.
    pub fn sweep_grid(&self, resolved: &Resolved) -> Result<(SweepKind, Vec<f64>), CliError> {
        let sweep = self.sweep.as_ref().ok_or_else(|| CliError::Config("missing sweep block".into()))?;
        let points = sweep.grid().points()?;
        let scn = &resolved.scenario;
        match sweep.kind {
            SweepKind::Position if !scn.equal_masses() => {
                Err(CliError::Config("position sweeps need equal masses".into()))
            }
            SweepKind::Mass if !scn.equal_radii() => Err(CliError::Config("mass sweeps need equal radii".into())),
            kind => Ok((kind, points)),
        }
    }

    /// Frequency grid in σ units.
    pub fn spectrum_grid(&self) -> Result<Vec<f64>, CliError> {
        let grid = self.spectrum.as_ref().ok_or_else(|| CliError::Config("missing spectrum block".into()))?;
        grid.scaled(1.0 / self.time_unit()?).points()
    }

    pub fn validation(&self) -> ValidationConfig {
        self.validation.clone().unwrap_or_default()
    }
}
