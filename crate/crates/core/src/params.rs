//! Spacetime and detector parameters.
//!
//! A [`BtzBranch`] is one classical BTZ background seen from a static
//! detector at radial coordinate `R`; a [`Scenario`] pairs two such branches
//! with the detector's gap, switching and phase data. Derived quantities
//! (horizon, redshift factors, temperatures) and the rescalings between BTZ
//! coordinate time, AdS time `t̄ = √M t` and proper time `τ = γ̃ t̄` live here.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("black-hole mass must be positive and finite, got {0}")]
    Mass(f64),
    #[error("AdS radius must be positive and finite, got {0}")]
    AdsRadius(f64),
    #[error("detector radius {radius} must lie strictly outside the horizon r_h = {horizon}")]
    InsideHorizon { radius: f64, horizon: f64 },
    #[error("boundary selector must be -1, 0 or +1, got {0}")]
    BoundarySelector(i32),
    #[error("twist must be +1 or -1, got {0}")]
    TwistSelector(i32),
    #[error("both branches must share the AdS radius (got {0} and {1})")]
    AdsRadiusMismatch(f64, f64),
    #[error("both branches must carry the same field (boundary condition and twist)")]
    FieldMismatch,
    #[error("switching width sigma must be positive, got {0}")]
    Sigma(f64),
    #[error("switching window tau_f = {tau_f} is shorter than 10 sigma = {min}")]
    WindowTooShort { tau_f: f64, min: f64 },
    #[error("angular separation must lie in [0, 2π), got {0}")]
    Theta(f64),
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("image cutoff must be at least 1")]
    ImageCutoff,
    #[error("numerical control {name} must be positive, got {value}")]
    Tolerance { name: &'static str, value: f64 },
    #[error("rational detection needs a maximum denominator of at least 2, got {0}")]
    RationalDenominator(u64),
}

/// Field boundary condition at the timelike AdS boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryCondition {
    /// ζ = −1
    Neumann,
    /// ζ = 0
    #[default]
    Transparent,
    /// ζ = +1
    Dirichlet,
}

impl BoundaryCondition {
    pub fn from_zeta(zeta: i32) -> Result<Self, ParamError> {
        match zeta {
            -1 => Ok(Self::Neumann),
            0 => Ok(Self::Transparent),
            1 => Ok(Self::Dirichlet),
            other => Err(ParamError::BoundarySelector(other)),
        }
    }

    pub fn zeta(self) -> f64 {
        match self {
            Self::Neumann => -1.0,
            Self::Transparent => 0.0,
            Self::Dirichlet => 1.0,
        }
    }
}

/// Behaviour of the field under the quotient identification φ → φ + 2π√M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Twist {
    /// Υ = +1
    #[default]
    Untwisted,
    /// Υ = −1
    Twisted,
}

impl Twist {
    pub fn from_upsilon(upsilon: i32) -> Result<Self, ParamError> {
        match upsilon {
            1 => Ok(Self::Untwisted),
            -1 => Ok(Self::Twisted),
            other => Err(ParamError::TwistSelector(other)),
        }
    }

    pub fn upsilon(self) -> f64 {
        match self {
            Self::Untwisted => 1.0,
            Self::Twisted => -1.0,
        }
    }

    /// Weight Υ^k of the k-th image.
    pub fn weight(self, k: i64) -> f64 {
        match self {
            Self::Twisted if k.rem_euclid(2) == 1 => -1.0,
            _ => 1.0,
        }
    }
}

/// One semiclassical branch: a BTZ black hole of mass `M` in AdS radius `l`,
/// with the detector held at radial coordinate `R > r_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BtzBranch {
    mass: f64,
    ads_radius: f64,
    radius: f64,
    boundary: BoundaryCondition,
    twist: Twist,
}

impl BtzBranch {
    pub fn new(mass: f64, ads_radius: f64, radius: f64) -> Result<Self, ParamError> {
        Self::with_field(
            mass,
            ads_radius,
            radius,
            BoundaryCondition::Transparent,
            Twist::Untwisted,
        )
    }

    pub fn with_field(
        mass: f64,
        ads_radius: f64,
        radius: f64,
        boundary: BoundaryCondition,
        twist: Twist,
    ) -> Result<Self, ParamError> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(ParamError::Mass(mass));
        }
        if !(ads_radius.is_finite() && ads_radius > 0.0) {
            return Err(ParamError::AdsRadius(ads_radius));
        }
        let horizon = ads_radius * mass.sqrt();
        if !(radius.is_finite() && radius > horizon) {
            return Err(ParamError::InsideHorizon { radius, horizon });
        }
        Ok(Self {
            mass,
            ads_radius,
            radius,
            boundary,
            twist,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn ads_radius(&self) -> f64 {
        self.ads_radius
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.boundary
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    /// Same background and field with the detector moved to `radius`.
    pub fn at_radius(&self, radius: f64) -> Result<Self, ParamError> {
        Self::with_field(self.mass, self.ads_radius, radius, self.boundary, self.twist)
    }

    /// Same detector radius and field around a black hole of mass `mass`.
    pub fn with_mass(&self, mass: f64) -> Result<Self, ParamError> {
        Self::with_field(mass, self.ads_radius, self.radius, self.boundary, self.twist)
    }

    /// `r_h = l√M`
    pub fn horizon_radius(&self) -> f64 {
        self.ads_radius * self.mass.sqrt()
    }

    /// `R² / r_h²`, the squared detector radius in horizon units.
    pub fn radius_ratio_sq(&self) -> f64 {
        let x = self.radius / self.ads_radius;
        x * x / self.mass
    }

    /// Redshift factor `γ = √(R²/l² − M)` relating proper and BTZ coordinate time.
    pub fn redshift(&self) -> f64 {
        self.redshift_ads() * self.mass.sqrt()
    }

    /// AdS-time redshift `γ̃ = √(R²/(M l²) − 1) = γ/√M`.
    pub fn redshift_ads(&self) -> f64 {
        (self.radius_ratio_sq() - 1.0).sqrt()
    }

    /// `T_H = √M / (2π l)`
    pub fn hawking_temperature(&self) -> f64 {
        self.mass.sqrt() / (2.0 * PI * self.ads_radius)
    }

    /// Local (Tolman) temperature seen by the static detector, `T_H / γ`.
    pub fn local_temperature(&self) -> f64 {
        self.hawking_temperature() / self.redshift()
    }

    /// BTZ coordinate time → AdS time, `t̄ = √M t`.
    pub fn ads_time_of(&self, t: f64) -> f64 {
        self.mass.sqrt() * t
    }

    /// AdS time → BTZ coordinate time.
    pub fn btz_time_of(&self, ads_time: f64) -> f64 {
        ads_time / self.mass.sqrt()
    }

    /// AdS time → detector proper time, `τ = γ̃ t̄`.
    pub fn proper_time_of(&self, ads_time: f64) -> f64 {
        self.redshift_ads() * ads_time
    }

    /// Detector proper time → AdS time.
    pub fn ads_time_from_proper(&self, tau: f64) -> f64 {
        tau / self.redshift_ads()
    }

    /// Energy conjugate to AdS time → energy in the detector frame, `E/γ̃`.
    pub fn detector_energy_from_ads_energy(&self, ads_energy: f64) -> f64 {
        ads_energy / self.redshift_ads()
    }

    /// Detector-frame energy → energy conjugate to AdS time.
    pub fn ads_energy_from_detector_energy(&self, energy: f64) -> f64 {
        energy * self.redshift_ads()
    }

    fn same_field(&self, other: &Self) -> bool {
        self.boundary == other.boundary && self.twist == other.twist
    }
}

/// `T_H^AdS = 1/(2π l)`, the temperature associated with AdS time.
pub fn ads_hawking_temperature(ads_radius: f64) -> f64 {
    1.0 / (2.0 * PI * ads_radius)
}

pub fn horizon_radius(branch: &BtzBranch) -> f64 {
    branch.horizon_radius()
}

pub fn redshift_gamma(branch: &BtzBranch) -> f64 {
    branch.redshift()
}

pub fn redshift_gamma_tilde(branch: &BtzBranch) -> f64 {
    branch.redshift_ads()
}

/// Which of the two branches a single-spacetime quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchIndex {
    First,
    Second,
}

/// Two superposed backgrounds plus the detector's gap, switching and phase.
///
/// `tau_f` is the half-width of the interaction window in detector proper
/// time (`τ_i = −τ_f`). `delta_phi` is the relative phase between branches;
/// it only enters the assembled probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub branch1: BtzBranch,
    pub branch2: BtzBranch,
    pub theta: f64,
    pub omega: f64,
    pub sigma: f64,
    pub tau_f: f64,
    pub delta_phi: f64,
    pub coupling: f64,
    pub matrix_element_sq: f64,
}

impl Scenario {
    pub fn new(
        branch1: BtzBranch,
        branch2: BtzBranch,
        theta: f64,
        omega: f64,
        sigma: f64,
        tau_f: f64,
    ) -> Result<Self, ParamError> {
        let scn = Self {
            branch1,
            branch2,
            theta,
            omega,
            sigma,
            tau_f,
            delta_phi: 0.0,
            coupling: 1.0,
            matrix_element_sq: 1.0,
        };
        scn.validate()?;
        Ok(scn)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let (l1, l2) = (self.branch1.ads_radius, self.branch2.ads_radius);
        if l1 != l2 {
            return Err(ParamError::AdsRadiusMismatch(l1, l2));
        }
        if !self.branch1.same_field(&self.branch2) {
            return Err(ParamError::FieldMismatch);
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(ParamError::Sigma(self.sigma));
        }
        if !(self.tau_f.is_finite() && self.tau_f >= 10.0 * self.sigma) {
            return Err(ParamError::WindowTooShort {
                tau_f: self.tau_f,
                min: 10.0 * self.sigma,
            });
        }
        if !(self.theta.is_finite() && (0.0..2.0 * PI).contains(&self.theta)) {
            return Err(ParamError::Theta(self.theta));
        }
        for (name, value) in [
            ("omega", self.omega),
            ("delta_phi", self.delta_phi),
            ("coupling", self.coupling),
            ("matrix_element_sq", self.matrix_element_sq),
        ] {
            if !value.is_finite() {
                return Err(ParamError::NotFinite { name, value });
            }
        }
        Ok(())
    }

    pub fn branch(&self, which: BranchIndex) -> &BtzBranch {
        match which {
            BranchIndex::First => &self.branch1,
            BranchIndex::Second => &self.branch2,
        }
    }

    pub fn ads_radius(&self) -> f64 {
        self.branch1.ads_radius
    }

    pub fn equal_masses(&self) -> bool {
        self.branch1.mass == self.branch2.mass
    }

    pub fn equal_radii(&self) -> bool {
        self.branch1.radius == self.branch2.radius
    }

    /// Both branches describe the same spacetime seen from the same place.
    pub fn is_coincident(&self) -> bool {
        self.equal_masses() && self.equal_radii() && self.theta == 0.0
    }

    /// Normalisation `𝒩 = σ λ² |⟨E|μ|E₀⟩|² / 2` of the plotted probabilities.
    pub fn normalization(&self) -> f64 {
        0.5 * self.sigma * self.coupling * self.coupling * self.matrix_element_sq
    }
}

/// How many images the truncated double sum is normalised by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ImageCountConvention {
    /// `2N`
    TwoN,
    /// `2N + 1`, the number of indices in `[−N, N]`.
    #[default]
    TwoNPlusOne,
}

impl ImageCountConvention {
    pub fn count(self, cutoff: u32) -> f64 {
        match self {
            Self::TwoN => 2.0 * f64::from(cutoff),
            Self::TwoNPlusOne => 2.0 * f64::from(cutoff) + 1.0,
        }
    }
}

/// Truncation, regularisation and tolerance settings shared by every
/// numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsControl {
    /// Images `m, n ∈ [−N, N]`.
    pub image_cutoff: u32,
    /// `iε` regulator, used only by the time-domain oracles.
    pub epsilon: f64,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub rational_max_den: u64,
    pub rational_tol: f64,
    pub convention: ImageCountConvention,
}

impl Default for NumericsControl {
    fn default() -> Self {
        Self {
            image_cutoff: 5,
            epsilon: 1e-4,
            quad_rel_tol: 1e-10,
            quad_abs_tol: 1e-13,
            rational_max_den: 10,
            rational_tol: 1e-9,
            convention: ImageCountConvention::TwoNPlusOne,
        }
    }
}

impl NumericsControl {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.image_cutoff < 1 {
            return Err(ParamError::ImageCutoff);
        }
        for (name, value) in [
            ("epsilon", self.epsilon),
            ("quad_rel_tol", self.quad_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
            ("rational_tol", self.rational_tol),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::Tolerance { name, value });
            }
        }
        if self.rational_max_den < 2 {
            return Err(ParamError::RationalDenominator(self.rational_max_den));
        }
        Ok(())
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Self {
        self.image_cutoff = cutoff;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Normalising image count `2N` or `2N + 1`.
    pub fn image_count(&self) -> f64 {
        self.convention.count(self.image_cutoff)
    }

    pub(crate) fn image_range(&self) -> std::ops::RangeInclusive<i64> {
        let n = i64::from(self.image_cutoff);
        -n..=n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig3_branch() -> BtzBranch {
        // M l² = 4 with l = 5, detector at R = 2 r_h
        BtzBranch::new(0.16, 5.0, 4.0).unwrap()
    }

    #[test]
    fn horizon_examples() {
        assert!((fig3_branch().horizon_radius() - 2.0).abs() < 1e-15);
        assert_eq!(BtzBranch::new(1.0, 1.0, 1.5).unwrap().horizon_radius(), 1.0);
        assert_eq!(BtzBranch::new(4.0, 1.0, 3.0).unwrap().horizon_radius(), 2.0);
    }

    #[test]
    fn detector_on_horizon_rejected() {
        let err = BtzBranch::new(0.16, 5.0, 2.0).unwrap_err();
        assert!(matches!(err, ParamError::InsideHorizon { .. }));
        assert!(BtzBranch::new(0.16, 5.0, 1.0).is_err());
        assert!(BtzBranch::new(-1.0, 5.0, 4.0).is_err());
        assert!(BtzBranch::new(1.0, 0.0, 4.0).is_err());
    }

    #[test]
    fn redshift_examples() {
        let b = fig3_branch();
        assert!((b.redshift() - 0.48f64.sqrt()).abs() < 1e-15);
        assert!((b.redshift() - 0.692820).abs() < 1e-6);
        let unit = BtzBranch::new(1.0, 1.0, 2f64.sqrt()).unwrap();
        assert!((unit.redshift() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ads_redshift_examples() {
        let b = fig3_branch();
        assert!((b.redshift_ads() - 3f64.sqrt()).abs() < 1e-15);
        let rh = b.horizon_radius();
        let c = b.at_radius(2f64.sqrt() * rh).unwrap();
        assert!((c.redshift_ads() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn temperatures() {
        let b = fig3_branch();
        assert!((b.hawking_temperature() - 0.0127324).abs() < 1e-7);
        assert!((ads_hawking_temperature(5.0) - 1.0 / (10.0 * PI)).abs() < 1e-17);
        assert!((ads_hawking_temperature(5.0) - 0.0318310).abs() < 1e-7);
        let unit = BtzBranch::new(1.0, 3.0, 4.0).unwrap();
        assert_eq!(unit.hawking_temperature(), ads_hawking_temperature(3.0));
    }

    #[test]
    fn time_and_energy_rescalings() {
        let heavy = BtzBranch::new(4.0, 1.0, 3.0).unwrap();
        assert_eq!(heavy.ads_time_of(1.0), 2.0);
        let b = fig3_branch();
        assert!((b.proper_time_of(1.0) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.detector_energy_from_ads_energy(0.0), 0.0);
        assert!((b.detector_energy_from_ads_energy(1.0) - 0.577350).abs() < 1e-6);
        let rh = b.horizon_radius();
        let unit = b.at_radius(2f64.sqrt() * rh).unwrap();
        assert!((unit.detector_energy_from_ads_energy(0.37) - 0.37).abs() < 1e-15);
    }

    #[test]
    fn scenario_validation() {
        let b = fig3_branch();
        assert!(Scenario::new(b, b, 0.0, 1e-4, 1.0, 10.0).is_ok());
        assert!(matches!(
            Scenario::new(b, b, 0.0, 1e-4, 1.0, 9.0),
            Err(ParamError::WindowTooShort { .. })
        ));
        assert!(Scenario::new(b, b, 0.0, 1e-4, 0.0, 10.0).is_err());
        assert!(Scenario::new(b, b, 2.0 * PI, 1e-4, 1.0, 10.0).is_err());
        let other_l = BtzBranch::new(0.16, 6.0, 4.0).unwrap();
        assert!(matches!(
            Scenario::new(b, other_l, 0.0, 1e-4, 1.0, 10.0),
            Err(ParamError::AdsRadiusMismatch(..))
        ));
        let dirichlet =
            BtzBranch::with_field(0.16, 5.0, 8.0, BoundaryCondition::Dirichlet, Twist::Untwisted)
                .unwrap();
        assert!(matches!(
            Scenario::new(b, dirichlet, 0.0, 1e-4, 1.0, 10.0),
            Err(ParamError::FieldMismatch)
        ));
    }

    #[test]
    fn selectors() {
        assert_eq!(BoundaryCondition::from_zeta(1).unwrap().zeta(), 1.0);
        assert!(BoundaryCondition::from_zeta(2).is_err());
        assert_eq!(Twist::from_upsilon(-1).unwrap().weight(-3), -1.0);
        assert_eq!(Twist::Twisted.weight(4), 1.0);
        assert!(Twist::from_upsilon(0).is_err());
    }

    #[test]
    fn numerics_validation() {
        assert!(NumericsControl::default().validate().is_ok());
        assert!(NumericsControl::default().with_cutoff(0).validate().is_err());
        assert!(NumericsControl::default().with_epsilon(0.0).validate().is_err());
        assert_eq!(NumericsControl::default().image_count(), 11.0);
    }

    fn branch_strategy() -> impl Strategy<Value = BtzBranch> {
        (0.01f64..4.0, 0.5f64..10.0, 1.001f64..20.0).prop_map(|(m, l, k)| {
            let rh = l * m.sqrt();
            BtzBranch::new(m, l, k * rh).unwrap()
        })
    }

    proptest! {
        #[test]
        fn redshift_identity(b in branch_strategy()) {
            let g = b.redshift();
            prop_assert!((b.redshift_ads() * b.mass().sqrt() - g).abs() <= 1e-14 * g.max(1.0));
        }

        #[test]
        fn conversions_round_trip(b in branch_strategy(), t in -50.0f64..50.0) {
            let back = b.btz_time_of(b.ads_time_from_proper(b.proper_time_of(b.ads_time_of(t))));
            prop_assert!((back - t).abs() <= 1e-14 * t.abs().max(1.0));
            let e = b.ads_energy_from_detector_energy(b.detector_energy_from_ads_energy(t));
            prop_assert!((e - t).abs() <= 1e-14 * t.abs().max(1.0));
        }

        #[test]
        fn redshift_increases_with_radius(b in branch_strategy(), step in 1e-3f64..10.0) {
            let further = b.at_radius(b.radius() + step).unwrap();
            prop_assert!(further.redshift() > b.redshift());
        }
    }
}
