//! Spectral densities of the correlators and the frequency-domain route to
//! the detector response.
//!
//! With `W(s) = (1/2π)∫ dK e^{iKs} Ŵ(K)` the image sum transforms term by
//! term into conical Legendre functions,
//!
//! ```text
//! Ŵ(K) = 1/(2γ) · 1/(e^{K/T_H} + 1) · Σ_n w_n P_{−1/2 + iK/(2πT_H)}(c_n)
//! ```
//!
//! for one branch (`K` conjugate to BTZ time), and the same with `γ̃₁, γ̃₂`,
//! `T_H = 1/(2πl)` and `K̄` conjugate to AdS time for the cross correlator.
//! The `n = 0` pole is included in the sum: its transform is already
//! thermal, so the constant `1/(4γ)` from the delta part of the pole is
//! only reported in [`SpectrumSample::singular_part`] and never integrated.
//!
//! For a mass superposition with `√(M₁/M₂)` rational (and not 1) and equal
//! radii, `(2N+1)` image pairs coincide and produce a frequency-independent
//! term `(2N+1)/(4√(γ̃₁γ̃₂))` that dominates the interference.

use std::f64::consts::PI;

use thiserror::Error;

use crate::params::{BranchIndex, BtzBranch, NumericsControl, ParamError, Scenario, Twist};
use crate::quadrature::{integrate_gaussian_window, GaussianWindow, QuadError, Tolerance, SQRT_2PI};
use crate::response::ResponseValue;
use crate::specfun::{legendre_conical, SpecfunError};
use crate::wightman::{ImageSum, WightmanError};

/// Half-width of the frequency window in units of the kernel width.
pub const FREQUENCY_WINDOW_CUTOFF: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Wightman(#[from] WightmanError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("frequency quadrature failed: {0}")]
    Quadrature(QuadError),
    #[error("spectral densities are not available for twisted fields")]
    TwistedField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    pub k: f64,
    pub regular_part: f64,
    pub singular_part: f64,
    pub total: f64,
}

impl SpectrumSample {
    fn new(k: f64, regular_part: f64, singular_part: f64) -> Self {
        Self { k, regular_part, singular_part, total: regular_part + singular_part }
    }
}

/// Fourier transform of the Gaussian switching `e^{−τ²/(2σ²)}`.
pub fn eta_hat(omega: f64, sigma: f64) -> f64 {
    sigma * SQRT_2PI * (-0.5 * sigma * sigma * omega * omega).exp()
}

/// `1/(e^x + 1)` without overflow.
pub fn thermal_factor(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

fn reject_twisted(b: &BtzBranch) -> Result<(), SpectrumError> {
    match b.twist() {
        Twist::Untwisted => Ok(()),
        Twist::Twisted => Err(SpectrumError::TwistedField),
    }
}

/// `Σ w_n P_{−1/2+iμ}(c_n)` over the terms of an image sum.
fn legendre_sum(sum: &ImageSum, mu: f64) -> Result<f64, SpecfunError> {
    sum.terms.iter().try_fold(0.0, |acc, t| {
        let x = if t.coefficient.excess <= 0.0 { 1.0 } else { t.coefficient.value };
        Ok(acc + t.weight * legendre_conical(mu, x)?)
    })
}

/// Single-branch spectral density at frequency `k` conjugate to BTZ
/// coordinate time.
pub fn w_hat_btz(k: f64, b: &BtzBranch, ctrl: &NumericsControl) -> Result<SpectrumSample, SpectrumError> {
    ctrl.validate()?;
    reject_twisted(b)?;
    BranchSpectrum::new(b, ctrl).sample(k)
}

/// Precomputed image terms of one branch.
struct BranchSpectrum {
    sum: ImageSum,
    gamma: f64,
    temperature: f64,
    degree_scale: f64,
}

impl BranchSpectrum {
    fn new(b: &BtzBranch, ctrl: &NumericsControl) -> Self {
        Self {
            sum: ImageSum::single(b, ctrl),
            gamma: b.redshift(),
            temperature: b.hawking_temperature(),
            degree_scale: b.ads_radius() / b.mass().sqrt(),
        }
    }

    fn regular(&self, k: f64) -> Result<f64, SpecfunError> {
        let p = legendre_sum(&self.sum, k * self.degree_scale)?;
        Ok(thermal_factor(k / self.temperature) * p / (2.0 * self.gamma))
    }

    fn sample(&self, k: f64) -> Result<SpectrumSample, SpectrumError> {
        Ok(SpectrumSample::new(k, self.regular(k)?, 0.25 / self.gamma))
    }
}

/// Outcome of testing `√(M₁/M₂)` for rationality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalityVerdict {
    pub is_rational: bool,
    /// Best continued-fraction convergent `p/q` with `q ≤ rational_max_den`.
    pub p: u64,
    pub q: u64,
    pub residual: f64,
}

/// Last continued-fraction convergent of `x > 0` with denominator at most
/// `max_den`, and its distance to `x`.
pub fn best_rational(x: f64, max_den: u64) -> (u64, u64, f64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    loop {
        let a = rest.floor();
        if a > u64::MAX as f64 / 2.0 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = match (a.checked_mul(p1).and_then(|v| v.checked_add(p0)), a.checked_mul(q1).and_then(|v| v.checked_add(q0))) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac <= 1e-15 * rest.max(1.0) {
            break;
        }
        rest = 1.0 / frac;
    }
    if q1 == 0 {
        // x exceeds any admissible numerator
        return (0, 1, x);
    }
    (p1, q1, (x - p1 as f64 / q1 as f64).abs())
}

/// Whether `√(M₁/M₂)` is a rational other than 1 within the control bounds.
pub fn detect_rational_sqrt_mass_ratio(scn: &Scenario, ctrl: &NumericsControl) -> RationalityVerdict {
    let x = (scn.branch1.mass() / scn.branch2.mass()).sqrt();
    let (p, q, residual) = best_rational(x, ctrl.rational_max_den);
    let is_rational = residual <= ctrl.rational_tol && p != q;
    RationalityVerdict { is_rational, p, q, residual }
}

/// Precomputed image terms of the cross correlator.
struct CrossSpectrum {
    sum: ImageSum,
    prefactor: f64,
    ads_radius: f64,
    singular: f64,
}

impl CrossSpectrum {
    fn new(scn: &Scenario, ctrl: &NumericsControl) -> Result<Self, SpectrumError> {
        scn.validate()?;
        ctrl.validate()?;
        reject_twisted(&scn.branch1)?;
        let g = (scn.branch1.redshift_ads() * scn.branch2.redshift_ads()).sqrt();
        let singular = if scn.is_coincident() {
            0.25 / g
        } else if scn.equal_radii() && detect_rational_sqrt_mass_ratio(scn, ctrl).is_rational {
            ctrl.image_count() / (4.0 * g)
        } else {
            0.0
        };
        Ok(Self { sum: ImageSum::cross(scn, ctrl)?, prefactor: 0.5 / g, ads_radius: scn.ads_radius(), singular })
    }

    fn regular(&self, k: f64) -> Result<f64, SpecfunError> {
        let l = self.ads_radius;
        let p = legendre_sum(&self.sum, k * l)?;
        Ok(thermal_factor(2.0 * PI * l * k) * p * self.prefactor)
    }
}

/// Cross spectral density at frequency `k` conjugate to AdS time.
pub fn w_hat_12(k: f64, scn: &Scenario, ctrl: &NumericsControl) -> Result<SpectrumSample, SpectrumError> {
    let spec = CrossSpectrum::new(scn, ctrl)?;
    Ok(SpectrumSample::new(k, spec.regular(k)?, spec.singular))
}

/// Product of the two switching transforms in the interference integrand,
/// `η̂(ω/γ̃₁) η̂(ω/γ̃₂ + E(γ̃₁/γ̃₂ − 1)) = 2πσ² exp(−Aω² − Bω − C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossWindowKernel {
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CrossWindowKernel {
    pub fn new(gamma_t1: f64, gamma_t2: f64, energy: f64, sigma: f64) -> Self {
        let s2 = sigma * sigma;
        let d = energy * (gamma_t1 / gamma_t2 - 1.0);
        let sum = gamma_t1 * gamma_t1 + gamma_t2 * gamma_t2;
        Self {
            sigma,
            a: s2 * sum / (2.0 * gamma_t1 * gamma_t1 * gamma_t2 * gamma_t2),
            b: s2 * d / gamma_t2,
            c: 0.5 * s2 * d * d,
        }
    }

    pub fn of(scn: &Scenario) -> Self {
        Self::new(scn.branch1.redshift_ads(), scn.branch2.redshift_ads(), scn.omega, scn.sigma)
    }

    pub fn value(&self, omega: f64) -> f64 {
        2.0 * PI * self.sigma * self.sigma * (-(self.a * omega + self.b) * omega - self.c).exp()
    }

    pub fn center(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }

    /// Standard deviation of the Gaussian in `ω`.
    pub fn width(&self) -> f64 {
        (0.5 / self.a).sqrt()
    }

    /// `(1/2π) ∫ dω` of the kernel in closed form.
    pub fn overlap(&self) -> f64 {
        self.sigma * self.sigma * (PI / self.a).sqrt() * (self.b * self.b / (4.0 * self.a) - self.c).exp()
    }
}

fn spectral_tolerance(ctrl: &NumericsControl) -> Tolerance {
    Tolerance::new(ctrl.quad_rel_tol, ctrl.quad_abs_tol)
}

/// `F/σ` from `(1/2π)∫ dω |η̂(ω/γ)|² Ŵ(Ωγ + ω)` over the Gaussian window.
pub fn response_from_spectrum(
    scn: &Scenario,
    which: BranchIndex,
    ctrl: &NumericsControl,
) -> Result<ResponseValue, SpectrumError> {
    scn.validate()?;
    ctrl.validate()?;
    let b = scn.branch(which);
    reject_twisted(b)?;
    let spec = BranchSpectrum::new(b, ctrl);
    let sigma = scn.sigma;
    let shift = scn.omega * spec.gamma;
    // |η̂(ω/γ)|² = 2πσ² exp(−ω²σ²/γ²)
    let window = GaussianWindow::new(0.0, spec.gamma / (sigma * 2f64.sqrt())).with_cutoff(FREQUENCY_WINDOW_CUTOFF);
    let t = spec.temperature;
    let breaks = [-shift - 4.0 * t, -shift, -shift + 4.0 * t];
    let mut failure = None;
    let res = integrate_gaussian_window(
        |w| match spec.regular(shift + w) {
            Ok(v) => v.into(),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN.into()
            }
        },
        window,
        &breaks,
        spectral_tolerance(ctrl),
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    let res = res.map_err(SpectrumError::Quadrature)?;
    // (1/2π)·2πσ²/σ
    Ok(ResponseValue {
        value: sigma * res.value.re,
        imaginary_residue: 0.0,
        abs_error_estimate: sigma * res.abs_error_estimate,
        evaluations: res.evaluations,
    })
}

/// Interference term from the spectral route, split into the integrated
/// regular density and the closed-form resonant contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralInterference {
    pub regular: ResponseValue,
    pub singular: f64,
}

impl SpectralInterference {
    pub fn total(&self) -> f64 {
        self.regular.value + self.singular
    }
}

/// `F₁₂/σ` contributed by the resonant constant: zero unless the scenario
/// is a mass superposition with equal radii and rational `√(M₁/M₂) ≠ 1`.
pub fn singular_interference_contribution(scn: &Scenario, ctrl: &NumericsControl) -> Result<f64, SpectrumError> {
    let spec = CrossSpectrum::new(scn, ctrl)?;
    if scn.is_coincident() {
        return Ok(0.0);
    }
    Ok(spec.singular * CrossWindowKernel::of(scn).overlap() / scn.sigma)
}

/// `F₁₂/σ` from `(1/2π)∫ dω η̂(ω/γ̃₁) η̂(ω/γ̃₂ + Ω(γ̃₁/γ̃₂ − 1)) Ŵ₁₂(ω + γ̃₁Ω)`.
pub fn interference_from_spectrum(
    scn: &Scenario,
    ctrl: &NumericsControl,
) -> Result<SpectralInterference, SpectrumError> {
    let spec = CrossSpectrum::new(scn, ctrl)?;
    let kernel = CrossWindowKernel::of(scn);
    let shift = scn.branch1.redshift_ads() * scn.omega;
    let window = GaussianWindow::new(kernel.center(), kernel.width()).with_cutoff(FREQUENCY_WINDOW_CUTOFF);
    let t = 1.0 / (2.0 * PI * spec.ads_radius);
    let breaks = [-shift - 4.0 * t, -shift, -shift + 4.0 * t];
    let mut failure = None;
    let res = integrate_gaussian_window(
        |w| match spec.regular(shift + w) {
            Ok(v) => v.into(),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN.into()
            }
        },
        window,
        &breaks,
        spectral_tolerance(ctrl),
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    let res = res.map_err(SpectrumError::Quadrature)?;
    // the kernel is its peak value times the window weight exp(−A(ω−ω₀)²)
    let scale = kernel.value(kernel.center()) / (2.0 * PI * scn.sigma);
    let singular = if scn.is_coincident() { 0.0 } else { spec.singular * kernel.overlap() / scn.sigma };
    Ok(SpectralInterference {
        regular: ResponseValue {
            value: scale * res.value.re,
            imaginary_residue: 0.0,
            abs_error_estimate: scale * res.abs_error_estimate,
            evaluations: res.evaluations,
        },
        singular,
    })
}
