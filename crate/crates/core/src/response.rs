//! Time-domain detector response.
//!
//! The double proper-time integral of a Gaussian-switched detector reduces,
//! after integrating the centre-of-mass time in closed form, to one integral
//! per image term over the AdS-time separation `z = t̄/l`:
//!
//! ```text
//! F/σ   = Σ_k C·w_k ∫_{−a}^{a} g(z) (c_k − cosh(z − iε))^{−1/2} dz
//! ```
//!
//! with `g = X₀H₀` and `C = 1/(8√(2π))` for one branch, or `g = Z₀H` and
//! `C = Y₀/2` for the interference term. For `c_k > 1` the integrand has
//! square-root branch points at `±arccosh c_k`; past them the kernel
//! continues as `∓i/√(cosh z − c_k)`. For `c_k = 1` the kernel is a simple
//! pole, `−i/(√2 sinh((z − iε)/2))`, handled with the Sokhotski formula:
//! `C[√2 π g(0) − i√2 PV∫ g(2y)/sinh y dy]`.
//!
//! [`response_oracle`] evaluates the original double integral directly
//! against the regulated Wightman function, for validation.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::params::{BranchIndex, BtzBranch, NumericsControl, ParamError, Scenario};
use crate::quadrature::{
    integrate_2d_window, integrate_pv_sinh, sqrt_above, sqrt_below, QuadError, SqrtEndpointMethod,
    Tolerance, Window2d,
};
use crate::specfun::erf_complex;
use crate::wightman::{ImageSum, WightmanError};

/// Largest imaginary part tolerated in a response before it is discarded.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResponseError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Wightman(#[from] WightmanError),
    #[error("quadrature failed for image term (m = {m}, n = {n}): {source}")]
    Quadrature { m: i64, n: i64, source: QuadError },
    #[error("oracle quadrature failed: {0}")]
    Oracle(QuadError),
    #[error("response has imaginary residue {residue:e} above {limit:e}")]
    ImaginaryResidue { residue: f64, limit: f64 },
}

/// A real response value together with its numerical diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseValue {
    /// `F/σ` or `F₁₂/σ`.
    pub value: f64,
    /// Imaginary part found before it was discarded.
    pub imaginary_residue: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

fn erf_or_nan(z: Complex64) -> Complex64 {
    erf_complex(z).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// Window envelopes of one branch, as functions of AdS time `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleEnvelope {
    pub gamma_t: f64,
    pub sigma: f64,
    pub omega: f64,
    pub tau_f: f64,
}

impl SingleEnvelope {
    /// `X₀(s) = exp(−γ̃²s²/(4σ²)) exp(−iΩγ̃s)`
    pub fn x0(&self, s: f64) -> Complex64 {
        let g = self.gamma_t;
        let u = g * s / self.sigma;
        Complex64::from_polar((-0.25 * u * u).exp(), -self.omega * g * s)
    }

    /// `H₀(s) = erf[(2τ_f + γ̃s)/(2σ)] + erf[(2τ_f − γ̃s)/(2σ)]`
    pub fn h0(&self, s: f64) -> Complex64 {
        let gs = self.gamma_t * s;
        let two_s = 2.0 * self.sigma;
        let a = erf_or_nan(Complex64::new((2.0 * self.tau_f + gs) / two_s, 0.0));
        let b = erf_or_nan(Complex64::new((2.0 * self.tau_f - gs) / two_s, 0.0));
        a + b
    }
}

/// Window envelopes of the interference term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossEnvelope {
    pub gamma_t1: f64,
    pub gamma_t2: f64,
    pub sigma: f64,
    pub omega: f64,
    pub tau_f: f64,
}

impl CrossEnvelope {
    fn s(&self) -> f64 {
        self.gamma_t1 * self.gamma_t1 + self.gamma_t2 * self.gamma_t2
    }

    /// `Y₀ = √(γ̃₁γ̃₂) √π / (4π√S) · exp(−Ω²σ²(γ̃₁ − γ̃₂)²/(2S))`, `S = γ̃₁² + γ̃₂²`.
    pub fn y0(&self) -> f64 {
        let (g1, g2) = (self.gamma_t1, self.gamma_t2);
        let s = self.s();
        let d = self.omega * self.sigma * (g1 - g2);
        (g1 * g2).sqrt() * PI.sqrt() / (4.0 * PI * s.sqrt()) * (-d * d / (2.0 * s)).exp()
    }

    /// `Z₀(s) = exp(−γ̃₁²γ̃₂²s²/(2σ²S)) exp(−iΩs γ̃₁γ̃₂(γ̃₁ + γ̃₂)/S)`
    pub fn z0(&self, s: f64) -> Complex64 {
        let (g1, g2) = (self.gamma_t1, self.gamma_t2);
        let sum = self.s();
        let u = g1 * g2 * s / self.sigma;
        Complex64::from_polar((-u * u / (2.0 * sum)).exp(), -self.omega * s * g1 * g2 * (g1 + g2) / sum)
    }

    /// `H(s) = erf((Sτ_f − γ̃₁γ̃₂²s + iΩσ²γ̃₁(γ̃₁−γ̃₂))/d) + erf((Sτ_f + γ̃₁γ̃₂²s − iΩσ²γ̃₁(γ̃₁−γ̃₂))/d)`
    /// with `d = √2 σ γ̃₁ √S`.
    pub fn h(&self, s: f64) -> Complex64 {
        let (g1, g2) = (self.gamma_t1, self.gamma_t2);
        let sum = self.s();
        let d = 2f64.sqrt() * self.sigma * g1 * sum.sqrt();
        let shift = Complex64::new(g1 * g2 * g2 * s, -self.omega * self.sigma * self.sigma * g1 * (g1 - g2));
        let base = sum * self.tau_f;
        erf_or_nan((base - shift) / d) + erf_or_nan((base + shift) / d)
    }
}

/// Envelope functions `X₀, H₀` (per branch) and `Y₀, Z₀, H` (cross term).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSet {
    pub branch1: SingleEnvelope,
    pub branch2: SingleEnvelope,
    pub cross: CrossEnvelope,
}

impl EnvelopeSet {
    pub fn new(scn: &Scenario) -> Self {
        let single = |b: &BtzBranch| SingleEnvelope {
            gamma_t: b.redshift_ads(),
            sigma: scn.sigma,
            omega: scn.omega,
            tau_f: scn.tau_f,
        };
        Self {
            branch1: single(&scn.branch1),
            branch2: single(&scn.branch2),
            cross: CrossEnvelope {
                gamma_t1: scn.branch1.redshift_ads(),
                gamma_t2: scn.branch2.redshift_ads(),
                sigma: scn.sigma,
                omega: scn.omega,
                tau_f: scn.tau_f,
            },
        }
    }

    pub fn single(&self, which: BranchIndex) -> &SingleEnvelope {
        match which {
            BranchIndex::First => &self.branch1,
            BranchIndex::Second => &self.branch2,
        }
    }
}

pub fn envelope_set(scn: &Scenario) -> EnvelopeSet {
    EnvelopeSet::new(scn)
}

fn tolerance(ctrl: &NumericsControl) -> Tolerance {
    Tolerance::new(ctrl.quad_rel_tol, ctrl.quad_abs_tol)
}

/// `Σ_k coeff·w_k ∫_{−a}^{a} g(z) k_c(z) dz` over all image terms, in index
/// order. `g` must satisfy `g(−z) = conj g(z)` for the result to be real;
/// both halves are evaluated independently so the imaginary residue
/// measures how well that holds.
fn image_response<G>(
    sum: &ImageSum,
    coeff: f64,
    g: G,
    a: f64,
    ctrl: &NumericsControl,
) -> Result<ResponseValue, ResponseError>
where
    G: Fn(f64) -> Complex64,
{
    let tol = tolerance(ctrl);
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0usize;
    for term in &sum.terms {
        let fail = |source| ResponseError::Quadrature { m: term.m, n: term.n, source };
        let scale = coeff * term.weight;
        let value = if term.coefficient.excess == 0.0 {
            let pv = integrate_pv_sinh(|y| g(2.0 * y), 0.5 * a, tol).map_err(fail)?;
            let i_sqrt2 = Complex64::new(0.0, 2f64.sqrt());
            let r = pv.scale(-i_sqrt2);
            crate::quadrature::QuadResult {
                value: r.value + g(0.0) * (2f64.sqrt() * PI),
                ..r
            }
        } else {
            let z_star = term.coefficient.branch_point();
            let below = sqrt_below(|z| g(z) + g(-z), z_star, 0.0, a, tol, SqrtEndpointMethod::TanhSinh)
                .map_err(fail)?;
            let above = sqrt_above(|z| g(z) - g(-z), z_star, 0.0, a, tol, SqrtEndpointMethod::TanhSinh)
                .map_err(fail)?;
            below.combine(above)
        };
        total += value.value * scale;
        err += value.abs_error_estimate * scale.abs();
        evals += value.evaluations;
    }
    let limit = IMAGINARY_RESIDUE_LIMIT * total.re.abs().max(1.0);
    if total.im.abs() > limit {
        return Err(ResponseError::ImaginaryResidue { residue: total.im, limit });
    }
    Ok(ResponseValue {
        value: total.re,
        imaginary_residue: total.im,
        abs_error_estimate: err,
        evaluations: evals,
    })
}

/// `F/σ` for one branch of the scenario.
pub fn response_single(
    scn: &Scenario,
    which: BranchIndex,
    ctrl: &NumericsControl,
) -> Result<ResponseValue, ResponseError> {
    scn.validate()?;
    ctrl.validate()?;
    let b = scn.branch(which);
    let env = EnvelopeSet::new(scn);
    let env = *env.single(which);
    let l = b.ads_radius();
    let sum = ImageSum::single(b, ctrl);
    // H₀ vanishes beyond γ̃s = 2τ_f + O(σ)
    let a = (2.0 * scn.tau_f + 12.0 * scn.sigma) / (l * env.gamma_t);
    let coeff = 1.0 / (8.0 * (2.0 * PI).sqrt());
    image_response(&sum, coeff, |z| env.x0(l * z) * env.h0(l * z), a, ctrl)
}

/// Upper limit of the interference integral in units of `l`: the AdS-time
/// separations reachable by the two windows, plus a margin of σ.
fn cross_extent(scn: &Scenario) -> f64 {
    let (g1, g2) = (scn.branch1.redshift_ads(), scn.branch2.redshift_ads());
    ((scn.tau_f + 6.0 * scn.sigma) * (1.0 / g1 + 1.0 / g2)) / scn.ads_radius()
}

/// `F₁₂/σ`, the regular (time-domain) interference term. The relative phase
/// `ΔΦ` is not applied here.
pub fn response_interference(scn: &Scenario, ctrl: &NumericsControl) -> Result<ResponseValue, ResponseError> {
    scn.validate()?;
    ctrl.validate()?;
    let env = EnvelopeSet::new(scn).cross;
    let l = scn.ads_radius();
    let sum = ImageSum::cross(scn, ctrl)?;
    let coeff = 0.5 * env.y0();
    image_response(&sum, coeff, |z| env.z0(l * z) * env.h(l * z), cross_extent(scn), ctrl)
}

/// Which quantity the brute-force oracle evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTarget {
    Single(BranchIndex),
    Interference,
}

fn oracle_tolerance(ctrl: &NumericsControl) -> Tolerance {
    Tolerance::new(ctrl.quad_rel_tol.max(1e-9), ctrl.quad_abs_tol.max(1e-12))
}

/// The double proper-time integral at the regulator `ctrl.epsilon`, with
/// the exact finite window and no approximation:
/// `∫∫ dτ dτ′ e^{−iΩ(τ−τ′)} η(τ)η(τ′) W(τ, τ′) / σ`.
pub fn response_oracle_at(
    scn: &Scenario,
    target: OracleTarget,
    ctrl: &NumericsControl,
) -> Result<ResponseValue, ResponseError> {
    scn.validate()?;
    ctrl.validate()?;
    let sigma = scn.sigma;
    let tf = scn.tau_f;
    let omega = scn.omega;
    let eta = |t: f64| {
        let u = t / sigma;
        (-0.5 * u * u).exp()
    };
    let l = scn.ads_radius();
    let tol = oracle_tolerance(ctrl);
    let eps = ctrl.epsilon;

    let (sum, window, outer_scale, inner): (ImageSum, Window2d, f64, Box<dyn Fn(f64, f64) -> Complex64>) =
        match target {
            OracleTarget::Single(which) => {
                let b = *scn.branch(which);
                let g = b.redshift_ads();
                let sum = ImageSum::single(&b, ctrl);
                // v = τ − τ′, w = τ′; W depends on t̄ = v/γ̃
                let mut breaks = vec![0.0];
                for t in &sum.terms {
                    let v = l * g * t.coefficient.branch_point();
                    breaks.extend([v, -v]);
                }
                let window = Window2d {
                    outer: (-2.0 * tf, 2.0 * tf),
                    outer_breakpoints: breaks,
                    inner: Box::new(move |v| ((-tf).max(-tf - v), tf.min(tf - v))),
                };
                let inner = Box::new(move |v: f64, w: f64| Complex64::new(eta(v + w) * eta(w), 0.0));
                (sum, window, 1.0 / (l * g), inner)
            }
            OracleTarget::Interference => {
                let (g1, g2) = (scn.branch1.redshift_ads(), scn.branch2.redshift_ads());
                let sum = ImageSum::cross(scn, ctrl)?;
                // s̄ = τ/γ̃₁ − τ′/γ̃₂, w = τ′
                let reach = tf / g1 + tf / g2;
                let mut breaks = vec![0.0];
                for t in &sum.terms {
                    let s = l * t.coefficient.branch_point();
                    breaks.extend([s, -s]);
                }
                let window = Window2d {
                    outer: (-reach, reach),
                    outer_breakpoints: breaks,
                    inner: Box::new(move |s| ((-tf).max(g2 * (-tf / g1 - s)), tf.min(g2 * (tf / g1 - s)))),
                };
                let inner = Box::new(move |s: f64, w: f64| {
                    let tau = g1 * (s + w / g2);
                    Complex64::from_polar(g1 * eta(tau) * eta(w), -omega * (tau - w))
                });
                (sum, window, 1.0 / l, inner)
            }
        };

    let is_single = matches!(target, OracleTarget::Single(_));
    let mut cached = (f64::NAN, Complex64::new(0.0, 0.0));
    let res = integrate_2d_window(
        |x, y| {
            if x != cached.0 {
                let mut w = sum.evaluate(x * outer_scale, eps);
                if is_single {
                    w *= Complex64::from_polar(1.0, -omega * x);
                }
                cached = (x, w);
            }
            cached.1 * inner(x, y)
        },
        &window,
        tol,
    )
    .map_err(ResponseError::Oracle)?;
    Ok(ResponseValue {
        value: res.value.re / sigma,
        imaginary_residue: res.value.im / sigma,
        abs_error_estimate: res.abs_error_estimate / sigma,
        evaluations: res.evaluations,
    })
}

/// Oracle evaluated at `ε` and `10ε`, linearly extrapolated to `ε → 0`.
pub fn response_oracle(
    scn: &Scenario,
    target: OracleTarget,
    ctrl: &NumericsControl,
) -> Result<ResponseValue, ResponseError> {
    let e1 = ctrl.epsilon;
    let e2 = 10.0 * e1;
    let f1 = response_oracle_at(scn, target, ctrl)?;
    let f2 = response_oracle_at(scn, target, &ctrl.with_epsilon(e2))?;
    let extrapolate = |a: f64, b: f64| (e2 * a - e1 * b) / (e2 - e1);
    Ok(ResponseValue {
        value: extrapolate(f1.value, f2.value),
        imaginary_residue: extrapolate(f1.imaginary_residue, f2.imaginary_residue),
        abs_error_estimate: f1.abs_error_estimate + f2.abs_error_estimate + (f1.value - f2.value).abs() * e1 / e2,
        evaluations: f1.evaluations + f2.evaluations,
    })
}
