//! Special functions: complex error function, complex log-gamma and the
//! conical Legendre function `P_{−1/2+iμ}(x)` on `x ≥ 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{gauss_kronrod, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("erf argument {0} outside the supported envelope |Im z| <= 50")]
    ErfEnvelope(Complex64),
    #[error("erf({0}) overflows double precision")]
    ErfOverflow(Complex64),
    #[error("Legendre argument must be finite and >= 1, got {0}")]
    LegendreDomain(f64),
    #[error("Legendre degree parameter must be finite, got {0}")]
    LegendreDegree(f64),
    #[error("Legendre integral representation failed to converge at mu = {mu}, x = {x}")]
    LegendreQuadrature { mu: f64, x: f64 },
    #[error("log-gamma requires Re z > 0, got {0}")]
    GammaDomain(Complex64),
}

const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Largest `|Im z|` accepted by [`erf_complex`].
pub const ERF_IM_LIMIT: f64 = 50.0;

/// Error function of a complex argument.
///
/// Maclaurin series near the origin; elsewhere `1 − erfc` with `erfc` from
/// its Laplace continued fraction, evaluated by the modified Lentz method.
/// The left half-plane follows from `erf(−z) = −erf(z)`.
pub fn erf_complex(z: Complex64) -> Result<Complex64, SpecfunError> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.im.abs() > ERF_IM_LIMIT {
        return Err(SpecfunError::ErfEnvelope(z));
    }
    if z.im * z.im - z.re * z.re > 700.0 {
        return Err(SpecfunError::ErfOverflow(z));
    }
    if z.re < 0.0 {
        return erf_complex(-z).map(|v| -v);
    }
    if z.re < 2.0 && z.im.abs() < 4.5 {
        Ok(erf_series(z))
    } else {
        Ok(Complex64::new(1.0, 0.0) - erfc_continued_fraction(z))
    }
}

/// Real error function.
pub fn erf(x: f64) -> f64 {
    erf_complex(Complex64::new(x, 0.0))
        .expect("real arguments are inside the envelope")
        .re
}

fn erf_series(z: Complex64) -> Complex64 {
    let z2 = -z * z;
    let mut term = z;
    let mut sum = z;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        term *= z2 / k;
        let add = term / (2.0 * k + 1.0);
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() && k > z2.norm() {
            break;
        }
    }
    sum * TWO_OVER_SQRT_PI
}

/// `erfc z = e^{−z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))`, Re z ≥ 0.
fn erfc_continued_fraction(z: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = if z.norm() == 0.0 { tiny } else { z };
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..20_000 {
        let a = 0.5 * k as f64;
        d = z + d * a;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = z + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() * FRAC_1_SQRT_PI / f
}

/// Principal-branch `ln Γ(z)` for `Re z > 0` (imaginary part modulo 2π).
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64, SpecfunError> {
    if !(z.re > 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecfunError::GammaDomain(z));
    }
    // shift into the Stirling region
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    // Bernoulli terms B_{2k}/(2k(2k−1))
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in C {
        series += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift)
}

/// Evaluation route for [`legendre_conical_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendreMethod {
    /// Choose by region.
    Auto,
    /// `₂F₁(1/2 − iμ, 1/2 + iμ; 1; (1 − x)/2)`, only for `x < 3`.
    Series,
    /// Expansion in `1/x²` about infinity, for `x > 1` and `μ > 0`.
    LargeArgument,
    /// Mehler–Dirichlet integral.
    Mehler,
}

/// `P_{−1/2+iμ}(x)` for real `μ` and `x ≥ 1`.
pub fn legendre_conical(mu: f64, x: f64) -> Result<f64, SpecfunError> {
    legendre_conical_with(mu, x, LegendreMethod::Auto)
}

pub fn legendre_conical_with(mu: f64, x: f64, method: LegendreMethod) -> Result<f64, SpecfunError> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(SpecfunError::LegendreDomain(x));
    }
    if !mu.is_finite() {
        return Err(SpecfunError::LegendreDegree(mu));
    }
    // P_ν = P_{−ν−1}
    let mu = mu.abs();
    if x == 1.0 {
        return Ok(1.0);
    }
    let method = match method {
        LegendreMethod::Auto => {
            if x < 2.0 && mu * (2.0 * (x - 1.0)).sqrt() <= 6.0 {
                LegendreMethod::Series
            } else if x >= 3.0 && mu >= 1.0 && mu <= 12.0 * x * x {
                LegendreMethod::LargeArgument
            } else {
                LegendreMethod::Mehler
            }
        }
        m => m,
    };
    match method {
        LegendreMethod::Series => {
            if x >= 3.0 {
                return Err(SpecfunError::LegendreDomain(x));
            }
            Ok(conical_series(mu, (1.0 - x) / 2.0))
        }
        LegendreMethod::LargeArgument => {
            if mu == 0.0 {
                return Err(SpecfunError::LegendreDegree(mu));
            }
            conical_large_argument(mu, x)
        }
        LegendreMethod::Mehler | LegendreMethod::Auto => conical_mehler(mu, x),
    }
}

fn conical_series(mu: f64, t: f64) -> f64 {
    // (1/2 − iμ)_k (1/2 + iμ)_k = Π_{j<k} ((j + 1/2)² + μ²)
    let mu2 = mu * mu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0f64;
    loop {
        let j = k + 0.5;
        k += 1.0;
        term *= (j * j + mu2) / (k * k) * t;
        sum += term;
        if (term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 4.0) || k > 10_000.0 {
            break;
        }
    }
    sum
}

fn conical_large_argument(mu: f64, x: f64) -> Result<f64, SpecfunError> {
    let i_mu = Complex64::new(0.0, mu);
    let ln_ratio = ln_gamma_complex(i_mu + 1.0)? - i_mu.ln() - ln_gamma_complex(i_mu + 0.5)?;
    let power = (Complex64::new(-0.5, mu)) * (2.0 * x).ln();
    let prefactor = (ln_ratio + power).exp() / PI.sqrt();
    // ₂F₁(1/4 − iμ/2, 3/4 − iμ/2; 1 − iμ; 1/x²)
    let a = Complex64::new(0.25, -0.5 * mu);
    let b = Complex64::new(0.75, -0.5 * mu);
    let c = Complex64::new(1.0, -mu);
    let y = 1.0 / (x * x);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * y;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && kf > 2.0 {
            break;
        }
    }
    Ok(2.0 * (prefactor * sum).re)
}

/// `P_{−1/2+iμ}(cosh η) = (√2/π) ∫_0^η cos(μt)/√(cosh η − cosh t) dt`,
/// with `t = η − v²` so the integrand is smooth:
/// `(√2/π) ∫_0^{√η} 2v cos(μ(η − v²)) / √(2 sinh(η − v²/2) sinh(v²/2)) dv`.
fn conical_mehler(mu: f64, x: f64) -> Result<f64, SpecfunError> {
    let eta = if x < 1.5 {
        // acosh near 1 without cancellation
        let e = x - 1.0;
        (e + (e * (e + 2.0)).sqrt()).ln_1p()
    } else {
        x.acosh()
    };
    let top = eta.sqrt();
    let panels = 8 + (0.7 * mu * eta).ceil() as usize;
    let breaks: Vec<f64> = (1..panels).map(|k| top * k as f64 / panels as f64).collect();
    let f = |v: f64| {
        let jac = if v == 0.0 {
            2.0 / eta.sinh().sqrt()
        } else {
            let v2 = v * v;
            2.0 * v / (2.0 * (eta - 0.5 * v2).sinh() * (0.5 * v2).sinh()).sqrt()
        };
        Complex64::new(jac * (mu * (eta - v * v)).cos(), 0.0)
    };
    let res = gauss_kronrod(f, 0.0, top, &breaks, Tolerance::new(1e-13, 1e-16))
        .map_err(|_| SpecfunError::LegendreQuadrature { mu, x })?;
    Ok(res.value.re * 2f64.sqrt() / PI)
}
