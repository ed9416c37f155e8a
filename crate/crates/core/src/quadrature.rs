//! Integration primitives.
//!
//! Three kernels cover every integral the engine needs:
//!
//! * [`gauss_kronrod`]: globally adaptive 21-point Gauss–Kronrod with
//!   caller-supplied breakpoints, for smooth or mildly peaked integrands;
//! * [`tanh_sinh`]: double-exponential quadrature for integrable endpoint
//!   singularities. The integrand receives the distances to both endpoints
//!   so that expressions like `α − cosh z` can be formed without
//!   cancellation next to the singular point;
//! * iterated adaptive integration for the two-dimensional oracle.
//!
//! Every routine returns a [`QuadResult`] or a [`QuadError`]; a failed
//! integral always carries its best partial estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on integrand evaluations per integral.
pub const DEFAULT_EVAL_BUDGET: usize = 10_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            abs_error_estimate: 0.0,
            evaluations: 1,
        }
    }

    /// Sum of two independent results.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.norm(),
            evaluations: self.evaluations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not converge after {} evaluations (partial value {}, error estimate {:e})",
        partial.evaluations, partial.value, partial.abs_error_estimate)]
    NotConverged { partial: QuadResult },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("invalid integration interval [{0}, {1}]")]
    Interval(f64, f64),
    #[error("invalid quadrature parameter: {0}")]
    Parameter(&'static str),
}

impl QuadError {
    pub fn partial(&self) -> Option<&QuadResult> {
        match self {
            Self::NotConverged { partial } => Some(partial),
            _ => None,
        }
    }
}

/// Accuracy request: converged once `error ≤ max(abs, rel·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-13,
            max_evals: DEFAULT_EVAL_BUDGET,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self {
            rel,
            abs,
            max_evals: DEFAULT_EVAL_BUDGET,
        }
    }

    pub fn with_budget(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }

    fn check(&self) -> Result<(), QuadError> {
        if !(self.rel >= 0.0 && self.abs >= 0.0 && (self.rel > 0.0 || self.abs > 0.0)) {
            return Err(QuadError::Parameter("tolerances must be non-negative and not both zero"));
        }
        if self.max_evals == 0 {
            return Err(QuadError::Parameter("evaluation budget must be positive"));
        }
        Ok(())
    }
}

/// Roundoff floor attached to every reported error.
fn roundoff(value: Complex64) -> f64 {
    50.0 * f64::EPSILON * value.norm()
}

fn finite(v: Complex64, x: f64) -> Result<Complex64, QuadError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::NonFinite(x))
    }
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 10/21
// ---------------------------------------------------------------------------

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Result<Segment, QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = finite(f(c), c)?;
    let mut pairs = [(ZERO, ZERO); 10];
    let mut kronrod = fc * WGK[10];
    let mut gauss = ZERO;
    for (j, pair) in pairs.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let f1 = finite(f(c - dx), c - dx)?;
        let f2 = finite(f(c + dx), c + dx)?;
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *pair = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let resasc = pairs
        .iter()
        .enumerate()
        .fold(WGK[10] * (fc - mean).norm(), |acc, (j, (f1, f2))| {
            acc + WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm())
        })
        * h.abs();
    let value = kronrod * h;
    let diff = ((kronrod - gauss) * h).norm();
    // QUADPACK scaling: the raw Gauss/Kronrod difference overstates the
    // error of the Kronrod value once the rule resolves the integrand.
    let error = if resasc > 0.0 && diff > 0.0 {
        resasc * (200.0 * diff / resasc).powf(1.5).min(1.0)
    } else {
        diff
    };
    Ok(Segment { a, b, value, error: error.max(roundoff(value)) })
}

fn sorted_points(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > a && *p < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(b);
    pts
}

/// Globally adaptive Gauss–Kronrod (10/21) over `[a, b]`, seeded with the
/// given breakpoints. Segments are bisected in order of decreasing error
/// until the summed error meets the tolerance.
pub fn gauss_kronrod<F>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    tol.check()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadError::Interval(a, b));
    }
    if a == b {
        return Ok(QuadResult { value: ZERO, abs_error_estimate: 0.0, evaluations: 1 });
    }
    let pts = sorted_points(a, b, breakpoints);
    let mut heap = BinaryHeap::new();
    let mut settled: Vec<Segment> = Vec::new();
    let mut evaluations = 0usize;
    let mut value = ZERO;
    let mut error = 0.0;
    let mut magnitude = 0.0;
    for w in pts.windows(2) {
        let s = gk21(&mut f, w[0], w[1])?;
        value += s.value;
        magnitude += s.value.norm();
        error += s.error;
        heap.push(s);
        evaluations += 21;
    }
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps % 512 == 0 {
            // refresh the running sums to stop drift
            (value, error, magnitude) = heap.iter().chain(settled.iter()).fold(
                (ZERO, 0.0, 0.0),
                |(v, e, m), s| (v + s.value, e + s.error, m + s.value.norm()),
            );
        }
        // cancellation between segments limits the attainable accuracy
        let target = tol.target(value.norm()).max(100.0 * f64::EPSILON * magnitude);
        let result = QuadResult { value, abs_error_estimate: error.max(0.0), evaluations };
        if error <= target {
            return Ok(result);
        }
        let Some(worst) = heap.pop() else {
            // every remaining segment is at resolution limit
            return Ok(result);
        };
        if evaluations + 42 > tol.max_evals {
            return Err(QuadError::NotConverged { partial: result });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs()) {
            settled.push(worst);
            continue;
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        magnitude += left.value.norm() + right.value.norm() - worst.value.norm();
        heap.push(left);
        heap.push(right);
    }
}

// ---------------------------------------------------------------------------
// tanh-sinh
// ---------------------------------------------------------------------------

/// Largest abscissa parameter. At `t = 4.5` the nodes sit about `1e-61`
/// half-widths from the endpoints, which keeps the truncated tail below
/// roundoff even for `1/√` endpoint singularities.
const TS_TMAX: f64 = 4.5;
const TS_MAX_LEVEL: u32 = 13;
const TS_MIN_LEVEL: u32 = 3;

/// Node `t` mapped to `(offset from midpoint, distance to a, distance to b,
/// weight)`, all in units of the half-width.
fn ts_node(t: f64) -> (f64, f64, f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    // 1 − tanh|u| = 2e/(1+e), computed without cancellation
    let near = 2.0 * e / (1.0 + e);
    let far = 2.0 - near;
    let cosh_u = u.cosh();
    let w = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
    if t >= 0.0 {
        (1.0 - near, far, near, w)
    } else {
        (near - 1.0, near, far, w)
    }
}

/// Tanh-sinh quadrature of `f(x, x − a, b − x)` over `[a, b]`.
///
/// The level is refined (halving the step) until two successive estimates
/// agree to the tolerance; the reported error is that difference plus the
/// size of the outermost retained contributions.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64, f64, f64) -> Complex64,
{
    tol.check()?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadError::Interval(a, b));
    }
    if a == b {
        return Ok(QuadResult { value: ZERO, abs_error_estimate: 0.0, evaluations: 1 });
    }
    let hw = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<Complex64, QuadError> {
        let (off, dl, dh, w) = ts_node(t);
        if w == 0.0 {
            return Ok(ZERO);
        }
        // measure from the nearer endpoint so nodes close to it stay distinct
        let x = if off < 0.0 { a + hw * dl } else { b - hw * dh }.clamp(a, b);
        let v = finite(f(x, hw * dl, hw * dh), x)?;
        Ok(v * w)
    };

    let mut evaluations = 1usize;
    let mut sum = eval(0.0)?;
    let mut h = 1.0;
    let mut edge = 0.0;
    let mut k = 1.0;
    while k * h <= TS_TMAX {
        let p = eval(k * h)?;
        let m = eval(-k * h)?;
        sum += p + m;
        edge = p.norm() + m.norm();
        evaluations += 2;
        k += 1.0;
    }
    let mut prev = sum * h * hw;
    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let mut add = ZERO;
        let mut j = 1.0;
        while j * h <= TS_TMAX {
            add += eval(j * h)? + eval(-j * h)?;
            evaluations += 2;
            j += 2.0;
        }
        sum += add;
        let value = sum * h * hw;
        let diff = (value - prev).norm();
        let tail = edge * h * hw;
        let error = (diff + tail).max(roundoff(value));
        let result = QuadResult { value, abs_error_estimate: error, evaluations };
        if level >= TS_MIN_LEVEL && error <= tol.target(value.norm()) {
            return Ok(result);
        }
        if level == TS_MAX_LEVEL || evaluations * 2 > tol.max_evals {
            return Err(QuadError::NotConverged { partial: result });
        }
        prev = value;
    }
    unreachable!("loop returns at the last level")
}

// ---------------------------------------------------------------------------
// 1/√(α − cosh z) endpoint singularities
// ---------------------------------------------------------------------------

/// Internal parameterisation used for the square-root endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtEndpointMethod {
    /// Tanh-sinh on the original variable.
    #[default]
    TanhSinh,
    /// Substitution `z = z* ∓ u²`, which removes the singularity, followed
    /// by adaptive Gauss–Kronrod.
    Substitution,
}

/// `α − cosh z` written as `2 sinh((z*+z)/2) sinh((z*−z)/2)` with
/// `d = z* − z` supplied exactly.
#[inline]
pub fn alpha_minus_cosh(z_star: f64, z: f64, d: f64) -> f64 {
    2.0 * (0.5 * (z_star + z)).sinh() * (0.5 * d).sinh()
}

fn check_alpha(alpha: f64, z_lo: f64, z_hi: f64) -> Result<f64, QuadError> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(QuadError::Parameter("alpha must be finite and greater than 1"));
    }
    if !(z_lo.is_finite() && z_hi.is_finite() && z_lo < z_hi) {
        return Err(QuadError::Interval(z_lo, z_hi));
    }
    let z_star = alpha.acosh();
    if z_lo <= -z_star {
        return Err(QuadError::Parameter("lower limit must lie above −arccosh(alpha)"));
    }
    Ok(z_star)
}

/// `∫ f(z)/√(α − cosh z) dz` over `[z_lo, min(z_hi, arccosh α))`.
pub fn integrate_sqrt_endpoint<F>(
    f: F,
    alpha: f64,
    z_lo: f64,
    z_hi: f64,
    tol: Tolerance,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_sqrt_endpoint_with(f, alpha, z_lo, z_hi, tol, SqrtEndpointMethod::TanhSinh)
}

pub fn integrate_sqrt_endpoint_with<F>(
    f: F,
    alpha: f64,
    z_lo: f64,
    z_hi: f64,
    tol: Tolerance,
    method: SqrtEndpointMethod,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    let z_star = check_alpha(alpha, z_lo, z_hi)?;
    sqrt_below(f, z_star, z_lo, z_hi, tol, method)
}

/// Same as [`integrate_sqrt_endpoint`] but with `z* = arccosh α` supplied,
/// so that `α` can be given as an accurately known excess over one.
pub(crate) fn sqrt_below<F>(
    mut f: F,
    z_star: f64,
    z_lo: f64,
    z_hi: f64,
    tol: Tolerance,
    method: SqrtEndpointMethod,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if z_lo >= z_star {
        return Ok(QuadResult { value: ZERO, abs_error_estimate: 0.0, evaluations: 1 });
    }
    let top = z_hi.min(z_star);
    let reaches = z_hi >= z_star;
    match method {
        SqrtEndpointMethod::TanhSinh => tanh_sinh(
            |z, _, d_hi| {
                let d = if reaches { d_hi } else { z_star - z };
                f(z) / alpha_minus_cosh(z_star, z, d).sqrt()
            },
            z_lo,
            top,
            tol,
        ),
        SqrtEndpointMethod::Substitution => {
            // z = z* − u², u ∈ [√(z* − top), √(z* − z_lo)]
            let u_lo = (z_star - top).sqrt();
            let u_hi = (z_star - z_lo).sqrt();
            gauss_kronrod(
                |u| {
                    let d = u * u;
                    let z = z_star - d;
                    let jac = if u == 0.0 {
                        // 2u/√(2 sinh(z*) · u²/2)
                        2.0 / z_star.sinh().sqrt()
                    } else {
                        2.0 * u / alpha_minus_cosh(z_star, z, d).sqrt()
                    };
                    f(z) * jac
                },
                u_lo,
                u_hi,
                &[],
                tol,
            )
        }
    }
}

/// Continuation past the branch point: `∫ f(z)/(i√(cosh z − α)) dz` over
/// `[max(z_lo, arccosh α), z_hi]`.
pub fn integrate_sqrt_beyond<F>(
    f: F,
    alpha: f64,
    z_lo: f64,
    z_hi: f64,
    tol: Tolerance,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    let z_star = check_alpha(alpha, z_lo, z_hi)?;
    sqrt_above(f, z_star, z_lo, z_hi, tol, SqrtEndpointMethod::TanhSinh)
}

pub(crate) fn sqrt_above<F>(
    mut f: F,
    z_star: f64,
    z_lo: f64,
    z_hi: f64,
    tol: Tolerance,
    method: SqrtEndpointMethod,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if z_hi <= z_star {
        return Ok(QuadResult { value: ZERO, abs_error_estimate: 0.0, evaluations: 1 });
    }
    let bottom = z_lo.max(z_star);
    let from_star = z_lo <= z_star;
    let minus_i = Complex64::new(0.0, -1.0);
    // cosh z − α = 2 sinh((z + z*)/2) sinh((z − z*)/2)
    let gap = |z: f64, d: f64| 2.0 * (0.5 * (z + z_star)).sinh() * (0.5 * d).sinh();
    match method {
        SqrtEndpointMethod::TanhSinh => tanh_sinh(
            |z, d_lo, _| {
                let d = if from_star { d_lo } else { z - z_star };
                f(z) * minus_i / gap(z, d).sqrt()
            },
            bottom,
            z_hi,
            tol,
        ),
        SqrtEndpointMethod::Substitution => {
            let u_lo = (bottom - z_star).sqrt();
            let u_hi = (z_hi - z_star).sqrt();
            gauss_kronrod(
                |u| {
                    let d = u * u;
                    let z = z_star + d;
                    let jac = if u == 0.0 { 2.0 / z_star.sinh().sqrt() } else { 2.0 * u / gap(z, d).sqrt() };
                    f(z) * minus_i * jac
                },
                u_lo,
                u_hi,
                &[],
                tol,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Principal values
// ---------------------------------------------------------------------------

/// `PV ∫_{−a}^{a} f(z)/sinh z dz`, evaluated as `∫_0^a [f(z) − f(−z)]/sinh z dz`.
/// Near zero the quotient is replaced by its limit `2 f'(0)` estimated from
/// a symmetric difference, so the integrand never divides by a tiny sinh.
pub fn integrate_pv_sinh<F>(mut f: F, a: f64, tol: Tolerance) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if !(a.is_finite() && a > 0.0) {
        return Err(QuadError::Interval(-a, a));
    }
    gauss_kronrod(
        |z| {
            if z < 1e-7 * a.min(1.0) {
                let h = 1e-4 * a.min(1.0);
                (f(h) - f(-h)) / h.sinh()
            } else {
                (f(z) - f(-z)) / z.sinh()
            }
        },
        0.0,
        a,
        &[],
        tol,
    )
}

// ---------------------------------------------------------------------------
// Gaussian windows
// ---------------------------------------------------------------------------

/// Default half-width of a Gaussian window in units of its width.
pub const DEFAULT_WINDOW_CUTOFF: f64 = 10.0;

/// Window `exp(−(x − center)²/(2 width²))` truncated at `center ± cutoff·width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWindow {
    pub center: f64,
    pub width: f64,
    pub cutoff: f64,
}

impl GaussianWindow {
    pub fn new(center: f64, width: f64) -> Self {
        Self { center, width, cutoff: DEFAULT_WINDOW_CUTOFF }
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn weight(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.width;
        (-0.5 * u * u).exp()
    }

    pub fn bounds(&self) -> (f64, f64) {
        let half = self.cutoff * self.width;
        (self.center - half, self.center + half)
    }
}

/// `∫ f(x) exp(−(x−c)²/(2w²)) dx` over the truncated window. The Gaussian
/// tail beyond the cut, bounded using the integrand at the window edges, is
/// added to the error estimate.
pub fn integrate_gaussian_window<F>(
    mut f: F,
    window: GaussianWindow,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Complex64,
{
    if !(window.width.is_finite() && window.width > 0.0) {
        return Err(QuadError::Parameter("window width must be positive"));
    }
    if !(window.cutoff.is_finite() && window.cutoff > 0.0) {
        return Err(QuadError::Parameter("window cutoff must be positive"));
    }
    let (lo, hi) = window.bounds();
    let mut pts: Vec<f64> = vec![window.center];
    pts.extend_from_slice(breakpoints);
    let mut res = gauss_kronrod(|x| f(x) * window.weight(x), lo, hi, &pts, tol)?;
    let edge = f(lo).norm() + f(hi).norm();
    let g = window.weight(hi);
    res.abs_error_estimate += edge * g * window.width / window.cutoff;
    res.evaluations += 2;
    Ok(res)
}

// ---------------------------------------------------------------------------
// Two-dimensional iterated integration
// ---------------------------------------------------------------------------

/// A rectangular or outer-variable-dependent integration region.
pub struct Window2d<'a> {
    pub outer: (f64, f64),
    pub outer_breakpoints: Vec<f64>,
    /// Inner limits as a function of the outer variable.
    pub inner: Box<dyn Fn(f64) -> (f64, f64) + Send + Sync + 'a>,
}

impl<'a> Window2d<'a> {
    pub fn rectangle(x: (f64, f64), y: (f64, f64)) -> Self {
        Self {
            outer: x,
            outer_breakpoints: Vec::new(),
            inner: Box::new(move |_| y),
        }
    }
}

/// `∫ dx ∫ dy f(x, y)` by nested adaptive Gauss–Kronrod. The inner
/// integrals are solved to a tenth of the requested tolerance; their
/// accumulated error is added to the outer estimate.
pub fn integrate_2d_window<F>(
    mut f: F,
    window: &Window2d<'_>,
    tol: Tolerance,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64, f64) -> Complex64,
{
    let inner_tol = Tolerance { rel: tol.rel * 0.1, abs: tol.abs * 0.1, max_evals: tol.max_evals };
    let mut inner_evals = 0usize;
    let mut inner_err_max = 0.0f64;
    let mut failure: Option<QuadError> = None;
    let (a, b) = window.outer;
    let outer = gauss_kronrod(
        |x| {
            if failure.is_some() {
                return ZERO;
            }
            let (lo, hi) = (window.inner)(x);
            if !(hi > lo) {
                return ZERO;
            }
            match gauss_kronrod(|y| f(x, y), lo, hi, &[], inner_tol) {
                Ok(r) => {
                    inner_evals += r.evaluations;
                    inner_err_max = inner_err_max.max(r.abs_error_estimate);
                    r.value
                }
                Err(e) => {
                    failure = Some(e);
                    ZERO
                }
            }
        },
        a,
        b,
        &window.outer_breakpoints,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut res = outer?;
    res.evaluations += inner_evals;
    res.abs_error_estimate += inner_err_max * (b - a);
    Ok(res)
}

/// Integrate a real function; convenience for tests and small helpers.
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64, QuadError>
where
    F: FnMut(f64) -> f64,
{
    gauss_kronrod(|x| Complex64::new(f(x), 0.0), a, b, &[], tol).map(|r| r.value.re)
}

/// `√(2π)`, the integral of an un-normalised unit Gaussian.
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn tight() -> Tolerance {
        Tolerance::new(1e-12, 1e-14)
    }

    /// Midpoint rule after `z = z* − u²`, refined by Richardson steps.
    fn midpoint_sqrt_oracle(alpha: f64, z_hi: f64) -> f64 {
        let z_star = alpha.acosh();
        let u_max = z_star.sqrt();
        let g = |u: f64| {
            let d = u * u;
            let z = z_star - d;
            2.0 * u / (2.0 * (0.5 * (z_star + z)).sinh() * (0.5 * d).sinh()).sqrt()
        };
        let _ = z_hi;
        let rule = |n: usize| {
            let h = u_max / n as f64;
            (0..n).map(|i| g((i as f64 + 0.5) * h)).sum::<f64>() * h
        };
        let (a, b, c2) = (rule(4000), rule(8000), rule(16000));
        let r1 = (4.0 * b - a) / 3.0;
        let r2 = (4.0 * c2 - b) / 3.0;
        (16.0 * r2 - r1) / 15.0
    }

    #[test]
    fn sqrt_endpoint_against_midpoint_oracle() {
        let alpha = 1f64.cosh();
        let got = integrate_sqrt_endpoint(|_| c(1.0), alpha, 0.0, 1.0, tight()).unwrap();
        let want = midpoint_sqrt_oracle(alpha, 1.0);
        assert!((got.value.re - want).abs() < 1e-8, "{} vs {}", got.value.re, want);
        assert!(got.value.im == 0.0);
    }

    #[test]
    fn sqrt_endpoint_zero_integrand() {
        let r = integrate_sqrt_endpoint(|_| c(0.0), 2.0, 0.0, 5.0, tight()).unwrap();
        assert_eq!(r.value, ZERO);
    }

    #[test]
    fn sqrt_endpoint_budget_invariance() {
        let f = |z: f64| Complex64::new((-z * z).exp(), (3.0 * z).sin());
        let a = integrate_sqrt_endpoint(f, 3.0, 0.0, 4.0, tight()).unwrap();
        let b = integrate_sqrt_endpoint(f, 3.0, 0.0, 4.0, tight().with_budget(2 * DEFAULT_EVAL_BUDGET))
            .unwrap();
        assert!((a.value - b.value).norm() <= 1e-12 * a.value.norm());
    }

    #[test]
    fn sqrt_endpoint_parameterisations_agree() {
        let f = |z: f64| Complex64::new((-2.0 * z * z).exp(), -(0.7 * z).sin());
        for &(alpha, lo, hi) in &[(1.0005, 0.0, 1.0), (7.95, 0.0, 1.155), (7.95, 0.0, 9.0), (2.0, 0.3, 0.9)] {
            let a = integrate_sqrt_endpoint_with(f, alpha, lo, hi, tight(), SqrtEndpointMethod::TanhSinh)
                .unwrap();
            let b = integrate_sqrt_endpoint_with(f, alpha, lo, hi, tight(), SqrtEndpointMethod::Substitution)
                .unwrap();
            assert!((a.value - b.value).norm() < 1e-10 * a.value.norm().max(1.0), "{alpha}: {a:?} {b:?}");
        }
        for &alpha in &[1.0005, 1.3, 2.0] {
            let z_star = f64::acosh(alpha);
            let a = sqrt_above(f, z_star, 0.0, 1.5, tight(), SqrtEndpointMethod::TanhSinh).unwrap();
            let b = sqrt_above(f, z_star, 0.0, 1.5, tight(), SqrtEndpointMethod::Substitution)
                .unwrap();
            assert!((a.value - b.value).norm() < 1e-10 * a.value.norm().max(1.0));
        }
    }

    #[test]
    fn sqrt_beyond_closed_form() {
        // ∫_{z*}^{z_hi} sinh z /√(cosh z − α) dz = 2√(cosh z_hi − α)
        let alpha = 1.5;
        let r = integrate_sqrt_beyond(|z| c(z.sinh()), alpha, 0.0, 2.0, tight()).unwrap();
        let want = 2.0 * (2f64.cosh() - alpha).sqrt();
        assert!((r.value - Complex64::new(0.0, -want)).norm() < 1e-11);
    }

    #[test]
    fn sqrt_invalid_inputs() {
        assert!(integrate_sqrt_endpoint(|_| c(1.0), 1.0, 0.0, 1.0, tight()).is_err());
        assert!(integrate_sqrt_endpoint(|_| c(1.0), 2.0, 1.0, 0.0, tight()).is_err());
    }

    /// `2∫_0^1 z/sinh z dz` from the series `z/sinh z = Σ 2(1−2^{2k−1}) B_{2k} z^{2k}/(2k)!`.
    fn pv_series_oracle() -> f64 {
        // Bernoulli numbers B_0..B_20
        let b = [
            1.0,
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
            43867.0 / 798.0,
            -174611.0 / 330.0,
        ];
        let mut sum = 0.0;
        let mut fact = 1.0;
        for (k, bk) in b.iter().enumerate() {
            let n = 2 * k;
            if k > 0 {
                fact *= (n - 1) as f64 * n as f64;
            }
            let coeff = (2.0 - 2f64.powi(n as i32)) * bk / fact;
            sum += coeff / (n as f64 + 1.0);
        }
        2.0 * sum
    }

    #[test]
    fn pv_sinh_examples() {
        let even = integrate_pv_sinh(|z| c(z.cos() + z * z), 1.3, tight()).unwrap();
        assert_eq!(even.value, ZERO);
        let lin = integrate_pv_sinh(|z| c(z), 1.0, tight()).unwrap();
        assert!((lin.value.re - pv_series_oracle()).abs() < 1e-10, "{}", lin.value.re);
        let s = integrate_pv_sinh(|z| c(z.sin()), 1e-3, tight()).unwrap();
        let l = integrate_pv_sinh(|z| c(z), 1e-3, tight()).unwrap();
        assert!(s.value.re.is_finite() && (s.value.re - l.value.re).abs() < 1e-9);
    }

    #[test]
    fn gaussian_window_examples() {
        let r = integrate_gaussian_window(|_| c(1.0), GaussianWindow::new(0.3, 1.0), &[], tight()).unwrap();
        assert!((r.value.re - SQRT_2PI).abs() < 1e-12);
        let w = GaussianWindow::new(2.0, 0.7);
        let odd = integrate_gaussian_window(|x| c((x - 2.0).powi(3)), w, &[], tight()).unwrap();
        assert!(odd.value.norm() < 1e-12);
        let f = |x: f64| Complex64::new(x.cos(), 0.1 * x);
        let a = integrate_gaussian_window(f, w, &[], tight()).unwrap();
        let b = integrate_gaussian_window(f, w.with_cutoff(20.0), &[], tight()).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
    }

    #[test]
    fn two_dimensional_examples() {
        let unit = integrate_2d_window(|_, _| c(1.0), &Window2d::rectangle((0.0, 1.0), (0.0, 1.0)), tight())
            .unwrap();
        assert!((unit.value.re - 1.0).abs() < 1e-13);

        let g = |x: f64| (x * 1.3).cos() + 0.2;
        let h = |y: f64| (-y).exp();
        let sep = integrate_2d_window(
            |x, y| c(g(x) * h(y)),
            &Window2d::rectangle((-1.0, 2.0), (0.0, 3.0)),
            tight(),
        )
        .unwrap();
        let gx = integrate_real(g, -1.0, 2.0, tight()).unwrap();
        let hy = integrate_real(h, 0.0, 3.0, tight()).unwrap();
        assert!((sep.value.re - gx * hy).abs() < 1e-10);

        // ∫∫ exp(−x² − 2y²) over ±6 is π/√2
        let gauss = integrate_2d_window(
            |x, y| c((-x * x - 2.0 * y * y).exp()),
            &Window2d::rectangle((-6.0, 6.0), (-6.0, 6.0)),
            tight(),
        )
        .unwrap();
        assert!((gauss.value.re - PI / 2f64.sqrt()).abs() < 1e-10);

        // triangle 0 ≤ y ≤ x ≤ 1
        let tri = integrate_2d_window(
            |_, _| c(1.0),
            &Window2d { outer: (0.0, 1.0), outer_breakpoints: vec![], inner: Box::new(|x| (0.0, x)) },
            tight(),
        )
        .unwrap();
        assert!((tri.value.re - 0.5).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_carries_partial() {
        let err = gauss_kronrod(|x| c((1.0 / x).sin()), 1e-6, 1.0, &[], tight().with_budget(500)).unwrap_err();
        let partial = err.partial().expect("partial estimate");
        assert!(partial.evaluations > 0 && partial.value.re.is_finite());
        let err = tanh_sinh(|x, _, _| c((1.0 / x).sin()), 1e-6, 1.0, tight().with_budget(300)).unwrap_err();
        assert!(err.partial().is_some());
    }

    #[test]
    fn non_finite_integrand_reported() {
        assert!(matches!(
            gauss_kronrod(|x| c(1.0 / (x - 0.5)), 0.0, 1.0, &[], tight()),
            Err(QuadError::NonFinite(_))
        ));
    }

    /// Closed-form battery: (integrand, a, b, exact).
    fn battery() -> Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> {
        vec![
            (Box::new(|x: f64| x.exp()), 0.0, 1.0, 1f64.exp() - 1.0),
            (Box::new(|x: f64| 1.0 / (1.0 + x * x)), -3.0, 3.0, 2.0 * 3f64.atan()),
            (Box::new(|x: f64| x.sqrt()), 0.0, 1.0, 2.0 / 3.0),
            (Box::new(|x: f64| x.ln()), 1e-300, 1.0, -1.0),
            (Box::new(|x: f64| (10.0 * x).cos()), 0.0, PI, 0.0),
            (Box::new(|x: f64| (-x * x).exp()), -8.0, 8.0, PI.sqrt()),
            (Box::new(|x: f64| 1.0 / x.sqrt()), 1e-300, 1.0, 2.0),
            (Box::new(|x: f64| (x * x).sin()), 0.0, 3.0, 0.773_562_526_893_769_0),
            (Box::new(|x: f64| x.abs()), -1.0, 2.0, 2.5),
            (Box::new(|x: f64| 1.0 / (1e-2 + x * x)), -1.0, 1.0, 20.0 * 10f64.atan()),
            (Box::new(|x: f64| (x.sin()).powi(8)), 0.0, 2.0 * PI, 35.0 * PI / 64.0),
            (Box::new(|x: f64| x.powf(-0.25)), 1e-300, 1.0, 4.0 / 3.0),
        ]
    }

    #[test]
    fn error_estimates_are_honest() {
        let mut checks = 0;
        let mut honest = 0;
        for tol in [Tolerance::new(1e-4, 1e-8), Tolerance::new(1e-8, 1e-12), tight()] {
            for (f, a, b, exact) in battery() {
                // a failed integral still has to report an honest error
                let settle = |r: Result<QuadResult, QuadError>| match r {
                    Ok(r) => r,
                    Err(e) => *e.partial().expect("partial estimate"),
                };
                let gk = settle(gauss_kronrod(|x| c(f(x)), a, b, &[], tol));
                let ts = settle(tanh_sinh(|x, _, _| c(f(x)), a, b, tol));
                for r in [gk, ts] {
                    checks += 1;
                    let err = (r.value.re - exact).abs();
                    if err <= 3.0 * r.abs_error_estimate + 1e-15 {
                        honest += 1;
                    }
                }
            }
        }
        assert!(honest as f64 >= 0.95 * checks as f64, "{honest}/{checks}");
    }

    proptest! {
        #[test]
        fn linearity(p in -3.0f64..3.0, q in -3.0f64..3.0, s in 0.1f64..2.0) {
            let f = |x: f64| Complex64::new((s * x).sin(), x * x);
            let g = |x: f64| Complex64::new((-x).exp(), 0.0);
            let t = tight();
            let fg = gauss_kronrod(|x| f(x) * p + g(x) * q, 0.0, 2.0, &[], t).unwrap().value;
            let sep = gauss_kronrod(f, 0.0, 2.0, &[], t).unwrap().value * p
                + gauss_kronrod(g, 0.0, 2.0, &[], t).unwrap().value * q;
            prop_assert!((fg - sep).norm() < 1e-10);

            let ts = |h: &dyn Fn(f64) -> Complex64| {
                integrate_sqrt_endpoint(h, 2.5, 0.0, 3.0, t).unwrap().value
            };
            let lhs = ts(&|x| f(x) * p + g(x) * q);
            let rhs = ts(&f) * p + ts(&g) * q;
            prop_assert!((lhs - rhs).norm() < 1e-10);

            let pv = |h: &dyn Fn(f64) -> Complex64| integrate_pv_sinh(h, 1.5, t).unwrap().value;
            prop_assert!((pv(&|x| f(x) * p + g(x) * q) - (pv(&f) * p + pv(&g) * q)).norm() < 1e-10);

            let w = GaussianWindow::new(0.5, s);
            let gw = |h: &dyn Fn(f64) -> Complex64| integrate_gaussian_window(h, w, &[], t).unwrap().value;
            prop_assert!((gw(&|x| f(x) * p + g(x) * q) - (gw(&f) * p + gw(&g) * q)).norm() < 1e-10);
        }
    }
}
