//! Image-sum Wightman functions of the conformally coupled massless scalar
//! on BTZ, within one branch and across two superposed branches.
//!
//! Every correlator here has the shape
//!
//! ```text
//! W(x) = prefactor · Σ_k weight_k · (c_k − cosh(x − iε))^{−1/2}
//! ```
//!
//! with `x` the time separation in units of `l` (AdS time) and `c_k ≥ 1` one
//! of the coefficient families `α, α′, β, β′`. [`ImageSum`] holds that list
//! once per scenario; the response and spectrum modules consume it directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::params::{BtzBranch, NumericsControl, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WightmanError {
    #[error("alpha coefficients need equal masses (got {0} and {1}); use beta for mass superpositions")]
    UnequalMasses(f64, f64),
    #[error("mass-superposed correlators are defined for theta = 0 only, got {0}")]
    ThetaWithMassSuperposition(f64),
}

/// A coefficient `c = 1 + excess`, with the excess carried separately so
/// that `c − cosh x` keeps full relative accuracy when `c` is close to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub value: f64,
    pub excess: f64,
}

impl Coefficient {
    /// `c − cosh x`
    #[inline]
    pub fn minus_cosh(&self, x: f64) -> f64 {
        let s = (0.5 * x).sinh();
        self.excess - 2.0 * s * s
    }

    /// Branch point `arccosh c`.
    pub fn branch_point(&self) -> f64 {
        let e = self.excess;
        if e < 0.5 {
            (e + (e * (e + 2.0)).sqrt()).ln_1p()
        } else {
            self.value.acosh()
        }
    }

    fn shifted(self, by: f64) -> Self {
        Self { value: self.value + by, excess: self.excess + by }
    }
}

/// `[x cosh φ − 1] / √((x₁ − 1)(x₂ − 1))` with `x = √(x₁x₂)`, where
/// `x_i = R_i²/(M_i l²)`. The excess over one is
/// `[2x sinh²(φ/2) + (√x₁ − √x₂)²/(x − 1 + g)] / g`, `g = √((x₁−1)(x₂−1))`.
fn coefficient(b1: &BtzBranch, b2: &BtzBranch, phi: f64) -> Coefficient {
    let x1 = b1.radius_ratio_sq();
    let x2 = b2.radius_ratio_sq();
    let x = (x1 * x2).sqrt();
    let g = b1.redshift_ads() * b2.redshift_ads();
    let s = (0.5 * phi).sinh();
    let d = x1.sqrt() - x2.sqrt();
    let excess = (2.0 * x * s * s + d * d / (x - 1.0 + g)) / g;
    Coefficient { value: 1.0 + excess, excess }
}

fn prime_shift(b1: &BtzBranch, b2: &BtzBranch) -> f64 {
    2.0 / (b1.redshift_ads() * b2.redshift_ads())
}

fn require_equal_masses(b1: &BtzBranch, b2: &BtzBranch) -> Result<(), WightmanError> {
    if b1.mass() == b2.mass() {
        Ok(())
    } else {
        Err(WightmanError::UnequalMasses(b1.mass(), b2.mass()))
    }
}

fn alpha_coefficient(b1: &BtzBranch, b2: &BtzBranch, theta: f64, m: i64) -> Coefficient {
    coefficient(b1, b2, (theta - 2.0 * PI * m as f64) * b1.mass().sqrt())
}

fn beta_coefficient(b1: &BtzBranch, b2: &BtzBranch, m: i64, n: i64) -> Coefficient {
    coefficient(b1, b2, 2.0 * PI * (m as f64 * b1.mass().sqrt() - n as f64 * b2.mass().sqrt()))
}

/// `α_m⁽¹²⁾ = [(R₁R₂/r_h²) cosh((θ − 2πm)√M) − 1] / √((R₁²/r_h² − 1)(R₂²/r_h² − 1))`
pub fn alpha12_m(b1: &BtzBranch, b2: &BtzBranch, theta: f64, m: i64) -> Result<f64, WightmanError> {
    require_equal_masses(b1, b2)?;
    Ok(alpha_coefficient(b1, b2, theta, m).value)
}

/// `α′_m⁽¹²⁾`: as [`alpha12_m`] with `+1` in the numerator.
pub fn alpha_prime12_m(b1: &BtzBranch, b2: &BtzBranch, theta: f64, m: i64) -> Result<f64, WightmanError> {
    require_equal_masses(b1, b2)?;
    Ok(alpha_coefficient(b1, b2, theta, m).value + prime_shift(b1, b2))
}

/// `β_mn⁽¹²⁾ = [(R₁R₂/(√(M₁M₂) l²)) cosh(2π(m√M₁ − n√M₂)) − 1] / (γ̃₁γ̃₂)`
pub fn beta_mn(b1: &BtzBranch, b2: &BtzBranch, m: i64, n: i64) -> f64 {
    beta_coefficient(b1, b2, m, n).value
}

/// `β′_mn⁽¹²⁾`: as [`beta_mn`] with `+1` in the numerator.
pub fn beta_prime_mn(b1: &BtzBranch, b2: &BtzBranch, m: i64, n: i64) -> f64 {
    beta_coefficient(b1, b2, m, n).value + prime_shift(b1, b2)
}

/// Coefficient tables for `m, n ∈ [−N, N]`, index `m + N`.
///
/// `alpha` and `alpha_prime` are empty when the masses differ.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageCoefficients {
    pub cutoff: u32,
    pub alpha: Vec<f64>,
    pub alpha_prime: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub beta_prime: Vec<Vec<f64>>,
}

impl ImageCoefficients {
    pub fn new(scn: &Scenario, ctrl: &NumericsControl) -> Self {
        let (b1, b2) = (&scn.branch1, &scn.branch2);
        let shift = prime_shift(b1, b2);
        let range = ctrl.image_range();
        let (alpha, alpha_prime) = if scn.equal_masses() {
            range
                .clone()
                .map(|m| {
                    let a = alpha_coefficient(b1, b2, scn.theta, m).value;
                    (a, a + shift)
                })
                .unzip()
        } else {
            (Vec::new(), Vec::new())
        };
        let beta: Vec<Vec<f64>> = range
            .clone()
            .map(|m| range.clone().map(|n| beta_mn(b1, b2, m, n)).collect())
            .collect();
        let beta_prime = beta.iter().map(|row| row.iter().map(|b| b + shift).collect()).collect();
        Self { cutoff: ctrl.image_cutoff, alpha, alpha_prime, beta, beta_prime }
    }

    pub fn alpha_at(&self, m: i64) -> Option<f64> {
        self.alpha.get(usize::try_from(m + i64::from(self.cutoff)).ok()?).copied()
    }

    pub fn beta_at(&self, m: i64, n: i64) -> Option<f64> {
        let n0 = i64::from(self.cutoff);
        let i = usize::try_from(m + n0).ok()?;
        let j = usize::try_from(n + n0).ok()?;
        self.beta.get(i)?.get(j).copied()
    }
}

/// One term `weight · (c − cosh(x − iε))^{−1/2}` of an image sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageTerm {
    pub m: i64,
    pub n: i64,
    pub coefficient: Coefficient,
    /// Product of twist sign, boundary factor (`−ζ` for mirror terms) and
    /// the `1/(2N+1)` (or `1/(2N)`) normalisation of double sums.
    pub weight: f64,
    /// Whether the term comes from `α′`/`β′`.
    pub mirror: bool,
}

impl ImageTerm {
    /// `(c − cosh(x − iε))^{−1/2}`, principal branch.
    pub fn kernel(&self, x: f64, epsilon: f64) -> Complex64 {
        if x.abs() > 600.0 {
            // factor e^{|x|} out of c − cosh(x − iε) before it overflows
            let scale = (-x.abs()).exp();
            let phase = Complex64::from_polar(0.5, -x.signum() * epsilon);
            let d = Complex64::new(self.coefficient.value * scale, 0.0) - phase;
            return d.sqrt().inv() * (-0.5 * x.abs()).exp();
        }
        let half = (0.5 * epsilon).sin();
        let re = self.coefficient.minus_cosh(x) + 2.0 * x.cosh() * half * half;
        let im = x.sinh() * epsilon.sin();
        Complex64::new(re, im).sqrt().inv()
    }
}

/// Prefactor and term list of a correlator `W(x)`, `x` in units of `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSum {
    pub prefactor: f64,
    pub terms: Vec<ImageTerm>,
}

impl ImageSum {
    /// Terms of one branch, `α_m` with `R₁ = R₂`, `θ = 0`; prefactor
    /// `1/(4πl√2 γ̃)`.
    pub fn single(b: &BtzBranch, ctrl: &NumericsControl) -> Self {
        let zeta = b.boundary().zeta();
        let shift = prime_shift(b, b);
        let mut terms = Vec::new();
        for m in ctrl.image_range() {
            let c = alpha_coefficient(b, b, 0.0, m);
            let w = b.twist().weight(m);
            terms.push(ImageTerm { m, n: m, coefficient: c, weight: w, mirror: false });
            if zeta != 0.0 {
                terms.push(ImageTerm { m, n: m, coefficient: c.shifted(shift), weight: -zeta * w, mirror: true });
            }
        }
        let prefactor = 1.0 / (4.0 * PI * b.ads_radius() * (2.0f64).sqrt() * b.redshift_ads());
        Self { prefactor, terms }
    }

    /// Cross-branch terms with prefactor `1/(4πl√(2γ̃₁γ̃₂))`: a single sum over
    /// `α_m⁽¹²⁾` for equal masses, otherwise the normalised double sum over
    /// `β_mn`.
    pub fn cross(scn: &Scenario, ctrl: &NumericsControl) -> Result<Self, WightmanError> {
        let (b1, b2) = (&scn.branch1, &scn.branch2);
        let zeta = b1.boundary().zeta();
        let twist = b1.twist();
        let shift = prime_shift(b1, b2);
        let mut terms = Vec::new();
        let mut push = |m: i64, n: i64, c: Coefficient, w: f64| {
            terms.push(ImageTerm { m, n, coefficient: c, weight: w, mirror: false });
            if zeta != 0.0 {
                terms.push(ImageTerm { m, n, coefficient: c.shifted(shift), weight: -zeta * w, mirror: true });
            }
        };
        if scn.equal_masses() {
            for m in ctrl.image_range() {
                push(m, m, alpha_coefficient(b1, b2, scn.theta, m), twist.weight(m));
            }
        } else {
            if scn.theta != 0.0 {
                return Err(WightmanError::ThetaWithMassSuperposition(scn.theta));
            }
            let norm = ctrl.image_count();
            for m in ctrl.image_range() {
                for n in ctrl.image_range() {
                    push(m, n, beta_coefficient(b1, b2, m, n), twist.weight(m + n) / norm);
                }
            }
        }
        let g = b1.redshift_ads() * b2.redshift_ads();
        let prefactor = 1.0 / (4.0 * PI * b1.ads_radius() * (2.0 * g).sqrt());
        Ok(Self { prefactor, terms })
    }

    /// `W(x)` with `x = t̄/l` and regulator `ε`.
    pub fn evaluate(&self, x: f64, epsilon: f64) -> Complex64 {
        let sum: Complex64 = self.terms.iter().map(|t| t.kernel(x, epsilon) * t.weight).sum();
        sum * self.prefactor
    }
}

/// Single-branch Wightman function at BTZ coordinate-time separation `s`.
pub fn w_btz(s: f64, b: &BtzBranch, ctrl: &NumericsControl) -> Complex64 {
    ImageSum::single(b, ctrl).evaluate(s * b.mass().sqrt() / b.ads_radius(), ctrl.epsilon)
}

/// Cross-branch Wightman function at AdS-time separation `s̄`.
pub fn w12_btz(s_bar: f64, scn: &Scenario, ctrl: &NumericsControl) -> Result<Complex64, WightmanError> {
    Ok(ImageSum::cross(scn, ctrl)?.evaluate(s_bar / scn.ads_radius(), ctrl.epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{BoundaryCondition, Twist};
    use proptest::prelude::*;

    fn fig3() -> BtzBranch {
        BtzBranch::new(0.16, 5.0, 4.0).unwrap()
    }

    fn with_field(zeta: BoundaryCondition, ups: Twist) -> BtzBranch {
        BtzBranch::with_field(0.16, 5.0, 4.0, zeta, ups).unwrap()
    }

    fn fig4(ratio: f64) -> Scenario {
        let b1 = BtzBranch::new(0.16, 5.0, 25.0).unwrap();
        let b2 = b1.with_mass(0.16 * ratio * ratio).unwrap();
        Scenario::new(b1, b2, 0.0, 0.0016, 1.0, 24.92).unwrap()
    }

    fn ctrl(eps: f64) -> NumericsControl {
        NumericsControl::default().with_epsilon(eps)
    }

    #[test]
    fn alpha_examples() {
        let b = fig3();
        assert_eq!(alpha12_m(&b, &b, 0.0, 0).unwrap(), 1.0);
        let a1 = alpha12_m(&b, &b, 0.0, 1).unwrap();
        assert!((a1 - 7.950_857_687_563_542_3).abs() < 1e-13);
        assert!((a1 - 7.9509).abs() < 1e-4);
        let far = b.at_radius(9.0).unwrap();
        for m in -3..=3 {
            let x = alpha12_m(&b, &far, 0.3, m).unwrap();
            let y = alpha12_m(&far, &b, 0.3, m).unwrap();
            assert!((x - y).abs() <= 1e-14 * x);
        }
        let heavy = b.with_mass(0.2).unwrap();
        assert!(matches!(alpha12_m(&b, &heavy, 0.0, 0), Err(WightmanError::UnequalMasses(..))));
    }

    #[test]
    fn alpha_prime_examples() {
        let b = fig3();
        let p0 = alpha_prime12_m(&b, &b, 0.0, 0).unwrap();
        assert!((p0 - 5.0 / 3.0).abs() < 1e-15);
        let far = b.at_radius(7.0).unwrap();
        let g = ((16.0f64 / 4.0 - 1.0) * (49.0 / 4.0 - 1.0)).sqrt();
        for m in -4..=4 {
            let d = alpha_prime12_m(&b, &far, 0.0, m).unwrap() - alpha12_m(&b, &far, 0.0, m).unwrap();
            assert!((d - 2.0 / g).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_matches_direct_formula() {
        let b1 = fig3();
        let b2 = b1.at_radius(6.3).unwrap();
        let rh2 = b1.horizon_radius().powi(2);
        for m in -5..=5 {
            let direct = ((4.0 * 6.3 / rh2) * ((0.4 - 2.0 * PI * m as f64) * 0.4).cosh() - 1.0)
                / ((16.0 / rh2 - 1.0) * (6.3f64.powi(2) / rh2 - 1.0)).sqrt();
            let got = alpha12_m(&b1, &b2, 0.4, m).unwrap();
            assert!((got - direct).abs() <= 1e-13 * direct, "{m}");
        }
    }

    #[test]
    fn beta_examples() {
        let b = BtzBranch::new(0.16, 5.0, 25.0).unwrap();
        assert_eq!(beta_mn(&b, &b, 2, 2), 1.0);
        let far = b.at_radius(31.0).unwrap();
        for (m, n) in [(0, 0), (3, 1), (-2, 4), (5, -5)] {
            let x = beta_mn(&b, &far, m, n);
            let y = alpha12_m(&b, &far, 0.0, m - n).unwrap();
            assert!((x - y).abs() <= 1e-14 * y);
        }
        // resonant pair at √(M₂/M₁) = 3/2: 3√M₁ = 2√M₂
        let scn = fig4(1.5);
        let beta = beta_mn(&scn.branch1, &scn.branch2, 3, 2);
        assert!((beta - 1.000_816_583_173_746_3).abs() < 1e-15);
        let beta_p = beta_prime_mn(&scn.branch1, &scn.branch2, 3, 2);
        assert!((beta_p - 1.020_218_520_165_806_0).abs() < 1e-14);
    }

    #[test]
    fn beta_depends_on_difference_for_equal_masses() {
        let b1 = fig3();
        let b2 = b1.at_radius(5.5).unwrap();
        for m in -5..=5 {
            for n in -5..=5 {
                let lhs = beta_mn(&b1, &b2, m, n);
                let rhs = beta_mn(&b1, &b2, m - n, 0);
                assert!((lhs - rhs).abs() <= 1e-14 * rhs);
            }
        }
    }

    #[test]
    fn coefficient_tables() {
        let b = fig3();
        let scn = Scenario::new(b, b.at_radius(6.0).unwrap(), 0.0, 1e-4, 1.0, 10.0).unwrap();
        let tab = ImageCoefficients::new(&scn, &ctrl(1e-3));
        assert_eq!(tab.alpha.len(), 11);
        for (a, p) in tab.alpha.iter().zip(&tab.alpha_prime) {
            assert!(p > a && *a >= 1.0);
        }
        for m in -5..=5 {
            for n in -5..=5 {
                assert_eq!(tab.beta_at(m, n), tab.beta_at(-m, -n));
            }
        }
        let coincident = Scenario::new(b, b, 0.0, 1e-4, 1.0, 10.0).unwrap();
        let tab = ImageCoefficients::new(&coincident, &ctrl(1e-3));
        assert_eq!(tab.alpha_at(0), Some(1.0));
        let mass = ImageCoefficients::new(&fig4(1.3), &ctrl(1e-3));
        assert!(mass.alpha.is_empty() && mass.beta.len() == 11);
    }

    // (s, ζ, Re W, Im W) from a 40-digit per-term summation, Fig. 3 branch 1, ε = 1e−3, N = 5
    const W_TABLE: [(f64, i32, f64, f64); 6] = [
        (0.0, 0, 9.195_543_244_420_157_7, 0.0),
        (1.7, 0, 0.007_228_441_977_275_623_1, -0.067_509_170_360_186_627),
        (-1.7, 0, 0.007_228_441_977_275_623_1, 0.067_509_170_360_186_627),
        (20.0, 0, 0.007_419_400_848_960_443_5, -0.005_174_517_855_861_490_1),
        (31.0, 1, 0.001_286_740_260_809_676_8, 0.000_209_546_610_547_315_54),
        (12.0, -1, 0.029_383_374_718_897_141, -0.009_266_539_369_227_132_3),
    ];

    #[test]
    fn w_btz_matches_summation_oracle() {
        for (s, zeta, re, im) in W_TABLE {
            let b = with_field(BoundaryCondition::from_zeta(zeta).unwrap(), Twist::Untwisted);
            let got = w_btz(s, &b, &ctrl(1e-3));
            let want = Complex64::new(re, im);
            assert!((got - want).norm() <= 1e-12 * want.norm(), "s = {s}: {got} vs {want}");
        }
        let tw = with_field(BoundaryCondition::Transparent, Twist::Twisted);
        let got = w_btz(3.0, &tw, &ctrl(1e-3));
        let want = Complex64::new(-0.003_773_853_293_314_987, -0.038_194_245_222_431_995);
        assert!((got - want).norm() <= 1e-12 * want.norm());
    }

    #[test]
    fn w_btz_decays() {
        let w = w_btz(1e6, &fig3(), &ctrl(1e-3));
        assert!(w.norm() < 1e-30);
    }

    #[test]
    fn w12_matches_summation_oracle() {
        let got = w12_btz(1.0, &fig4(1.3), &ctrl(1e-3)).unwrap();
        let want = Complex64::new(0.003_845_582_579_826_104_4, -0.000_681_121_206_162_574_44);
        assert!((got - want).norm() <= 1e-12 * want.norm(), "{got}");
    }

    #[test]
    fn w12_reduces_to_single_branch() {
        let b = fig3();
        let scn = Scenario::new(b, b, 0.0, 1e-4, 1.0, 10.0).unwrap();
        let c = ctrl(1e-3);
        for s in [-7.0, -0.3, 0.0, 0.9, 4.0, 25.0] {
            let s_bar = b.ads_time_of(s);
            let cross = w12_btz(s_bar, &scn, &c).unwrap();
            let single = w_btz(s, &b, &c);
            assert!((cross - single).norm() <= 1e-12 * single.norm(), "{s}");
        }
    }

    #[test]
    fn w12_swap_symmetry() {
        let c = ctrl(1e-3);
        let scn = fig4(1.3);
        let swapped = Scenario::new(scn.branch2, scn.branch1, 0.0, scn.omega, 1.0, scn.tau_f).unwrap();
        let b = fig3();
        let pos = Scenario::new(b, b.at_radius(8.0).unwrap(), 0.0, 1e-4, 1.0, 10.0).unwrap();
        let pos_swapped = Scenario::new(pos.branch2, pos.branch1, 0.0, 1e-4, 1.0, 10.0).unwrap();
        for s in [0.0, 0.4, 2.0, 11.0] {
            let a = w12_btz(s, &scn, &c).unwrap();
            let bb = w12_btz(s, &swapped, &c).unwrap();
            assert!((a - bb).norm() <= 1e-12 * a.norm());
            let a = w12_btz(s, &pos, &c).unwrap();
            let bb = w12_btz(s, &pos_swapped, &c).unwrap();
            assert!((a - bb).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn mass_superposition_needs_theta_zero() {
        let mut scn = fig4(1.3);
        scn.theta = 0.5;
        assert!(matches!(
            ImageSum::cross(&scn, &ctrl(1e-3)),
            Err(WightmanError::ThetaWithMassSuperposition(_))
        ));
    }

    #[test]
    fn image_terms_decay_geometrically() {
        let b = fig3();
        let sum = ImageSum::single(&b, &NumericsControl::default().with_cutoff(10));
        let bound = (-PI * b.mass().sqrt()).exp();
        let mag = |m: i64| {
            sum.terms
                .iter()
                .find(|t| t.m == m && !t.mirror)
                .map(|t| t.kernel(0.0, 1e-3).norm())
                .unwrap()
        };
        for m in 1..10 {
            assert!(mag(m + 1) / mag(m) <= bound * 1.0001, "{m}");
        }
    }

    #[test]
    fn convention_switch_rescales_double_sum() {
        let scn = fig4(1.3);
        let a = ImageSum::cross(&scn, &ctrl(1e-3)).unwrap();
        let mut alt = ctrl(1e-3);
        alt.convention = crate::params::ImageCountConvention::TwoN;
        let b = ImageSum::cross(&scn, &alt).unwrap();
        let ra = a.evaluate(0.2, 1e-3);
        let rb = b.evaluate(0.2, 1e-3);
        assert!((rb * 10.0 - ra * 11.0).norm() < 1e-13 * ra.norm());
    }

    fn scenario_strategy() -> impl Strategy<Value = (Scenario, f64)> {
        (0.05f64..1.0, 1.05f64..6.0, 1.05f64..6.0, 0.5f64..2.0, prop::bool::ANY, -30.0f64..30.0).prop_map(
            |(m, k1, k2, ratio, mass, s)| {
                let b1 = BtzBranch::new(m, 5.0, 5.0 * m.sqrt() * k1).unwrap();
                let b2 = if mass {
                    let m2 = m * ratio * ratio;
                    BtzBranch::new(m2, 5.0, b1.radius().max(5.0 * m2.sqrt() * 1.05)).unwrap()
                } else {
                    b1.at_radius(5.0 * m.sqrt() * k2).unwrap()
                };
                (Scenario::new(b1, b2, 0.0, 0.01, 1.0, 10.0).unwrap(), s)
            },
        )
    }

    proptest! {
        #[test]
        fn hermiticity(scn_s in scenario_strategy(), eps in 1e-5f64..1e-2) {
            let (scn, s) = scn_s;
            let c = ctrl(eps);
            let a = w_btz(s, &scn.branch1, &c);
            let b = w_btz(-s, &scn.branch1, &c).conj();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm());
            let a = w12_btz(s, &scn, &c).unwrap();
            let b = w12_btz(-s, &scn, &c).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm());
        }

        #[test]
        fn alpha_zero_is_one(m in 0.01f64..4.0, l in 0.5f64..10.0, k in 1.0001f64..50.0) {
            let b = BtzBranch::new(m, l, k * l * m.sqrt()).unwrap();
            prop_assert_eq!(alpha12_m(&b, &b, 0.0, 0).unwrap(), 1.0);
        }
    }
}
