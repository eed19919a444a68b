//! Gamma factors of the degree-6 Rankin–Selberg convolution, the conductor
//! `q(t, t_j)`, and the approximate-functional-equation weight `V`.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;
use crate::special::ln_gamma;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AfeError {
    #[error("Gamma argument {re}+{im}i within 1e-6 of a pole")]
    PoleProximity { re: f64, im: f64 },
    #[error("y must be positive, got {0}")]
    NonPositiveY(f64),
    #[error("no pole-free shifted contour: max Re kappa = {0} >= 1/2")]
    NoShiftRoom(f64),
    #[error("trapezoid rule did not settle after {0} halvings")]
    NotConverged(usize),
}

/// Langlands parameters of the GL(3) form, stored as `(ν₁, ν₂)`; the
/// shifts `α, β, γ` entering the gamma factors are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanglandsParams<S> {
    pub nu1: Complex<S>,
    pub nu2: Complex<S>,
}

impl<S: Real> LanglandsParams<S> {
    pub fn new(nu1: Complex<S>, nu2: Complex<S>) -> Self {
        Self { nu1, nu2 }
    }

    /// `ν₁ = ν₂ = 1/3`, so `α = β = γ = 0`.
    pub fn trivial() -> Self {
        let third = Complex::new(S::lit(1.0 / 3.0), S::zero());
        Self { nu1: third, nu2: third }
    }

    /// `ν₁ = ν₂ = (1 - ia)/3`: shifts `{ia, 0, -ia}`, tempered and closed
    /// under conjugation.
    pub fn self_dual_tempered(a: S) -> Self {
        let nu = Complex::new(S::one(), -a) / S::lit(3.0);
        Self { nu1: nu, nu2: nu }
    }

    /// `α = -ν₁ - 2ν₂ + 1`.
    pub fn alpha(&self) -> Complex<S> {
        -self.nu1 - self.nu2 * S::lit(2.0) + S::one()
    }

    /// `β = -ν₁ + ν₂`.
    pub fn beta(&self) -> Complex<S> {
        self.nu2 - self.nu1
    }

    /// `γ = 2ν₁ + ν₂ - 1`.
    pub fn gamma(&self) -> Complex<S> {
        self.nu1 * S::lit(2.0) + self.nu2 - S::one()
    }

    pub fn kappas(&self) -> [Complex<S>; 3] {
        [self.alpha(), self.beta(), self.gamma()]
    }

    /// Whether the multiset `{κ}` equals `{conj κ}` (to `1e-12`), which makes
    /// `V` real at `t = 0`.
    pub fn is_conjugation_closed(&self) -> bool {
        let k = self.kappas();
        let tol = S::lit(1e-12);
        let mut used = [false; 3];
        k.iter().all(|a| {
            let c = a.conj();
            match (0..3).find(|&j| !used[j] && (k[j] - c).norm() <= tol) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    fn max_re_kappa(&self) -> S {
        self.kappas().iter().map(|k| k.re).fold(S::neg_infinity(), S::max)
    }
}

fn check_pole<S: Real>(w: Complex<S>) -> Result<(), AfeError> {
    let n = w.re.round();
    if n <= S::zero() && (w - Complex::new(n, S::zero())).norm() < S::lit(1e-6) {
        return Err(AfeError::PoleProximity { re: w.re.as_f64(), im: w.im.as_f64() });
    }
    Ok(())
}

/// `log[π^{-3s} Π_{κ, ±} Γ((s ± i t_j - κ)/2)]`, imaginary part defined up to `2πi`.
pub fn ln_gamma_factor_product<S: Real>(s: Complex<S>, t_j: S, lp: &LanglandsParams<S>) -> Result<Complex<S>, AfeError> {
    let two = S::lit(2.0);
    let mut acc = -s * (S::lit(3.0) * S::PI().ln());
    for k in lp.kappas() {
        for sign in [S::one(), -S::one()] {
            let w = (s + Complex::new(S::zero(), sign * t_j) - k) / two;
            check_pole(w)?;
            acc += ln_gamma(w);
        }
    }
    Ok(acc)
}

/// `π^{-3s} Π_{κ, ±} Γ((s ± i t_j - κ)/2)`; underflows to 0 once the
/// log-magnitude passes about `-745`.
pub fn gamma_factor_product<S: Real>(s: Complex<S>, t_j: S, lp: &LanglandsParams<S>) -> Result<Complex<S>, AfeError> {
    ln_gamma_factor_product(s, t_j, lp).map(|l| l.exp())
}

/// `q(t, t_j)` and `|q|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductorValue<S> {
    pub q: Complex<S>,
    pub magnitude: S,
}

/// `q = Π_κ (1/2 + it + it_j - κ)(1/2 + it - it_j - κ)`.
pub fn conductor_q<S: Real>(t: S, t_j: S, lp: &LanglandsParams<S>) -> ConductorValue<S> {
    let half = S::lit(0.5);
    let mut q = Complex::new(S::one(), S::zero());
    for k in lp.kappas() {
        let z = Complex::new(half, t + t_j) - k;
        let zp = Complex::new(half, t - t_j) - k;
        q = q * z * zp;
    }
    ConductorValue { q, magnitude: q.norm() }
}

/// The natural `y`-scale `|q|^{1/2}/π³` of `V`.
pub fn conductor_scale<S: Real>(t: S, t_j: S, lp: &LanglandsParams<S>) -> S {
    conductor_q(t, t_j, lp).magnitude.sqrt() / S::PI().powi(3)
}

/// `(1/2π) ∫_{-30}^{30} f(σ + iu) du` by the trapezoid rule, halving the step
/// until two successive values agree to `1e-8` relative.
fn vertical_trapezoid<S, F>(sigma: S, offset: Complex<S>, f: F) -> Result<Complex<S>, AfeError>
where
    S: Real,
    F: Fn(Complex<S>) -> Result<Complex<S>, AfeError>,
{
    const MAX_HALVINGS: usize = 14;
    let cut = S::lit(30.0);
    let mut h = S::lit(0.25);
    let n0 = (cut / h).to_usize().unwrap_or(120);
    let mut sum = Complex::new(S::zero(), S::zero());
    for k in 0..=2 * n0 {
        let u = -cut + h * S::from_count(k);
        let w = if k == 0 || k == 2 * n0 { S::lit(0.5) } else { S::one() };
        sum += f(Complex::new(sigma, u))? * w;
    }
    let mut prev = offset + sum * h / S::TAU();
    let mut n = 2 * n0;
    for halving in 0..MAX_HALVINGS {
        h /= S::lit(2.0);
        for k in 0..n {
            let u = -cut + h * S::from_count(2 * k + 1);
            sum += f(Complex::new(sigma, u))?;
        }
        n *= 2;
        let cur = offset + sum * h / S::TAU();
        if halving >= 1 && (cur - prev).norm() <= S::lit(1e-8) * cur.norm() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(AfeError::NotConverged(MAX_HALVINGS))
}

/// `V(y) = (1/2πi) ∫_{(σ)} y^{-s} γ(1/2+it+s)/γ(1/2+it) e^{s²}/s ds` on a
/// caller-chosen line. For `σ < 0` the residue `1` at `s = 0` is added; the
/// line must then stay right of the gamma poles.
pub fn v_weight_direct_on<S: Real>(
    y: S,
    t: S,
    t_j: S,
    lp: &LanglandsParams<S>,
    sigma: S,
) -> Result<Complex<S>, AfeError> {
    if !(y > S::zero()) {
        return Err(AfeError::NonPositiveY(y.as_f64()));
    }
    let s0 = Complex::new(S::lit(0.5), t);
    let base = ln_gamma_factor_product(s0, t_j, lp)?;
    let ly = y.ln();
    let integrand = |s: Complex<S>| -> Result<Complex<S>, AfeError> {
        let l = ln_gamma_factor_product(s0 + s, t_j, lp)? - base - s * ly + s * s;
        Ok(l.exp() / s)
    };
    let offset = if sigma < S::zero() {
        Complex::new(S::one(), S::zero())
    } else {
        Complex::new(S::zero(), S::zero())
    };
    vertical_trapezoid(sigma, offset, integrand)
}

/// `V(y)` with the contour chosen for stability: `Re s = 3` when
/// `8π³y/|q|^{1/2} >= 0.1`, otherwise a line between the gamma poles and
/// `s = 0` plus the residue `G(0) = 1`.
pub fn v_weight_direct<S: Real>(y: S, t: S, t_j: S, lp: &LanglandsParams<S>) -> Result<Complex<S>, AfeError> {
    let x = stirling_argument(y, t, t_j, lp);
    if x >= S::lit(0.1) {
        return v_weight_direct_on(y, t, t_j, lp, S::lit(3.0));
    }
    let left = -S::lit(0.5) + lp.max_re_kappa();
    if left >= S::zero() {
        return Err(AfeError::NoShiftRoom(lp.max_re_kappa().as_f64()));
    }
    v_weight_direct_on(y, t, t_j, lp, left / S::lit(2.0))
}

/// `X = 8π³y/|q|^{1/2}`, the effective argument of the Stirling weight.
pub fn stirling_argument<S: Real>(y: S, t: S, t_j: S, lp: &LanglandsParams<S>) -> S {
    S::lit(8.0) * S::PI().powi(3) * y / conductor_q(t, t_j, lp).magnitude.sqrt()
}

/// Leading Stirling term `(1/2πi) ∫_{(1)} (8π³y)^{-s} |q|^{s/2} e^{s²}/s ds`.
pub fn v_weight_stirling<S: Real>(y: S, t: S, t_j: S, lp: &LanglandsParams<S>) -> Result<Complex<S>, AfeError> {
    if !(y > S::zero()) {
        return Err(AfeError::NonPositiveY(y.as_f64()));
    }
    let lx = stirling_argument(y, t, t_j, lp).ln();
    vertical_trapezoid(S::one(), Complex::new(S::zero(), S::zero()), |s| Ok((s * s - s * lx).exp() / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    // (1/2πi)∫ X^{-s} e^{s²}/s ds = erfc(log X / 2)/2.
    fn stirling_closed(x: f64) -> f64 {
        0.5 * libm::erfc(x.ln() / 2.0)
    }

    #[test]
    fn trivial_parameters() {
        let lp = LanglandsParams::<f64>::trivial();
        for k in lp.kappas() {
            assert!(k.norm() < 1e-15);
        }
        let t = 37.0;
        let q = conductor_q(0.0, t, &lp);
        assert!((q.magnitude - (0.25 + t * t).powi(3)).abs() < 1e-9 * q.magnitude);
        // Symmetric in ±t_j.
        let s = c(0.5, 0.0);
        let a = ln_gamma_factor_product(s, t, &lp).unwrap();
        let b = ln_gamma_factor_product(s, -t, &lp).unwrap();
        assert!((a.re - b.re).abs() < 1e-12);
    }

    #[test]
    fn schwarz_reflection() {
        let lp = LanglandsParams::self_dual_tempered(3.7f64);
        let s = c(0.8, 5.0);
        let a = gamma_factor_product(s, 12.0, &lp).unwrap();
        let b = gamma_factor_product(s.conj(), 12.0, &lp).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn log_magnitude_follows_stirling() {
        let lp = LanglandsParams::self_dual_tempered(2.0f64);
        let tj = 20.0;
        let l = ln_gamma_factor_product(c(0.5, 0.0), tj, &lp).unwrap().re;
        let pred = -1.5 * PI * tj;
        assert!((l / pred - 1.0).abs() < 0.05, "{l} vs {pred}");
    }

    #[test]
    fn pole_is_flagged() {
        let lp = LanglandsParams::<f64>::trivial();
        assert!(matches!(gamma_factor_product(c(-2.0, 0.0), 0.0, &lp), Err(AfeError::PoleProximity { .. })));
    }

    #[test]
    fn conductor_conjugates_under_t_reflection() {
        let lp = LanglandsParams::self_dual_tempered(1.3f64);
        let a = conductor_q(7.0, 40.0, &lp).q;
        let b = conductor_q(-7.0, 40.0, &lp).q;
        assert!((a - b.conj()).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn stirling_weight_matches_erfc() {
        let lp = LanglandsParams::<f64>::trivial();
        let (t, tj) = (0.0, 50.0);
        let ys = conductor_scale(t, tj, &lp);
        for &u in &[0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let v = v_weight_stirling(u * ys, t, tj, &lp).unwrap();
            let x = stirling_argument(u * ys, t, tj, &lp);
            assert!((x - 8.0 * u).abs() < 1e-12 * x);
            assert!((v.re - stirling_closed(x)).abs() < 1e-10 && v.im.abs() < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn direct_weight_limits() {
        let lp = LanglandsParams::self_dual_tempered(1.0f64);
        let (t, tj) = (0.0, 50.0);
        let ys = conductor_scale(t, tj, &lp);
        let small = v_weight_direct(1e-6 * ys, t, tj, &lp).unwrap();
        assert!((small - 1.0).norm() <= 0.05);
        // Both contours agree where both are usable.
        let a = v_weight_direct_on(0.3 * ys, t, tj, &lp, 3.0).unwrap();
        let b = v_weight_direct_on(0.3 * ys, t, tj, &lp, -0.25).unwrap();
        assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        assert!(v_weight_direct(-1.0, t, tj, &lp).is_err());
    }

    #[test]
    fn direct_weight_is_real_for_conjugation_closed_parameters() {
        let lp = LanglandsParams::self_dual_tempered(2.5f64);
        assert!(lp.is_conjugation_closed());
        let ys = conductor_scale(0.0, 60.0, &lp);
        for &u in &[0.1, 1.0, 5.0] {
            let v = v_weight_direct(u * ys, 0.0, 60.0, &lp).unwrap();
            assert!(v.im.abs() <= 1e-8 * v.norm().max(1e-300), "u = {u}: {v}");
        }
        let skew = LanglandsParams::new(c(0.3, 0.2), c(0.35, -0.5));
        assert!(!skew.is_conjugation_closed());
    }

    #[test]
    fn direct_weight_decays_beyond_conductor_scale() {
        let lp = LanglandsParams::self_dual_tempered(1.0f64);
        let (t, tj) = (0.0, 50.0);
        let ys = conductor_scale(t, tj, &lp);
        let mut prev = v_weight_direct(100.0 * ys, t, tj, &lp).unwrap().norm();
        for k in 1..4 {
            let cur = v_weight_direct(100.0 * ys * 2f64.powi(k), t, tj, &lp).unwrap().norm();
            assert!(cur < prev / 8.0, "doubling {k}: {cur} vs {prev}");
            prev = cur;
        }
    }

    #[test]
    fn direct_weight_tail_size() {
        // ½erfc(log(800)/2) ≈ 1.1e-6 at 100 conductor scales; below 1e-6 from 120.
        let lp = LanglandsParams::self_dual_tempered(1.0f64);
        let ys = conductor_scale(0.0, 50.0, &lp);
        assert!(v_weight_direct(100.0 * ys, 0.0, 50.0, &lp).unwrap().norm() <= 1.2e-6);
        assert!(v_weight_direct(120.0 * ys, 0.0, 50.0, &lp).unwrap().norm() <= 1e-6);
    }

    #[test]
    fn stirling_deviation_shrinks_with_tj() {
        let lp = LanglandsParams::self_dual_tempered(1.0f64);
        let dev = |tj: f64| -> f64 {
            let ys = conductor_scale(0.0, tj, &lp);
            [0.1, 0.3, 1.0, 3.0, 10.0]
                .iter()
                .map(|&u| {
                    let d = v_weight_direct(u * ys, 0.0, tj, &lp).unwrap();
                    let s = v_weight_stirling(u * ys, 0.0, tj, &lp).unwrap();
                    (d - s).norm() / d.norm()
                })
                .fold(0.0, f64::max)
        };
        let (d50, d200) = (dev(50.0), dev(200.0));
        assert!(d50 <= 0.1 && d200 < d50, "{d50} {d200}");
    }

    proptest! {
        #[test]
        fn shifts_sum_to_zero(a in -5.0f64..5.0, b in -5.0f64..5.0, c2 in -5.0f64..5.0, d in -5.0f64..5.0) {
            let lp = LanglandsParams::new(c(a, b), c(c2, d));
            let s = lp.alpha() + lp.beta() + lp.gamma();
            prop_assert!(s.norm() < 1e-14);
        }
    }
}
