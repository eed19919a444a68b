//! The Kuznetsov test weight `h(r)`, its Bessel transform `ȟ(x)`, and the
//! leading term of the transform's large-`x` expansion.

use num_complex::Complex;
use rayon::prelude::*;
use thiserror::Error;

use crate::oscquad::{integrate, kronrod21_rule, QuadConfig, QuadError};
use crate::scalar::Real;
use crate::special::{ln_cosh, ln_gamma};

/// Largest `|r|` accepted by [`scaled_bessel_ratio`].
pub const MAX_SPECTRAL_R: f64 = 100.0;
/// Largest `x` accepted by [`scaled_bessel_ratio`].
pub const MAX_BESSEL_X: f64 = 1000.0;
/// Below this `x` the power series is used; above it the contour integral.
pub const SERIES_LIMIT: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError<S: Real> {
    #[error("need 0 < Delta <= T, got T = {t}, Delta = {delta}")]
    InvalidWeight { t: f64, delta: f64 },
    #[error("(r, x) = ({r}, {x}) outside |r| <= 100, 0 < x <= 1000")]
    Range { r: f64, x: f64 },
    #[error("power series did not converge within {0} terms")]
    SeriesBudget(usize),
    #[error(transparent)]
    Quad(#[from] QuadError<S>),
}

/// `(T, Δ)` of the weight `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWeight<S> {
    t: S,
    delta: S,
}

impl<S: Real> SpectralWeight<S> {
    pub fn new(t: S, delta: S) -> Result<Self, SpectralError<S>> {
        if !(t > S::zero() && delta > S::zero() && delta <= t) {
            return Err(SpectralError::InvalidWeight { t: t.as_f64(), delta: delta.as_f64() });
        }
        Ok(Self { t, delta })
    }

    pub fn t(&self) -> S {
        self.t
    }

    pub fn delta(&self) -> S {
        self.delta
    }

    /// `Δ >= 2 T^{1/3}`, the margin required by the leading-term expansion.
    pub fn delta_in_window(&self) -> bool {
        self.delta >= S::lit(2.0) * self.t.cbrt()
    }

    /// Right end of the `r`-range carrying both Gaussian lobes.
    pub fn r_cutoff(&self) -> S {
        self.t + S::lit(8.0) * self.delta
    }
}

/// `h(r) = ((r² + 1/4)/T²)·[exp(-((r-T)/Δ)²) + exp(-((r+T)/Δ)²)]`.
pub fn h_weight<S: Real>(r: S, sw: &SpectralWeight<S>) -> S {
    let a = (r - sw.t) / sw.delta;
    let b = (r + sw.t) / sw.delta;
    (r * r + S::lit(0.25)) / (sw.t * sw.t) * ((-a * a).exp() + (-b * b).exp())
}

/// `J_ν(x)·e^{-ln_scale}` by the power series, all factors combined in one
/// exponent. Accurate while the largest term, about `e^x`, does not swamp
/// the result.
pub fn bessel_j_series_scaled<S: Real>(nu: Complex<S>, x: S, ln_scale: S) -> Result<Complex<S>, SpectralError<S>> {
    const BUDGET: usize = 2000;
    let lx = (x / S::lit(2.0)).ln();
    let mut sum = Complex::new(S::zero(), S::zero());
    let mut ln_fact = S::zero();
    for k in 0..BUDGET {
        if k > 0 {
            ln_fact += S::from_count(k).ln();
        }
        let kk = S::from_count(k);
        let expo = nu * lx + lx * (kk + kk) - ln_gamma(nu + kk + S::one()) - ln_fact - ln_scale;
        let term = expo.exp();
        let term = if k % 2 == 0 { term } else { -term };
        sum += term;
        if kk > x && term.norm() <= S::epsilon() * S::lit(1e-3) * sum.norm().max(S::min_positive_value()) {
            return Ok(sum);
        }
    }
    Err(SpectralError::SeriesBudget(BUDGET))
}

/// `J_ν(x)` by the power series (`ν + k + 1` away from the poles of `Γ`).
pub fn bessel_j_series<S: Real>(nu: Complex<S>, x: S) -> Result<Complex<S>, SpectralError<S>> {
    bessel_j_series_scaled(nu, x, S::zero())
}

/// `J_ν(x)·e^{-ln_scale}` from the Sommerfeld representation
/// `J_ν(x) = (1/2πi) ∫ exp(x sinh w - νw) dw` over the contour
/// `∞ - iθ → -iθ → iθ → ∞ + iθ`, `θ = π/2 + ε`.
///
/// For `ν = 2ir` and `ln_scale = log cosh(πr)` every piece of the integrand
/// stays `O(e^{2|r|ε})`, so no exponential cancellation occurs.
pub fn bessel_j_contour_scaled<S: Real>(
    nu: Complex<S>,
    x: S,
    ln_scale: S,
    cfg: &QuadConfig<S>,
) -> Result<Complex<S>, SpectralError<S>> {
    let eps = S::lit(0.3).min(S::one() / (nu.im.abs() + S::one()));
    let theta = S::FRAC_PI_2() + eps;
    let (st, ct) = (theta.sin(), theta.cos());
    let tau = S::TAU();
    let four_pi = tau + tau;

    // Vertical segment: w = iφ, dw = i dφ.
    let vertical = |phi: S| -> Complex<S> {
        let re = nu.im * phi - ln_scale;
        let im = x * phi.sin() - nu.re * phi;
        Complex::from_polar(re.exp(), im)
    };
    let n_v = (x * theta / tau).ceil().to_usize().unwrap_or(0) + 4;
    let v = integrate(vertical, -theta, theta, n_v, cfg)?.value / tau;

    // Horizontal rays: F(t + iθ) - F(t - iθ).
    let decay = x * eps.sin();
    let need = S::lit(45.0) + S::lit(2.0) * (nu.im.abs() * theta - ln_scale).max(S::zero()) + nu.re.abs();
    let tmax = (need / decay).asinh();
    let rays = |t: S| -> Complex<S> {
        let (sh, ch) = (t.sinh(), t.cosh());
        let base = x * sh * ct - nu.re * t - ln_scale;
        let up_re = base + nu.im * theta;
        let up_im = x * ch * st - nu.im * t - nu.re * theta;
        let dn_re = base - nu.im * theta;
        let dn_im = -x * ch * st - nu.im * t + nu.re * theta;
        Complex::from_polar(up_re.exp(), up_im) - Complex::from_polar(dn_re.exp(), dn_im)
    };
    let total_phase = x * st * tmax.cosh() + nu.norm() * tmax;
    let n_h = (total_phase / four_pi).ceil().to_usize().unwrap_or(0) + 4;
    let h = integrate(rays, S::zero(), tmax, n_h, cfg)?.value;
    let h = Complex::new(h.im, -h.re) / tau; // divide by 2πi

    Ok(v + h)
}

fn bessel_cfg<S: Real>() -> QuadConfig<S> {
    QuadConfig::with_tol(S::lit(1e-12).max(S::epsilon() * S::lit(100.0)))
}

/// `J_{2ir}(x)/cosh(πr)` for `|r| <= 100`, `0 < x <= 1000`.
///
/// Uses the log-scaled power series for `x <= 8`; beyond that the series
/// terms reach `e^x` against an `O(x^{-1/2})` result, so the contour
/// representation is used instead.
pub fn scaled_bessel_ratio<S: Real>(r: S, x: S) -> Result<Complex<S>, SpectralError<S>> {
    if !(r.abs() <= S::lit(MAX_SPECTRAL_R) && x > S::zero() && x <= S::lit(MAX_BESSEL_X)) {
        return Err(SpectralError::Range { r: r.as_f64(), x: x.as_f64() });
    }
    let nu = Complex::new(S::zero(), r + r);
    let lc = ln_cosh(S::PI() * r);
    if x <= S::lit(SERIES_LIMIT) {
        bessel_j_series_scaled(nu, x, lc)
    } else {
        bessel_j_contour_scaled(nu, x, lc, &bessel_cfg())
    }
}

/// Default number of `r`-panels (21-point Kronrod each) on `[0, T + 8Δ]`.
pub const DEFAULT_R_PANELS: usize = 32;

/// `ȟ(x) = (2i/π) ∫ r h(r) J_{2ir}(x)/cosh(πr) dr` with the default grid.
pub fn h_check_oracle<S: Real>(x: S, sw: &SpectralWeight<S>) -> Result<Complex<S>, SpectralError<S>> {
    h_check_oracle_with(x, sw, DEFAULT_R_PANELS)
}

/// `ȟ(x)` on `panels` equal panels of `[0, T + 8Δ]`, folding `r < 0` onto
/// `r > 0` as `r h(r)[B(r) - B(-r)]` with `B(±r)` evaluated separately, so
/// the imaginary part of the result measures the numerical asymmetry.
pub fn h_check_oracle_with<S: Real>(
    x: S,
    sw: &SpectralWeight<S>,
    panels: usize,
) -> Result<Complex<S>, SpectralError<S>> {
    let panels = panels.max(1);
    let rmax = sw.r_cutoff();
    let w = rmax / S::from_count(panels);
    let nodes: Vec<(S, S)> = (0..panels)
        .flat_map(|i| {
            let a = w * S::from_count(i);
            kronrod21_rule(a, a + w)
        })
        .collect();
    let parts: Result<Vec<Complex<S>>, SpectralError<S>> = nodes
        .par_iter()
        .map(|&(r, wt)| {
            let d = scaled_bessel_ratio(r, x)? - scaled_bessel_ratio(-r, x)?;
            Ok(d * (wt * r * h_weight(r, sw)))
        })
        .collect();
    let sum = parts?.into_iter().fold(Complex::new(S::zero(), S::zero()), |a, b| a + b);
    Ok(Complex::new(S::zero(), S::lit(2.0) / S::PI()) * sum)
}

/// Leading term of `ȟ(x)` with the validity conditions it was derived under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm<S> {
    pub value: S,
    /// `Δ >= 2 T^{1/3}`.
    pub delta_ok: bool,
    /// `T⁴/x³ <= 0.01`.
    pub phase_ok: bool,
}

impl<S> LeadingTerm<S> {
    pub fn in_window(&self) -> bool {
        self.delta_ok && self.phase_ok
    }
}

/// `(4/π) √(2/x) ΔT exp(-(2ΔT/x)²) cos(x - 2T²/x + π/4)`.
pub fn h_check_leading<S: Real>(x: S, sw: &SpectralWeight<S>) -> LeadingTerm<S> {
    let (t, d) = (sw.t, sw.delta);
    let g = S::lit(2.0) * d * t / x;
    let value = S::lit(4.0) / S::PI() * (S::lit(2.0) / x).sqrt() * d * t * (-g * g).exp() * h_check_cosine(x, sw);
    LeadingTerm {
        value,
        delta_ok: sw.delta_in_window(),
        phase_ok: t.powi(4) / x.powi(3) <= S::lit(0.01),
    }
}

/// The oscillating factor `cos(x - 2T²/x + π/4)` of the leading term.
pub fn h_check_cosine<S: Real>(x: S, sw: &SpectralWeight<S>) -> S {
    h_check_phase(x, sw).cos()
}

/// Envelope `(4/π) √(2/x) ΔT` of the leading term.
pub fn h_check_envelope<S: Real>(x: S, sw: &SpectralWeight<S>) -> S {
    S::lit(4.0) / S::PI() * (S::lit(2.0) / x).sqrt() * sw.delta * sw.t
}

/// Phase `χ(x) = x - 2T²/x + π/4` of the leading term.
pub fn h_check_phase<S: Real>(x: S, sw: &SpectralWeight<S>) -> S {
    x - S::lit(2.0) * sw.t * sw.t / x + S::FRAC_PI_4()
}

/// Fits the oracle near `x0` as `Re(z · E(x0)·e^{iχ(x)})`, with `E` the
/// leading-term envelope including its Gaussian factor, from four samples at
/// quarter-period steps of `χ`. `z = 1` means exact agreement; `|z - 1|` is
/// a deviation that stays meaningful at the zeros of the cosine.
pub fn h_check_envelope_fit<S: Real>(x0: S, sw: &SpectralWeight<S>) -> Result<Complex<S>, SpectralError<S>> {
    let chi0 = h_check_phase(x0, sw);
    let two_t2 = S::lit(2.0) * sw.t * sw.t;
    let mut o = [S::zero(); 4];
    for (k, ok) in o.iter_mut().enumerate() {
        let target = chi0 + S::FRAC_PI_2() * S::from_count(k);
        let mut x = x0 + S::FRAC_PI_2() * S::from_count(k);
        for _ in 0..20 {
            let f = h_check_phase(x, sw) - target;
            x -= f / (S::one() + two_t2 / (x * x));
        }
        *ok = h_check_oracle(x, sw)?.re;
    }
    // o_k = Re(w·i^k) with w = z·E·e^{iχ0}.
    let two = S::lit(2.0);
    let w = Complex::new((o[0] - o[2]) / two, (o[3] - o[1]) / two);
    let g = two * sw.delta * sw.t / x0;
    let env = h_check_envelope(x0, sw) * (-g * g).exp();
    Ok(w * Complex::from_polar(S::one(), -chi0) / env)
}
