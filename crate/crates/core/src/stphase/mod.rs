//! Stationary-phase leading terms, the Airy function, and the cube-root
//! oscillatory weights, each paired with a quadrature oracle.

mod airy;

pub use airy::{
    airy_ai, airy_ai_taylor_oracle, airy_envelope_error, airy_negative_asymptotic, airy_negative_coefficients, airy_u,
    AIRY_MAX_ABS, AIRY_SEAM,
};

use num_complex::Complex;
use thiserror::Error;

use crate::oscquad::{
    fejer_transform, integrate_oscillatory_with, Phase, QuadConfig, QuadError, QuadratureResult, SmoothWindow, Support,
};
use crate::scalar::{cis, e, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StPhaseError<S: Real> {
    #[error("Airy argument {0} outside [-1000, 1000]")]
    AiryRange(f64),
    #[error("beta/alpha = {0} outside the band [1/10, 10]")]
    PhaseBand(f64),
    #[error("parameter {name} = {value} out of range")]
    Parameter { name: &'static str, value: f64 },
    #[error("window family is not closed under dilation")]
    UnsupportedWindow,
    #[error("{terms} terms requested but only {available} constants supplied")]
    TooManyTerms { terms: usize, available: usize },
    #[error(transparent)]
    Quad(#[from] QuadError<S>),
}

fn one<S: Real>() -> Complex<S> {
    Complex::new(S::one(), S::zero())
}

fn frac<S: Real>(x: S) -> S {
    x - x.floor()
}

/// `(α, β)` of the phase `α y^{1/2} - β y^{1/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair<S> {
    alpha: S,
    beta: S,
}

impl<S: Real> PhasePair<S> {
    /// Accepts positive `α, β` with `β/α ∈ [1/10, 10]`.
    pub fn new(alpha: S, beta: S) -> Result<Self, StPhaseError<S>> {
        if !(alpha > S::zero()) {
            return Err(StPhaseError::Parameter { name: "alpha", value: alpha.as_f64() });
        }
        if !(beta > S::zero()) {
            return Err(StPhaseError::Parameter { name: "beta", value: beta.as_f64() });
        }
        let r = beta / alpha;
        if r < S::lit(0.1) || r > S::lit(10.0) {
            return Err(StPhaseError::PhaseBand(r.as_f64()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    /// The stationary point `(2β/3α)^6`.
    pub fn stationary_point(&self) -> S {
        (S::lit(2.0) * self.beta / (S::lit(3.0) * self.alpha)).powi(6)
    }

    pub fn phase(&self) -> Phase<S> {
        Phase::zero().with_sqrt(self.alpha).with_cbrt(-self.beta)
    }
}

/// Leading stationary-phase term of `∫_0^∞ f(y) e(αy^{1/2} - βy^{1/3}) dy`:
/// `6 t0^5 (2β)^{-1/2} e(-4β³/27α² + 1/8) f(t0^6)`, `t0 = 2β/3α`.
pub fn stationary_phase_i<S: Real>(pp: &PhasePair<S>, f: &SmoothWindow<S>) -> Complex<S> {
    let (a, b) = (pp.alpha, pp.beta);
    let t0 = S::lit(2.0) * b / (S::lit(3.0) * a);
    let amp = S::lit(6.0) * t0.powi(5) / (S::lit(2.0) * b).sqrt();
    let ph = frac(-S::lit(4.0) * b * b * b / (S::lit(27.0) * a * a)) + S::lit(0.125);
    e(ph) * f.eval(t0.powi(6)) * amp
}

/// Quadrature oracle for the integral approximated by [`stationary_phase_i`].
pub fn stationary_phase_oracle<S: Real>(
    pp: &PhasePair<S>,
    f: &SmoothWindow<S>,
    cfg: &QuadConfig<S>,
) -> Result<QuadratureResult<S>, StPhaseError<S>> {
    match f.support() {
        Support::Compact(lo, _) if lo > S::zero() => {}
        _ => return Err(StPhaseError::UnsupportedWindow),
    }
    Ok(integrate_oscillatory_with(f, |_| one(), &pp.phase(), (S::zero(), S::infinity()), cfg)?)
}

/// Closed form `∫ e(tz - t²/4) dt = √2 e^{-πi/4} e(z²)`.
pub fn fresnel_closed_form<S: Real>(z: S) -> Complex<S> {
    cis(-S::FRAC_PI_4()) * e(frac(z * z)) * S::SQRT_2()
}

/// Regularised integral `∫ e^{-εt²} e(tz - t²/4) dt` by quadrature.
pub fn fresnel_regularized<S: Real>(z: S, eps: S, cfg: &QuadConfig<S>) -> Result<Complex<S>, StPhaseError<S>> {
    let g = SmoothWindow::gaussian(S::zero(), S::one() / eps.sqrt());
    let phase = Phase::zero().with_lin(z).with_quad(-S::lit(0.25));
    Ok(integrate_oscillatory_with(&g, |_| one(), &phase, (S::neg_infinity(), S::infinity()), cfg)?.value)
}

/// `|e(z²) - (e^{πi/4}/√2) ∫ e(tz - t²/4) dt|` with the integral obtained by
/// Gaussian regularisation at `ε, ε/2, ε/4` (`ε = 10⁻⁴`) and two Richardson
/// steps towards `ε → 0`.
pub fn fresnel_identity_residual<S: Real>(z: S) -> Result<S, StPhaseError<S>> {
    if !(z.abs() <= S::lit(50.0)) {
        return Err(StPhaseError::Parameter { name: "z", value: z.as_f64() });
    }
    let cfg = QuadConfig::with_tol(S::lit(1e-10).max(S::epsilon() * S::lit(100.0)));
    let eps = S::lit(1e-4);
    let i1 = fresnel_regularized(z, eps, &cfg)?;
    let i2 = fresnel_regularized(z, eps / S::lit(2.0), &cfg)?;
    let i4 = fresnel_regularized(z, eps / S::lit(4.0), &cfg)?;
    let extrapolated = (i4 * S::lit(8.0) - i2 * S::lit(6.0) + i1) / S::lit(3.0);
    let lhs = e(frac(z * z));
    let rhs = cis(S::FRAC_PI_4()) / S::SQRT_2() * extrapolated;
    Ok((lhs - rhs).norm())
}

/// `(U ∫ e(z² - vz) w3(z/Z) dz, U (e^{πi/4}/√2) e(-v²/4) w3(v/2Z))`.
pub fn y_transform_pair<S: Real>(
    v: S,
    u: S,
    z: S,
    w3: &SmoothWindow<S>,
    cfg: &QuadConfig<S>,
) -> Result<(Complex<S>, Complex<S>), StPhaseError<S>> {
    if !(z >= S::lit(10.0)) {
        return Err(StPhaseError::Parameter { name: "Z", value: z.as_f64() });
    }
    let scaled = w3.dilated(z).ok_or(StPhaseError::UnsupportedWindow)?;
    let phase = Phase::zero().with_quad(S::one()).with_lin(-v);
    let oracle = integrate_oscillatory_with(&scaled, |_| one(), &phase, (S::neg_infinity(), S::infinity()), cfg)?.value * u;
    let leading = cis(S::FRAC_PI_4()) / S::SQRT_2() * e(frac(-v * v / S::lit(4.0))) * w3.eval(v / (S::lit(2.0) * z)) * u;
    Ok((oracle, leading))
}

/// `ĝ(ξ) = ∫ g(t) e(-ξt) dt` and its derivative: closed forms for the
/// Gaussian and Fejér families, quadrature otherwise.
pub fn window_fourier<S: Real>(
    g: &SmoothWindow<S>,
    xi: S,
    cfg: &QuadConfig<S>,
) -> Result<(Complex<S>, Complex<S>), StPhaseError<S>> {
    let pi = S::PI();
    match *g {
        SmoothWindow::Gaussian { center, scale } => {
            let v = e(frac(-xi * center)) * (scale * pi.sqrt() * (-pi * pi * scale * scale * xi * xi).exp());
            let d = v * Complex::new(-S::lit(2.0) * pi * pi * scale * scale * xi, -S::TAU() * center);
            Ok((v, d))
        }
        SmoothWindow::Fejer { delta, c } => {
            let v = fejer_transform(delta, c, xi);
            let d = if xi.abs() < delta {
                -xi.signum() * c / (delta * delta)
            } else {
                S::zero()
            };
            Ok((Complex::new(v, S::zero()), Complex::new(d, S::zero())))
        }
        _ => {
            let phase = Phase::linear(-xi);
            let whole = (S::neg_infinity(), S::infinity());
            let v = integrate_oscillatory_with(g, |_| one(), &phase, whole, cfg)?.value;
            let d = integrate_oscillatory_with(g, |t| Complex::new(S::zero(), -S::TAU() * t), &phase, whole, cfg)?.value;
            Ok((v, d))
        }
    }
}

/// Real parts of `ĝ((U/2π) log(m/n))` and of its expansion around
/// `x = (√m - √n)/√n`: `ĝ(Ux/π) - (1/2π) U⁻¹ (Ux)² ĝ'(Ux/π)`.
/// For even real `g` both are real; the discrepancy is `O(U⁻²)` at fixed `Ux`.
pub fn ghat_log_expansion_check<S: Real>(
    m: S,
    n: S,
    u: S,
    g: &SmoothWindow<S>,
    cfg: &QuadConfig<S>,
) -> Result<(S, S), StPhaseError<S>> {
    for (name, val) in [("m", m), ("n", n), ("U", u)] {
        if !(val > S::zero()) {
            return Err(StPhaseError::Parameter { name, value: val.as_f64() });
        }
    }
    let pi = S::PI();
    let exact = window_fourier(g, u / S::TAU() * (m / n).ln(), cfg)?.0;
    let x = (m.sqrt() - n.sqrt()) / n.sqrt();
    let (g0, g1) = window_fourier(g, u * x / pi, cfg)?;
    let ux = u * x;
    let expanded = g0 - g1 * (ux * ux / (S::TAU() * u));
    Ok((exact.re, expanded.re))
}

/// Parameters of the Voronoi-side weight `Φ(λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiWeightParams<S> {
    pub n: S,
    pub u: S,
    pub a: S,
    pub b_cap: S,
    pub v: S,
    pub y0: S,
    pub b: S,
    pub l: u64,
    pub n1: u64,
    /// Smooth window `w` supported in `[N, 2N]` (bump family).
    pub w: SmoothWindow<S>,
    /// Centre of the localisation window; the implied constants of
    /// `λ ≍ v³N²/(UAB)³` are not explicit, so this is normally located with
    /// [`locate_window_center`]. `None` falls back to `v³N²/(UAB)³`.
    pub window_center: Option<S>,
}

/// Output of [`voronoi_phi_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiPhi<S> {
    pub oracle: Complex<S>,
    pub leading: Complex<S>,
    /// `(b/√N)(λN)^{2/3}`, the natural size of `Φ`.
    pub scale: S,
    /// `λ / window centre`.
    pub window_ratio: S,
    /// Whether `λ` lies within a factor 4 of the window centre; outside it
    /// only the negligibility of `oracle` is meaningful.
    pub in_window: bool,
}

impl<S: Real> VoronoiWeightParams<S> {
    /// Desk-scale defaults `N = 10⁴, U = A = 1, B = 5, v = 1, y0 = 0, b = 1`
    /// with a bump on `[N, 2N]`.
    pub fn desk() -> Self {
        let n = S::lit(1e4);
        Self {
            n,
            u: S::one(),
            a: S::one(),
            b_cap: S::lit(5.0),
            v: S::one(),
            y0: S::zero(),
            b: S::one(),
            l: 1,
            n1: 1,
            w: SmoothWindow::bump_on(n, n + n),
            window_center: None,
        }
    }

    /// `α = vN/(UAB)`.
    pub fn alpha(&self) -> S {
        self.v * self.n / (self.u * self.a * self.b_cap)
    }

    /// `v³N²/(UAB)³`, the localisation scale up to absolute constants.
    pub fn xsize_center(&self) -> S {
        let uab = self.u * self.a * self.b_cap;
        self.v.powi(3) * self.n * self.n / uab.powi(3)
    }

    /// The `λ` whose stationary point in `r` is `r0`: `λ = α³ √r0 / (8N)`.
    pub fn lambda_for_stationary_point(&self, r0: S) -> S {
        self.alpha().powi(3) * r0.sqrt() / (S::lit(8.0) * self.n)
    }

    fn window_n(&self) -> Result<SmoothWindow<S>, StPhaseError<S>> {
        match self.w {
            SmoothWindow::Bump { center, half_width } => {
                let (c, h) = (center / self.n, half_width / self.n);
                if c - h < S::one() - S::lit(1e-9) || c + h > S::lit(2.0) + S::lit(1e-9) {
                    return Err(StPhaseError::Parameter { name: "w support", value: (c - h).as_f64() });
                }
                Ok(SmoothWindow::PowerTilt {
                    center: c,
                    half_width: h,
                    exponent: -S::lit(1.0 / 3.0),
                    tilt: self.y0,
                })
            }
            _ => Err(StPhaseError::UnsupportedWindow),
        }
    }

    fn prefactor(&self, lam: S) -> (Complex<S>, S) {
        let scale = self.b / self.n.sqrt() * (lam * self.n).powf(S::lit(2.0 / 3.0));
        (cis(self.y0 * self.n.ln()) * scale, scale)
    }
}

/// Quadrature oracle and stationary-phase leading term of
/// `Φ(λ) = (b/√N)(λN)^{2/3} N^{iy0} ∫ w_N(r) r^{-1/3+iy0} e(-3(λrN)^{1/3} + v√r N/(UAB)) dr`.
pub fn voronoi_phi_pair<S: Real>(
    p: &VoronoiWeightParams<S>,
    lam: S,
    cfg: &QuadConfig<S>,
) -> Result<VoronoiPhi<S>, StPhaseError<S>> {
    if !(lam > S::zero()) {
        return Err(StPhaseError::Parameter { name: "lambda", value: lam.as_f64() });
    }
    let amp = p.window_n()?;
    let alpha = p.alpha();
    let beta = S::lit(3.0) * (lam * p.n).cbrt();
    let (pref, scale) = p.prefactor(lam);
    let phase = Phase::zero().with_sqrt(alpha).with_cbrt(-beta);
    let integral = integrate_oscillatory_with(&amp, |_| one(), &phase, (S::zero(), S::infinity()), cfg)?.value;
    let leading = match PhasePair::new(alpha, beta) {
        Ok(pp) => stationary_phase_i(&pp, &amp),
        Err(_) => Complex::new(S::zero(), S::zero()),
    };
    let center = p.window_center.unwrap_or_else(|| p.xsize_center());
    let ratio = lam / center;
    Ok(VoronoiPhi {
        oracle: pref * integral,
        leading: pref * leading,
        scale,
        window_ratio: ratio,
        in_window: ratio >= S::lit(0.25) && ratio <= S::lit(4.0),
    })
}

/// Locates the centre of the localisation window as the maximiser of
/// `|Φ(λ)|/scale` on a geometric grid of `points` values spanning
/// `[lo, hi]·v³N²/(UAB)³`.
pub fn locate_window_center<S: Real>(
    p: &VoronoiWeightParams<S>,
    lo: S,
    hi: S,
    points: usize,
    cfg: &QuadConfig<S>,
) -> Result<S, StPhaseError<S>> {
    let base = p.xsize_center();
    let points = points.max(2);
    let step = (hi / lo).ln() / S::from_count(points - 1);
    let mut best = (S::zero(), lo * base);
    for i in 0..points {
        let lam = base * lo * (step * S::from_count(i)).exp();
        let r = voronoi_phi_pair(p, lam, cfg)?;
        let size = r.oracle.norm() / r.scale;
        if size > best.0 {
            best = (size, lam);
        }
    }
    Ok(best.1)
}

/// `Σ_{j ≤ terms} Σ_± c_{j,±} x ∫ ψ(r) e(±3(xr)^{1/3}) (xr)^{-j/3} dr`.
pub fn psi0_expansion_evaluate<S: Real>(
    constants: &[(Complex<S>, Complex<S>)],
    x: S,
    psi: &SmoothWindow<S>,
    terms: usize,
    cfg: &QuadConfig<S>,
) -> Result<Complex<S>, StPhaseError<S>> {
    if terms > constants.len() {
        return Err(StPhaseError::TooManyTerms { terms, available: constants.len() });
    }
    if !(x > S::zero()) {
        return Err(StPhaseError::Parameter { name: "x", value: x.as_f64() });
    }
    match psi.support() {
        Support::Compact(lo, _) if lo > S::zero() => {}
        _ => return Err(StPhaseError::UnsupportedWindow),
    }
    let k = S::lit(3.0) * x.cbrt();
    let mut total = Complex::new(S::zero(), S::zero());
    for (j, &(cp, cm)) in constants.iter().take(terms).enumerate() {
        let pw = -S::from_count(j + 1) / S::lit(3.0);
        let factor = |r: S| Complex::new((x * r).powf(pw), S::zero());
        let whole = (S::zero(), S::infinity());
        if cp != Complex::new(S::zero(), S::zero()) {
            total += cp * integrate_oscillatory_with(psi, factor, &Phase::zero().with_cbrt(k), whole, cfg)?.value;
        }
        if cm != Complex::new(S::zero(), S::zero()) {
            total += cm * integrate_oscillatory_with(psi, factor, &Phase::zero().with_cbrt(-k), whole, cfg)?.value;
        }
    }
    Ok(total * x)
}
