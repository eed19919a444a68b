//! Adaptive Gauss–Kronrod quadrature for oscillatory integrals, parametric
//! phase descriptors, and the smooth window families used as amplitudes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{e, Real};

// Kronrod 21-point abscissae (descending, last is the centre) and weights,
// with the embedded 10-point Gauss weights on the odd-indexed abscissae.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError<S: Real> {
    #[error("evaluation budget of {budget} exhausted (best estimate error {})", .best.err_estimate)]
    BudgetExceeded { budget: usize, best: QuadratureResult<S> },
    #[error("subdivision stalled at rounding level (best estimate error {})", .best.err_estimate)]
    Stalled { best: QuadratureResult<S> },
    #[error("tolerance {0} below the supported floor")]
    ToleranceTooSmall(S),
    #[error("empty or reversed interval")]
    EmptyInterval,
    #[error("phase undefined at nonpositive argument {0}")]
    PhaseDomain(S),
    #[error("window family has no compact support in (0, inf)")]
    UnsupportedFamily,
}

impl<S: Real> QuadError<S> {
    /// Best available estimate, if the failure carried one.
    pub fn best(&self) -> Option<&QuadratureResult<S>> {
        match self {
            QuadError::BudgetExceeded { best, .. } | QuadError::Stalled { best } => Some(best),
            _ => None,
        }
    }
}

/// Value, error estimate and evaluation count of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<S> {
    pub value: Complex<S>,
    pub err_estimate: S,
    pub evaluations: usize,
}

/// Knobs for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<S> {
    /// Target: error estimate `<= tol * (1 + |value|)`.
    pub tol: S,
    pub max_evals: usize,
    /// Upper bound on phase cycles in one initial panel.
    pub max_cycles_per_panel: S,
    /// Minimum number of initial panels per interval.
    pub min_panels: usize,
}

impl<S: Real> Default for QuadConfig<S> {
    fn default() -> Self {
        Self {
            tol: S::lit(1e-10).max(S::epsilon() * S::lit(100.0)),
            max_evals: 20_000_000,
            max_cycles_per_panel: S::lit(2.0),
            min_panels: 4,
        }
    }
}

impl<S: Real> QuadConfig<S> {
    pub fn with_tol(tol: S) -> Self {
        Self { tol, ..Self::default() }
    }
}

// ---------------------------------------------------------------------------
// Phase descriptors.

/// `φ(y) = a·y^{1/2} + b·y^{1/3} + c·y + d·log y + q·y² + k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Phase<S> {
    pub sqrt: S,
    pub cbrt: S,
    pub lin: S,
    pub log: S,
    pub quad: S,
    pub constant: S,
}

impl<S: Real> Phase<S> {
    pub fn zero() -> Self {
        Self {
            sqrt: S::zero(),
            cbrt: S::zero(),
            lin: S::zero(),
            log: S::zero(),
            quad: S::zero(),
            constant: S::zero(),
        }
    }

    pub fn linear(xi: S) -> Self {
        Self { lin: xi, ..Self::zero() }
    }

    pub fn with_sqrt(mut self, a: S) -> Self {
        self.sqrt = a;
        self
    }
    pub fn with_cbrt(mut self, b: S) -> Self {
        self.cbrt = b;
        self
    }
    pub fn with_lin(mut self, c: S) -> Self {
        self.lin = c;
        self
    }
    pub fn with_log(mut self, d: S) -> Self {
        self.log = d;
        self
    }
    pub fn with_quad(mut self, q: S) -> Self {
        self.quad = q;
        self
    }
    pub fn with_constant(mut self, k: S) -> Self {
        self.constant = k;
        self
    }

    /// True when the phase needs `y > 0`.
    pub fn needs_positive(&self) -> bool {
        self.sqrt != S::zero() || self.cbrt != S::zero() || self.log != S::zero()
    }

    pub fn is_linear(&self) -> bool {
        !self.needs_positive() && self.quad == S::zero()
    }

    pub fn eval(&self, y: S) -> S {
        let mut v = self.lin * y + self.quad * y * y + self.constant;
        if self.needs_positive() {
            if self.sqrt != S::zero() {
                v += self.sqrt * y.sqrt();
            }
            if self.cbrt != S::zero() {
                v += self.cbrt * y.cbrt();
            }
            if self.log != S::zero() {
                v += self.log * y.ln();
            }
        }
        v
    }

    pub fn deriv(&self, y: S) -> S {
        let two = S::lit(2.0);
        let mut v = self.lin + two * self.quad * y;
        if self.sqrt != S::zero() {
            v += self.sqrt / (two * y.sqrt());
        }
        if self.cbrt != S::zero() {
            v += self.cbrt / (S::lit(3.0) * y.cbrt() * y.cbrt());
        }
        if self.log != S::zero() {
            v += self.log / y;
        }
        v
    }

    pub fn negate(&self) -> Self {
        Self {
            sqrt: -self.sqrt,
            cbrt: -self.cbrt,
            lin: -self.lin,
            log: -self.log,
            quad: -self.quad,
            constant: -self.constant,
        }
    }
}

// ---------------------------------------------------------------------------
// Windows.

/// Support of a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support<S> {
    Compact(S, S),
    WholeLine,
}

/// Smooth test functions from fixed parametric families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothWindow<S> {
    /// `exp(1 - 1/(1-u²))`, `u = (x - center)/half_width`, zero for `|u| >= 1`.
    Bump { center: S, half_width: S },
    /// `c·(sin(πδt)/(πδt))²` on the whole line.
    Fejer { delta: S, c: S },
    /// `exp(-((x - center)/scale)²)` on the whole line.
    Gaussian { center: S, scale: S },
    /// `x^{exponent + i·tilt}` times the bump on `[center ± half_width] ⊂ (0, ∞)`.
    PowerTilt { center: S, half_width: S, exponent: S, tilt: S },
}

fn bump_value<S: Real>(u: S) -> S {
    let u2 = u * u;
    if u2 >= S::one() {
        S::zero()
    } else {
        (S::one() - S::one() / (S::one() - u2)).exp()
    }
}

impl<S: Real> SmoothWindow<S> {
    pub fn bump(center: S, half_width: S) -> Self {
        Self::Bump { center, half_width }
    }

    /// Bump supported on `[lo, hi]`.
    pub fn bump_on(lo: S, hi: S) -> Self {
        let two = S::lit(2.0);
        Self::Bump {
            center: (lo + hi) / two,
            half_width: (hi - lo) / two,
        }
    }

    pub fn gaussian(center: S, scale: S) -> Self {
        Self::Gaussian { center, scale }
    }

    pub fn power_tilt_on(lo: S, hi: S, exponent: S, tilt: S) -> Self {
        let two = S::lit(2.0);
        Self::PowerTilt {
            center: (lo + hi) / two,
            half_width: (hi - lo) / two,
            exponent,
            tilt,
        }
    }

    pub fn eval(&self, x: S) -> Complex<S> {
        match *self {
            Self::Bump { center, half_width } => Complex::new(bump_value((x - center) / half_width), S::zero()),
            Self::Gaussian { center, scale } => {
                let u = (x - center) / scale;
                Complex::new((-u * u).exp(), S::zero())
            }
            Self::Fejer { delta, c } => {
                let a = S::PI() * delta * x;
                let s = if a.abs() < S::lit(1e-4) {
                    S::one() - a * a / S::lit(6.0)
                } else {
                    a.sin() / a
                };
                Complex::new(c * s * s, S::zero())
            }
            Self::PowerTilt {
                center,
                half_width,
                exponent,
                tilt,
            } => {
                let b = bump_value((x - center) / half_width);
                if b == S::zero() || x <= S::zero() {
                    return Complex::new(S::zero(), S::zero());
                }
                let lx = x.ln();
                Complex::from_polar(b * (exponent * lx).exp(), tilt * lx)
            }
        }
    }

    pub fn support(&self) -> Support<S> {
        match *self {
            Self::Bump { center, half_width } | Self::PowerTilt { center, half_width, .. } => {
                Support::Compact(center - half_width, center + half_width)
            }
            Self::Fejer { .. } | Self::Gaussian { .. } => Support::WholeLine,
        }
    }

    /// The complex-conjugate window.
    pub fn conj(&self) -> Self {
        match *self {
            Self::PowerTilt {
                center,
                half_width,
                exponent,
                tilt,
            } => Self::PowerTilt {
                center,
                half_width,
                exponent,
                tilt: -tilt,
            },
            other => other,
        }
    }

    /// `x ↦ w(x/λ)` when the family is closed under dilation.
    pub fn dilated(&self, lambda: S) -> Option<Self> {
        match *self {
            Self::Bump { center, half_width } => Some(Self::Bump {
                center: center * lambda,
                half_width: half_width * lambda,
            }),
            Self::Gaussian { center, scale } => Some(Self::Gaussian {
                center: center * lambda,
                scale: scale * lambda,
            }),
            Self::Fejer { delta, c } => Some(Self::Fejer { delta: delta / lambda, c }),
            Self::PowerTilt { .. } => None,
        }
    }

    /// Finite interval outside of which the integral of `|w|`, or of `w`
    /// against an oscillation of at least `rate` cycles per unit, is below
    /// `tol / 10`.
    pub fn truncation(&self, tol: S, rate: S) -> (S, S) {
        let ten = S::lit(10.0);
        match *self {
            Self::Bump { center, half_width } | Self::PowerTilt { center, half_width, .. } => {
                (center - half_width, center + half_width)
            }
            Self::Gaussian { center, scale } => {
                // Tail mass s√π·erfc(L/s) <= s·exp(-(L/s)²) for L >= s.
                let need = (ten * scale.max(S::one()) / tol).ln().max(S::one());
                let l = scale * (need.sqrt() + S::one());
                (center - l, center + l)
            }
            Self::Fejer { delta, c } => {
                let pi = S::PI();
                let l = if rate > delta {
                    // Integration by parts on each of the three frequencies.
                    (S::lit(20.0) * c / (pi * pi * pi * delta * delta * (rate - delta) * tol)).sqrt()
                } else {
                    S::lit(20.0) * c / (pi * pi * delta * delta * tol)
                };
                (-l, l)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Integrator.

#[derive(Clone, Copy)]
struct Panel<S> {
    a: S,
    b: S,
    value: Complex<S>,
    err: S,
}

struct HeapEntry {
    err: f64,
    idx: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.idx.cmp(&self.idx))
    }
}

/// Nodes and weights of the 21-point Kronrod rule mapped to `[a, b]`.
pub fn kronrod21_rule<S: Real>(a: S, b: S) -> [(S, S); 21] {
    let two = S::lit(2.0);
    let centr = (a + b) / two;
    let hl = (b - a) / two;
    let mut out = [(centr, S::lit(WGK[10]) * hl); 21];
    for j in 0..10 {
        let dx = hl * S::lit(XGK[j]);
        let w = S::lit(WGK[j]) * hl;
        out[2 * j] = (centr - dx, w);
        out[2 * j + 1] = (centr + dx, w);
    }
    out
}

fn kronrod21<S: Real, F: Fn(S) -> Complex<S>>(f: &F, a: S, b: S) -> Panel<S> {
    let two = S::lit(2.0);
    let centr = (a + b) / two;
    let hl = (b - a) / two;
    let fc = f(centr);
    let mut resk = fc * S::lit(WGK[10]);
    let mut resg = Complex::new(S::zero(), S::zero());
    let mut fv1 = [Complex::new(S::zero(), S::zero()); 10];
    let mut fv2 = [Complex::new(S::zero(), S::zero()); 10];
    let mut resabs = fc.norm() * S::lit(WGK[10]);
    for j in 0..10 {
        let dx = hl * S::lit(XGK[j]);
        let f1 = f(centr - dx);
        let f2 = f(centr + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = S::lit(WGK[j]);
        resk += (f1 + f2) * w;
        resabs += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            resg += (f1 + f2) * S::lit(WG[j / 2]);
        }
    }
    let mean = resk / two;
    let mut resasc = (fc - mean).norm() * S::lit(WGK[10]);
    for j in 0..10 {
        resasc += ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * S::lit(WGK[j]);
    }
    let hla = hl.abs();
    let value = resk * hl;
    resabs *= hla;
    resasc *= hla;
    let mut err = ((resk - resg) * hl).norm();
    if resasc != S::zero() && err != S::zero() {
        let r = (S::lit(200.0) * err / resasc).powf(S::lit(1.5));
        err = resasc * r.min(S::one());
    }
    let floor = S::epsilon() * S::lit(50.0) * resabs;
    if resabs > S::min_positive_value() / (S::epsilon() * S::lit(50.0)) {
        err = err.max(floor);
    }
    Panel { a, b, value, err }
}

fn sum_panels<S: Real>(panels: &[Panel<S>]) -> (Complex<S>, S) {
    let mut v = Complex::new(S::zero(), S::zero());
    let mut e = S::zero();
    for p in panels {
        v += p.value;
        e += p.err;
    }
    (v, e)
}

/// Globally adaptive G10/K21 integration of `f` over the given initial panels.
pub fn integrate_panels<S, F>(f: F, initial: &[(S, S)], cfg: &QuadConfig<S>) -> Result<QuadratureResult<S>, QuadError<S>>
where
    S: Real,
    F: Fn(S) -> Complex<S>,
{
    let floor = S::lit(1e-12).max(S::epsilon() * S::lit(20.0));
    if !(cfg.tol >= floor) {
        return Err(QuadError::ToleranceTooSmall(cfg.tol));
    }
    if initial.is_empty() {
        return Err(QuadError::EmptyInterval);
    }
    if initial.len().saturating_mul(21) > cfg.max_evals {
        return Err(QuadError::BudgetExceeded {
            budget: cfg.max_evals,
            best: QuadratureResult {
                value: Complex::new(S::zero(), S::zero()),
                err_estimate: S::infinity(),
                evaluations: 0,
            },
        });
    }
    let mut panels: Vec<Panel<S>> = Vec::with_capacity(initial.len() * 2);
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    for &(a, b) in initial {
        if !(b > a) {
            return Err(QuadError::EmptyInterval);
        }
        let p = kronrod21(&f, a, b);
        evals += 21;
        heap.push(HeapEntry {
            err: p.err.as_f64(),
            idx: panels.len(),
        });
        panels.push(p);
    }
    let (mut total, mut total_err) = sum_panels(&panels);
    let mut frozen_err = S::zero();
    let mut since_resum = 0usize;
    loop {
        let target = cfg.tol * (S::one() + total.norm());
        if total_err <= target {
            break;
        }
        if evals + 42 > cfg.max_evals {
            let (v, e) = sum_panels(&panels);
            return Err(QuadError::BudgetExceeded {
                budget: cfg.max_evals,
                best: QuadratureResult {
                    value: v,
                    err_estimate: e,
                    evaluations: evals,
                },
            });
        }
        let Some(top) = heap.pop() else {
            let (v, e) = sum_panels(&panels);
            if e <= target {
                break;
            }
            return Err(QuadError::Stalled {
                best: QuadratureResult {
                    value: v,
                    err_estimate: e,
                    evaluations: evals,
                },
            });
        };
        let p = panels[top.idx];
        let mid = (p.a + p.b) / S::lit(2.0);
        let width = p.b - p.a;
        let scale = p.a.abs().max(p.b.abs()).max(S::min_positive_value());
        if width <= scale * S::epsilon() * S::lit(1e3) || !(mid > p.a && mid < p.b) {
            frozen_err += p.err;
            // Panel cannot be split further; keep it but stop refining it.
            if frozen_err > target {
                let (v, e) = sum_panels(&panels);
                return Err(QuadError::Stalled {
                    best: QuadratureResult {
                        value: v,
                        err_estimate: e,
                        evaluations: evals,
                    },
                });
            }
            continue;
        }
        let left = kronrod21(&f, p.a, mid);
        let right = kronrod21(&f, mid, p.b);
        evals += 42;
        total += left.value + right.value - p.value;
        total_err += left.err + right.err - p.err;
        panels[top.idx] = left;
        heap.push(HeapEntry {
            err: left.err.as_f64(),
            idx: top.idx,
        });
        heap.push(HeapEntry {
            err: right.err.as_f64(),
            idx: panels.len(),
        });
        panels.push(right);
        since_resum += 1;
        if since_resum >= 256 {
            let (v, e) = sum_panels(&panels);
            total = v;
            total_err = e;
            since_resum = 0;
        }
    }
    // Deterministic final sum in interval order.
    panels.sort_by(|x, y| x.a.as_f64().total_cmp(&y.a.as_f64()));
    let (value, err_estimate) = sum_panels(&panels);
    Ok(QuadratureResult {
        value,
        err_estimate,
        evaluations: evals,
    })
}

/// Adaptive integration of `f` on `[a, b]`, starting from `n0` equal panels.
pub fn integrate<S, F>(f: F, a: S, b: S, n0: usize, cfg: &QuadConfig<S>) -> Result<QuadratureResult<S>, QuadError<S>>
where
    S: Real,
    F: Fn(S) -> Complex<S>,
{
    if !(b > a) {
        return Err(QuadError::EmptyInterval);
    }
    let n = n0.max(1);
    let h = (b - a) / S::from_count(n);
    let panels: Vec<(S, S)> = (0..n)
        .map(|i| {
            let lo = a + h * S::from_count(i);
            let hi = if i + 1 == n { b } else { a + h * S::from_count(i + 1) };
            (lo, hi)
        })
        .collect();
    integrate_panels(f, &panels, cfg)
}

/// Splits `[a, b]` into panels carrying at most `cfg.max_cycles_per_panel`
/// cycles of `phase` each (and at least `cfg.min_panels` panels).
pub fn cycle_panels<S: Real>(phase: &Phase<S>, a: S, b: S, cfg: &QuadConfig<S>) -> Vec<(S, S)> {
    let len = b - a;
    let hmax = len / S::from_count(cfg.min_panels.max(1));
    let hmin = len / S::from_count(4_000_000);
    let k = cfg.max_cycles_per_panel;
    let mut out = Vec::new();
    let mut x = a;
    while x < b {
        let r0 = phase.deriv(x).abs();
        let mut h = if r0 > S::zero() { (k / r0).min(hmax) } else { hmax };
        let r1 = phase.deriv((x + h).min(b)).abs();
        if r1 > r0 {
            h = h.min(k / r1);
        }
        h = h.max(hmin);
        let hi = if x + h >= b - hmin { b } else { x + h };
        out.push((x, hi));
        x = hi;
    }
    out
}

/// `∫ factor(y)·amplitude(y)·e(phase(y)) dy` over `interval ∩ support`.
///
/// Whole-line amplitudes are truncated at the family's tail bound.
pub fn integrate_oscillatory_with<S, F>(
    amplitude: &SmoothWindow<S>,
    factor: F,
    phase: &Phase<S>,
    interval: (S, S),
    cfg: &QuadConfig<S>,
) -> Result<QuadratureResult<S>, QuadError<S>>
where
    S: Real,
    F: Fn(S) -> Complex<S>,
{
    let rate = if phase.is_linear() { phase.lin.abs() } else { S::zero() };
    let (sa, sb) = amplitude.truncation(cfg.tol, rate);
    let a = interval.0.max(sa);
    let b = interval.1.min(sb);
    if !(b > a) {
        return Ok(QuadratureResult {
            value: Complex::new(S::zero(), S::zero()),
            err_estimate: S::zero(),
            evaluations: 0,
        });
    }
    if phase.needs_positive() && a <= S::zero() {
        return Err(QuadError::PhaseDomain(a));
    }
    let panels = cycle_panels(phase, a, b, cfg);
    integrate_panels(|y| factor(y) * amplitude.eval(y) * e(phase.eval(y)), &panels, cfg)
}

/// `∫ amplitude(y)·e(phase(y)) dy` with estimated error `<= tol·(1+|value|)`.
pub fn integrate_oscillatory<S: Real>(
    amplitude: &SmoothWindow<S>,
    phase: &Phase<S>,
    interval: (S, S),
    tol: S,
) -> Result<QuadratureResult<S>, QuadError<S>> {
    let cfg = QuadConfig::with_tol(tol);
    integrate_oscillatory_with(amplitude, |_| Complex::new(S::one(), S::zero()), phase, interval, &cfg)
}

/// The majorant `g(t) = c·(sin(πδt)/(πδt))²` with `c` chosen so that
/// `g >= 1` on `[-2, 2]`; its Fourier transform is supported in `[-δ, δ]`.
pub fn fejer_majorant<S: Real>(delta: S) -> SmoothWindow<S> {
    assert!(delta > S::zero() && delta <= S::lit(0.25), "delta must lie in (0, 1/4]");
    let a = S::TAU() * delta;
    let s = a.sin() / a;
    SmoothWindow::Fejer {
        delta,
        c: S::one() / (s * s),
    }
}

/// Closed-form transform `ĝ(ξ) = ∫ g(t) e(-ξt) dt` of a Fejér window:
/// a triangle of height `c/δ` on `[-δ, δ]`.
pub fn fejer_transform<S: Real>(delta: S, c: S, xi: S) -> S {
    let t = S::one() - xi.abs() / delta;
    if t > S::zero() {
        c / delta * t
    } else {
        S::zero()
    }
}

/// `ĝ(ξ) = ∫ g(t) e(-ξt) dt` by quadrature.
pub fn fourier_transform<S: Real>(g: &SmoothWindow<S>, xi: S, cfg: &QuadConfig<S>) -> Result<QuadratureResult<S>, QuadError<S>> {
    integrate_oscillatory_with(
        g,
        |_| Complex::new(S::one(), S::zero()),
        &Phase::linear(-xi),
        (S::neg_infinity(), S::infinity()),
        cfg,
    )
}

/// Mellin transform `w̃(iy) = ∫_0^∞ w(x) x^{iy-1} dx` of a window compactly
/// supported in `(0, ∞)`.
pub fn mellin_window_transform<S: Real>(w: &SmoothWindow<S>, y: S, cfg: &QuadConfig<S>) -> Result<Complex<S>, QuadError<S>> {
    match w.support() {
        Support::Compact(a, _) if a > S::zero() => {}
        _ => return Err(QuadError::UnsupportedFamily),
    }
    let phase = Phase::zero().with_log(y / S::TAU());
    integrate_oscillatory_with(
        w,
        |x| Complex::new(S::one() / x, S::zero()),
        &phase,
        (S::zero(), S::infinity()),
        cfg,
    )
    .map(|r| r.value)
}
