//! The Airy function `Ai` and its large-negative-argument expansion.

use crate::scalar::Real;
use crate::special::ln_gamma_real;

use super::StPhaseError;

/// Boundary between the Maclaurin and asymptotic representations.
pub const AIRY_SEAM: f64 = 8.0;
/// Largest `|x|` accepted by [`airy_ai`].
pub const AIRY_MAX_ABS: f64 = 1000.0;

/// Coefficients `u_k` of the standard Airy asymptotic series,
/// `u_k = (6k-5)(6k-3)(6k-1) / ((2k-1)·216·k) · u_{k-1}`, `u_0 = 1`
/// (so `u_1 = 5/72`, `u_2 = 385/10368`).
pub fn airy_u<S: Real>(count: usize) -> Vec<S> {
    let mut u = Vec::with_capacity(count);
    let mut cur = S::one();
    for k in 0..count {
        if k > 0 {
            let kk = S::from_count(k);
            let six = S::lit(6.0);
            let num = (six * kk - S::lit(5.0)) * (six * kk - S::lit(3.0)) * (six * kk - S::one());
            let den = (S::lit(2.0) * kk - S::one()) * S::lit(216.0) * kk;
            cur = cur * num / den;
        }
        u.push(cur);
    }
    u
}

/// Coefficients `c_j` of `Ai(-x) ~ π^{-1/2} x^{-1/4} [cos(ζ-π/4) Σ c_{2k} x^{-3k}
/// + sin(ζ-π/4) Σ c_{2k+1} x^{-3(2k+1)/2}]`, `ζ = (2/3)x^{3/2}`:
/// `c_j = (-1)^{⌊j/2⌋} u_j (3/2)^j`, so `c_0 = 1`, `c_1 = 5/48`, `c_2 = -385/4608`.
pub fn airy_negative_coefficients<S: Real>(count: usize) -> Vec<S> {
    let u = airy_u::<S>(count);
    let mut scale = S::one();
    let mut out = Vec::with_capacity(count);
    for (j, uj) in u.into_iter().enumerate() {
        let sign = if (j / 2) % 2 == 0 { S::one() } else { -S::one() };
        out.push(sign * uj * scale);
        scale *= S::lit(1.5);
    }
    out
}

fn maclaurin<S: Real>(x: S) -> S {
    let c1 = (S::lit(-2.0 / 3.0) * S::lit(3.0).ln() - ln_gamma_real(S::lit(2.0 / 3.0))).exp();
    let c2 = (S::lit(-1.0 / 3.0) * S::lit(3.0).ln() - ln_gamma_real(S::lit(1.0 / 3.0))).exp();
    let x3 = x * x * x;
    let mut f_term = S::one();
    let mut g_term = x;
    let mut f = f_term;
    let mut g = g_term;
    for k in 1..200 {
        let kk = S::from_count(3 * k);
        f_term = f_term * x3 / (kk * (kk - S::one()));
        g_term = g_term * x3 / (kk * (kk + S::one()));
        f += f_term;
        g += g_term;
        if f_term.abs() <= S::epsilon() * f.abs() * S::lit(1e-2) && g_term.abs() <= S::epsilon() * g.abs().max(S::min_positive_value()) * S::lit(1e-2) {
            break;
        }
    }
    c1 * f - c2 * g
}

fn asymptotic_positive<S: Real>(x: S) -> S {
    let zeta = S::lit(2.0 / 3.0) * x * x.sqrt();
    let u = airy_u::<S>(60);
    let mut sum = S::zero();
    let mut pow = S::one();
    let mut last = S::infinity();
    for (k, uk) in u.into_iter().enumerate() {
        let term = uk * pow;
        if term.abs() > last {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        last = term.abs();
        if last <= S::epsilon() * sum.abs() * S::lit(1e-2) {
            break;
        }
        pow /= zeta;
    }
    (-zeta).exp() / (S::lit(2.0) * S::PI().sqrt() * x.sqrt().sqrt()) * sum
}

fn asymptotic_negative<S: Real>(x: S) -> S {
    // Ai(-x) for x > 0.
    let zeta = S::lit(2.0 / 3.0) * x * x.sqrt();
    let u = airy_u::<S>(80);
    let mut even = S::zero();
    let mut odd = S::zero();
    let mut pow = S::one();
    let mut last = S::infinity();
    for (k, uk) in u.into_iter().enumerate() {
        let term = uk * pow;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { S::one() } else { -S::one() };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        if last <= S::epsilon() * S::lit(1e-2) {
            break;
        }
        pow /= zeta;
    }
    let theta = zeta - S::FRAC_PI_4();
    (theta.cos() * even + theta.sin() * odd) / (S::PI().sqrt() * x.sqrt().sqrt())
}

/// `Ai(x)` for `|x| <= 1000`: Maclaurin two-series for `|x| <= 8`, the
/// asymptotic expansions (truncated at the smallest term) beyond.
pub fn airy_ai<S: Real>(x: S) -> Result<S, StPhaseError<S>> {
    if !(x.abs() <= S::lit(AIRY_MAX_ABS)) {
        return Err(StPhaseError::AiryRange(x.as_f64()));
    }
    let seam = S::lit(AIRY_SEAM);
    Ok(if x.abs() <= seam {
        maclaurin(x)
    } else if x > S::zero() {
        asymptotic_positive(x)
    } else {
        asymptotic_negative(-x)
    })
}

/// The large-negative-argument expansion of `Ai(-x)` truncated after
/// `terms` coefficients `c_0, ..., c_{terms-1}`.
pub fn airy_negative_asymptotic<S: Real>(x: S, terms: usize) -> S {
    if terms == 0 {
        return S::zero();
    }
    let c = airy_negative_coefficients::<S>(terms);
    let zeta = S::lit(2.0 / 3.0) * x * x.sqrt();
    let theta = zeta - S::FRAC_PI_4();
    let step = x.powf(S::lit(-1.5));
    let mut pow = S::one();
    let mut even = S::zero();
    let mut odd = S::zero();
    for (j, cj) in c.into_iter().enumerate() {
        if j % 2 == 0 {
            even += cj * pow;
        } else {
            odd += cj * pow;
        }
        pow *= step;
    }
    (theta.cos() * even + theta.sin() * odd) / (S::PI().sqrt() * x.sqrt().sqrt())
}

/// Independent reference for `Ai` on `[-1000, 2]`: analytic continuation of
/// the Maclaurin series along the real axis by local Taylor steps of
/// `y'' = x y` (step 1/4, 48 terms per step). Forward continuation picks up
/// the growing solution, so it is not used for larger positive `x`.
pub fn airy_ai_taylor_oracle(x: f64) -> f64 {
    let ai0 = maclaurin(0.0f64);
    let aip0 = -(-(1.0f64 / 3.0) * 3f64.ln() - ln_gamma_real(1.0f64 / 3.0)).exp();
    let (mut x0, mut y, mut yp) = (0.0f64, ai0, aip0);
    let step = if x >= 0.0 { 0.25 } else { -0.25 };
    let n_steps = (x / step).floor() as usize;
    let advance = |x0: f64, y: f64, yp: f64, h: f64| -> (f64, f64) {
        let mut a = [0.0f64; 50];
        a[0] = y;
        a[1] = yp;
        for n in 0..48 {
            let prev = if n == 0 { 0.0 } else { a[n - 1] };
            a[n + 2] = (x0 * a[n] + prev) / ((n + 2) as f64 * (n + 1) as f64);
        }
        let mut val = 0.0;
        let mut der = 0.0;
        for n in (0..50).rev() {
            val = val * h + a[n];
            if n >= 1 {
                der = der * h + n as f64 * a[n];
            }
        }
        (val, der)
    };
    for _ in 0..n_steps {
        let (ny, nyp) = advance(x0, y, yp, step);
        x0 += step;
        y = ny;
        yp = nyp;
    }
    let rest = x - x0;
    if rest != 0.0 {
        y = advance(x0, y, yp, rest).0;
    }
    y
}

/// `|asymptotic - Ai(-x)|` normalised by the oscillation envelope
/// `π^{-1/2} x^{-1/4}` (pointwise relative error is undefined at the zeros).
pub fn airy_envelope_error(x: f64, terms: usize, reference: f64) -> f64 {
    let env = 1.0 / (std::f64::consts::PI.sqrt() * x.powf(0.25));
    (airy_negative_asymptotic(x, terms) - reference).abs() / env
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        let a: f64 = airy_ai(0.0).unwrap();
        assert!((a - 0.355_028_053_887_817_2).abs() < 1e-15);
    }

    #[test]
    fn coefficients_match_exact_rationals() {
        let u = airy_u::<f64>(3);
        assert!((u[1] - 5.0 / 72.0).abs() < 1e-16);
        assert!((u[2] - 385.0 / 10368.0).abs() < 1e-16);
        let c = airy_negative_coefficients::<f64>(3);
        assert_eq!(c[0], 1.0);
        assert!((c[1] - 5.0 / 48.0).abs() < 1e-16);
        assert!((c[2] + 385.0 / 4608.0).abs() < 1e-16);
    }

    #[test]
    fn matches_taylor_oracle_on_both_sides() {
        for i in 0..=400 {
            let x = -100.0 + 0.27 * i as f64;
            if x > 2.0 {
                break;
            }
            let a = airy_ai(x).unwrap();
            let o = airy_ai_taylor_oracle(x);
            let env = 1.0 / (std::f64::consts::PI.sqrt() * x.abs().max(1.0).powf(0.25));
            assert!((a - o).abs() < 1e-10 * env, "x = {x}: {a} vs {o}");
        }
    }

    #[test]
    fn seam_is_continuous() {
        for &s in &[-8.0f64, 8.0] {
            let lo = maclaurin(s);
            let hi = if s > 0.0 { asymptotic_positive(s) } else { asymptotic_negative(-s) };
            assert!((lo - hi).abs() < 1e-8, "seam {s}: {lo} vs {hi}");
        }
    }

    #[test]
    fn positive_side_decays_monotonically() {
        let mut prev = airy_ai(5.0f64).unwrap();
        for i in 1..=100 {
            let x = 5.0 + 0.05 * i as f64;
            let a = airy_ai(x).unwrap();
            assert!(a > 0.0 && a < prev, "x = {x}");
            prev = a;
        }
    }

    #[test]
    fn negative_side_envelope_is_bounded() {
        // Local extrema of |Ai(-x)|·x^{1/4} stay near π^{-1/2}.
        let mut peak: f64 = 0.0;
        let mut low = f64::INFINITY;
        let mut x: f64 = 10.0;
        while x < 900.0 {
            let period = std::f64::consts::TAU / x.sqrt();
            let m = (0..64)
                .map(|k| {
                    let t = x + period * k as f64 / 64.0;
                    airy_ai(-t).unwrap().abs() * t.powf(0.25)
                })
                .fold(0.0, f64::max);
            peak = peak.max(m);
            low = low.min(m);
            x *= 1.3;
        }
        let env = 1.0 / std::f64::consts::PI.sqrt();
        assert!(peak < 1.01 * env && low > 0.98 * env, "{low} {peak}");
    }

    #[test]
    fn leading_term_examples() {
        assert_eq!(airy_negative_asymptotic(12.0f64, 0), 0.0);
        let err = airy_envelope_error(10.0, 1, airy_ai_taylor_oracle(-10.0));
        assert!(err < 0.01, "{err}");
    }

    #[test]
    fn range_is_enforced() {
        assert!(airy_ai(-1000.5f64).is_err());
        assert!(airy_ai(-999.0f64).is_ok());
    }

    #[test]
    fn f32_evaluation() {
        let a: f32 = airy_ai(-2.0f32).unwrap();
        assert!((a as f64 - airy_ai_taylor_oracle(-2.0)).abs() < 1e-5);
    }
}
