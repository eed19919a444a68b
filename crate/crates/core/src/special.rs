//! Complex log-Gamma shared by the spectral and AFE kernels.

use num_complex::Complex;

use crate::scalar::Real;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Γ(z)` for complex `z` away from the poles.
///
/// The imaginary part is continuous along horizontal lines (sum of principal
/// logarithms), which is all that matters once the result is exponentiated.
/// Arguments with `Re z < 1/2` are shifted up with the recurrence rather than
/// reflected, so no `sin(πz)` overflow occurs at large `|Im z|`.
pub fn ln_gamma<S: Real>(z: Complex<S>) -> Complex<S> {
    let half = S::lit(0.5);
    if z.re < half {
        let shift = (half - z.re).ceil().to_usize().unwrap_or(0).max(1);
        let mut acc = Complex::new(S::zero(), S::zero());
        let mut w = z;
        for _ in 0..shift {
            acc += w.ln();
            w += S::one();
        }
        return ln_gamma(w) - acc;
    }
    let zm = z - S::one();
    let mut x = Complex::new(S::lit(LANCZOS[0]), S::zero());
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += Complex::new(S::lit(c), S::zero()) / (zm + S::from_count(i));
    }
    let t = zm + S::lit(LANCZOS_G + 0.5);
    let half_ln_tau = S::lit(0.5) * S::TAU().ln();
    (zm + half) * t.ln() - t + x.ln() + half_ln_tau
}

/// `log Γ(x)` for real `x > 0`.
pub fn ln_gamma_real<S: Real>(x: S) -> S {
    ln_gamma(Complex::new(x, S::zero())).re
}

/// `log k!` for small nonnegative `k`.
pub fn ln_factorial<S: Real>(k: usize) -> S {
    ln_gamma_real(S::from_count(k + 1))
}

/// `log cosh(x)` without overflow.
pub fn ln_cosh<S: Real>(x: S) -> S {
    let a = x.abs();
    a + (-(a + a)).exp().ln_1p() - S::LN_2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..25 {
            let lg: f64 = ln_gamma_real(n as f64);
            assert!((lg - f.ln()).abs() < 1e-12 * f.ln().abs().max(1.0), "n = {n}");
            f *= n as f64;
        }
    }

    #[test]
    fn half_integer_and_reflection_moduli() {
        assert!((ln_gamma_real::<f64>(0.5) - PI.sqrt().ln()).abs() < 1e-14);
        for &y in &[0.3, 1.0, 7.5, 40.0, 150.0] {
            // |Γ(1/2 + iy)|² = π / cosh(πy)
            let lhs = 2.0 * ln_gamma(c(0.5, y)).re;
            let rhs = PI.ln() - ln_cosh(PI * y);
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "y = {y}");
            // |Γ(iy)|² = π / (y sinh(πy))
            let lhs = 2.0 * ln_gamma(c(0.0, y)).re;
            let ln_sinh = PI * y + (-(-2.0 * PI * y).exp()).ln_1p() - 2f64.ln();
            let expect = PI.ln() - y.ln() - ln_sinh;
            assert!((lhs - expect).abs() < 1e-11 * expect.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &(x, y) in &[(-3.7, 2.0), (0.2, -5.0), (2.5, 30.0), (10.0, -120.0)] {
            let z = c(x, y);
            let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
            let k = (d.im / (2.0 * PI)).round();
            assert!(d.re.abs() < 1e-11 && (d.im - 2.0 * PI * k).abs() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(0.7, 13.0);
        let a = ln_gamma(z);
        let b = ln_gamma(z.conj());
        assert!((a - b.conj()).norm() < 1e-13);
    }

    #[test]
    fn works_in_f32() {
        let lg: f32 = ln_gamma_real(5.0f32);
        assert!((lg - 24f32.ln()).abs() < 1e-5);
    }

    #[test]
    fn ln_cosh_large_arguments() {
        assert!((ln_cosh(1000.0f64) - (1000.0 - 2f64.ln())).abs() < 1e-12);
        assert!((ln_cosh(0.3f64) - 0.3f64.cosh().ln()).abs() < 1e-15);
    }
}
