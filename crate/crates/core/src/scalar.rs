//! Floating-point scalar abstraction shared by the analytic kernels.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the analytic kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count or index into the scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Lossy conversion back to `f64`, used for ordering and reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
}

/// `e(x) = exp(2πi x)`.
#[inline]
pub fn e<S: Real>(x: S) -> Complex<S> {
    Complex::from_polar(S::one(), S::TAU() * x)
}

/// `exp(iθ)`.
#[inline]
pub fn cis<S: Real>(theta: S) -> Complex<S> {
    Complex::new(theta.cos(), theta.sin())
}

/// Exact root of unity `e(k/c)` with `k` reduced modulo `c` before the trig call.
#[inline]
pub fn root_of_unity<S: Real>(k: i128, c: u64) -> Complex<S> {
    let c = c as i128;
    let r = k.rem_euclid(c);
    if r == 0 {
        return Complex::new(S::one(), S::zero());
    }
    let frac = S::from_i128(r).expect("residue fits") / S::from_i128(c).expect("modulus fits");
    e(frac)
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Log-log regression slope of `ys` against `xs` (all entries must be positive).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    ls_slope(&lx, &ly)
}
