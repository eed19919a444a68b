//! Harnesses for the classical, hybrid Farey and Gallagher large-sieve
//! inequalities, reporting measured sharpness ratios.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{mobius, ramanujan_sum, totient};
use crate::oscquad::{integrate, Phase, QuadConfig};
use crate::scalar::e;

/// Largest denominator accepted by [`farey_fractions`].
pub const MAX_FAREY_B: u64 = 1000;
/// Largest modulus accepted by [`gallagher_trial`].
pub const MAX_GALLAGHER_Q: u64 = 100;
/// Default constant in the hybrid bound.
pub const DEFAULT_HYBRID_C: f64 = 30.0;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("parameter {name} = {value} out of range")]
    Parameter { name: &'static str, value: f64 },
    #[error("phase derivative vanishes or changes sign on [{lo}, {hi}]")]
    VanishingDerivative { lo: f64, hi: f64 },
    #[error("quadrature: {0}")]
    Quad(String),
}

/// Reduced fractions `x/b` with `b <= B`, `0 <= x < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareySystem {
    b_max: u64,
    fractions: Vec<(u64, u64)>,
}

impl FareySystem {
    pub fn b_max(&self) -> u64 {
        self.b_max
    }

    pub fn fractions(&self) -> &[(u64, u64)] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }
}

pub fn farey_fractions(b_max: u64) -> Result<FareySystem, SieveError> {
    if b_max == 0 || b_max > MAX_FAREY_B {
        return Err(SieveError::Parameter {
            name: "B",
            value: b_max as f64,
        });
    }
    let mut fractions = Vec::new();
    for b in 1..=b_max {
        for x in 0..b {
            if x.gcd(&b) == 1 {
                fractions.push((x, b));
            }
        }
    }
    Ok(FareySystem { b_max, fractions })
}

/// One experiment: `ratio = lhs / bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub lhs: f64,
    pub bound: f64,
    pub ratio: f64,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
}

/// Trials merged in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub params: BTreeMap<String, f64>,
    pub trials: Vec<TrialReport>,
    pub max_ratio: f64,
    pub empirical_c: Option<f64>,
    pub seed: u64,
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn l2(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm_sqr()).sum()
}

/// Per-trial seed derived from the ensemble seed and the trial index.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Random coefficient vector: Rademacher, complex Gaussian or uniform
/// unit phases, the family chosen by the generator.
pub fn random_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    match rng.gen_range(0..3) {
        0 => (0..len)
            .map(|_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
            .collect(),
        1 => (0..len)
            .map(|_| {
                // Box–Muller.
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let v: f64 = rng.gen();
                Complex64::from_polar((-2.0 * u.ln()).sqrt(), std::f64::consts::TAU * v)
            })
            .collect(),
        _ => (0..len)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect(),
    }
}

/// `Σ_{x mod b}^* |Σ_m a_m e(xm/b)|²` for each `b <= B`, with `a` indexed
/// from `n0`. Coefficients are first folded into residue classes mod `b`.
fn farey_mass_by_denominator(farey: &FareySystem, n0: i64, coeffs: &[Complex64]) -> Vec<f64> {
    let b_max = farey.b_max as usize;
    let mut out = vec![0.0; b_max + 1];
    let mut folded = Vec::new();
    for b in 1..=b_max {
        folded.clear();
        folded.resize(b, Complex64::new(0.0, 0.0));
        for (i, &a) in coeffs.iter().enumerate() {
            let m = n0 + i as i64;
            folded[m.rem_euclid(b as i64) as usize] += a;
        }
        let roots: Vec<Complex64> = (0..b).map(|k| e(k as f64 / b as f64)).collect();
        let mut mass = 0.0;
        for x in 0..b {
            if x.gcd(&b) != 1 {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (r, &f) in folded.iter().enumerate() {
                s += f * roots[(x * r) % b];
            }
            mass += s.norm_sqr();
        }
        out[b] = mass;
    }
    out
}

/// Classical large sieve: `Σ_{b<=B} Σ_x^* |Σ a_m e(xm/b)|² <= (B² + M)Σ|a_m|²`
/// for `a` supported on `[n0, n0 + M)`.
pub fn classical_trial(farey: &FareySystem, n0: i64, coeffs: &[Complex64], seed: u64) -> TrialReport {
    let m = coeffs.len() as f64;
    let b = farey.b_max as f64;
    let lhs: f64 = farey_mass_by_denominator(farey, n0, coeffs).iter().sum();
    let bound = (b * b + m) * l2(coeffs);
    TrialReport {
        lhs,
        bound,
        ratio: if bound > 0.0 { lhs / bound } else { 0.0 },
        params: params(&[("B", b), ("N", n0 as f64), ("M", m)]),
        seed,
    }
}

/// Mass of the single Farey point `x/b`.
pub fn farey_point_mass(x: u64, b: u64, n0: i64, coeffs: &[Complex64]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (i, &a) in coeffs.iter().enumerate() {
        let m = n0 + i as i64;
        let k = ((x as i128 * m as i128).rem_euclid(b as i128)) as f64;
        s += a * e(k / b as f64);
    }
    s.norm_sqr()
}

/// `trials` classical trials with `B` uniform in `[1, b_max]`, `M` uniform
/// in `[1, m_max]`, `N` uniform in `[1, 10⁶]`.
pub fn classical_ensemble(trials: usize, seed: u64, b_max: u64, m_max: usize) -> Result<EnsembleReport, SieveError> {
    if b_max == 0 || b_max > MAX_FAREY_B || m_max == 0 {
        return Err(SieveError::Parameter {
            name: "B",
            value: b_max as f64,
        });
    }
    let systems: Vec<FareySystem> = (1..=b_max).map(|b| farey_fractions(b).expect("validated")).collect();
    let reports: Vec<TrialReport> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ts = trial_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(ts);
            let b = rng.gen_range(1..=b_max);
            let m = rng.gen_range(1..=m_max);
            let n0 = rng.gen_range(1..=1_000_000i64);
            let coeffs = random_coeffs(&mut rng, m);
            classical_trial(&systems[b as usize - 1], n0, &coeffs, ts)
        })
        .collect();
    Ok(merge(params(&[("B_max", b_max as f64), ("M_max", m_max as f64)]), reports, None, seed))
}

fn merge(params: BTreeMap<String, f64>, trials: Vec<TrialReport>, empirical_c: Option<f64>, seed: u64) -> EnsembleReport {
    let max_ratio = trials.iter().map(|t| t.ratio).fold(0.0, f64::max);
    EnsembleReport {
        params,
        trials,
        max_ratio,
        empirical_c,
        seed,
    }
}

/// Setup for the hybrid Farey sieve with a smooth phase `f`.
#[derive(Debug, Clone, Copy)]
pub struct HybridSetup {
    pub b: u64,
    pub t: f64,
    pub phase: Phase<f64>,
    pub n0: u64,
    pub m: usize,
    pub c_const: f64,
}

impl HybridSetup {
    /// `f(y) = scale·√y`.
    pub fn sqrt_phase(b: u64, t: f64, scale: f64, n0: u64, m: usize) -> Self {
        Self {
            b,
            t,
            phase: Phase::zero().with_sqrt(scale),
            n0,
            m,
            c_const: DEFAULT_HYBRID_C,
        }
    }

    /// `X = sup 1/|f'(y)|` over the integer support; rejects a derivative
    /// that vanishes or changes sign there.
    pub fn x_sup(&self) -> Result<f64, SieveError> {
        let lo = self.n0 as f64;
        let hi = (self.n0 + self.m as u64 - 1) as f64;
        let mut sign = 0.0;
        let mut x: f64 = 0.0;
        for i in 0..self.m {
            let d = self.phase.deriv(lo + i as f64);
            if !(d.abs() > 0.0) || (sign != 0.0 && d.signum() != sign) {
                return Err(SieveError::VanishingDerivative { lo, hi });
            }
            sign = d.signum();
            x = x.max(1.0 / d.abs());
        }
        Ok(x)
    }

    fn validate(&self, coeffs: &[Complex64]) -> Result<(), SieveError> {
        if self.b == 0 || self.b > MAX_FAREY_B {
            return Err(SieveError::Parameter {
                name: "B",
                value: self.b as f64,
            });
        }
        if !(self.t > 0.0) {
            return Err(SieveError::Parameter { name: "T", value: self.t });
        }
        if self.n0 == 0 || coeffs.len() != self.m || self.m == 0 {
            return Err(SieveError::Parameter {
                name: "M",
                value: coeffs.len() as f64,
            });
        }
        Ok(())
    }
}

/// `∫_{-T}^{T} e(tθ) dt = sin(2πTθ)/(πθ)`, `2T` at `θ = 0`.
fn sinc_kernel(t: f64, theta: f64) -> f64 {
    let w = std::f64::consts::TAU * t * theta;
    if w.abs() < 1e-8 {
        2.0 * t * (1.0 - w * w / 6.0)
    } else {
        w.sin() / (std::f64::consts::PI * theta)
    }
}

/// Hybrid sieve trial. The `t`-integral and the Farey sum are evaluated in
/// closed form: `lhs = Σ_{m,n} b_m b̄_n K(f(m)-f(n)) Σ_{b<=B} c_b(m-n)` with
/// `K` the sinc kernel and `c_b` the Ramanujan sum.
pub fn hybrid_trial(setup: &HybridSetup, coeffs: &[Complex64], seed: u64) -> Result<TrialReport, SieveError> {
    setup.validate(coeffs)?;
    let x = setup.x_sup()?;
    let m = setup.m;
    let ram: Vec<f64> = (0..m)
        .map(|k| (1..=setup.b).map(|b| ramanujan_sum::<f64>(k as i64, b)).sum())
        .collect();
    let f: Vec<f64> = (0..m).map(|i| setup.phase.eval((setup.n0 + i as u64) as f64)).collect();
    let mut lhs = 0.0;
    for i in 0..m {
        lhs += coeffs[i].norm_sqr() * 2.0 * setup.t * ram[0];
        let mut off = Complex64::new(0.0, 0.0);
        for j in i + 1..m {
            let k = sinc_kernel(setup.t, f[i] - f[j]) * ram[j - i];
            off += coeffs[j].conj() * k;
        }
        lhs += 2.0 * (coeffs[i] * off).re;
    }
    let b = setup.b as f64;
    let base = (b * b * setup.t + x) * l2(coeffs);
    let bound = setup.c_const * base;
    Ok(TrialReport {
        lhs,
        bound,
        ratio: lhs / bound,
        params: params(&[
            ("B", b),
            ("T", setup.t),
            ("N", setup.n0 as f64),
            ("M", m as f64),
            ("X", x),
            ("C", setup.c_const),
            ("C_empirical", lhs / base),
        ]),
        seed,
    })
}

/// The hybrid left side by adaptive quadrature in `t` of the Farey mass of
/// `b_m e(t f(m))`; cross-check for [`hybrid_trial`].
pub fn hybrid_lhs_quadrature(setup: &HybridSetup, coeffs: &[Complex64], tol: f64) -> Result<f64, SieveError> {
    setup.validate(coeffs)?;
    let farey = farey_fractions(setup.b)?;
    let f: Vec<f64> = (0..setup.m).map(|i| setup.phase.eval((setup.n0 + i as u64) as f64)).collect();
    let integrand = |t: f64| {
        let tw: Vec<Complex64> = coeffs.iter().zip(&f).map(|(&a, &fm)| a * e(t * fm)).collect();
        Complex64::new(farey_mass_by_denominator(&farey, setup.n0 as i64, &tw).iter().sum(), 0.0)
    };
    let res = integrate(integrand, -setup.t, setup.t, 16, &QuadConfig::with_tol(tol))
        .map_err(|e| SieveError::Quad(e.to_string()))?;
    Ok(res.value.re)
}

/// `vectors` hybrid trials with seeded random coefficients; `empirical_c`
/// is the largest `lhs / ((B²T + X)Σ|b|²)`.
pub fn hybrid_ensemble(setup: &HybridSetup, vectors: usize, seed: u64) -> Result<EnsembleReport, SieveError> {
    let reports: Result<Vec<TrialReport>, SieveError> = (0..vectors)
        .into_par_iter()
        .map(|i| {
            let ts = trial_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(ts);
            let coeffs = random_coeffs(&mut rng, setup.m);
            hybrid_trial(setup, &coeffs, ts)
        })
        .collect();
    let reports = reports?;
    let c = reports.iter().map(|r| r.params["C_empirical"]).fold(0.0, f64::max);
    Ok(merge(
        params(&[
            ("B", setup.b as f64),
            ("T", setup.t),
            ("N", setup.n0 as f64),
            ("M", setup.m as f64),
            ("C", setup.c_const),
        ]),
        reports,
        Some(c),
        seed,
    ))
}

/// `P[q][r] = Σ_{d | q, d | r} φ(d) μ(q/d)`, which equals
/// `Σ_χ^* χ(m) χ̄(n)` over primitive `χ mod q` when `gcd(mn, q) = 1` and
/// `m - n ≡ r (mod q)`.
pub fn primitive_orthogonality_table(q_max: u64) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(); q_max as usize + 1];
    for q in 1..=q_max {
        let row = (0..q)
            .map(|r| {
                (1..=q)
                    .filter(|d| q % d == 0 && r % d == 0)
                    .map(|d| totient(d) as f64 * mobius(q / d) as f64)
                    .sum()
            })
            .collect();
        out[q as usize] = row;
    }
    out
}

/// Gallagher's hybrid sieve over `a_n`, `1 <= n <= N`:
/// `Σ_{q<=Q} (q/φ(q)) Σ_χ^* ∫_{-U}^{U} |Σ a_n χ(n) n^{it}|² dt <= (N + UQ²)Σ|a_n|²`.
/// The `t`-integral is `2 sin(U log(m/n))/log(m/n)` and the character sum
/// collapses through [`primitive_orthogonality_table`].
pub fn gallagher_trial(q_max: u64, u: f64, coeffs: &[Complex64], seed: u64) -> Result<TrialReport, SieveError> {
    if q_max == 0 || q_max > MAX_GALLAGHER_Q {
        return Err(SieveError::Parameter {
            name: "Q",
            value: q_max as f64,
        });
    }
    if !(u > 0.0) {
        return Err(SieveError::Parameter { name: "U", value: u });
    }
    let n = coeffs.len();
    if n == 0 {
        return Err(SieveError::Parameter { name: "N", value: 0.0 });
    }
    let table = primitive_orthogonality_table(q_max);
    let weight: Vec<f64> = (0..=q_max).map(|q| if q == 0 { 0.0 } else { q as f64 / totient(q) as f64 }).collect();
    let coprime: Vec<Vec<u64>> = (1..=n as u64)
        .map(|k| (1..=q_max).filter(|q| k.gcd(q) == 1).collect())
        .collect();
    let logs: Vec<f64> = (1..=n).map(|k| (k as f64).ln()).collect();
    let pair_weight = |i: usize, j: usize| -> f64 {
        let diff = (i as i64 - j as i64).unsigned_abs();
        let ci = &coprime[i];
        let cj = &coprime[j];
        let mut w = 0.0;
        let (mut a, mut b) = (0, 0);
        while a < ci.len() && b < cj.len() {
            match ci[a].cmp(&cj[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    let q = ci[a];
                    w += weight[q as usize] * table[q as usize][(diff % q) as usize];
                    a += 1;
                    b += 1;
                }
            }
        }
        w
    };
    let lhs: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = coeffs[i].norm_sqr() * 2.0 * u * pair_weight(i, i);
            let mut off = Complex64::new(0.0, 0.0);
            for j in i + 1..n {
                if coeffs[j] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let w = pair_weight(i, j);
                if w == 0.0 {
                    continue;
                }
                let l = logs[i] - logs[j];
                off += coeffs[j].conj() * (2.0 * (u * l).sin() / l * w);
            }
            acc += 2.0 * (coeffs[i] * off).re;
            acc
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    let q = q_max as f64;
    let bound = (n as f64 + u * q * q) * l2(coeffs);
    Ok(TrialReport {
        lhs,
        bound,
        ratio: lhs / bound,
        params: params(&[("Q", q), ("U", u), ("N", n as f64)]),
        seed,
    })
}

/// `trials` Gallagher trials with `Q` uniform in `[1, q_max]`, `N` in
/// `[1, n_max]`, `U` uniform in `(0, u_max]`.
pub fn gallagher_ensemble(trials: usize, seed: u64, q_max: u64, n_max: usize, u_max: f64) -> Result<EnsembleReport, SieveError> {
    if n_max == 0 || !(u_max > 0.0) {
        return Err(SieveError::Parameter {
            name: "N",
            value: n_max as f64,
        });
    }
    let reports: Result<Vec<TrialReport>, SieveError> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ts = trial_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(ts);
            let q = rng.gen_range(1..=q_max);
            let n = rng.gen_range(1..=n_max);
            let u = u_max * (1.0 - rng.gen::<f64>());
            let coeffs = random_coeffs(&mut rng, n);
            gallagher_trial(q, u, &coeffs, ts)
        })
        .collect();
    Ok(merge(
        params(&[("Q_max", q_max as f64), ("N_max", n_max as f64), ("U_max", u_max)]),
        reports?,
        None,
        seed,
    ))
}
