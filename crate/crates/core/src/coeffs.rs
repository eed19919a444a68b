//! Hecke-normalised GL(2) and GL(3) coefficient tables and their
//! Rankin–Selberg convolution.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::mobius;

/// Largest supported table size.
pub const MAX_TABLE_SIZE: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum CoeffError {
    #[error("table size {0} outside 1..=1000000")]
    TableSize(usize),
    #[error("index ({l}, {n}) outside the table (l*n <= {max})")]
    OutOfRange { l: u64, n: u64, max: usize },
    #[error("integer overflow in the q-expansion at index {0}")]
    Overflow(usize),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Smallest-prime-factor sieve on `0..=n`.
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn factor_with(spf: &[u32], mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        out.push((p, k));
    }
    out
}

/// `τ(1..=n_max)` from `Δ = q·(η³)^8`, `η³ = Σ_k (-1)^k (2k+1) q^{k(k+1)/2}`,
/// in exact `i128` arithmetic. Index 0 is unused.
pub fn ramanujan_tau(n_max: usize) -> Result<Vec<i128>, CoeffError> {
    if n_max == 0 || n_max > MAX_TABLE_SIZE {
        return Err(CoeffError::TableSize(n_max));
    }
    let len = n_max; // coefficients of q^0..q^{n_max-1}
    let mut eta3: Vec<(usize, i128)> = Vec::new();
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        eta3.push((k * (k + 1) / 2, sign * (2 * k as i128 + 1)));
        k += 1;
    }
    let mut acc = vec![0i128; len];
    for &(pos, c) in &eta3 {
        acc[pos] = c;
    }
    for _ in 1..8 {
        let mut next = vec![0i128; len];
        for &(pos, c) in &eta3 {
            for i in 0..len - pos {
                if acc[i] == 0 {
                    continue;
                }
                let prod = acc[i].checked_mul(c).ok_or(CoeffError::Overflow(i + pos))?;
                next[i + pos] = next[i + pos].checked_add(prod).ok_or(CoeffError::Overflow(i + pos))?;
            }
        }
        acc = next;
    }
    let mut tau = vec![0i128; n_max + 1];
    tau[1..=n_max].copy_from_slice(&acc[..n_max]);
    Ok(tau)
}

/// Provenance of a GL(2) table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gl2Source {
    /// `τ(n)/n^{11/2}` for the discriminant form.
    DeltaForm,
    /// Sato–Tate distributed `λ(p)`, seeded.
    RandomModel { seed: u64 },
}

/// Hecke eigenvalues `λ(1..=N)` of a GL(2) form.
#[derive(Debug, Clone)]
pub struct Gl2Table {
    lambda: Vec<f64>,
    source: Gl2Source,
}

impl Gl2Table {
    /// Fills all `n <= n_max` from `λ(p)` by the Hecke recursion on prime
    /// powers and multiplicativity.
    fn from_primes(n_max: usize, source: Gl2Source, mut at_prime: impl FnMut(usize) -> f64) -> Self {
        let spf = spf_sieve(n_max);
        let mut lambda = vec![0.0; n_max + 1];
        if n_max >= 1 {
            lambda[1] = 1.0;
        }
        for n in 2..=n_max {
            let p = spf[n] as usize;
            let mut m = n;
            let mut pk = 1;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            lambda[n] = if m > 1 {
                lambda[pk] * lambda[m]
            } else if pk == p {
                at_prime(p)
            } else {
                lambda[p] * lambda[pk / p] - if pk / p >= p { lambda[pk / (p * p)] } else { 0.0 }
            };
        }
        Self { lambda, source }
    }

    pub fn n_max(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn source(&self) -> Gl2Source {
        self.source
    }

    /// `λ(n)`, `None` outside `1..=N`.
    pub fn get(&self, n: u64) -> Option<f64> {
        let n = usize::try_from(n).ok()?;
        (n >= 1 && n < self.lambda.len()).then(|| self.lambda[n])
    }

    /// Primes `p <= p_max` with `|λ(p)| > 2` (soft Ramanujan check).
    pub fn ramanujan_violations(&self, p_max: usize) -> Vec<u64> {
        let top = p_max.min(self.n_max());
        let spf = spf_sieve(top);
        (2..=top)
            .filter(|&p| spf[p] as usize == p && self.lambda[p].abs() > 2.0 + 1e-12)
            .map(|p| p as u64)
            .collect()
    }
}

/// GL(2) table of the normalised discriminant form, `λ(n) = τ(n)/n^{11/2}`.
pub fn build_gl2_delta(n_max: usize) -> Result<Gl2Table, CoeffError> {
    let tau = ramanujan_tau(n_max)?;
    Ok(Gl2Table::from_primes(n_max, Gl2Source::DeltaForm, |p| {
        tau[p] as f64 / (p as f64).powf(5.5)
    }))
}

/// GL(2) table with `λ(p) = 2cos θ_p`, `θ_p` Sato–Tate distributed.
pub fn build_gl2_random(n_max: usize, seed: u64) -> Result<Gl2Table, CoeffError> {
    if n_max == 0 || n_max > MAX_TABLE_SIZE {
        return Err(CoeffError::TableSize(n_max));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Gl2Table::from_primes(n_max, Gl2Source::RandomModel { seed }, |_| loop {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        if rng.gen::<f64>() <= th.sin().powi(2) {
            break 2.0 * th.cos();
        }
    }))
}

/// Provenance of a GL(3) table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gl3Source {
    SymmetricSquare(Gl2Source),
    RandomModel { seed: u64 },
}

/// `A(m, n)` for `mn <= N`, with the per-prime Satake parameters.
#[derive(Debug, Clone)]
pub struct Gl3Table {
    n_max: usize,
    rows: Vec<Vec<Complex64>>,
    satake: Vec<(u64, [Complex64; 3])>,
    source: Gl3Source,
}

/// `h_0..=h_k` of three variables from the elementary symmetric functions.
fn complete_homogeneous(e: [Complex64; 3], k: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); k + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for i in 1..=k {
        let mut v = e[0] * h[i - 1];
        if i >= 2 {
            v -= e[1] * h[i - 2];
        }
        if i >= 3 {
            v += e[2] * h[i - 3];
        }
        h[i] = v;
    }
    h
}

/// Schur polynomial `s_{(a+b, a, 0)}` by Jacobi–Trudi on `h`.
fn schur_prime_power(h: &[Complex64], a: usize, b: usize) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let hh = |k: isize| if k < 0 { zero } else { h[k as usize] };
    let lam = [(a + b) as isize, a as isize, 0isize];
    let m = |i: usize, j: usize| hh(lam[i] - i as isize + j as isize);
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

impl Gl3Table {
    /// Builds the table from Satake parameters at each prime `p <= n_max`.
    /// Prime-power entries are Schur polynomials, so the table is constructed
    /// independently of the Hecke decomposition it is later checked against.
    fn from_satake(n_max: usize, source: Gl3Source, mut satake_at: impl FnMut(usize) -> [Complex64; 3]) -> Self {
        let spf = spf_sieve(n_max);
        let mut local: Vec<Option<Vec<Vec<Complex64>>>> = vec![None; n_max + 1];
        let mut satake = Vec::new();
        for p in 2..=n_max {
            if spf[p] as usize != p {
                continue;
            }
            let a = satake_at(p);
            satake.push((p as u64, a));
            let mut kmax = 0;
            let mut q = p;
            while q <= n_max {
                kmax += 1;
                q = q.saturating_mul(p);
            }
            let e = [a[0] + a[1] + a[2], a[0] * a[1] + a[0] * a[2] + a[1] * a[2], a[0] * a[1] * a[2]];
            let h = complete_homogeneous(e, 2 * kmax + 2);
            let mut tab = vec![vec![Complex64::new(0.0, 0.0); kmax + 1]; kmax + 1];
            for (i, row) in tab.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    if i + j <= kmax {
                        *v = schur_prime_power(&h, i, j);
                    }
                }
            }
            local[p] = Some(tab);
        }
        let mut rows = vec![Vec::new(); n_max + 1];
        for m in 1..=n_max {
            let fm = factor_with(&spf, m);
            let len = n_max / m;
            let mut row = vec![Complex64::new(0.0, 0.0); len + 1];
            for (n, slot) in row.iter_mut().enumerate().skip(1) {
                let fnn = factor_with(&spf, n);
                let mut v = Complex64::new(1.0, 0.0);
                let mut primes: Vec<usize> = fm.iter().map(|x| x.0).chain(fnn.iter().map(|x| x.0)).collect();
                primes.sort_unstable();
                primes.dedup();
                for p in primes {
                    let i = fm.iter().find(|x| x.0 == p).map_or(0, |x| x.1 as usize);
                    let j = fnn.iter().find(|x| x.0 == p).map_or(0, |x| x.1 as usize);
                    v *= local[p].as_ref().expect("prime table")[i][j];
                }
                *slot = v;
            }
            rows[m] = row;
        }
        Self {
            n_max,
            rows,
            satake,
            source,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn source(&self) -> Gl3Source {
        self.source
    }

    pub fn satake(&self) -> &[(u64, [Complex64; 3])] {
        &self.satake
    }

    /// `A(m, n)`, `None` unless `1 <= mn <= N`.
    pub fn get(&self, m: u64, n: u64) -> Option<Complex64> {
        let m = usize::try_from(m).ok()?;
        let n = usize::try_from(n).ok()?;
        if m == 0 || n == 0 || m > self.n_max {
            return None;
        }
        self.rows[m].get(n).copied().filter(|_| n <= self.n_max / m)
    }

    fn at(&self, m: u64, n: u64) -> Result<Complex64, CoeffError> {
        self.get(m, n).ok_or(CoeffError::OutOfRange {
            l: m,
            n,
            max: self.n_max,
        })
    }

    /// Iterates over `(m, n, A(m, n))` with `mn <= N`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(m, row)| row.iter().enumerate().skip(1).map(move |(n, &v)| (m as u64, n as u64, v)))
    }

    /// Writes `m,n,re,im` rows (header included).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CoeffError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["m", "n", "re", "im"])?;
        for (m, n, v) in self.entries() {
            w.serialize((m, n, v.re, v.im))?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Symmetric-square lift: Satake parameters `{α², 1, β²}` with
/// `α + β = λ(p)`, `αβ = 1`, so `e1 = e2 = λ(p)² - 1` and `e3 = 1`.
pub fn build_gl3_sym_square(gl2: &Gl2Table) -> Gl3Table {
    let lam = gl2.lambda.clone();
    Gl3Table::from_satake(gl2.n_max(), Gl3Source::SymmetricSquare(gl2.source()), |p| {
        // α² and β² are the roots of z² - (λ² - 2)z + 1.
        let s = lam[p] * lam[p] - 2.0;
        let disc = Complex64::new(s * s - 4.0, 0.0).sqrt();
        [(Complex64::new(s, 0.0) + disc) / 2.0, Complex64::new(1.0, 0.0), (Complex64::new(s, 0.0) - disc) / 2.0]
    })
}

/// Random multiplicative model: per prime, Satake parameters are the
/// eigenvalues of a Haar-random SU(3) matrix (Weyl density by rejection).
pub fn build_gl3_random(n_max: usize, seed: u64) -> Result<Gl3Table, CoeffError> {
    if n_max == 0 || n_max > MAX_TABLE_SIZE {
        return Err(CoeffError::TableSize(n_max));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Gl3Table::from_satake(n_max, Gl3Source::RandomModel { seed }, |_| loop {
        let t1: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let t2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = [Complex64::from_polar(1.0, t1), Complex64::from_polar(1.0, t2), Complex64::from_polar(1.0, -t1 - t2)];
        let vdm = ((a[0] - a[1]) * (a[0] - a[2]) * (a[1] - a[2])).norm_sqr();
        if rng.gen::<f64>() * 27.0 <= vdm {
            break a;
        }
    }))
}

/// `Σ_{d | (l, n)} μ(d) A(l/d, 1) A(1, n/d)`.
pub fn hecke_expand(gl3: &Gl3Table, l: u64, n: u64) -> Result<Complex64, CoeffError> {
    if l == 0 || n == 0 || (l as u128) * (n as u128) > gl3.n_max as u128 {
        return Err(CoeffError::OutOfRange { l, n, max: gl3.n_max });
    }
    let g = num_integer::gcd(l, n);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 1..=g {
        if !g.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        acc += gl3.at(l / d, 1)? * gl3.at(1, n / d)? * mu as f64;
    }
    Ok(acc)
}

/// `λ_{u×φ}(1..=N)`.
#[derive(Debug, Clone)]
pub struct RankinTable {
    values: Vec<Complex64>,
}

impl RankinTable {
    pub fn get(&self, n: u64) -> Option<Complex64> {
        let n = usize::try_from(n).ok()?;
        (n >= 1 && n < self.values.len()).then(|| self.values[n])
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// `λ_{u×φ}(N) = Σ_{m²n = N} λ(n) A(m, n)`.
pub fn rankin_coeffs(gl3: &Gl3Table, gl2: &Gl2Table, n_max: usize) -> Result<RankinTable, CoeffError> {
    if n_max > gl3.n_max || n_max > gl2.n_max() {
        return Err(CoeffError::OutOfRange {
            l: 1,
            n: n_max as u64,
            max: gl3.n_max.min(gl2.n_max()),
        });
    }
    let mut values = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let mut m = 1usize;
    while m * m <= n_max {
        for n in 1..=n_max / (m * m) {
            values[m * m * n] += gl3.at(m as u64, n as u64)? * gl2.lambda[n];
        }
        m += 1;
    }
    Ok(RankinTable { values })
}

/// `(Σ_{ln <= x} |A(l, n)|², that sum / x^{1.05})`.
pub fn coefficient_mean_square(gl3: &Gl3Table, x: f64) -> Result<(f64, f64), CoeffError> {
    if !(x >= 1.0) || x > gl3.n_max as f64 {
        return Err(CoeffError::OutOfRange {
            l: 1,
            n: x as u64,
            max: gl3.n_max,
        });
    }
    let top = x.floor() as usize;
    let mut sum = 0.0;
    for l in 1..=top {
        for n in 1..=top / l {
            sum += gl3.rows[l][n].norm_sqr();
        }
    }
    Ok((sum, sum / x.powf(1.05)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // τ by the recurrence n·a_n = -24 Σ_{k=1}^{n} σ(k) a_{n-k} for
    // Π(1-q^n)^24, independent of the η³ route.
    fn tau_oracle(n_max: usize) -> Vec<i128> {
        let sigma: Vec<i128> = (0..=n_max)
            .map(|k| if k == 0 { 0 } else { (1..=k).filter(|d| k % d == 0).map(|d| d as i128).sum() })
            .collect();
        let mut a = vec![0i128; n_max];
        a[0] = 1;
        for n in 1..n_max {
            let s: i128 = (1..=n).map(|k| sigma[k] * a[n - k]).sum();
            a[n] = -24 * s / n as i128;
        }
        let mut tau = vec![0i128; n_max + 1];
        tau[1..].copy_from_slice(&a);
        tau
    }

    #[test]
    fn tau_matches_recurrence_oracle() {
        let t = ramanujan_tau(400).unwrap();
        assert_eq!(&t[1..6], &[1, -24, 252, -1472, 4830]);
        assert_eq!(t, tau_oracle(400));
    }

    #[test]
    fn delta_table_examples() {
        let g = build_gl2_delta(2000).unwrap();
        assert_eq!(g.get(1), Some(1.0));
        assert!((g.get(2).unwrap() + 24.0 / 2f64.powf(5.5)).abs() < 1e-15);
        assert!((g.get(2).unwrap() - (-0.530_330)).abs() < 1e-6);
        assert!((g.get(4).unwrap() - (g.get(2).unwrap().powi(2) - 1.0)).abs() < 1e-15);
        let tau = ramanujan_tau(2000).unwrap();
        for n in 1..=2000u64 {
            let direct = tau[n as usize] as f64 / (n as f64).powf(5.5);
            assert!((g.get(n).unwrap() - direct).abs() < 1e-12, "n = {n}");
        }
        assert!(g.ramanujan_violations(2000).is_empty());
    }

    #[test]
    fn hecke_recursion_is_exact() {
        for g in [build_gl2_delta(3000).unwrap(), build_gl2_random(3000, 7).unwrap()] {
            for p in [2u64, 3, 5, 7, 11, 13] {
                let lp = g.get(p).unwrap();
                let mut pk = p;
                while pk * p <= 3000 {
                    let prev = if pk == p { 1.0 } else { g.get(pk / p).unwrap() };
                    assert_eq!(g.get(pk * p).unwrap(), lp * g.get(pk).unwrap() - prev);
                    pk *= p;
                }
            }
        }
    }

    #[test]
    fn sym_square_examples() {
        let g = build_gl2_delta(1000).unwrap();
        let a = build_gl3_sym_square(&g);
        assert_eq!(a.get(1, 1), Some(Complex64::new(1.0, 0.0)));
        let l2 = g.get(2).unwrap();
        assert!((a.get(1, 2).unwrap().re - (l2 * l2 - 1.0)).abs() < 1e-14);
        assert!((a.get(1, 2).unwrap().re + 0.718_75).abs() < 1e-12);
        for (m, n, v) in a.entries() {
            assert!(v.im.abs() < 1e-9 * v.norm().max(1.0), "({m},{n})");
            assert!((a.get(n, m).unwrap() - v.conj()).norm() < 1e-10 * v.norm().max(1.0));
        }
    }

    #[test]
    fn hecke_decomposition_on_both_instances() {
        let g = build_gl2_delta(10_000).unwrap();
        for t in [build_gl3_sym_square(&g), build_gl3_random(10_000, 11).unwrap()] {
            for (l, n, v) in t.entries() {
                let e = hecke_expand(&t, l, n).unwrap();
                assert!((e - v).norm() <= 1e-10 * v.norm().max(1.0), "({l},{n}): {e} vs {v}");
            }
            let (a2, b2) = (t.get(2, 1).unwrap(), t.get(1, 2).unwrap());
            assert!((hecke_expand(&t, 2, 2).unwrap() - (a2 * b2 - 1.0)).norm() < 1e-12);
            assert!(hecke_expand(&t, 101, 100).is_err());
        }
    }

    #[test]
    fn random_model_is_dual_symmetric_and_complex() {
        let t = build_gl3_random(500, 3).unwrap();
        let mut complex_seen = false;
        for (m, n, v) in t.entries() {
            complex_seen |= v.im.abs() > 1e-3;
            assert!((t.get(n, m).unwrap() - v.conj()).norm() < 1e-10 * v.norm().max(1.0));
        }
        assert!(complex_seen);
        for (_, a) in t.satake() {
            assert!((a[0] * a[1] * a[2] - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn rankin_examples() {
        let g = build_gl2_delta(200).unwrap();
        let a = build_gl3_sym_square(&g);
        let r = rankin_coeffs(&a, &g, 200).unwrap();
        assert_eq!(r.get(1), Some(Complex64::new(1.0, 0.0)));
        let n4 = a.get(1, 4).unwrap() * g.get(4).unwrap() + a.get(2, 1).unwrap();
        assert!((r.get(4).unwrap() - n4).norm() < 1e-14);
        for p in [2u64, 3, 5, 97, 199] {
            assert!((r.get(p).unwrap() - a.get(1, p).unwrap() * g.get(p).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn mean_square_growth() {
        let g = build_gl2_delta(10_000).unwrap();
        for t in [build_gl3_sym_square(&g), build_gl3_random(10_000, 5).unwrap()] {
            assert_eq!(coefficient_mean_square(&t, 1.0).unwrap().0, 1.0);
            let (_, r3) = coefficient_mean_square(&t, 1e3).unwrap();
            let (_, r4) = coefficient_mean_square(&t, 1e4).unwrap();
            assert!(r4 <= 2.0 * r3, "{r3} -> {r4}");
        }
    }

    #[test]
    fn csv_export() {
        let g = build_gl2_delta(10).unwrap();
        let a = build_gl3_sym_square(&g);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("m,n,re,im"));
        assert_eq!(lines.next(), Some("1,1,1.0,0.0"));
        assert_eq!(text.lines().count(), 1 + a.entries().count());
    }

    #[test]
    fn table_size_is_validated() {
        assert!(build_gl2_delta(0).is_err());
        assert!(build_gl3_random(MAX_TABLE_SIZE + 1, 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gl2_multiplicative(m in 1u64..60, n in 1u64..60) {
            prop_assume!(num_integer::gcd(m, n) == 1);
            let g = build_gl2_delta(3600).unwrap();
            let lhs = g.get(m * n).unwrap();
            let rhs = g.get(m).unwrap() * g.get(n).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }
}
