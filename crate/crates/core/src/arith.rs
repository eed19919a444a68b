//! Complete exponential sums over residues, their exact identities, and
//! Dirichlet characters.
//!
//! Every term of every sum is a root of unity `e(k/c)` whose numerator is
//! reduced modulo `c` in integer arithmetic before any trig call, so rounding
//! error grows at most linearly in the number of terms.

use std::sync::Arc;

use num_complex::Complex;
use num_integer::Integer;
use thiserror::Error;

use crate::scalar::{root_of_unity, Real};

/// Largest modulus accepted by [`dirichlet_characters`].
pub const MAX_CHARACTER_MODULUS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("moduli {u} and {v} are not coprime")]
    NotCoprime { u: u64, v: u64 },
    #[error("r = {r} has a prime factor {p} not dividing b = {b}")]
    InadmissibleTwist { r: u64, b: u64, p: u64 },
    #[error("character modulus {q} exceeds the configured bound {max}")]
    ModulusTooLarge { q: u64, max: u64 },
}

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        let v = (value as i128).rem_euclid(modulus as i128) as u64;
        Ok(Self { value: v, modulus })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Multiplicative inverse, if the residue is a unit.
    pub fn inverse(&self) -> Option<Self> {
        mod_inverse(self.value as i64, self.modulus).map(|value| Self {
            value,
            modulus: self.modulus,
        })
    }
}

/// Value of a complete exponential sum together with its modulus and the
/// number of unit-modulus terms that were summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSumValue<S> {
    pub re: S,
    pub im: S,
    pub modulus: u64,
    pub term_count: u64,
}

impl<S: Real> ExactSumValue<S> {
    pub fn value(&self) -> Complex<S> {
        Complex::new(self.re, self.im)
    }

    pub fn norm(&self) -> S {
        self.value().norm()
    }
}

// ---------------------------------------------------------------------------
// Elementary number theory on machine integers.

/// Inverse of `a` modulo `m`, or `None` when `gcd(a, m) != 1`.
/// Modulo 1 every integer is invertible with inverse 0.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m = m as i128;
    let a = (a as i128).rem_euclid(m);
    let eg = a.extended_gcd(&m);
    if eg.gcd != 1 {
        return None;
    }
    Some(eg.x.rem_euclid(m) as u64)
}

/// Prime factorization as `(p, k)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

// ---------------------------------------------------------------------------
// Exponential sums.

/// Kloosterman sum `S(m, n; c) = Σ_{h mod c, (h,c)=1} e((h m + h̄ n)/c)`.
///
/// For `c = 1` the sum is the single term `h = 0` with value 1.
pub fn kloosterman_sum<S: Real>(m: i64, n: i64, c: u64) -> ExactSumValue<S> {
    assert!(c >= 1, "modulus must be positive");
    let ci = c as i128;
    let m = (m as i128).rem_euclid(ci);
    let n = (n as i128).rem_euclid(ci);
    let mut acc = Complex::new(S::zero(), S::zero());
    let mut count = 0u64;
    for h in 0..c {
        let Some(hbar) = mod_inverse(h as i64, c) else {
            continue;
        };
        let k = (h as i128 * m + hbar as i128 * n) % ci;
        acc += root_of_unity::<S>(k, c);
        count += 1;
    }
    ExactSumValue {
        re: acc.re,
        im: acc.im,
        modulus: c,
        term_count: count,
    }
}

/// Ramanujan sum `S(0, n; s)`, returned as its (exactly real) value.
pub fn ramanujan_sum<S: Real>(n: i64, s: u64) -> S {
    kloosterman_sum::<S>(0, n, s).re
}

/// Both sides of the twisted-Kloosterman decomposition
///
/// `S(m,n;c) e(-(m+n)/c) = Σ_{ab=c} Σ_{x mod b, (x(x+a),b)=1} e((x̄ m - \overline{(x+a)} n)/b)`.
///
/// The inner sum for `b = 1` is the single term 1.
pub fn twist_decomposition_check<S: Real>(m: i64, n: i64, c: u64) -> (Complex<S>, Complex<S>) {
    let k = kloosterman_sum::<S>(m, n, c).value();
    let lhs = k * root_of_unity::<S>(-((m as i128) + (n as i128)), c);
    let mut rhs = Complex::new(S::zero(), S::zero());
    for a in divisors(c) {
        let b = c / a;
        let bi = b as i128;
        for x in 0..b {
            let Some(xbar) = mod_inverse(x as i64, b) else {
                continue;
            };
            let Some(yb) = mod_inverse((x + a % b) as i64, b) else {
                continue;
            };
            let num = (xbar as i128 * (m as i128)).rem_euclid(bi) - (yb as i128 * (n as i128)).rem_euclid(bi);
            rhs += root_of_unity::<S>(num, b);
        }
    }
    (lhs, rhs)
}

/// `S(m,n;uv)` computed directly and through the twisted multiplicativity
/// `S(m v̄, n v̄; u) S(m ū, n ū; v)`.
pub fn kloosterman_multiplicativity_check<S: Real>(
    m: i64,
    n: i64,
    u: u64,
    v: u64,
) -> Result<(Complex<S>, Complex<S>), ArithError> {
    if u == 0 || v == 0 {
        return Err(ArithError::ZeroModulus);
    }
    let (Some(vbar), Some(ubar)) = (mod_inverse(v as i64, u), mod_inverse(u as i64, v)) else {
        return Err(ArithError::NotCoprime { u, v });
    };
    let direct = kloosterman_sum::<S>(m, n, u * v).value();
    let mu = |x: i64, inv: u64, md: u64| ((x as i128).rem_euclid(md as i128) * inv as i128 % md as i128) as i64;
    let f1 = kloosterman_sum::<S>(mu(m, vbar, u), mu(n, vbar, u), u).value();
    let f2 = kloosterman_sum::<S>(mu(m, ubar, v), mu(n, ubar, v), v).value();
    Ok((direct, f1 * f2))
}

fn check_admissible(b: u64, r: u64) -> Result<(), ArithError> {
    if b == 0 || r == 0 {
        return Err(ArithError::ZeroModulus);
    }
    for (p, _) in factorize(r) {
        if !b.is_multiple_of(p) {
            return Err(ArithError::InadmissibleTwist { r, b, p });
        }
    }
    Ok(())
}

/// Both sides of the Kloosterman average identity
///
/// `Σ_{x mod b} |Σ_m c_m S(rx, m; br)|² = b r² Σ*_{y mod b} |Σ_{r|m} c_m e(y (m/r)/b)|²`,
///
/// valid when every prime factor of `r` divides `b`.
pub fn kloosterman_average_identity<S: Real>(
    b: u64,
    r: u64,
    coeffs: &[(i64, Complex<S>)],
) -> Result<(S, S), ArithError> {
    check_admissible(b, r)?;
    let c = b * r;
    // S(rx, m; br) only depends on m mod br.
    let mut lhs = S::zero();
    for x in 0..b {
        let mut table: Vec<Option<Complex<S>>> = vec![None; c as usize];
        let mut inner = Complex::new(S::zero(), S::zero());
        for &(m, cm) in coeffs {
            let idx = (m as i128).rem_euclid(c as i128) as usize;
            let s = *table[idx].get_or_insert_with(|| kloosterman_sum::<S>((r * x) as i64, m, c).value());
            inner += cm * s;
        }
        lhs += inner.norm_sqr();
    }
    let mut rhs = S::zero();
    for y in 0..b {
        if y.gcd(&b) != 1 {
            continue;
        }
        let mut inner = Complex::new(S::zero(), S::zero());
        for &(m, cm) in coeffs {
            if m % r as i64 != 0 {
                continue;
            }
            let mr = m / r as i64;
            inner += cm * root_of_unity::<S>(y as i128 * mr as i128, b);
        }
        rhs += inner.norm_sqr();
    }
    let scale = S::from_u64(b * r * r).expect("scale fits");
    Ok((lhs, scale * rhs))
}

/// Both sides of the Cauchy bound
/// `|Σ_l b_l S(0,l;s)|² <= s Σ*_{h mod s} |Σ_l b_l e(hl/s)|²`.
pub fn ramanujan_cauchy_check<S: Real>(s: u64, coeffs: &[(i64, Complex<S>)]) -> Result<(S, S), ArithError> {
    if s == 0 {
        return Err(ArithError::ZeroModulus);
    }
    let mut lin = Complex::new(S::zero(), S::zero());
    for &(l, bl) in coeffs {
        lin += bl * ramanujan_sum::<S>(l, s);
    }
    let mut rhs = S::zero();
    for h in 0..s {
        if h.gcd(&s) != 1 && s != 1 {
            continue;
        }
        let mut inner = Complex::new(S::zero(), S::zero());
        for &(l, bl) in coeffs {
            inner += bl * root_of_unity::<S>(h as i128 * l as i128, s);
        }
        rhs += inner.norm_sqr();
    }
    Ok((lin.norm_sqr(), S::from_u64(s).expect("fits") * rhs))
}

// ---------------------------------------------------------------------------
// Dirichlet characters.

/// One cyclic factor of `(Z/q)^*`: a generator `gen` of order `order`,
/// with discrete logs tabulated on the prime-power component `modulus`.
#[derive(Debug, Clone)]
struct CyclicFactor {
    prime: u64,
    modulus: u64,
    order: u64,
    /// `dlog[n mod modulus]` for units, `u64::MAX` otherwise.
    dlog: Vec<u64>,
    /// For the 2-adic `{-1, 5}` pair: which of the two this is.
    kind: FactorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FactorKind {
    OddCyclic,
    TwoMinusOne,
    TwoFive,
}

/// Shared structure of the character group mod `q`.
#[derive(Debug)]
struct CharacterGroup {
    q: u64,
    factors: Vec<CyclicFactor>,
    exponent: u64,
}

fn primitive_root_prime_power(p: u64, pk: u64) -> u64 {
    let phi = pk / p * (p - 1);
    let primes: Vec<u64> = factorize(phi).into_iter().map(|(l, _)| l).collect();
    (2..pk)
        .find(|&g| g % p != 0 && primes.iter().all(|&l| pow_mod(g, phi / l, pk) != 1))
        .expect("odd prime powers are cyclic")
}

impl CharacterGroup {
    fn new(q: u64) -> Self {
        let mut factors = Vec::new();
        for (p, k) in factorize(q) {
            let pk = p.pow(k);
            if p == 2 {
                if k >= 2 {
                    let mut dlog = vec![u64::MAX; pk as usize];
                    for n in (1..pk).step_by(2) {
                        dlog[n as usize] = if n % 4 == 1 { 0 } else { 1 };
                    }
                    factors.push(CyclicFactor {
                        prime: 2,
                        modulus: pk,
                        order: 2,
                        dlog,
                        kind: FactorKind::TwoMinusOne,
                    });
                }
                if k >= 3 {
                    let order = pk / 4;
                    let mut dlog = vec![u64::MAX; pk as usize];
                    let mut x = 1u64;
                    for j in 0..order {
                        dlog[x as usize] = j;
                        dlog[(pk - x) as usize] = j;
                        x = x * 5 % pk;
                    }
                    factors.push(CyclicFactor {
                        prime: 2,
                        modulus: pk,
                        order,
                        dlog,
                        kind: FactorKind::TwoFive,
                    });
                }
            } else {
                let g = primitive_root_prime_power(p, pk);
                let order = pk / p * (p - 1);
                let mut dlog = vec![u64::MAX; pk as usize];
                let mut x = 1u64;
                for j in 0..order {
                    dlog[x as usize] = j;
                    x = x * g % pk;
                }
                factors.push(CyclicFactor {
                    prime: p,
                    modulus: pk,
                    order,
                    dlog,
                    kind: FactorKind::OddCyclic,
                });
            }
        }
        let exponent = factors.iter().fold(1u64, |acc, f| acc.lcm(&f.order));
        Self { q, factors, exponent }
    }
}

/// A Dirichlet character mod `q`, stored as an exponent vector on the fixed
/// generators of the cyclic factors of `(Z/q)^*`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
    conductor: u64,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.q
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.q && self.group.q != 2
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Exponent `L` of the group; values are `e(k/L)` for integer `k`.
    pub fn value_denominator(&self) -> u64 {
        self.group.exponent
    }

    /// `Some(k)` with `χ(n) = e(k/L)`, or `None` when `gcd(n, q) > 1`.
    pub fn value_numerator(&self, n: i64) -> Option<u64> {
        let q = self.group.q;
        let l = self.group.exponent;
        let nr = (n as i128).rem_euclid(q as i128) as u64;
        if q == 1 {
            return Some(0);
        }
        if nr.gcd(&q) != 1 {
            return None;
        }
        let mut k: u128 = 0;
        for (f, &e) in self.group.factors.iter().zip(&self.exponents) {
            let d = f.dlog[(nr % f.modulus) as usize] as u128;
            k += d * e as u128 * (l / f.order) as u128;
        }
        Some((k % l as u128) as u64)
    }

    pub fn eval<S: Real>(&self, n: i64) -> Complex<S> {
        match self.value_numerator(n) {
            None => Complex::new(S::zero(), S::zero()),
            Some(k) => root_of_unity(k as i128, self.group.exponent),
        }
    }
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn conductor_of(group: &CharacterGroup, exps: &[u64]) -> u64 {
    let mut cond = 1u64;
    let mut two_minus = 0u64;
    let mut two_five_order = 1u64;
    let mut saw_two = false;
    for (f, &e) in group.factors.iter().zip(exps) {
        let ord = f.order / e.gcd(&f.order);
        match f.kind {
            FactorKind::OddCyclic => {
                if ord > 1 {
                    cond *= f.prime.pow(1 + valuation(ord, f.prime));
                }
            }
            FactorKind::TwoMinusOne => {
                saw_two = true;
                two_minus = e;
            }
            FactorKind::TwoFive => {
                saw_two = true;
                two_five_order = ord;
            }
        }
    }
    if saw_two {
        if two_five_order > 1 {
            cond *= 1 << (2 + valuation(two_five_order, 2));
        } else if two_minus == 1 {
            cond *= 4;
        }
    }
    cond
}

/// All `φ(q)` Dirichlet characters mod `q`, principal character first.
pub fn dirichlet_characters(q: u64) -> Result<Vec<DirichletCharacter>, ArithError> {
    if q == 0 {
        return Err(ArithError::ZeroModulus);
    }
    if q > MAX_CHARACTER_MODULUS {
        return Err(ArithError::ModulusTooLarge {
            q,
            max: MAX_CHARACTER_MODULUS,
        });
    }
    let group = Arc::new(CharacterGroup::new(q));
    let orders: Vec<u64> = group.factors.iter().map(|f| f.order).collect();
    let total: u64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut exps = vec![0u64; orders.len()];
    for _ in 0..total {
        let conductor = conductor_of(&group, &exps);
        out.push(DirichletCharacter {
            group: Arc::clone(&group),
            exponents: exps.clone(),
            conductor,
        });
        for (e, &o) in exps.iter_mut().zip(&orders) {
            *e += 1;
            if *e < o {
                break;
            }
            *e = 0;
        }
    }
    Ok(out)
}

/// Primitive characters mod `q` (empty for `q = 2`).
pub fn primitive_characters(q: u64) -> Result<Vec<DirichletCharacter>, ArithError> {
    Ok(dirichlet_characters(q)?.into_iter().filter(|c| c.is_primitive()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_kloosterman(m: i64, n: i64, c: u64) -> Complex<f64> {
        // Brute force with explicit inverse search and unreduced float phases.
        let mut acc = Complex::new(0.0, 0.0);
        for h in 0..c {
            if h.gcd(&c) != 1 && c != 1 {
                continue;
            }
            let hbar = if c == 1 { 0 } else { (1..c).find(|x| (x * h) % c == 1).unwrap() };
            let phase = (h as f64 * m as f64 + hbar as f64 * n as f64) / c as f64;
            acc += Complex::from_polar(1.0, std::f64::consts::TAU * phase);
        }
        acc
    }

    #[test]
    fn kloosterman_small_values() {
        let k: ExactSumValue<f64> = kloosterman_sum(1, 1, 2);
        assert!((k.value() - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let k: ExactSumValue<f64> = kloosterman_sum(1, 1, 3);
        assert!((k.value() - Complex::new(-1.0, 0.0)).norm() < 1e-14);
        for c in 1..30u64 {
            let k: ExactSumValue<f64> = kloosterman_sum(0, 0, c);
            assert_eq!(k.term_count, totient(c));
            assert!((k.re - totient(c) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn kloosterman_matches_brute_force() {
        for c in 1..25u64 {
            for m in -3..7i64 {
                for n in 0..5i64 {
                    let k: ExactSumValue<f64> = kloosterman_sum(m, n, c);
                    assert!((k.value() - direct_kloosterman(m, n, c)).norm() < 1e-11);
                    assert!(k.norm() <= k.term_count as f64 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn kloosterman_in_f32() {
        let k: ExactSumValue<f32> = kloosterman_sum(3, 7, 17);
        let d = direct_kloosterman(3, 7, 17);
        assert!((k.re as f64 - d.re).abs() < 1e-4);
        assert!(k.im.abs() < 1e-4);
    }

    #[test]
    fn ramanujan_examples() {
        assert!(ramanujan_sum::<f64>(1, 4).abs() < 1e-14);
        assert!((ramanujan_sum::<f64>(17, 1) - 1.0).abs() < 1e-14);
        assert!((ramanujan_sum::<f64>(6, 3) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn twist_examples() {
        let (l, r) = twist_decomposition_check::<f64>(1, 1, 1);
        assert!((l - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!((r - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let (l, r) = twist_decomposition_check::<f64>(1, 1, 2);
        assert!((l - Complex::new(1.0, 0.0)).norm() < 1e-14);
        assert!((r - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let (l, r) = twist_decomposition_check::<f64>(3, 5, 12);
        assert!((l - r).norm() < 1e-12);
        // Independent brute force for the left side.
        let expect = direct_kloosterman(3, 5, 12) * Complex::from_polar(1.0, -std::f64::consts::TAU * 8.0 / 12.0);
        assert!((l - expect).norm() < 1e-12);
    }

    #[test]
    fn multiplicativity_examples() {
        let (d, f) = kloosterman_multiplicativity_check::<f64>(1, 1, 2, 3).unwrap();
        assert!((d - direct_kloosterman(1, 1, 6)).norm() < 1e-12);
        assert!((d - f).norm() < 1e-12);
        let (d, f) = kloosterman_multiplicativity_check::<f64>(0, 0, 4, 9).unwrap();
        assert!((d.re - 12.0).abs() < 1e-12 && (f.re - 12.0).abs() < 1e-12);
        let (d, f) = kloosterman_multiplicativity_check::<f64>(1, 4, 3, 5).unwrap();
        assert!((d - f).norm() <= 1e-9 * d.norm().max(1.0));
        assert_eq!(
            kloosterman_multiplicativity_check::<f64>(1, 1, 4, 6),
            Err(ArithError::NotCoprime { u: 4, v: 6 })
        );
    }

    #[test]
    fn average_identity_examples() {
        let (l, r) = kloosterman_average_identity::<f64>(3, 1, &[(1, Complex::new(1.0, 0.0))]).unwrap();
        assert!((l - 6.0).abs() < 1e-12 && (r - 6.0).abs() < 1e-12);
        let coeffs: Vec<(i64, Complex<f64>)> = (1..=8)
            .map(|m| (m, Complex::new((m as f64 * 0.7).sin(), (m as f64 * 1.3).cos())))
            .collect();
        let (l, r) = kloosterman_average_identity::<f64>(2, 2, &coeffs).unwrap();
        assert!((l - r).abs() <= 1e-10 * l.abs().max(1.0));
        let (l, r) = kloosterman_average_identity::<f64>(7, 1, &[(3, Complex::new(0.0, 0.0))]).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        assert!(matches!(
            kloosterman_average_identity::<f64>(4, 3, &coeffs),
            Err(ArithError::InadmissibleTwist { p: 3, .. })
        ));
    }

    #[test]
    fn cauchy_examples() {
        let coeffs = [(2, Complex::new(1.0, 2.0)), (5, Complex::new(-0.5, 0.0))];
        let (l, r) = ramanujan_cauchy_check::<f64>(1, &coeffs).unwrap();
        let s = coeffs.iter().map(|c| c.1).sum::<Complex<f64>>().norm_sqr();
        assert!((l - s).abs() < 1e-12 && (r - s).abs() < 1e-12);
        let (l, r) = ramanujan_cauchy_check::<f64>(6, &[(6, Complex::new(1.0, 0.0))]).unwrap();
        assert!((l - 4.0).abs() < 1e-12);
        assert!(l <= r * (1.0 + 1e-10));
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(36), 12);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(5, 1), Some(0));
        let r = Residue::new(-3, 7).unwrap();
        assert_eq!(r.value(), 4);
        assert_eq!(r.inverse().unwrap().value(), 2);
        assert!(Residue::new(1, 0).is_err());
    }

    #[test]
    fn character_examples() {
        let c1 = dirichlet_characters(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert!(c1[0].is_primitive());
        assert_eq!(c1[0].eval::<f64>(5), Complex::new(1.0, 0.0));
        let c3 = dirichlet_characters(3).unwrap();
        assert_eq!(c3.len(), 2);
        let v = c3[1].eval::<f64>(2);
        assert!((v - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(primitive_characters(2).unwrap().is_empty());
        assert!(matches!(dirichlet_characters(10_001), Err(ArithError::ModulusTooLarge { .. })));
    }

    fn imprimitive_by_brute_force(chi: &DirichletCharacter) -> bool {
        // χ is induced from modulus d iff χ(n) = 1 for every unit n ≡ 1 mod d.
        let q = chi.modulus();
        divisors(q).into_iter().filter(|&d| d < q).any(|d| {
            (1..=q as i64)
                .filter(|&n| (n as u64).gcd(&q) == 1 && (n as u64) % d == 1 % d)
                .all(|n| chi.value_numerator(n) == Some(0))
        })
    }

    #[test]
    fn primitivity_matches_brute_force() {
        for q in 1..=64u64 {
            let chars = dirichlet_characters(q).unwrap();
            assert_eq!(chars.len() as u64, totient(q));
            for chi in &chars {
                assert_eq!(chi.is_primitive(), !imprimitive_by_brute_force(chi), "q = {q}, exps {:?}", chi.exponents());
            }
        }
    }

    #[test]
    fn primitive_counts_match_mobius_convolution() {
        // #primitive(q) = Σ_{d|q} μ(q/d) φ(d).
        for q in 1..=300u64 {
            let expect: i64 = divisors(q).into_iter().map(|d| mobius(q / d) * totient(d) as i64).sum();
            assert_eq!(primitive_characters(q).unwrap().len() as i64, expect, "q = {q}");
        }
    }
}
