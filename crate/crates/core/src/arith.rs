//! Integer utilities and the residue symbols: Legendre, Jacobi, the rational
//! quartic symbol and the quartic symbol at 8.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{arg_err, Result};

/// Value of a residue symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Minus,
    Zero,
    Plus,
}

impl Symbol {
    pub fn value(self) -> i32 {
        match self {
            Symbol::Minus => -1,
            Symbol::Zero => 0,
            Symbol::Plus => 1,
        }
    }

    pub fn from_sign(v: i32) -> Symbol {
        match v.signum() {
            1 => Symbol::Plus,
            -1 => Symbol::Minus,
            _ => Symbol::Zero,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Symbol::Plus
    }
}

impl std::ops::Mul for Symbol {
    type Output = Symbol;
    fn mul(self, rhs: Symbol) -> Symbol {
        Symbol::from_sign(self.value() * rhs.value())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Minus => "-1",
            Symbol::Zero => "0",
            Symbol::Plus => "+1",
        })
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Witness bases that make Miller–Rabin deterministic below 3.3·10²⁴.
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Primality test. Exact below 3.3·10²⁴; a strong probable-prime test above.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &b in MR_BASES.iter() {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in MR_BASES.iter() {
        let b = b as u64;
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &b in MR_BASES.iter() {
        let mut x = mod_pow_u64(b as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv_u64(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Prime factorization by trial division; intended for `n < 10¹²`.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
        if n > 1 && is_prime_u64(n) {
            break;
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree_u64(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .iter()
        .fold(n.max(1), |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// True when `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree_u64(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree_u64(q.unsigned_abs())
        }
        _ => false,
    }
}

fn require_odd_prime(p: &BigInt, what: &str) -> Result<()> {
    if p <= &BigInt::from(2) || !is_prime(p) {
        return arg_err(format!("{what} must be an odd prime, got {p}"));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: impl Into<BigInt>, p: impl Into<BigInt>) -> Result<Symbol> {
    let (a, p) = (a.into(), p.into());
    require_odd_prime(&p, "legendre modulus")?;
    let r = a.mod_floor(&p);
    if r.is_zero() {
        return Ok(Symbol::Zero);
    }
    let e = (&p - 1u32) >> 1;
    Ok(if r.modpow(&e, &p).is_one() {
        Symbol::Plus
    } else {
        Symbol::Minus
    })
}

/// Jacobi symbol `(a/n)` for odd positive `n`, by reciprocity.
pub fn jacobi(a: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Symbol> {
    let (a, n) = (a.into(), n.into());
    if !n.is_positive() || n.is_even() {
        return arg_err(format!("jacobi modulus must be odd and positive, got {n}"));
    }
    let mut a = a.mod_floor(&n);
    let mut n = n;
    let mut sign = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            sign = -sign;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { Symbol::from_sign(sign) } else { Symbol::Zero })
}

/// Rational quartic residue symbol `(q/p)_4 = q^((p-1)/4) mod p`.
///
/// Only defined when `p ≡ 1 (mod 4)` and `q` is a nonzero quadratic residue
/// modulo `p`; anything else is rejected.
pub fn quartic_symbol(q: impl Into<BigInt>, p: impl Into<BigInt>) -> Result<Symbol> {
    let (q, p) = (q.into(), p.into());
    require_odd_prime(&p, "quartic symbol modulus")?;
    if (&p % 4u32) != BigInt::one() {
        return arg_err(format!("quartic symbol needs p ≡ 1 (mod 4), got {p}"));
    }
    match legendre(q.clone(), p.clone())? {
        Symbol::Plus => {}
        Symbol::Zero => return arg_err(format!("{q} is divisible by {p}")),
        Symbol::Minus => {
            return arg_err(format!("{q} is not a quadratic residue mod {p}; (q/p)_4 undefined"))
        }
    }
    let e = (&p - 1u32) >> 2;
    let r = q.mod_floor(&p).modpow(&e, &p);
    if r.is_one() {
        Ok(Symbol::Plus)
    } else if r == &p - 1u32 {
        Ok(Symbol::Minus)
    } else {
        unreachable!("q^((p-1)/4) must be ±1 for a quadratic residue q")
    }
}

/// The symbol `(q/8)_4 = (-1)^((q-1)/8)` for primes `q ≡ 1 (mod 8)`.
pub fn octic_symbol_at_8(q: impl Into<BigInt>) -> Result<Symbol> {
    let q = q.into();
    if (&q % 8u32) != BigInt::one() || !is_prime(&q) {
        return arg_err(format!("(q/8)_4 needs a prime q ≡ 1 (mod 8), got {q}"));
    }
    let k: BigInt = (&q - 1u32) >> 3;
    Ok(if k.is_even() { Symbol::Plus } else { Symbol::Minus })
}

/// Integer square root, returning `Some(r)` only when `n = r²`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_legendre(a: i64, p: i64) -> i32 {
        let r = a.rem_euclid(p);
        if r == 0 {
            0
        } else if (1..p).any(|x| (x * x) % p == r) {
            1
        } else {
            -1
        }
    }

    fn small_primes(bound: u64) -> Vec<u64> {
        (2..bound).filter(|&n| is_prime_u64(n)).collect()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 7).unwrap(), Symbol::Plus);
        assert_eq!(legendre(7, 7).unwrap(), Symbol::Zero);
        assert_eq!(legendre(13, 17).unwrap(), Symbol::Plus);
        assert!(legendre(3, 9).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 15).unwrap(), Symbol::Plus);
        assert_eq!(jacobi(1, 9).unwrap(), Symbol::Plus);
        assert_eq!(jacobi(5, 21).unwrap(), Symbol::Plus);
        assert!(jacobi(1, 10).is_err());
        assert!(jacobi(1, 0).is_err());
    }

    #[test]
    fn quartic_examples() {
        assert_eq!(quartic_symbol(13, 17).unwrap(), Symbol::Plus);
        assert_eq!(quartic_symbol(17, 13).unwrap(), Symbol::Minus);
        assert_eq!(quartic_symbol(1, 5).unwrap(), Symbol::Plus);
        // 2 is a non-residue mod 13
        assert!(quartic_symbol(2, 13).is_err());
        assert!(quartic_symbol(2, 7).is_err());
    }

    #[test]
    fn octic_examples() {
        assert_eq!(octic_symbol_at_8(17).unwrap(), Symbol::Plus);
        assert_eq!(octic_symbol_at_8(41).unwrap(), Symbol::Minus);
        assert_eq!(octic_symbol_at_8(73).unwrap(), Symbol::Minus);
        assert!(octic_symbol_at_8(13).is_err());
        assert!(octic_symbol_at_8(25).is_err());
    }

    #[test]
    fn legendre_matches_square_search() {
        for p in small_primes(100).into_iter().skip(1) {
            for a in -5..(p as i64 + 5) {
                assert_eq!(legendre(a, p).unwrap().value(), brute_legendre(a, p as i64));
            }
        }
    }

    #[test]
    fn jacobi_agrees_with_legendre_on_primes() {
        for n in small_primes(500).into_iter().skip(1) {
            for a in 0..n {
                assert_eq!(jacobi(a, n).unwrap(), legendre(a, n).unwrap(), "({a}/{n})");
            }
        }
    }

    #[test]
    fn quadratic_reciprocity() {
        let ps = small_primes(200);
        for &p in ps.iter().skip(1) {
            for &q in ps.iter().skip(1) {
                if p == q {
                    continue;
                }
                let lhs = legendre(p, q).unwrap() * legendre(q, p).unwrap();
                let sign = if ((p - 1) * (q - 1) / 4) % 2 == 0 { 1 } else { -1 };
                assert_eq!(lhs.value(), sign);
            }
        }
    }

    #[test]
    fn quartic_symbol_detects_fourth_powers() {
        for p in small_primes(300).into_iter().filter(|p| p % 4 == 1) {
            let fourth: Vec<u64> = (1..p).map(|x| mod_pow_u64(x, 4, p)).collect();
            for q in 1..p {
                if legendre(q, p).unwrap() != Symbol::Plus {
                    continue;
                }
                let is_fourth = fourth.contains(&q);
                assert_eq!(quartic_symbol(q, p).unwrap().is_plus(), is_fourth, "q={q} p={p}");
            }
        }
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let n = 20_000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &s) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(i as u64), s, "{i}");
        }
        // strong pseudoprime to bases 2..37, caught by 41
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        let big: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        assert!(is_prime(&big));
        assert!(!is_prime(&(big * BigInt::from(3))));
    }

    #[test]
    fn factor_and_fundamental() {
        assert_eq!(factor_u64(1105), vec![(5, 1), (13, 1), (17, 1)]);
        assert_eq!(factor_u64(1 << 20), vec![(2, 20)]);
        assert_eq!(euler_phi(229), 228);
        assert!(is_fundamental_discriminant(-23));
        assert!(is_fundamental_discriminant(12));
        assert!(is_fundamental_discriminant(-84));
        assert!(!is_fundamental_discriminant(-12 * 4));
        assert!(!is_fundamental_discriminant(45));
        assert!(!is_fundamental_discriminant(1));
    }

    proptest! {
        #[test]
        fn legendre_is_multiplicative(a in 1i64..10_000, b in 1i64..10_000, pi in 1usize..25) {
            let p = small_primes(100)[pi];
            prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
            prop_assert_eq!(legendre(a, p).unwrap() * legendre(b, p).unwrap(), legendre(a * b, p).unwrap());
        }

        #[test]
        fn factorization_multiplies_back(n in 1u64..5_000_000) {
            let prod: u64 = factor_u64(n).iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            prop_assert!(factor_u64(n).iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }
}
