//! Indefinite forms: the rho operator, cycles of reduced forms and the
//! fundamental unit from the continued fraction of `(b0 + √D)/2`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{isqrt, BinaryQuadraticForm};
use crate::error::{arg_err, Result};

/// Fundamental unit `x + y√D` (coordinates may be half-integers) with its norm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalUnit {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub x: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub y: BigRational,
    pub norm: i32,
    /// Length of the minimal period of the continued fraction.
    pub period: usize,
}

pub(crate) fn is_reduced_indefinite(f: &BinaryQuadraticForm, s: &BigInt) -> bool {
    let two_a = BigInt::from(2) * f.a.abs();
    f.b.is_positive() && &f.b <= s && &two_a + &f.b > *s && &two_a - &f.b <= *s
}

/// One rho step `(a, b, c) -> (c, b', (b'^2 - D) / 4c)` with `b' ≡ -b (mod 2c)`
/// normalized into `(√D - 2|c|, √D)` when `|c| < √D` and into `(-|c|, |c|]`
/// otherwise.
pub fn rho(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let d = f.discriminant();
    if !d.is_positive() || crate::arith::exact_sqrt(&d).is_some() {
        return arg_err(format!("rho needs a non-square positive discriminant, got {d}"));
    }
    Ok(rho_big(f, &d, &d.sqrt()))
}

fn rho_big(f: &BinaryQuadraticForm, d: &BigInt, s: &BigInt) -> BinaryQuadraticForm {
    let m = BigInt::from(2) * f.c.abs();
    let b = if f.c.abs() <= *s {
        s - (s + &f.b).mod_floor(&m)
    } else {
        let r = (-&f.b).mod_floor(&m);
        if r > f.c.abs() {
            r - &m
        } else {
            r
        }
    };
    let c = (&b * &b - d) / (BigInt::from(4) * &f.c);
    BinaryQuadraticForm { a: f.c.clone(), b, c }
}

pub(crate) fn rho_reduce(f: &BinaryQuadraticForm, d: &BigInt) -> BinaryQuadraticForm {
    let s = d.sqrt();
    let mut g = f.clone();
    while !is_reduced_indefinite(&g, &s) {
        g = rho_big(&g, d, &s);
    }
    g
}

/// Reduced form with small coefficients, used for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Small {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Small {
    pub fn to_form(self) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(self.a, self.b, self.c)
    }

    pub fn rho(self, d: i64, s: i64) -> Small {
        let m = 2 * self.c.abs();
        let b = if self.c.abs() <= s {
            s - (s + self.b).rem_euclid(m)
        } else {
            let r = (-self.b).rem_euclid(m);
            if r > self.c.abs() {
                r - m
            } else {
                r
            }
        };
        Small { a: self.c, b, c: (b * b - d) / (4 * self.c) }
    }
}

/// All reduced primitive indefinite forms of discriminant `d`.
pub(crate) fn reduced_indefinite_forms(d: i64) -> Vec<Small> {
    let s = isqrt(d);
    let mut out = Vec::new();
    let mut b = if (d - s).rem_euclid(2) == 0 { s } else { s - 1 };
    while b > 0 {
        let n = (d - b * b) / 4;
        // 2|a| in (s - b, s + b]
        let lo = (s - b) / 2 + 1;
        let hi = (s + b) / 2;
        for x in lo..=hi {
            if n % x != 0 {
                continue;
            }
            let y = n / x;
            if num_integer::gcd(num_integer::gcd(x, b), y) != 1 {
                continue;
            }
            out.push(Small { a: x, b, c: -y });
            out.push(Small { a: -x, b, c: y });
        }
        b -= 2;
    }
    out.sort();
    out
}

/// Cycles of reduced forms under rho, each starting at its smallest member;
/// the list is sorted by that member.
pub(crate) fn cycles(d: i64) -> Vec<Vec<Small>> {
    let s = isqrt(d);
    let forms = reduced_indefinite_forms(d);
    let mut seen: HashMap<Small, usize> = HashMap::with_capacity(forms.len());
    let mut out = Vec::new();
    // forms are sorted, so the first unseen form is the minimum of its cycle
    for f in forms {
        if seen.contains_key(&f) {
            continue;
        }
        let idx = out.len();
        let mut cyc = vec![f];
        seen.insert(f, idx);
        let mut g = f.rho(d, s);
        while g != f {
            seen.insert(g, idx);
            cyc.push(g);
            g = g.rho(d, s);
        }
        out.push(cyc);
    }
    out
}

/// Fundamental unit of the maximal order of discriminant `d > 0`.
pub(crate) fn fundamental_unit_of(d: i64) -> FundamentalUnit {
    let s = isqrt(d);
    let b0 = if (d - s).rem_euclid(2) == 0 { s } else { s - 1 };
    let (p0, q0) = (b0, 2i64);
    let (mut p, mut q) = (p0, q0);
    let (mut q_prev2, mut q_prev1) = (BigInt::one(), BigInt::zero());
    let mut period = 0usize;
    loop {
        let a = (p + s) / q;
        let next = BigInt::from(a) * &q_prev1 + &q_prev2;
        q_prev2 = std::mem::replace(&mut q_prev1, next);
        period += 1;
        let np = a * q - p;
        let nq = (d - np * np) / q;
        p = np;
        q = nq;
        if p == p0 && q == q0 {
            break;
        }
    }
    // eps = q_{l-1} * (b0 + √D)/2 + q_{l-2}
    let two = BigInt::from(2);
    let x = BigRational::new(&q_prev1 * BigInt::from(b0) + &two * &q_prev2, two.clone());
    let y = BigRational::new(q_prev1, two);
    let norm = if period % 2 == 0 { 1 } else { -1 };
    FundamentalUnit { x, y, norm, period }
}
