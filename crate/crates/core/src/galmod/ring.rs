//! The integral group ring `Z[σ]/(σ^p - 1)` and the identities
//! `p = (1-σ)^{p-1} f + ν g` and `ν = (1-σ)^{p-1} + p h`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::is_prime_u64;
use crate::error::{arg_err, Error, Result};
use crate::linalg::{solve_integer, IntMatrix};

/// Element `Σ c_i σ^i` of `Z[σ]/(σ^p - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupRingElement {
    p: u64,
    #[serde(serialize_with = "crate::serde_util::bigint_vec")]
    coefficients: Vec<BigInt>,
}

impl GroupRingElement {
    /// Coefficients beyond `σ^{p-1}` wrap around.
    pub fn new(p: u64, coefficients: Vec<BigInt>) -> GroupRingElement {
        let mut c = vec![BigInt::zero(); p as usize];
        for (i, x) in coefficients.into_iter().enumerate() {
            c[i % p as usize] += x;
        }
        GroupRingElement { p, coefficients: c }
    }

    pub fn from_i64(p: u64, coefficients: &[i64]) -> GroupRingElement {
        GroupRingElement::new(p, coefficients.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(p: u64) -> GroupRingElement {
        GroupRingElement::new(p, vec![])
    }

    pub fn constant(p: u64, c: i64) -> GroupRingElement {
        GroupRingElement::from_i64(p, &[c])
    }

    pub fn sigma_pow(p: u64, k: u64) -> GroupRingElement {
        let mut c = vec![BigInt::zero(); p as usize];
        c[(k % p) as usize] = BigInt::one();
        GroupRingElement { p, coefficients: c }
    }

    pub fn nu(p: u64) -> GroupRingElement {
        GroupRingElement { p, coefficients: vec![BigInt::one(); p as usize] }
    }

    pub fn one_minus_sigma(p: u64) -> GroupRingElement {
        GroupRingElement::from_i64(p, &[1, -1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &GroupRingElement) -> GroupRingElement {
        assert_eq!(self.p, o.p);
        let c = self.coefficients.iter().zip(&o.coefficients).map(|(a, b)| a + b).collect();
        GroupRingElement { p: self.p, coefficients: c }
    }

    pub fn sub(&self, o: &GroupRingElement) -> GroupRingElement {
        self.add(&o.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> GroupRingElement {
        GroupRingElement { p: self.p, coefficients: self.coefficients.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &GroupRingElement) -> GroupRingElement {
        assert_eq!(self.p, o.p);
        let n = self.p as usize;
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coefficients.iter().enumerate() {
                c[(i + j) % n] += a * b;
            }
        }
        GroupRingElement { p: self.p, coefficients: c }
    }

    pub fn pow(&self, k: u32) -> GroupRingElement {
        let mut out = GroupRingElement::constant(self.p, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<GroupRingElement> {
        let mut c = Vec::with_capacity(self.coefficients.len());
        for a in &self.coefficients {
            let (q, r) = a.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            c.push(q);
        }
        Some(GroupRingElement { p: self.p, coefficients: c })
    }

    /// Matrix of multiplication by `self` in the basis `1, σ, …, σ^{p-1}`.
    fn multiplication_matrix(&self) -> IntMatrix {
        let n = self.p as usize;
        let mut m = IntMatrix::zeros(n, n);
        for j in 0..n {
            for (i, a) in self.coefficients.iter().enumerate() {
                m[((i + j) % n, j)] = a.clone();
            }
        }
        m
    }

    /// Action on a module whose `σ` is `sigma`.
    pub fn evaluate(&self, m: &super::GModule) -> Vec<Vec<u64>> {
        let shape = m.shape();
        let mut acc = super::mat_sub(&shape, &m.id(), &m.id());
        let mut pw = m.id();
        for (i, a) in self.coefficients.iter().enumerate() {
            if i > 0 {
                pw = super::mat_mul(&shape, &pw, &m.sigma);
            }
            let term: Vec<Vec<u64>> = pw
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    let md = BigInt::from(shape.modulus(r));
                    let k = a.mod_floor(&md);
                    let k: u64 = k.try_into().unwrap();
                    row.iter().map(|&x| super::mul_mod(x, k, shape.modulus(r))).collect()
                })
                .collect();
            acc = super::mat_add(&shape, &acc, &term);
        }
        acc
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "σ".to_string(),
                (1, false) => format!("{mag}σ"),
                (_, true) => format!("σ^{i}"),
                (_, false) => format!("{mag}σ^{i}"),
            };
            let sign = if a.is_negative() { "-" } else { "+" };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (sign, body)) in terms.iter().enumerate() {
            match (k, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                _ => write!(f, " {sign} {body}")?,
            }
        }
        Ok(())
    }
}

pub const DEFAULT_E1E2_BOUND: u64 = 13;

/// Polynomials with `p = (1-σ)^{p-1} f + ν g` and `ν = (1-σ)^{p-1} + p h`,
/// each identity re-expanded and checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E1E2Solution {
    pub p: u64,
    pub f: GroupRingElement,
    pub g: GroupRingElement,
    pub h: GroupRingElement,
    pub e1_residual: GroupRingElement,
    pub e2_residual: GroupRingElement,
    pub verified: bool,
}

pub fn solve_e1_e2(p: u64) -> Result<E1E2Solution> {
    solve_e1_e2_with(p, DEFAULT_E1E2_BOUND)
}

pub fn solve_e1_e2_with(p: u64, bound: u64) -> Result<E1E2Solution> {
    if p < 3 || !is_prime_u64(p) {
        return arg_err(format!("{p} is not an odd prime"));
    }
    if p > bound {
        return Err(Error::Resource(format!("p = {p} exceeds the configured bound {bound}")));
    }
    let pb = BigInt::from(p);
    let a = GroupRingElement::one_minus_sigma(p).pow(p as u32 - 1);
    let nu = GroupRingElement::nu(p);

    let h = nu
        .sub(&a)
        .div_exact(&pb)
        .ok_or_else(|| Error::Certification("ν - (1-σ)^(p-1) is not divisible by p".into()))?;

    // unknowns (f, g) stacked; columns are multiplication by a and by ν
    let n = p as usize;
    let (ma, mn) = (a.multiplication_matrix(), nu.multiplication_matrix());
    let mut sys = IntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            sys[(i, j)] = ma[(i, j)].clone();
            sys[(i, n + j)] = mn[(i, j)].clone();
        }
    }
    let target = GroupRingElement::constant(p, p as i64);
    let x = solve_integer(&sys, target.coefficients())
        .ok_or_else(|| Error::Certification(format!("no integral solution of (E1) for p = {p}")))?;
    let f = GroupRingElement::new(p, x[..n].to_vec());
    let g = GroupRingElement::new(p, x[n..].to_vec());

    let e1_residual = a.mul(&f).add(&nu.mul(&g)).sub(&target);
    let e2_residual = a.add(&h.scale(&pb)).sub(&nu);
    let verified = e1_residual.is_zero() && e2_residual.is_zero();
    if !verified {
        return Err(Error::Certification(format!("(E1)/(E2) expansion check failed for p = {p}")));
    }
    Ok(E1E2Solution { p, f, g, h, e1_residual, e2_residual, verified })
}
