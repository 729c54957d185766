use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{divisors_u64, euler_phi};
use crate::error::{arg_err, Result};

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(m));
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn compute_cyclotomic(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in divisors_u64(m).into_iter().filter(|&d| d < m) {
        num = exact_div(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Quotient of `a` by the monic polynomial `b`; the division must be exact.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let da = rem.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// Element of `Q(ζ_m)` in the power basis `1, ζ, ..., ζ^(φ(m)-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloRational {
    level: u64,
    coeffs: Vec<BigRational>,
}

impl CycloRational {
    pub fn zero(level: u64) -> Self {
        CycloRational { level, coeffs: vec![BigRational::zero(); euler_phi(level) as usize] }
    }

    pub fn from_rational(level: u64, r: BigRational) -> Self {
        let mut x = Self::zero(level);
        x.coeffs[0] = r;
        x
    }

    pub fn one(level: u64) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    /// `ζ_m^k`.
    pub fn zeta_pow(level: u64, k: i64) -> Self {
        let mut v = vec![BigRational::zero(); level as usize];
        v[k.rem_euclid(level as i64) as usize] = BigRational::one();
        Self::from_exponent_vector(level, v)
    }

    /// Reduces `Σ v[k] ζ^k` with `v` of length `m`.
    fn from_exponent_vector(level: u64, v: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(level);
        let deg = phi.len() - 1;
        let mut v = v;
        for i in (deg..v.len()).rev() {
            let c = std::mem::take(&mut v[i]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if !pj.is_zero() {
                    v[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
                }
            }
        }
        v.truncate(deg);
        v.resize(deg, BigRational::zero());
        CycloRational { level, coeffs: v }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn exponent_vector(&self, target: u64) -> Vec<BigRational> {
        let step = (target / self.level) as usize;
        let mut v = vec![BigRational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] += c;
        }
        v
    }

    /// The same number written at level `target`, a multiple of the level.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target % self.level != 0 {
            return arg_err(format!("cannot lift level {} to {target}", self.level));
        }
        Ok(Self::from_exponent_vector(target, self.exponent_vector(target)))
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.level.lcm(&other.level);
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.common(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        CycloRational { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let m = a.level as usize;
        let mut v = vec![BigRational::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                v[(i + j) % m] += x * y;
            }
        }
        Self::from_exponent_vector(a.level, v)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloRational { level: self.level, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Complex conjugate, `ζ ↦ ζ^(-1)`.
    pub fn conj(&self) -> Self {
        let m = self.level as usize;
        let mut v = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(m - i) % m] += c;
        }
        Self::from_exponent_vector(self.level, v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Numerical value, for display and sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.level as f64;
            let c = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }
}

impl fmt::Debug for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})·ζ{}", self.level),
                _ => format!("({c})·ζ{}^{k}", self.level),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Serialize for CycloRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Q {
            num: String,
            den: String,
        }
        let coeffs: Vec<Q> = self
            .coeffs
            .iter()
            .map(|c| Q { num: c.numer().to_string(), den: c.denom().to_string() })
            .collect();
        let mut st = s.serialize_struct("CycloRational", 2)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

impl CycloRational {
    /// Sign of a real rational value, if the element is rational.
    pub fn rational_sign(&self) -> Option<i32> {
        self.as_rational().map(|r| if r.is_zero() { 0 } else if r.is_positive() { 1 } else { -1 })
    }
}
