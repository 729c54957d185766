use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::indefinite;
use crate::error::{arg_err, Result};

/// The form `a x² + b xy + c y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryQuadraticForm {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub c: BigInt,
}

impl BinaryQuadraticForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        BinaryQuadraticForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// Principal form: `(1, 0, -D/4)` or `(1, 1, (1-D)/4)`.
    pub fn principal(d: i64) -> Self {
        if d.rem_euclid(4) == 0 {
            Self::new(1, 0, -d / 4)
        } else {
            Self::new(1, 1, (1 - d) / 4)
        }
    }

    /// The form `-x² ...` representing the class of the ideal `(√D)` in the
    /// narrow sense; trivial in the narrow group iff the unit norm is -1.
    pub fn negative_principal(d: i64) -> Self {
        let p = Self::principal(d);
        Self::new(-p.a, p.b, -p.c)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.c.clone())
    }

    /// Reducedness in the sense used by [`reduce`] for either sign of `D`.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        if d.is_negative() {
            let ab = self.b.abs();
            self.a.is_positive()
                && ab <= self.a
                && self.a <= self.c
                && !(self.b.is_negative() && (ab == self.a || self.a == self.c))
        } else {
            indefinite::is_reduced_indefinite(self, &d.sqrt())
        }
    }

    /// Value at `(x, y)`.
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn validate(f: &BinaryQuadraticForm) -> Result<BigInt> {
    let d = f.discriminant();
    if d.is_zero() {
        return arg_err(format!("form {f} has zero discriminant"));
    }
    if !d.is_negative() && crate::arith::exact_sqrt(&d).is_some() {
        return arg_err(format!("form {f} has square discriminant {d}"));
    }
    if !f.is_primitive() {
        return arg_err(format!("form {f} is not primitive"));
    }
    if d.is_negative() && !f.a.is_positive() {
        return arg_err(format!("definite form {f} is not positive definite"));
    }
    Ok(d)
}

/// Reduced representative of the proper equivalence class of `f`.
///
/// For `D < 0` this is the unique reduced form; for `D > 0` it is the first
/// reduced form reached by the rho operator.
pub fn reduce(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let d = validate(f)?;
    Ok(if d.is_negative() { reduce_definite(f.clone()) } else { indefinite::rho_reduce(f, &d) })
}

pub(crate) fn reduce_definite(mut f: BinaryQuadraticForm) -> BinaryQuadraticForm {
    let two = BigInt::from(2);
    loop {
        // translate b into (-a, a]
        let ab = f.b.abs();
        if ab > f.a || (ab == f.a && f.b.is_negative()) {
            let r = (&f.a - &f.b).div_floor(&(&two * &f.a));
            let nb = &f.b + &two * &r * &f.a;
            f.c = &f.a * &r * &r + &f.b * &r + &f.c;
            f.b = nb;
        }
        if f.a > f.c {
            std::mem::swap(&mut f.a, &mut f.c);
            f.b = -&f.b;
            continue;
        }
        if f.a == f.c && f.b.is_negative() {
            f.b = -&f.b;
        }
        return f;
    }
}

/// Gaussian composition followed by reduction.
pub fn compose(f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let d = validate(f)?;
    let d2 = validate(g)?;
    if d != d2 {
        return arg_err(format!("discriminant mismatch: {d} vs {d2}"));
    }
    let h = compose_unreduced(f, g, &d);
    Ok(if d.is_negative() { reduce_definite(h) } else { indefinite::rho_reduce(&h, &d) })
}

/// Dirichlet composition of two primitive forms of the same discriminant.
pub(crate) fn compose_unreduced(
    f: &BinaryQuadraticForm,
    g: &BinaryQuadraticForm,
    d: &BigInt,
) -> BinaryQuadraticForm {
    let two = BigInt::from(2);
    let s = (&f.b + &g.b) / &two;
    // e = gcd(a1, a2, s) = u a1 + v a2 + w s
    let e1 = f.a.extended_gcd(&g.a);
    let e2 = e1.gcd.extended_gcd(&s);
    let e = e2.gcd.clone();
    let (u, v, w) = (&e2.x * &e1.x, &e2.x * &e1.y, e2.y);
    let a3 = &f.a * &g.a / (&e * &e);
    let num = &u * &f.a * &g.b + &v * &g.a * &f.b + &w * (&f.b * &g.b + d) / &two;
    let b3 = (num / &e).mod_floor(&(&two * a3.abs()));
    let c3 = (&b3 * &b3 - d) / (BigInt::from(4) * &a3);
    BinaryQuadraticForm { a: a3, b: b3, c: c3 }
}
