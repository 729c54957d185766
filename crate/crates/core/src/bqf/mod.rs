//! Class groups, class numbers and fundamental units of quadratic fields
//! through binary quadratic forms.
//!
//! Definite discriminants are handled by counting and composing reduced
//! forms. Indefinite discriminants use the rho operator: proper equivalence
//! classes correspond to cycles of reduced forms, which gives the narrow class
//! number directly; the wide class number then follows from the norm of the
//! fundamental unit, computed from a purely periodic continued fraction.

mod form;
mod group;
mod indefinite;

use num_rational::BigRational;
use serde::Serialize;

use crate::arith::is_fundamental_discriminant;
use crate::error::{arg_err, Error, Result};

pub use form::{compose, reduce, BinaryQuadraticForm};
pub use group::ClassGroup;
pub use indefinite::{rho, FundamentalUnit};

use group::FormGroup;

/// Largest `|D|` accepted by the form enumerations unless a caller raises it.
pub const DEFAULT_MAX_DISCRIMINANT: u64 = 10_000_000;
/// Largest `|D|` for which full class-group structure is computed by default.
pub const DEFAULT_MAX_GROUP_DISCRIMINANT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_discriminant: u64,
    pub max_group_discriminant: u64,
    /// Accept discriminants of non-maximal orders.
    pub allow_non_fundamental: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_discriminant: DEFAULT_MAX_DISCRIMINANT,
            max_group_discriminant: DEFAULT_MAX_GROUP_DISCRIMINANT,
            allow_non_fundamental: false,
        }
    }
}

impl Limits {
    fn check(&self, d: i64) -> Result<()> {
        if d.rem_euclid(4) > 1 {
            return arg_err(format!("{d} is not a discriminant (must be 0 or 1 mod 4)"));
        }
        if d >= 0 && is_square(d) {
            return arg_err(format!("discriminant {d} is a square"));
        }
        if !self.allow_non_fundamental && !is_fundamental_discriminant(d) {
            return arg_err(format!("{d} is not a fundamental discriminant"));
        }
        if d.unsigned_abs() > self.max_discriminant {
            return Err(Error::Resource(format!(
                "|D| = {} exceeds the configured bound {}",
                d.unsigned_abs(),
                self.max_discriminant
            )));
        }
        Ok(())
    }
}

pub(crate) fn is_square(d: i64) -> bool {
    if d < 0 {
        return false;
    }
    let r = (d as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).any(|x| x >= 0 && x * x == d)
}

pub(crate) fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All reduced primitive positive definite forms of discriminant `d < 0`.
pub fn reduced_definite_forms(d: i64) -> Vec<BinaryQuadraticForm> {
    assert!(d < 0);
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b.abs()), c) != 1 {
                continue;
            }
            out.push(BinaryQuadraticForm::new(a, b, c));
        }
        a += 1;
    }
    out.sort();
    out
}

/// Class number of the quadratic field (or order, if permitted) of
/// discriminant `d`; the wide class number when `d > 0`.
pub fn class_number(d: i64) -> Result<u64> {
    class_number_with(d, &Limits::default())
}

pub fn class_number_with(d: i64, limits: &Limits) -> Result<u64> {
    limits.check(d)?;
    if d < 0 {
        return Ok(reduced_definite_forms(d).len() as u64);
    }
    let cycles = indefinite::cycles(d).len() as u64;
    let unit = indefinite::fundamental_unit_of(d);
    Ok(if unit.norm == 1 { cycles / 2 } else { cycles })
}

/// Narrow class number of a real quadratic discriminant: the number of cycles
/// of reduced indefinite forms.
pub fn narrow_class_number(d: i64) -> Result<u64> {
    narrow_class_number_with(d, &Limits::default())
}

pub fn narrow_class_number_with(d: i64, limits: &Limits) -> Result<u64> {
    if d <= 0 {
        return arg_err(format!("narrow class number needs D > 0, got {d}"));
    }
    limits.check(d)?;
    Ok(indefinite::cycles(d).len() as u64)
}

pub fn fundamental_unit(d: i64) -> Result<FundamentalUnit> {
    fundamental_unit_with(d, &Limits::default())
}

pub fn fundamental_unit_with(d: i64, limits: &Limits) -> Result<FundamentalUnit> {
    if d <= 0 {
        return arg_err(format!("fundamental unit needs D > 0, got {d}"));
    }
    limits.check(d)?;
    Ok(indefinite::fundamental_unit_of(d))
}

/// Structure of the (wide) class group; `d < 0` is the documented use, real
/// discriminants are supported through the narrow group modulo the class of
/// the negative principal form.
pub fn class_group(d: i64) -> Result<ClassGroup> {
    class_group_with(d, &Limits::default())
}

pub fn class_group_with(d: i64, limits: &Limits) -> Result<ClassGroup> {
    limits.check(d)?;
    check_group_bound(d, limits)?;
    let g = FormGroup::new(d);
    if d < 0 {
        return Ok(g.structure(&reduced_definite_forms(d), &[]));
    }
    let elements = g.cycle_representatives();
    let kill = [g.canonical(&BinaryQuadraticForm::negative_principal(d))];
    Ok(g.structure(&elements, &kill))
}

/// Structure of the narrow class group of a real quadratic discriminant.
pub fn narrow_class_group(d: i64) -> Result<ClassGroup> {
    narrow_class_group_with(d, &Limits::default())
}

pub fn narrow_class_group_with(d: i64, limits: &Limits) -> Result<ClassGroup> {
    if d <= 0 {
        return arg_err(format!("narrow class group needs D > 0, got {d}"));
    }
    limits.check(d)?;
    check_group_bound(d, limits)?;
    let g = FormGroup::new(d);
    Ok(g.structure(&g.cycle_representatives(), &[]))
}

fn check_group_bound(d: i64, limits: &Limits) -> Result<()> {
    if d.unsigned_abs() > limits.max_group_discriminant {
        return Err(Error::Resource(format!(
            "class group of |D| = {} exceeds the bound {}",
            d.unsigned_abs(),
            limits.max_group_discriminant
        )));
    }
    Ok(())
}

/// Fundamental unit `x + y√D` in serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitReport {
    pub x_num: String,
    pub x_den: String,
    pub y_num: String,
    pub y_den: String,
}

impl UnitReport {
    fn from_coords(x: &BigRational, y: &BigRational) -> Self {
        UnitReport {
            x_num: x.numer().to_string(),
            x_den: x.denom().to_string(),
            y_num: y.numer().to_string(),
            y_den: y.denom().to_string(),
        }
    }
}

/// Per-discriminant summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadFieldReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: u64,
    pub h_plus: u64,
    /// `None` for imaginary fields.
    pub unit: Option<UnitReport>,
    pub unit_norm: i32,
    pub class_group: Vec<u64>,
}

pub fn quad_field_report(d: i64, limits: &Limits) -> Result<QuadFieldReport> {
    limits.check(d)?;
    let with_group = d.unsigned_abs() <= limits.max_group_discriminant;
    if d < 0 {
        let h = reduced_definite_forms(d).len() as u64;
        let class_group = if with_group { class_group_with(d, limits)?.orders } else { Vec::new() };
        return Ok(QuadFieldReport { d, h, h_plus: h, unit: None, unit_norm: 1, class_group });
    }
    let unit = indefinite::fundamental_unit_of(d);
    let h_plus = indefinite::cycles(d).len() as u64;
    let h = if unit.norm == 1 { h_plus / 2 } else { h_plus };
    let class_group = if with_group { class_group_with(d, limits)?.orders } else { Vec::new() };
    Ok(QuadFieldReport {
        d,
        h,
        h_plus,
        unit: Some(UnitReport::from_coords(&unit.x, &unit.y)),
        unit_norm: unit.norm,
        class_group,
    })
}

/// Principal form of discriminant `d`.
pub fn principal_form(d: i64) -> BinaryQuadraticForm {
    BinaryQuadraticForm::principal(d)
}
