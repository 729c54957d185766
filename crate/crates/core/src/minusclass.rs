//! Relative class numbers of imaginary abelian fields of prime-power
//! conductor from generalized Bernoulli numbers:
//! `h⁻ = Q·w·∏_{χ odd} (-B_{1,χ}/2)` with `Q = 1`.

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::arith::factor_u64;
use crate::characters::{CycloRational, DirichletCharacter, SubfieldSpec};
use crate::error::{arg_err, Error, Result};

/// `B_{1,χ} = (1/f) Σ_{a=1}^{f} χ(a) a` for the primitive character of
/// conductor `f` attached to `χ`, in `Q(ζ_order)`.
pub fn bernoulli_b1(chi: &DirichletCharacter) -> Result<CycloRational> {
    if chi.is_trivial() {
        return arg_err("B_1 of the trivial character is excluded");
    }
    let f = chi.conductor;
    let m = chi.order as usize;
    // accumulate Σ a·ζ^k over exponents, then reduce once
    let mut by_exp = vec![BigInt::from(0); m];
    for a in 1..=f as i64 {
        if let Some(k) = chi.primitive_exponent_at(a) {
            by_exp[k as usize] += a;
        }
    }
    let mut acc = CycloRational::zero(chi.order);
    for (k, s) in by_exp.into_iter().enumerate() {
        if s != BigInt::from(0) {
            let term = CycloRational::zeta_pow(chi.order, k as i64);
            acc = acc.add(&term.scale(&BigRational::from_integer(s)));
        }
    }
    Ok(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(f))))
}

#[derive(Debug, Clone, Serialize)]
pub struct MinusReport {
    pub field: SubfieldSpec,
    /// Number of roots of unity in the field.
    pub w: u64,
    #[serde(rename = "Q")]
    pub q_index: u64,
    /// `-B_{1,χ}/2` for each odd character, in the order of `field.characters`.
    pub bernoulli_factors: Vec<CycloRational>,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub h_minus: BigInt,
}

/// Roots of unity in the field: `ζ_m` lies in it iff every element of the
/// fixing subgroup is `≡ 1 (mod m)`; the count is the largest such even `m`
/// (an odd `m` brings `-ζ_m`, so it contributes `2m`).
pub fn roots_of_unity(field: &SubfieldSpec) -> u64 {
    let n = field.modulus;
    let fixing = field.fixing_subgroup();
    crate::arith::divisors_u64(n)
        .into_iter()
        .filter(|&m| fixing.iter().all(|&a| a % m == 1 % m))
        .map(|m| if m % 2 == 0 { m } else { 2 * m })
        .max()
        .unwrap_or(2)
}

pub fn h_minus(field: &SubfieldSpec) -> Result<MinusReport> {
    if !field.is_imaginary() {
        return arg_err("the field is real: it has no odd characters");
    }
    let conductor = field.conductor();
    if factor_u64(conductor).len() > 1 {
        return Err(Error::Unsupported(format!(
            "conductor {conductor} is not a prime power; the unit index is not determined"
        )));
    }
    let w = roots_of_unity(field);
    let minus_half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    let mut factors = Vec::new();
    for chi in field.odd_characters() {
        factors.push(bernoulli_b1(chi)?.scale(&minus_half));
    }
    let mut product = CycloRational::one(1);
    for f in &factors {
        product = product.mul(f);
    }
    let value = product.as_rational().ok_or_else(|| {
        Error::Certification(format!("product of Bernoulli factors is not rational: {product}"))
    })?;
    let h = value * BigRational::from_integer(BigInt::from(w));
    if !h.is_integer() || !h.is_positive() {
        return Err(Error::Certification(format!("h⁻ = {h} is not a positive integer")));
    }
    Ok(MinusReport {
        field: field.clone(),
        w,
        q_index: 1,
        bernoulli_factors: factors,
        h_minus: h.to_integer(),
    })
}

impl MinusReport {
    pub fn h_minus_u64(&self) -> Option<u64> {
        self.h_minus.to_u64()
    }
}

/// Products `B_{1,χ} B_{1,χ̄}` over the pairs of conjugate odd characters
/// (a real character is paired with itself). Each product is checked to be a
/// nonzero element of the real subfield, and a positive rational whenever
/// that subfield is `Q`.
pub fn conjugate_pair_products(field: &SubfieldSpec) -> Result<Vec<CycloRational>> {
    let odd: Vec<&DirichletCharacter> = field.odd_characters().collect();
    let mut out = Vec::new();
    for (i, chi) in odd.iter().enumerate() {
        let bar = chi.conj();
        let j = odd.iter().position(|c| **c == bar).expect("conjugate is in the group");
        if j < i {
            continue;
        }
        let a = bernoulli_b1(chi)?;
        let b = bernoulli_b1(odd[j])?;
        if b != a.conj() {
            return Err(Error::Certification("conjugate characters give non-conjugate B_1".into()));
        }
        let prod = a.mul(&b);
        if prod.is_zero() || prod.conj() != prod {
            return Err(Error::Certification("pair product is not a nonzero real number".into()));
        }
        if matches!(prod.level(), 1 | 2 | 3 | 4 | 6) {
            let r = prod.as_rational().ok_or_else(|| {
                Error::Certification("pair product should be rational".into())
            })?;
            if !r.is_positive() {
                return Err(Error::Certification(format!("pair product {r} is not positive")));
            }
        }
        out.push(prod);
    }
    Ok(out)
}
