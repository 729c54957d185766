//! Parity predictions for plus class numbers of cyclotomic fields.
//!
//! A prediction is a claim together with the residue-symbol facts it rests
//! on. The facts are recomputed by [`Premise::verify`]; the implication from
//! the facts to the divisibility is the cited theorem, not something this
//! crate can check for fields of large degree.

use serde::Serialize;

use crate::arith::{factor_u64, is_prime_u64, legendre, octic_symbol_at_8, quartic_symbol, Symbol};
use crate::error::{arg_err, Result};
use crate::genus::{product_signature, search_conic, signature_of_alpha, ConicSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    /// 2-part of the class number of the maximal real 2-extension `K⁺` in `Q(ζ_pq)`.
    #[serde(rename = "K_PLUS_2PART")]
    KPlus2Part,
    /// Every subfield of `Q(ζ_pq)` containing `Q(√pq)`.
    #[serde(rename = "ALL_SUBFIELDS_CONTAINING_SQRT_PQ")]
    AllSubfieldsContainingSqrtPq,
    /// `h⁺(m)`.
    #[serde(rename = "H_PLUS_M")]
    HPlusM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Proposition {
    #[serde(rename = "P1_i")]
    P1i,
    #[serde(rename = "P1_ii")]
    P1ii,
    #[serde(rename = "P1_iii")]
    P1iii,
    P2,
    P3,
    #[serde(rename = "REMARK_8")]
    Remark8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Divisible,
    NotDivisible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreePrimeCase {
    /// Two of the primes are quadratic residues of each other.
    ResiduePair,
    /// `(p1/p2) = (p2/p3) = (p3/p1) = -1`: an unramified quaternion extension.
    Quaternion,
}

/// A machine-checkable fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Premise {
    /// `(a/b)`; either entry may be 8, read as the Kronecker symbol.
    Quadratic { a: u64, b: u64, value: Symbol },
    /// `(a/p)_4`.
    Quartic { a: u64, p: u64, value: Symbol },
    /// `(q/8)_4`.
    QuarticAt8 { q: u64, value: Symbol },
    /// A point on `x² - p y² = -q z²` and the signs of `x + y√p`.
    Conic { p: u64, q: u64, solution: ConicSolution, signature: (Symbol, Symbol) },
    /// `α_q α_q'` has the same sign under both embeddings.
    SignDefinite { p: u64, q: u64, q2: u64, signature: (Symbol, Symbol) },
}

impl Premise {
    /// Recomputes the fact from scratch.
    pub fn verify(&self) -> Result<bool> {
        Ok(match self {
            Premise::Quadratic { a, b, value } => quadratic(*a, *b)? == *value,
            Premise::Quartic { a, p, value } => quartic(*a, *p)? == *value,
            Premise::QuarticAt8 { q, value } => octic_symbol_at_8(*q)? == *value,
            Premise::Conic { p, q, solution, signature } => {
                solution.satisfies(*p, *q)
                    && signature_of_alpha(solution, *p) == *signature
                    && signature.0 * signature.1 == Symbol::Minus
            }
            Premise::SignDefinite { signature, .. } => signature.0 == signature.1,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityPrediction {
    pub modulus_m: u64,
    pub target: Target,
    pub divisor: u32,
    pub claim: Claim,
    pub proposition: Proposition,
    pub premises: Vec<Premise>,
    /// Primes the claim is built from.
    pub witnesses: Vec<u64>,
    pub case: Option<ThreePrimeCase>,
    /// One of the primes is the substitute 8.
    pub uses_remark_8: bool,
}

impl ParityPrediction {
    pub fn premises_hold(&self) -> Result<bool> {
        for p in &self.premises {
            if !p.verify()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn is_admissible(p: u64) -> bool {
    p == 8 || (p % 4 == 1 && is_prime_u64(p))
}

/// `(a/b)` for `a, b` primes ≡ 1 (mod 4) or 8.
fn quadratic(a: u64, b: u64) -> Result<Symbol> {
    match (a, b) {
        (8, 8) => arg_err("(8/8) is undefined"),
        (8, b) => legendre(2, b),
        (a, 8) => Ok(if a % 8 == 1 { Symbol::Plus } else { Symbol::Minus }),
        (a, b) => legendre(a, b),
    }
}

/// `(a/p)_4`, with `(q/8)_4` through the closed formula.
fn quartic(a: u64, p: u64) -> Result<Symbol> {
    if p == 8 {
        octic_symbol_at_8(a)
    } else {
        quartic_symbol(a, p)
    }
}

fn quartic_premise(a: u64, p: u64, value: Symbol) -> Premise {
    if p == 8 {
        Premise::QuarticAt8 { q: a, value }
    } else {
        Premise::Quartic { a, p, value }
    }
}

/// Parity predictions for `m = pq`, where `p, q` are primes ≡ 1
/// (mod 4) or one of them is 8.
pub fn predict_pq(p: u64, q: u64) -> Result<Vec<ParityPrediction>> {
    for x in [p, q] {
        if !is_admissible(x) {
            return arg_err(format!("{x} is neither a prime ≡ 1 (mod 4) nor 8"));
        }
    }
    if p == q {
        return arg_err(format!("the primes must be distinct, got {p} twice"));
    }
    let uses_remark_8 = p == 8 || q == 8;
    let m = p * q;
    let qr = quadratic(p, q)?;
    let base = Premise::Quadratic { a: p, b: q, value: qr };
    let make = |target, divisor, claim, proposition, premises| ParityPrediction {
        modulus_m: m,
        target,
        divisor,
        claim,
        proposition,
        premises,
        witnesses: vec![p, q],
        case: None,
        uses_remark_8,
    };
    if !qr.is_plus() {
        return Ok(vec![make(
            Target::KPlus2Part,
            2,
            Claim::NotDivisible,
            Proposition::P1i,
            vec![base],
        )]);
    }
    let mut out =
        vec![make(Target::KPlus2Part, 2, Claim::Divisible, Proposition::P1i, vec![base.clone()])];
    let pq4 = quartic(p, q)?;
    let qp4 = quartic(q, p)?;
    let quartics = vec![base, quartic_premise(p, q, pq4), quartic_premise(q, p, qp4)];
    if pq4 == qp4 {
        out.push(make(
            Target::AllSubfieldsContainingSqrtPq,
            2,
            Claim::Divisible,
            Proposition::P1ii,
            quartics.clone(),
        ));
        if pq4.is_plus() {
            out.push(make(Target::KPlus2Part, 4, Claim::Divisible, Proposition::P1iii, quartics));
        }
    }
    Ok(out)
}

/// Prediction `2 | h⁺(m)` when `m` has three distinct prime factors ≡ 1
/// (mod 4) (8 counts as one when `8 | m`).
pub fn predict_three_primes(m: u64) -> Result<Option<ParityPrediction>> {
    if m < 3 {
        return arg_err(format!("m must be at least 3, got {m}"));
    }
    let mut qual: Vec<u64> = factor_u64(m)
        .into_iter()
        .filter_map(|(p, e)| match p {
            2 if e >= 3 => Some(8),
            2 => None,
            p if p % 4 == 1 => Some(p),
            _ => None,
        })
        .collect();
    qual.sort_unstable();
    if qual.len() < 3 {
        return Ok(None);
    }
    let uses_remark_8 = qual.contains(&8);
    let mut pair = None;
    'search: for i in 0..qual.len() {
        for j in i + 1..qual.len() {
            if quadratic(qual[i], qual[j])?.is_plus() {
                pair = Some((qual[i], qual[j]));
                break 'search;
            }
        }
    }
    let (case, witnesses, premises) = match pair {
        Some((a, b)) => {
            let third = *qual.iter().find(|&&x| x != a && x != b).unwrap();
            (
                ThreePrimeCase::ResiduePair,
                vec![a, b, third],
                vec![Premise::Quadratic { a, b, value: Symbol::Plus }],
            )
        }
        None => {
            let (a, b, c) = (qual[0], qual[1], qual[2]);
            let premises = [(a, b), (b, c), (c, a)]
                .into_iter()
                .map(|(x, y)| Premise::Quadratic { a: x, b: y, value: Symbol::Minus })
                .collect();
            (ThreePrimeCase::Quaternion, vec![a, b, c], premises)
        }
    };
    Ok(Some(ParityPrediction {
        modulus_m: m,
        target: Target::HPlusM,
        divisor: 2,
        claim: Claim::Divisible,
        proposition: Proposition::P2,
        premises,
        witnesses,
        case: Some(case),
        uses_remark_8,
    }))
}

/// Prediction `2 | h⁺(pqq')` for `p ≡ 1 (mod 4)` (or 8) and `q ≡ q' ≡ 3
/// (mod 4)` with `(p/q) = (p/q') = 1`, with the conic points attached.
pub fn predict_pqq(p: u64, q: u64, q2: u64, conic_bound: u64) -> Result<Option<ParityPrediction>> {
    if !is_admissible(p) {
        return arg_err(format!("{p} is neither a prime ≡ 1 (mod 4) nor 8"));
    }
    for x in [q, q2] {
        if !is_prime_u64(x) || x % 4 != 3 {
            return arg_err(format!("{x} is not a prime ≡ 3 (mod 4)"));
        }
    }
    if q == q2 {
        return arg_err(format!("q and q' must be distinct, got {q} twice"));
    }
    let s1 = legendre(p, q)?;
    let s2 = legendre(p, q2)?;
    if !(s1.is_plus() && s2.is_plus()) {
        return Ok(None);
    }
    let sol1 = search_conic(p, q, conic_bound)?;
    let sol2 = search_conic(p, q2, conic_bound)?;
    let signature = product_signature(&sol1, &sol2, p);
    let premises = vec![
        Premise::Quadratic { a: p, b: q, value: s1 },
        Premise::Quadratic { a: p, b: q2, value: s2 },
        Premise::Conic { p, q, signature: signature_of_alpha(&sol1, p), solution: sol1 },
        Premise::Conic { p, q: q2, signature: signature_of_alpha(&sol2, p), solution: sol2 },
        Premise::SignDefinite { p, q, q2, signature },
    ];
    Ok(Some(ParityPrediction {
        modulus_m: p * q * q2,
        target: Target::HPlusM,
        divisor: 2,
        claim: Claim::Divisible,
        proposition: Proposition::P3,
        premises,
        witnesses: vec![p, q, q2],
        case: None,
        uses_remark_8: p == 8,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::narrow_class_number;
    use crate::genus::DEFAULT_CONIC_BOUND;

    fn props(v: &[ParityPrediction]) -> Vec<Proposition> {
        v.iter().map(|p| p.proposition).collect()
    }

    #[test]
    fn pq_examples() {
        let v = predict_pq(13, 17).unwrap();
        assert_eq!(props(&v), vec![Proposition::P1i]);
        assert_eq!(v[0].premises, vec![Premise::Quadratic { a: 13, b: 17, value: Symbol::Plus }]);
        let v = predict_pq(5, 13).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].claim, Claim::NotDivisible);
        assert!(predict_pq(3, 13).is_err());
        assert!(predict_pq(13, 13).is_err());
    }

    #[test]
    fn remark_8_uses_closed_formula() {
        // (8/17) = (2/17) = +1, (8/17)_4 = 8^4 = 16 ≡ -1, (17/8)_4 = +1
        let v = predict_pq(8, 17).unwrap();
        assert!(v[0].uses_remark_8);
        assert_eq!(props(&v), vec![Proposition::P1i]);
        assert!(v[0].premises_hold().unwrap());
        // (8/41)_4 = 8^10 ≡ -1 (mod 41) and (41/8)_4 = -1
        let v = predict_pq(8, 41).unwrap();
        assert_eq!(props(&v), vec![Proposition::P1i, Proposition::P1ii]);
        // (8/73): 73 ≡ 1 (mod 8); (73/8)_4 = -1
        let v = predict_pq(8, 73).unwrap();
        assert!(v.iter().all(|x| x.premises_hold().unwrap()));
    }

    #[test]
    fn p1i_matches_four_divisibility() {
        let ps: Vec<u64> = (5..200).filter(|&p| p % 4 == 1 && is_prime_u64(p)).collect();
        for &p in &ps {
            for &q in ps.iter().filter(|&&q| q != p) {
                let v = predict_pq(p, q).unwrap();
                let divisible = v[0].claim == Claim::Divisible;
                let hp = narrow_class_number((p * q) as i64).unwrap();
                assert_eq!(divisible, hp % 4 == 0, "{p} {q}");
                assert!(v.iter().all(|x| x.premises_hold().unwrap()));
            }
        }
    }

    #[test]
    fn three_prime_examples() {
        let pr = predict_three_primes(1105).unwrap().unwrap();
        assert_eq!(pr.case, Some(ThreePrimeCase::ResiduePair));
        assert_eq!(pr.witnesses[..2], [13, 17]);
        assert!(predict_three_primes(12).unwrap().is_none());
        assert!(predict_three_primes(5 * 13 * 17 * 29).unwrap().is_some());
        // (5/13) = (13/37) = (37/5) = -1
        let pr = predict_three_primes(5 * 13 * 37).unwrap().unwrap();
        assert_eq!(pr.case, Some(ThreePrimeCase::Quaternion));
        assert!(pr.premises_hold().unwrap());
    }

    #[test]
    fn three_primes_monotone_under_multiples() {
        for m in (3..3000u64).step_by(7) {
            if let Some(pr) = predict_three_primes(m).unwrap() {
                assert!(pr.premises_hold().unwrap());
                for k in [2u64, 3, 5, 7, 13] {
                    assert!(predict_three_primes(m * k).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn pqq_examples() {
        let pr = predict_pqq(13, 3, 23, DEFAULT_CONIC_BOUND).unwrap().unwrap();
        assert_eq!(pr.modulus_m, 13 * 3 * 23);
        assert!(pr.premises_hold().unwrap());
        assert!(predict_pqq(5, 3, 7, DEFAULT_CONIC_BOUND).unwrap().is_none());
        assert!(predict_pqq(13, 3, 3, DEFAULT_CONIC_BOUND).is_err());
        assert!(predict_pqq(13, 5, 3, DEFAULT_CONIC_BOUND).is_err());
    }

    #[test]
    fn pqq_with_eight() {
        // (8/7) = (2/7) = +1, (8/23) = (2/23) = +1
        let pr = predict_pqq(8, 7, 23, DEFAULT_CONIC_BOUND).unwrap().unwrap();
        assert!(pr.uses_remark_8);
        assert!(pr.premises_hold().unwrap());
    }
}
