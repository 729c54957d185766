//! Genus theory of quadratic fields: Rédei matrices and 4-ranks, the
//! conditions for cyclic quartic extensions of `Q(√pq)` unramified outside
//! infinity, and rational points on the conics `x² - p y² = -q z²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{
    exact_sqrt, factor_u64, is_fundamental_discriminant, is_prime_u64, jacobi, legendre,
    quartic_symbol, Symbol,
};
use crate::error::{arg_err, Error, Result};

/// Default bound on `y` and `z` in [`solve_conic`].
pub const DEFAULT_CONIC_BOUND: u64 = 10_000;

/// Rédei matrix of a fundamental discriminant over F₂.
///
/// Row `i` belongs to the prime discriminant `d_i` with underlying prime
/// `p_i`. Off the diagonal, `a_ij = 1` iff the Kronecker symbol
/// `(d_j / p_i) = -1`; the diagonal entry is the sum of the rest of its row,
/// so `a_ii = 1` iff `((D/d_i) / p_i) = -1`. Every row then sums to zero and
/// the 4-rank of the narrow class group is `t - 1 - rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedeiMatrix {
    pub discriminant: i64,
    pub prime_discriminants: Vec<i64>,
    pub entries: Vec<Vec<u8>>,
}

impl RedeiMatrix {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental_discriminant(d) {
            return arg_err(format!("{d} is not a fundamental discriminant"));
        }
        let ds = prime_discriminants(d);
        let t = ds.len();
        let mut entries = vec![vec![0u8; t]; t];
        for i in 0..t {
            let pi = prime_of(ds[i]);
            let mut row_sum = 0u8;
            for j in (0..t).filter(|&j| j != i) {
                let a = u8::from(kronecker(ds[j], pi) == -1);
                entries[i][j] = a;
                row_sum ^= a;
            }
            entries[i][i] = row_sum;
        }
        Ok(RedeiMatrix { discriminant: d, prime_discriminants: ds, entries })
    }

    pub fn rank(&self) -> usize {
        f2_rank(&self.entries)
    }

    pub fn four_rank(&self) -> usize {
        let t = self.prime_discriminants.len();
        t - 1 - self.rank()
    }
}

/// Signed prime discriminants `p* = (-1)^((p-1)/2) p`, and `-4`, `8` or `-8`
/// for the even part, whose product is `d`.
pub fn prime_discriminants(d: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut rest = d;
    for (p, _) in factor_u64(d.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        let p = p as i64;
        let star = if p % 4 == 1 { p } else { -p };
        out.push(star);
        rest /= star;
    }
    if rest != 1 {
        out.insert(0, rest);
    }
    out
}

fn prime_of(d: i64) -> i64 {
    if d % 2 == 0 {
        2
    } else {
        d.abs()
    }
}

/// Kronecker symbol `(d / p)` for a discriminant `d` and a prime `p`.
fn kronecker(d: i64, p: i64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    jacobi(d, p).map(Symbol::value).unwrap_or(0)
}

fn f2_rank(m: &[Vec<u8>]) -> usize {
    let mut rows: Vec<Vec<u8>> = m.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] == 1 {
                let src = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// 4-rank of the narrow class group of the fundamental discriminant `d`.
pub fn redei_four_rank(d: i64) -> Result<usize> {
    Ok(RedeiMatrix::new(d)?.four_rank())
}

fn check_pair(p: u64, q: u64) -> Result<()> {
    for x in [p, q] {
        if !is_prime_u64(x) || x % 4 != 1 {
            return arg_err(format!("{x} is not a prime ≡ 1 (mod 4)"));
        }
    }
    if p == q {
        return arg_err(format!("the primes must be distinct, got {p} twice"));
    }
    Ok(())
}

/// `(p/q) = +1`: the condition for `Q(√pq)` to have a cyclic quartic
/// extension unramified outside infinity.
pub fn c4_condition(p: u64, q: u64) -> Result<bool> {
    check_pair(p, q)?;
    Ok(legendre(p, q)?.is_plus())
}

/// Scholz: the cyclic quartic extension is totally real iff
/// `(p/q)_4 = (q/p)_4`.
pub fn scholz_real(p: u64, q: u64) -> Result<bool> {
    check_pair(p, q)?;
    if !legendre(p, q)?.is_plus() {
        return arg_err(format!("({p}/{q}) = -1, the quartic symbols are undefined"));
    }
    Ok(quartic_symbol(p, q)? == quartic_symbol(q, p)?)
}

/// Hilbert symbol `(a, b)_v` for `v` a prime or `None` for the real place.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, v: Option<u64>) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return arg_err("Hilbert symbol of zero");
    }
    let Some(v) = v else {
        return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
    };
    let vb = BigInt::from(v);
    let split = |x: &BigInt| {
        let mut x = x.clone();
        let mut k = 0u32;
        while (&x % &vb).is_zero() {
            x /= &vb;
            k += 1;
        }
        (k, x)
    };
    let (alpha, u) = split(a);
    let (beta, w) = split(b);
    if v == 2 {
        let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        let eps = |x: &BigInt| (m8(x) % 4 == 3) as u32;
        let omega = |x: &BigInt| matches!(m8(x), 3 | 5) as u32;
        let e = eps(&u) * eps(&w) + alpha * omega(&w) + beta * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s = if (alpha * beta) % 2 == 1 && v % 4 == 3 { -1 } else { 1 };
    if beta % 2 == 1 {
        s *= legendre(u.clone(), v)?.value();
    }
    if alpha % 2 == 1 {
        s *= legendre(w.clone(), v)?.value();
    }
    Ok(s)
}

/// Primitive solution of `x² - p y² = -q z²` with `z > 0`, `x, y ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConicSolution {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub y: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub z: BigInt,
}

impl ConicSolution {
    pub fn satisfies(&self, p: u64, q: u64) -> bool {
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let lhs = &self.x * &self.x - &p * &self.y * &self.y;
        let primitive = self.x.gcd(&self.y).gcd(&self.z) == BigInt::from(1);
        lhs == -q * &self.z * &self.z && primitive && !self.z.is_zero()
    }
}

/// True when `x² - p y² + q z² = 0` has nontrivial solutions in every
/// completion of Q, hence (Hasse–Minkowski) a rational one.
pub fn conic_locally_solvable(p: u64, q: u64) -> Result<bool> {
    let (a, b) = (BigInt::from(p), -BigInt::from(q));
    let mut places: Vec<Option<u64>> = vec![None, Some(2)];
    for (r, _) in factor_u64(p).into_iter().chain(factor_u64(q)) {
        places.push(Some(r));
    }
    places.sort();
    places.dedup();
    for v in places {
        if hilbert_symbol(&a, &b, v)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest primitive solution, ordered by `(z, y)`, with `y, z ≤ bound`.
pub fn solve_conic(p: u64, q: u64, bound: u64) -> Result<ConicSolution> {
    if !is_prime_u64(p) || p % 4 != 1 {
        return arg_err(format!("{p} is not a prime ≡ 1 (mod 4)"));
    }
    search_conic(p, q, bound)
}

/// [`solve_conic`] for any non-square `p > 1`; used with `p = 8`.
pub(crate) fn search_conic(p: u64, q: u64, bound: u64) -> Result<ConicSolution> {
    if !is_prime_u64(q) || q == p {
        return arg_err(format!("{q} must be a prime different from {p}"));
    }
    if bound == 0 {
        return arg_err("conic search bound must be positive");
    }
    if !conic_locally_solvable(p, q)? {
        return arg_err(format!("x² - {p}y² = -{q}z² has no nontrivial rational solution"));
    }
    let (pb, qb) = (BigInt::from(p), BigInt::from(q));
    for z in 1..=bound {
        let qz2 = &qb * BigInt::from(z) * BigInt::from(z);
        for y in 0..=bound {
            let x2 = &pb * BigInt::from(y) * BigInt::from(y) - &qz2;
            if x2.is_negative() {
                continue;
            }
            if let Some(x) = exact_sqrt(&x2) {
                let yb = BigInt::from(y);
                let zb = BigInt::from(z);
                if x.gcd(&yb).gcd(&zb) == BigInt::from(1) {
                    return Ok(ConicSolution { x, y: yb, z: zb });
                }
            }
        }
    }
    Err(Error::Resource(format!(
        "no solution of x² - {p}y² = -{q}z² with y, z ≤ {bound}"
    )))
}

/// Sign of `a + b√p`.
fn sign_of(a: &BigInt, b: &BigInt, p: u64) -> Symbol {
    let sa = a.signum().to_i32().unwrap();
    let sb = b.signum().to_i32().unwrap();
    if sa == 0 || sb == 0 || sa == sb {
        return Symbol::from_sign(sa + sb);
    }
    // opposite signs: the larger absolute value wins
    let a2 = a * a;
    let pb2 = BigInt::from(p) * b * b;
    Symbol::from_sign(if a2 > pb2 { sa } else { sb })
}

/// Signs of `x + y√p` under the embeddings `√p > 0` and `√p < 0`.
pub fn signature_of_alpha(sol: &ConicSolution, p: u64) -> (Symbol, Symbol) {
    (sign_of(&sol.x, &sol.y, p), sign_of(&sol.x, &(-&sol.y), p))
}

/// Signs of `α_q α_q'` under both embeddings.
pub fn product_signature(s1: &ConicSolution, s2: &ConicSolution, p: u64) -> (Symbol, Symbol) {
    let (a1, b1) = signature_of_alpha(s1, p);
    let (a2, b2) = signature_of_alpha(s2, p);
    (a1 * a2, b1 * b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::{narrow_class_group, narrow_class_number, class_group};
    use proptest::prelude::*;

    fn primes_1_mod_4(limit: u64) -> Vec<u64> {
        (5..limit).filter(|&p| p % 4 == 1 && is_prime_u64(p)).collect()
    }

    fn group_four_rank(d: i64) -> usize {
        let orders = if d > 0 {
            narrow_class_group(d).unwrap().orders
        } else {
            class_group(d).unwrap().orders
        };
        orders.iter().filter(|&&o| o % 4 == 0).count()
    }

    #[test]
    fn four_rank_examples() {
        assert_eq!(redei_four_rank(221).unwrap(), 1);
        assert_eq!(redei_four_rank(21).unwrap(), 0);
        assert_eq!(redei_four_rank(5).unwrap(), 0);
        assert!(redei_four_rank(20).is_err());
    }

    #[test]
    fn prime_discriminant_factorization() {
        assert_eq!(prime_discriminants(21), vec![-3, -7]);
        assert_eq!(prime_discriminants(-84), vec![-4, -3, -7]);
        assert_eq!(prime_discriminants(221), vec![13, 17]);
        assert_eq!(prime_discriminants(-40), vec![-8, 5]);
        assert_eq!(prime_discriminants(24), vec![-8, -3]);
    }

    #[test]
    fn four_rank_matches_class_group() {
        for d in (-4000..4000i64).filter(|&d| is_fundamental_discriminant(d)) {
            let r = redei_four_rank(d).unwrap();
            let t = prime_discriminants(d).len();
            assert!(r <= t - 1);
            assert_eq!(r, group_four_rank(d), "D={d}");
        }
    }

    #[test]
    fn c4_and_scholz_examples() {
        assert!(c4_condition(13, 17).unwrap());
        assert!(!c4_condition(5, 13).unwrap());
        assert!(c4_condition(13, 13).is_err());
        assert!(c4_condition(3, 13).is_err());
        assert!(!scholz_real(13, 17).unwrap());
        assert!(scholz_real(5, 5).is_err());
        assert!(scholz_real(5, 13).is_err());
    }

    #[test]
    fn c4_matches_narrow_class_numbers() {
        let ps = primes_1_mod_4(200);
        for &p in &ps {
            for &q in ps.iter().filter(|&&q| q > p) {
                let hp = narrow_class_number((p * q) as i64).unwrap();
                assert_eq!(c4_condition(p, q).unwrap(), hp % 4 == 0, "{p} {q}");
            }
        }
    }

    #[test]
    fn hilbert_symbol_values() {
        let b = |x: i64| BigInt::from(x);
        // (-1,-1) is -1 exactly at 2 and infinity
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), None).unwrap(), -1);
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), Some(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), Some(3)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&b(2), &b(3), Some(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(3), Some(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&b(5), &b(-11), Some(11)).unwrap(), 1);
    }

    #[test]
    fn conic_examples() {
        let s = solve_conic(13, 3, DEFAULT_CONIC_BOUND).unwrap();
        assert_eq!((s.x.clone(), s.y.clone(), s.z.clone()), (7.into(), 2.into(), 1.into()));
        assert_eq!(signature_of_alpha(&s, 13), (Symbol::Plus, Symbol::Minus));
        // -7 + 2√13 > 0 still, only the pattern has to stay mixed
        let neg = ConicSolution { x: -s.x.clone(), ..s.clone() };
        assert_eq!(signature_of_alpha(&neg, 13), (Symbol::Plus, Symbol::Minus));
        let neg = ConicSolution { x: -s.x.clone(), y: -s.y.clone(), ..s.clone() };
        assert_eq!(signature_of_alpha(&neg, 13), (Symbol::Minus, Symbol::Plus));
        let s = solve_conic(5, 11, DEFAULT_CONIC_BOUND).unwrap();
        assert_eq!((s.x.clone(), s.y.clone(), s.z.clone()), (3.into(), 2.into(), 1.into()));
        let s = solve_conic(17, 19, DEFAULT_CONIC_BOUND).unwrap();
        assert!(s.satisfies(17, 19));
        assert!(matches!(solve_conic(5, 3, 100), Err(Error::Argument(_))));
    }

    #[test]
    fn local_test_agrees_with_search() {
        for p in primes_1_mod_4(60) {
            for q in (2..60u64).filter(|&q| is_prime_u64(q) && q != p) {
                let local = conic_locally_solvable(p, q).unwrap();
                // brute force over a small box
                let mut found = false;
                'o: for z in 1..60i64 {
                    for y in 0..60i64 {
                        let x2 = p as i64 * y * y - q as i64 * z * z;
                        if x2 >= 0 && exact_sqrt(&BigInt::from(x2)).is_some() {
                            found = true;
                            break 'o;
                        }
                    }
                }
                assert_eq!(local, found, "{p} {q}");
            }
        }
    }

    proptest! {
        #[test]
        fn solutions_have_mixed_signature(i in 0usize..20, j in 0usize..25) {
            let ps = primes_1_mod_4(100);
            let qs: Vec<u64> = (3..100).filter(|&q| is_prime_u64(q)).collect();
            let (p, q) = (ps[i % ps.len()], qs[j % qs.len()]);
            prop_assume!(p != q && conic_locally_solvable(p, q).unwrap());
            let s = solve_conic(p, q, DEFAULT_CONIC_BOUND).unwrap();
            prop_assert!(s.satisfies(p, q));
            let (a, b) = signature_of_alpha(&s, p);
            prop_assert_eq!(a * b, Symbol::Minus);
        }
    }
}
