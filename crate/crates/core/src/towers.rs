//! Rank bounds and class field tower criteria.
//!
//! Nothing here computes a tower: every verdict evaluates an inequality whose
//! inputs come from `bqf` or from the caller's count of ramified places.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime_u64, mod_pow_u64};
use crate::bqf;
use crate::error::{arg_err, Error, Result};

/// Jehne's bound `rank Cl_p(K/k) ≥ #Ram(K/k) - rank_p E_k/H - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankBound {
    pub p: u64,
    pub ramified_count: u64,
    pub unit_rank_bound: u64,
    pub lower_bound: i64,
}

impl RankBound {
    /// The bound as a rank, i.e. clamped at zero.
    pub fn reported(&self) -> u64 {
        self.lower_bound.max(0) as u64
    }
}

pub fn jehne_bound(p: u64, ramified_count: u64, unit_rank_bound: u64) -> RankBound {
    RankBound {
        p,
        ramified_count,
        unit_rank_bound,
        lower_bound: ramified_count as i64 - unit_rank_bound as i64 - 1,
    }
}

/// Guaranteed 2-rank `n - 1` for a cyclic unramified extension of degree `n`
/// of the real subfield: `n` ramified primes above a principal prime plus the
/// real places, against a unit index bounded by the number of real places.
pub fn morishima_bound(n: u64) -> Result<u64> {
    if n == 0 {
        return arg_err("the degree n must be positive");
    }
    // the count of real places cancels; any value gives the same bound
    let real_places = n;
    Ok(jehne_bound(2, n + real_places, real_places).reported())
}

/// Golod–Shafarevich: the tower is infinite once `r ≥ 2 + 2√(u + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerVerdict {
    pub rank_r: u64,
    pub unit_rank: u64,
    /// `2 + 2√(unit_rank + 1)`, for display only.
    pub threshold: f64,
    pub infinite: bool,
}

pub fn golod_shafarevich(rank_r: u64, unit_rank: u64) -> TowerVerdict {
    let infinite = rank_r >= 2 && {
        let d = (rank_r - 2) as u128;
        d * d >= 4 * (unit_rank as u128 + 1)
    };
    TowerVerdict {
        rank_r,
        unit_rank,
        threshold: 2.0 + 2.0 * ((unit_rank + 1) as f64).sqrt(),
        infinite,
    }
}

/// Cyclic quartic field of prime conductor `p ≡ 5 (mod 8)` over `Q(√p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C2Verdict {
    pub p: u64,
    pub h: u64,
    /// Class number bound `h ≥ 15`.
    pub infinite: bool,
    /// The criterion at 2-rank `h - 1` and unit rank `2h`.
    pub criterion: TowerVerdict,
    pub note: &'static str,
}

const C2_NOTE: &str = "the same conclusion is asserted for every complex cyclic quartic field \
containing Q(sqrt p); only the field of conductor p is covered by this check";

pub fn corollary_c2_check(p: u64) -> Result<C2Verdict> {
    if !is_prime_u64(p) || p % 8 != 5 {
        return arg_err(format!("{p} is not a prime ≡ 5 (mod 8)"));
    }
    let h = bqf::class_number(p as i64)?;
    if h % 2 == 0 {
        return Err(Error::Certification(format!("h(Q(√{p})) = {h} should be odd")));
    }
    Ok(C2Verdict {
        p,
        h,
        infinite: h >= 15,
        criterion: golod_shafarevich(h - 1, 2 * h),
        note: C2_NOTE,
    })
}

/// The two complex cyclic quartic subfields of `Q(ζ_pq)` containing `Q(√pq)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PqVerdict {
    pub p: u64,
    pub q: u64,
    pub h: u64,
    pub unit_norm: i32,
    /// In the positive-norm case `h` is even, so `h ≥ 5` already means `h ≥ 6`.
    pub h_even: bool,
    pub infinite: bool,
    /// The criterion at 2-rank `2h - 1` and unit rank `2h`.
    pub criterion: TowerVerdict,
}

pub fn corollary_pq_check(p: u64, q: u64) -> Result<PqVerdict> {
    for x in [p, q] {
        if !is_prime_u64(x) || x % 4 != 1 {
            return arg_err(format!("{x} is not a prime ≡ 1 (mod 4)"));
        }
    }
    if p == q {
        return arg_err(format!("the primes must be distinct, got {p} twice"));
    }
    if (p * q) % 8 != 5 {
        return arg_err(format!("{p}·{q} = {} is not ≡ 5 (mod 8)", p * q));
    }
    let d = (p * q) as i64;
    let h = bqf::class_number(d)?;
    let unit_norm = bqf::fundamental_unit(d)?.norm;
    let h_even = h % 2 == 0;
    if unit_norm == 1 && !h_even {
        return Err(Error::Certification(format!("h(Q(√{d})) = {h} should be even")));
    }
    Ok(PqVerdict {
        p,
        q,
        h,
        unit_norm,
        h_even,
        infinite: unit_norm == 1 && h >= 6,
        criterion: golod_shafarevich(2 * h - 1, 2 * h),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OzakiLimits {
    pub max_r: u64,
    pub max_pq: u64,
}

impl Default for OzakiLimits {
    fn default() -> Self {
        OzakiLimits { max_r: 10_000, max_pq: 10_000 }
    }
}

/// Primes `p ≡ q ≡ 1 (mod ℓ)` and `r` with `n` the largest odd divisor of
/// `r - 1` such that `p^((r-1)/n) ≡ q^((r-1)/n) ≡ 1 (mod r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OzakiParams {
    pub ell: u64,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub n: u64,
    /// `2n` ramified primes against unit rank `n - 1`.
    pub relative_rank: RankBound,
    /// `n - 1`, after the index-`ℓ` norm step.
    pub rank_lower_bound: u64,
}

fn odd_part(mut x: u64) -> u64 {
    while x % 2 == 0 && x > 0 {
        x /= 2;
    }
    x
}

fn multiplicative_order(a: u64, r: u64) -> u64 {
    let m = r - 1;
    let mut ord = m;
    for (f, _) in crate::arith::factor_u64(m) {
        while ord % f == 0 && mod_pow_u64(a, ord / f, r) == 1 {
            ord /= f;
        }
    }
    ord
}

/// Largest odd `n | r - 1` with `p^((r-1)/n) ≡ q^((r-1)/n) ≡ 1 (mod r)`.
pub fn ozaki_n(p: u64, q: u64, r: u64) -> u64 {
    let ap = (r - 1) / multiplicative_order(p % r, r);
    let aq = (r - 1) / multiplicative_order(q % r, r);
    odd_part(num_integer::gcd(ap, aq))
}

pub fn ozaki_search(ell: u64, n_target: u64, limits: OzakiLimits) -> Result<OzakiParams> {
    if ell % 2 == 0 || !is_prime_u64(ell) {
        return arg_err(format!("ℓ must be an odd prime, got {ell}"));
    }
    if n_target == 0 {
        return arg_err("the target n must be positive");
    }
    let candidates: Vec<u64> =
        (ell + 1..=limits.max_pq).filter(|&x| x % ell == 1 && is_prime_u64(x)).collect();
    for r in (3..=limits.max_r).filter(|&r| is_prime_u64(r)) {
        if odd_part(r - 1) < n_target {
            continue;
        }
        let usable: Vec<(u64, u64)> = candidates
            .iter()
            .filter(|&&x| x != r)
            .map(|&x| (x, (r - 1) / multiplicative_order(x % r, r)))
            .filter(|&(_, a)| odd_part(a) >= n_target)
            .collect();
        for (i, &(p, ap)) in usable.iter().enumerate() {
            for &(q, aq) in &usable[i + 1..] {
                let n = odd_part(num_integer::gcd(ap, aq));
                if n >= n_target {
                    let relative_rank = jehne_bound(ell, 2 * n, n - 1);
                    return Ok(OzakiParams {
                        ell,
                        p,
                        q,
                        r,
                        n,
                        relative_rank,
                        rank_lower_bound: n - 1,
                    });
                }
            }
        }
    }
    Err(Error::Resource(format!(
        "no parameters with n ≥ {n_target} for r ≤ {} and p, q ≤ {}",
        limits.max_r, limits.max_pq
    )))
}

/// Re-derives `n` from its definition by trying every odd divisor of `r - 1`.
pub fn verify_ozaki(params: &OzakiParams) -> bool {
    let OzakiParams { ell, p, q, r, n, .. } = *params;
    let works = |d: u64| {
        let e = (r - 1) / d;
        mod_pow_u64(p, e, r) == 1 && mod_pow_u64(q, e, r) == 1
    };
    let distinct = p != q && p != r && q != r;
    let primes = [p, q, r].iter().all(|&x| is_prime_u64(x) && x % 2 == 1);
    let congruent = p % ell == 1 && q % ell == 1;
    let largest = (n + 1..r).filter(|d| d % 2 == 1 && (r - 1) % d == 0).all(|d| !works(d));
    distinct && primes && congruent && n % 2 == 1 && (r - 1) % n == 0 && works(n) && largest
}

/// One line of a scan over primes `p ≡ 5 (mod 8)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub h: u64,
    pub infinite: bool,
}

/// [`corollary_c2_check`] over all primes `p ≡ 5 (mod 8)` in `[min, max]`,
/// in ascending order.
pub fn scan_c2(min: u64, max: u64) -> Result<Vec<ScanRow>> {
    if min > max {
        return arg_err(format!("empty range [{min}, {max}]"));
    }
    let ps: Vec<u64> = (min..=max).filter(|&p| p % 8 == 5 && is_prime_u64(p)).collect();
    ps.par_iter()
        .map(|&p| corollary_c2_check(p).map(|v| ScanRow { p, h: v.h, infinite: v.infinite }))
        .collect()
}

/// Smallest prime `p ≡ 5 (mod 8)` in `[min, max]` with `h(Q(√p)) ≥ 15`.
pub fn first_c2_infinite(min: u64, max: u64) -> Result<Option<ScanRow>> {
    Ok(scan_c2(min, max)?.into_iter().find(|r| r.infinite))
}
