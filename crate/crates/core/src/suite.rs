//! Regression suite over the worked examples and the checkable properties
//! behind them. Each check records the expected and the computed value.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::arith::{is_prime_u64, legendre};
use crate::bqf::{class_number, fundamental_unit, narrow_class_number};
use crate::characters::characters_of_subfield;
use crate::error::{arg_err, Result};
use crate::galmod::{run_enumeration, solve_e1_e2, EnumCheck, EnumLimits};
use crate::genus::{c4_condition, scholz_real, DEFAULT_CONIC_BOUND};
use crate::minusclass::h_minus;
use crate::predict::predict_pqq;
use crate::towers::{corollary_c2_check, golod_shafarevich};

/// Module names accepted by [`SuiteOptions::only`].
pub const SUITE_MODULES: [&str; 6] = ["quad", "hminus", "genus", "predict", "towers", "galmod"];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub only: Option<String>,
    pub conic_bound: u64,
    pub limits: EnumLimits,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { only: None, conic_bound: DEFAULT_CONIC_BOUND, limits: EnumLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteCheck {
    pub id: u32,
    pub module: &'static str,
    pub title: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub time_limit_secs: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteCheck {
    pub fn within_time(&self) -> bool {
        self.elapsed.as_secs_f64() < self.time_limit_secs as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
    pub all_pass: bool,
}

struct Entry {
    id: u32,
    module: &'static str,
    title: &'static str,
    limit: u64,
    run: fn(&SuiteOptions) -> Result<(String, String, bool)>,
}

const ENTRIES: [Entry; 11] = [
    Entry { id: 1, module: "quad", title: "h(229) = h(-23) = h(-31) = 3", limit: 3, run: class_numbers_three },
    Entry { id: 2, module: "quad", title: "h(13693) = 15", limit: 5, run: class_number_13693 },
    Entry { id: 3, module: "quad", title: "h(1765) = 6, fundamental unit of norm +1", limit: 5, run: field_1765 },
    Entry { id: 4, module: "hminus", title: "h- of the sextic subfield of Q(zeta_31) = 9", limit: 5, run: sextic_31 },
    Entry { id: 5, module: "hminus", title: "h- of the quartic subfield of Q(zeta_229) = 17", limit: 10, run: quartic_229 },
    Entry { id: 6, module: "hminus", title: "h- of Q(sqrt -p) equals h(-p), 3 < p < 500", limit: 60, run: quadratic_oracle },
    Entry { id: 7, module: "genus", title: "Scholz and C4 conditions against h+(pq), p, q < 200", limit: 60, run: scholz_suite },
    Entry { id: 8, module: "predict", title: "20 conic pairs with sign-definite product", limit: 30, run: conic_suite },
    Entry { id: 9, module: "towers", title: "Golod-Shafarevich values, monotonicity, p = 13693", limit: 1, run: tower_checks },
    Entry { id: 10, module: "galmod", title: "(E1)/(E2) for p = 3, 5, 7, 11, 13", limit: 5, run: e1_e2_checks },
    Entry { id: 11, module: "galmod", title: "exhaustive module checks, p = 3, order <= 81", limit: 120, run: galmod_suite },
];

pub fn run_paper_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    if let Some(m) = &opts.only {
        if !SUITE_MODULES.contains(&m.as_str()) {
            return arg_err(format!("unknown suite module {m:?}; expected one of {SUITE_MODULES:?}"));
        }
    }
    if opts.conic_bound == 0 {
        return arg_err("the conic bound must be positive");
    }
    let mut checks = Vec::new();
    for entry in ENTRIES.iter().filter(|s| opts.only.as_deref().map_or(true, |m| m == s.module)) {
        let start = Instant::now();
        let (expected, actual, pass) = match (entry.run)(opts) {
            Ok(v) => v,
            Err(e) => ("no error".to_string(), format!("error: {e}"), false),
        };
        checks.push(SuiteCheck {
            id: entry.id,
            module: entry.module,
            title: entry.title,
            expected,
            actual,
            pass,
            time_limit_secs: entry.limit,
            elapsed: start.elapsed(),
        });
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { checks, all_pass })
}

fn class_numbers_three(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let hs = [class_number(229)?, class_number(-23)?, class_number(-31)?];
    Ok(("[3, 3, 3]".into(), format!("{hs:?}"), hs == [3, 3, 3]))
}

fn class_number_13693(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let h = class_number(13693)?;
    Ok(("15".into(), h.to_string(), h == 15))
}

fn field_1765(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let h = class_number(1765)?;
    let unit = fundamental_unit(1765)?;
    let actual = format!("h = {h}, unit {} + {}·√1765 of norm {:+}", unit.x, unit.y, unit.norm);
    Ok(("h = 6, norm +1".into(), actual, h == 6 && unit.norm == 1))
}

fn h_minus_of(n: u64, d: u64) -> Result<u64> {
    let field = characters_of_subfield(n, d)?;
    let r = h_minus(&field)?;
    r.h_minus_u64().ok_or_else(|| crate::error::Error::Resource("h- does not fit in u64".into()))
}

fn sextic_31(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let h = h_minus_of(31, 6)?;
    Ok(("9".into(), h.to_string(), h == 9))
}

fn quartic_229(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let h = h_minus_of(229, 4)?;
    Ok(("17".into(), h.to_string(), h == 17))
}

fn quadratic_oracle(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let mut bad = Vec::new();
    let mut n = 0;
    for p in (7..500u64).filter(|&p| p % 4 == 3 && is_prime_u64(p)) {
        n += 1;
        let (a, b) = (h_minus_of(p, 2)?, class_number(-(p as i64))?);
        if a != b {
            bad.push(format!("p = {p}: {a} vs {b}"));
        }
    }
    Ok(("0 mismatches".into(), format!("{} mismatches over {n} primes {bad:?}", bad.len()), bad.is_empty()))
}

/// Pairs `p < q`, both `≡ 1 (mod 4)` and below `bound`, with `(p/q) = 1`.
pub fn scholz_pairs(bound: u64) -> Result<Vec<(u64, u64)>> {
    let primes: Vec<u64> = (5..bound).filter(|&p| p % 4 == 1 && is_prime_u64(p)).collect();
    let mut out = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[i + 1..] {
            if legendre(p, q)?.is_plus() {
                out.push((p, q));
            }
        }
    }
    Ok(out)
}

/// Exceptions to `scholz_real ⇔ 8 | h⁺(pq)` and to `c4_condition ⇔ 4 | h⁺(pq)`.
pub fn scholz_exceptions(bound: u64) -> Result<(usize, Vec<(u64, u64)>, Vec<(u64, u64)>)> {
    let pairs = scholz_pairs(bound)?;
    let mut eight = Vec::new();
    let mut four = Vec::new();
    for &(p, q) in &pairs {
        let hp = narrow_class_number((p * q) as i64)?;
        if scholz_real(p, q)? != (hp % 8 == 0) {
            eight.push((p, q));
        }
        if c4_condition(p, q)? != (hp % 4 == 0) {
            four.push((p, q));
        }
    }
    Ok((pairs.len(), eight, four))
}

fn scholz_suite(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let (n, eight, four) = scholz_exceptions(200)?;
    let shown: Vec<_> = eight.iter().take(5).collect();
    let actual = format!(
        "{n} pairs; Scholz vs 8 | h+: {} exceptions (first {shown:?}); C4 vs 4 | h+: {} exceptions",
        eight.len(),
        four.len()
    );
    Ok(("0 exceptions in both".into(), actual, eight.is_empty() && four.is_empty()))
}

/// The first `count` admissible triples `(p, q, q')` with all entries below `bound`.
pub fn conic_triples(bound: u64, count: usize) -> Result<Vec<(u64, u64, u64)>> {
    let ps: Vec<u64> = (5..bound).filter(|&p| p % 4 == 1 && is_prime_u64(p)).collect();
    let qs: Vec<u64> = (3..bound).filter(|&q| q % 4 == 3 && is_prime_u64(q)).collect();
    let mut out = Vec::new();
    for &p in &ps {
        for (i, &q) in qs.iter().enumerate() {
            for &q2 in &qs[i + 1..] {
                if out.len() == count {
                    return Ok(out);
                }
                if legendre(p, q)?.is_plus() && legendre(p, q2)?.is_plus() {
                    out.push((p, q, q2));
                }
            }
        }
    }
    Ok(out)
}

fn conic_suite(opts: &SuiteOptions) -> Result<(String, String, bool)> {
    let triples = conic_triples(100, 20)?;
    let mut bad = Vec::new();
    for &(p, q, q2) in &triples {
        let pred = predict_pqq(p, q, q2, opts.conic_bound)?;
        let ok = match pred {
            Some(pred) => pred.premises_hold()?,
            None => false,
        };
        if !ok {
            bad.push((p, q, q2));
        }
    }
    let actual = format!("{} triples, {} failures {bad:?}", triples.len(), bad.len());
    Ok(("20 triples, 0 failures".into(), actual, triples.len() == 20 && bad.is_empty()))
}

/// Violations of monotonicity of the Golod–Shafarevich verdict on `[0, n)²`:
/// more rank never hurts, more units never help.
pub fn gs_monotonicity_violations(n: u64) -> usize {
    let mut bad = 0;
    for r in 0..n {
        for u in 0..n {
            let here = golod_shafarevich(r, u).infinite;
            if here && r + 1 < n && !golod_shafarevich(r + 1, u).infinite {
                bad += 1;
            }
            if here && u > 0 && !golod_shafarevich(r, u - 1).infinite {
                bad += 1;
            }
        }
    }
    bad
}

fn tower_checks(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let gs = golod_shafarevich(14, 30).infinite;
    let bad = gs_monotonicity_violations(50);
    let c2 = corollary_c2_check(13693)?.infinite;
    let actual = format!("GS(14, 30) = {gs}, {bad} monotonicity violations, C2(13693) infinite = {c2}");
    Ok(("true, 0, true".into(), actual, gs && bad == 0 && c2))
}

fn e1_e2_checks(_: &SuiteOptions) -> Result<(String, String, bool)> {
    let mut ok = Vec::new();
    for p in [3, 5, 7, 11, 13] {
        ok.push(solve_e1_e2(p)?.verified);
    }
    Ok(("all verified".into(), format!("{ok:?}"), ok.iter().all(|&b| b)))
}

fn galmod_suite(opts: &SuiteOptions) -> Result<(String, String, bool)> {
    let checks = [EnumCheck::Inaba, EnumCheck::P1am, EnumCheck::P3, EnumCheck::Sf, EnumCheck::Minus];
    let mut parts = Vec::new();
    let mut total_bad = 0;
    for c in checks {
        let r = run_enumeration(3, 81, c, &opts.limits)?;
        total_bad += r.counterexamples.len();
        parts.push(format!("{c:?}: {} instances, {} counterexamples", r.instances, r.counterexamples.len()));
    }
    Ok(("0 counterexamples".into(), parts.join("; "), total_bad == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_module_is_rejected() {
        let opts = SuiteOptions { only: Some("nope".into()), ..Default::default() };
        assert!(run_paper_suite(&opts).is_err());
        let opts = SuiteOptions { conic_bound: 0, ..Default::default() };
        assert!(run_paper_suite(&opts).is_err());
    }

    #[test]
    fn only_filters_by_module() {
        let opts = SuiteOptions { only: Some("towers".into()), ..Default::default() };
        let r = run_paper_suite(&opts).unwrap();
        assert_eq!(r.checks.iter().map(|c| c.id).collect::<Vec<_>>(), vec![9]);
        assert!(r.all_pass);
    }

    #[test]
    fn triples_are_admissible_and_distinct() {
        let t = conic_triples(100, 20).unwrap();
        assert_eq!(t.len(), 20);
        for &(p, q, q2) in &t {
            assert!(p % 4 == 1 && q % 4 == 3 && q2 % 4 == 3 && q < q2);
            assert!(legendre(p, q).unwrap().is_plus() && legendre(p, q2).unwrap().is_plus());
        }
        let mut s = t.clone();
        s.dedup();
        assert_eq!(s.len(), 20);
    }

    #[test]
    fn scholz_pairs_are_quadratic_residues() {
        for (p, q) in scholz_pairs(60).unwrap() {
            assert!(p < q && legendre(q, p).unwrap().is_plus());
        }
    }
}
