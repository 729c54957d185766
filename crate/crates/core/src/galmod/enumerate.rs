//! Exhaustive enumeration of small modules and the suites run over them.

use std::collections::HashSet;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::abelian::{self, Mat, Quotient, Shape};
use super::config::{check_p1am, check_p21, check_p3_tbu_guerry, NormConfiguration};
use super::split::{check_minus_exactness, idempotent_split, minus_split};
use super::{check_inaba, identity, invertible_mod_p, mat_mul, mat_pow, mat_sub, GModule};
use crate::arith::is_prime_u64;
use crate::error::{arg_err, Error, Result};

/// Caps on the brute-force search over endomorphism rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumLimits {
    pub max_endomorphisms: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_endomorphisms: 3u64.pow(10) }
    }
}

impl EnumLimits {
    /// Roughly 256 bytes are kept per automorphism during conjugacy reduction.
    pub fn from_memory_mb(mb: u64) -> EnumLimits {
        EnumLimits { max_endomorphisms: (mb.saturating_mul(1 << 20) / 256).max(1) }
    }
}

/// Partitions with parts in non-increasing order, each part at most `max_part`.
fn partitions(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max_part)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn to_i64(a: &Mat) -> Vec<Vec<i64>> {
    a.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

/// Unipotent Jordan forms with blocks of size at most `p`: the conjugacy
/// classes of elements of order dividing `p` in `GL_r(F_p)`.
fn jordan_forms(p: u64, r: usize) -> Vec<Mat> {
    partitions(r as u32, p as u32)
        .into_iter()
        .map(|blocks| {
            let mut a: Mat = vec![vec![0; r]; r];
            let mut start = 0;
            for b in blocks {
                for i in start..start + b as usize {
                    a[i][i] = 1 % p;
                    if i + 1 < start + b as usize {
                        a[i][i + 1] = 1;
                    }
                }
                start += b as usize;
            }
            a
        })
        .collect()
}

/// All `σ` with `σ^p = 1` on `shape`, one per conjugacy class under `Aut(M)`.
fn sigma_classes(shape: &Shape, limits: &EnumLimits) -> Result<Vec<Mat>> {
    if shape.exps.iter().all(|&e| e == 1) {
        return Ok(jordan_forms(shape.p, shape.rank()));
    }
    sigma_classes_brute(shape, limits)
}

/// Search over the whole endomorphism ring, reduced by conjugation.
pub(crate) fn sigma_classes_brute(shape: &Shape, limits: &EnumLimits) -> Result<Vec<Mat>> {
    let p = shape.p;
    let r = shape.rank();
    let mut slots = Vec::new();
    let mut total: u64 = 1;
    for i in 0..r {
        for j in 0..r {
            let step = p.pow(shape.exps[i].saturating_sub(shape.exps[j]));
            let count = p.pow(shape.exps[i].min(shape.exps[j]));
            total = total.saturating_mul(count);
            slots.push((i, j, step, count));
        }
    }
    if total > limits.max_endomorphisms {
        return Err(Error::Resource(format!(
            "{total} endomorphisms of shape {:?} exceed the limit {}",
            shape.exps, limits.max_endomorphisms
        )));
    }
    let id = identity(shape);
    let mut autos = Vec::new();
    let mut candidates = Vec::new();
    let mut idx = vec![0u64; slots.len()];
    loop {
        let mut a: Mat = vec![vec![0; r]; r];
        for (&(i, j, step, _), &t) in slots.iter().zip(&idx) {
            a[i][j] = step * t;
        }
        if invertible_mod_p(p, &a) {
            if mat_pow(shape, &a, p) == id {
                candidates.push(a.clone());
            }
            autos.push(a);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                break;
            }
            idx[k] += 1;
            if idx[k] < slots[k].3 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    let inverses: Vec<Mat> = autos.iter().map(|t| inverse_by_powers(shape, t)).collect();
    let mut seen: HashSet<Mat> = HashSet::new();
    let mut reps = Vec::new();
    for s in candidates {
        if seen.contains(&s) {
            continue;
        }
        for (t, ti) in autos.iter().zip(&inverses) {
            seen.insert(mat_mul(shape, &mat_mul(shape, t, &s), ti));
        }
        reps.push(s);
    }
    Ok(reps)
}

fn inverse_by_powers(shape: &Shape, a: &Mat) -> Mat {
    let id = identity(shape);
    let mut prev = id.clone();
    let mut pw = a.clone();
    while pw != id {
        prev = pw.clone();
        pw = mat_mul(shape, &pw, a);
    }
    prev
}

/// Every nonzero module of order at most `max_order`, up to isomorphism,
/// sorted by descriptor.
pub fn enumerate_modules(p: u64, max_order: u64, limits: &EnumLimits) -> Result<Vec<GModule>> {
    if !is_prime_u64(p) {
        return arg_err(format!("{p} is not prime"));
    }
    let mut out = Vec::new();
    let mut t = 1;
    while p.checked_pow(t).map_or(false, |n| n <= max_order) {
        for exps in partitions(t, t) {
            let shape = Shape::new(p, exps.clone());
            for s in sigma_classes(&shape, limits)? {
                out.push(GModule::new(p, exps.clone(), to_i64(&s))?);
            }
        }
        t += 1;
    }
    out.sort_by_key(|m| m.descriptor());
    Ok(out)
}

/// `I - N + N² - …` for unipotent `I + N`.
fn unipotent_inverse(shape: &Shape, a: &Mat) -> Mat {
    let id = identity(shape);
    let n = mat_sub(shape, a, &id);
    let mut out = id.clone();
    let mut term = id;
    for k in 1..=shape.rank() {
        term = mat_mul(shape, &term, &n);
        out = if k % 2 == 1 { mat_sub(shape, &out, &term) } else { super::mat_add(shape, &out, &term) };
    }
    out
}

/// Block sum `A ⊕ B ⊕ …` of modules carrying `δ`-blocks, re-sorted so that
/// exponents decrease and conjugated by a fixed unipotent automorphism so
/// that the splitting is not visible in the coordinates.
fn assemble(p: u64, blocks: &[(&GModule, Mat)]) -> Result<(GModule, Vec<Vec<i64>>)> {
    let exps: Vec<u32> = blocks.iter().flat_map(|(m, _)| m.exponents().to_vec()).collect();
    let r = exps.len();
    let mut sigma: Mat = vec![vec![0; r]; r];
    let mut delta: Mat = vec![vec![0; r]; r];
    let mut off = 0;
    for (m, d) in blocks {
        for i in 0..m.rank() {
            for j in 0..m.rank() {
                sigma[off + i][off + j] = m.sigma()[i][j];
                delta[off + i][off + j] = d[i][j];
            }
        }
        off += m.rank();
    }
    let mut perm: Vec<usize> = (0..r).collect();
    perm.sort_by(|&a, &b| exps[b].cmp(&exps[a]));
    let exps: Vec<u32> = perm.iter().map(|&i| exps[i]).collect();
    let permute = |a: &Mat| -> Mat { perm.iter().map(|&i| perm.iter().map(|&j| a[i][j]).collect()).collect() };
    let shape = Shape::new(p, exps.clone());
    let (sigma, delta) = (permute(&sigma), permute(&delta));
    let tau: Mat = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => 1 % shape.modulus(i),
                    std::cmp::Ordering::Less => p.pow(exps[i] - exps[j]) % shape.modulus(i),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect()
        })
        .collect();
    let tau_inv = unipotent_inverse(&shape, &tau);
    let conj = |a: &Mat| mat_mul(&shape, &mat_mul(&shape, &tau, a), &tau_inv);
    let m = GModule::new(p, exps, to_i64(&conj(&sigma)))?;
    Ok((m, to_i64(&conj(&delta))))
}

fn scalar_block(m: &GModule, k: i64) -> Mat {
    let s = m.shape();
    (0..m.rank())
        .map(|i| (0..m.rank()).map(|j| if i == j { k.rem_euclid(s.modulus(i) as i64) as u64 } else { 0 }).collect())
        .collect()
}

/// Modules with a commuting automorphism `δ` of order `q ∈ {2, 3}`:
/// `A ⊕ B` with `δ = 1 ⊕ -1` for `q = 2`, and `A ⊕ B ⊕ B` with `δ` acting on
/// `B ⊕ B` by `[[0, -1], [1, -1]]` for `q = 3`.
pub(crate) fn delta_modules(
    p: u64,
    q: u64,
    max_order: u64,
    limits: &EnumLimits,
) -> Result<Vec<(GModule, Vec<Vec<i64>>)>> {
    let mut mods = vec![GModule::new(p, vec![], vec![])?];
    mods.extend(enumerate_modules(p, max_order, limits)?);
    let mut out = Vec::new();
    for a in &mods {
        for b in &mods {
            let bo = match q {
                2 => b.order_exp(),
                3 => 2 * b.order_exp(),
                _ => return arg_err("only auxiliary groups of order 2 and 3 are generated"),
            };
            if (a.order_exp() + bo) == 0 || p.checked_pow(a.order_exp() + bo).map_or(true, |n| n > max_order) {
                continue;
            }
            let built = if q == 2 {
                assemble(p, &[(a, scalar_block(a, 1)), (b, scalar_block(b, -1))])?
            } else {
                let bb = sum_with_rotation(b)?;
                assemble(p, &[(a, scalar_block(a, 1)), (&bb.0, bb.1)])?
            };
            out.push(built);
        }
    }
    Ok(out)
}

/// `B ⊕ B` with `δ = [[0, -1], [1, -1]]`, an automorphism of order 3.
fn sum_with_rotation(b: &GModule) -> Result<(GModule, Mat)> {
    let r = b.rank();
    let shape = b.shape();
    let mut exps = b.exponents().to_vec();
    exps.extend_from_slice(b.exponents());
    let mut sigma = vec![vec![0i64; 2 * r]; 2 * r];
    let mut delta: Mat = vec![vec![0; 2 * r]; 2 * r];
    for i in 0..r {
        let m = shape.modulus(i);
        for j in 0..r {
            sigma[i][j] = b.sigma()[i][j] as i64;
            sigma[r + i][r + j] = b.sigma()[i][j] as i64;
        }
        delta[i][r + i] = m - 1;
        delta[r + i][i] = 1;
        delta[r + i][r + i] = m - 1;
    }
    // coordinates are re-sorted later; the pair is kept unsorted here
    let m = GModule { p: b.p(), exponents: exps, sigma: sigma.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect() };
    Ok((m, delta))
}

/// Which statement an enumeration run verifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumCheck {
    Inaba,
    P1am,
    P21,
    P3,
    Sf,
    Minus,
}

impl FromStr for EnumCheck {
    type Err = Error;
    fn from_str(s: &str) -> Result<EnumCheck> {
        Ok(match s {
            "inaba" => EnumCheck::Inaba,
            "p1am" => EnumCheck::P1am,
            "p21" => EnumCheck::P21,
            "p3" => EnumCheck::P3,
            "sf" => EnumCheck::Sf,
            "minus" => EnumCheck::Minus,
            _ => return arg_err(format!("unknown check {s:?}; expected inaba, p1am, p21, p3, sf or minus")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub p: u64,
    pub max_order: u64,
    pub check: EnumCheck,
    pub modules: usize,
    pub instances: usize,
    pub counterexamples: Vec<String>,
}

/// Norm kernels `K ⊇ (1-σ)M`, as generator lists, in a fixed order.
pub(crate) fn norm_kernels(m: &GModule) -> Vec<Vec<Vec<u64>>> {
    let shape = m.shape();
    let moved = m.image_gens(&m.one_minus_sigma());
    let q = Quotient::new(&shape, &moved);
    abelian::all_subgroups(&q.shape)
        .into_iter()
        .map(|gens| {
            let mut k = moved.clone();
            for g in gens {
                let mut x = shape.zero();
                for (c, l) in g.iter().zip(&q.lifts) {
                    x = shape.add(&x, &shape.scale(l, *c));
                }
                k.push(x);
            }
            k
        })
        .collect()
}

fn killed_by_nu(m: &GModule, k: &[Vec<u64>]) -> bool {
    let nu = m.nu_matrix();
    let s = m.shape();
    k.iter().all(|x| s.apply(&nu, x).iter().all(|&v| v == 0))
}

/// (instances, counterexamples) for one module.
type Outcome = (usize, Vec<String>);

fn run_on_module(m: &GModule, check: EnumCheck) -> Result<Outcome> {
    let mut n = 0;
    let mut bad = Vec::new();
    match check {
        EnumCheck::Inaba => {
            n += 1;
            let r = check_inaba(m);
            if !r.pass {
                bad.push(format!("{}: {}", m.descriptor(), r.witness.unwrap_or_default()));
            }
        }
        EnumCheck::P1am | EnumCheck::P21 => {
            for k in norm_kernels(m) {
                for cfg in NormConfiguration::all_with_kernel(m, &k)? {
                    n += 1;
                    let ok = if check == EnumCheck::P1am {
                        let r = check_p1am(&cfg);
                        r.holds && r.kernel_equals_cokernel
                    } else {
                        check_p21(&cfg).holds
                    };
                    if !ok {
                        bad.push(format!("{}: C = {:?}, j = {:?}", m.descriptor(), cfg.c_exponents(), cfg.transfer_matrix()));
                    }
                }
            }
        }
        EnumCheck::P3 => {
            for k in norm_kernels(m).into_iter().filter(|k| killed_by_nu(m, k)) {
                n += 1;
                let r = check_p3_tbu_guerry(&NormConfiguration::canonical(m, &k)?)?;
                if !r.pass {
                    bad.push(r.witness.unwrap_or_default());
                }
            }
        }
        EnumCheck::Sf | EnumCheck::Minus => unreachable!("handled on modules with an auxiliary action"),
    }
    Ok((n, bad))
}

fn run_on_pair(m: &GModule, delta: &[Vec<i64>], check: EnumCheck) -> Result<Outcome> {
    let mut n = 0;
    let mut bad = Vec::new();
    if check == EnumCheck::Sf {
        n += 1;
        let r = idempotent_split(m, delta)?;
        if !r.holds {
            bad.push(format!("{} with δ = {delta:?}", m.descriptor()));
        }
        return Ok((n, bad));
    }
    n += 1;
    if !minus_split(m, delta)?.complete {
        bad.push(format!("{} with J = {delta:?}: M ≠ M⁺ ⊕ M⁻", m.descriptor()));
    }
    let shape = m.shape();
    let j: Mat = delta.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    for k in norm_kernels(m) {
        let image: Vec<Vec<u64>> = k.iter().map(|x| shape.apply(&j, x)).collect();
        if !killed_by_nu(m, &k) || !abelian::contains(&shape, &k, &image) {
            continue;
        }
        n += 1;
        let r = check_minus_exactness(&NormConfiguration::canonical(m, &k)?, delta)?;
        if !r.exact {
            bad.push(format!("{} with J = {delta:?}, K = {k:?}", m.descriptor()));
        }
    }
    Ok((n, bad))
}

/// Runs `check` over every module of order at most `max_order`; results are
/// merged in descriptor order.
pub fn run_enumeration(p: u64, max_order: u64, check: EnumCheck, limits: &EnumLimits) -> Result<EnumerationReport> {
    if p == 2 {
        return arg_err("enumeration suites need an odd prime");
    }
    let outcomes: Vec<Result<Outcome>> = match check {
        EnumCheck::Sf | EnumCheck::Minus => {
            let mut pairs = delta_modules(p, 2, max_order, limits)?;
            if check == EnumCheck::Sf && p != 3 {
                pairs.extend(delta_modules(p, 3, max_order, limits)?);
            }
            pairs.sort_by_key(|(m, d)| (m.descriptor(), format!("{d:?}")));
            pairs.par_iter().map(|(m, d)| run_on_pair(m, d, check)).collect()
        }
        _ => {
            let mods = enumerate_modules(p, max_order, limits)?;
            mods.par_iter().map(|m| run_on_module(m, check)).collect()
        }
    };
    let mut instances = 0;
    let mut counterexamples = Vec::new();
    let mut modules = 0;
    for o in outcomes {
        let (n, bad) = o?;
        modules += 1;
        instances += n;
        counterexamples.extend(bad);
    }
    Ok(EnumerationReport { p, max_order, check, modules, instances, counterexamples })
}
