//! Finite modules over the group ring of a cyclic group `G = <σ>` of prime
//! order `p`.
//!
//! A module is `M = ⊕ Z/p^{e_i}` with `σ` given by an integer matrix acting on
//! column vectors. Kernels, images and subquotients are computed by Smith
//! normal form over `Z` with the moduli `p^{e_i}` adjoined as relations.
//!
//! The norm configurations here are synthetic: they are built from a module
//! and a choice of submodule playing the role of the norm kernel, not from
//! number fields. The checks verify exactly the module-level statements that
//! the class group arguments rely on.

mod abelian;
mod config;
mod enumerate;
mod ring;
mod split;

#[cfg(test)]
mod tests;

use std::fmt;

use serde::Serialize;

use crate::arith::{is_prime_u64, mod_inv_u64};
use crate::error::{arg_err, Result};

use abelian::{mul_mod, Elem, Mat, Shape};

pub use config::{
    check_p1am, check_p21, check_p3_tbu_guerry, Check, NormConfiguration, P1AmReport, P21Report,
    P3Report,
};
pub use enumerate::{
    enumerate_modules, run_enumeration, EnumCheck, EnumLimits, EnumerationReport,
};
pub use ring::{solve_e1_e2, solve_e1_e2_with, E1E2Solution, GroupRingElement, DEFAULT_E1E2_BOUND};
pub use split::{
    check_minus_exactness, idempotent_split, minus_split, MinusExactness, MinusSplit, SfComponent,
    SplitReport,
};

/// A finite `Z[G]`-module of `p`-power order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GModule {
    p: u64,
    /// `e_1 ≥ … ≥ e_r`, the module being `⊕ Z/p^{e_i}`
    exponents: Vec<u32>,
    /// Row-major; row `i` is reduced modulo `p^{e_i}`.
    sigma: Vec<Vec<u64>>,
}

impl GModule {
    pub fn new(p: u64, exponents: Vec<u32>, sigma: Vec<Vec<i64>>) -> Result<GModule> {
        if !is_prime_u64(p) {
            return arg_err(format!("{p} is not prime"));
        }
        if exponents.iter().any(|&e| e == 0) || exponents.windows(2).any(|w| w[0] < w[1]) {
            return arg_err("elementary divisors must be positive and non-increasing");
        }
        let total: u32 = exponents.iter().sum();
        if p.checked_pow(total).map_or(true, |n| n > 1 << 62) {
            return arg_err("module order exceeds 2^62");
        }
        let r = exponents.len();
        if sigma.len() != r || sigma.iter().any(|row| row.len() != r) {
            return arg_err(format!("sigma must be a {r}x{r} matrix"));
        }
        let shape = Shape::new(p, exponents.clone());
        let reduced: Mat = sigma
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let m = shape.modulus(i) as i64;
                row.iter().map(|&x| x.rem_euclid(m) as u64).collect()
            })
            .collect();
        let module = GModule { p, exponents, sigma: reduced };
        module.validate()?;
        Ok(module)
    }

    /// `M` with trivial action.
    pub fn trivial(p: u64, exponents: Vec<u32>) -> Result<GModule> {
        let r = exponents.len();
        let id = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        GModule::new(p, exponents, id)
    }

    /// Parses `p:e1,e2,...:s11,s12,...` with `σ` given row-major.
    pub fn parse(descriptor: &str) -> Result<GModule> {
        let parts: Vec<&str> = descriptor.trim().split(':').collect();
        if parts.len() != 3 {
            return arg_err(format!("descriptor {descriptor:?} is not of the form p:e1,...:sigma"));
        }
        let p: u64 = parts[0].trim().parse().map_err(|_| bad_descriptor(descriptor))?;
        let list = |s: &str| -> Result<Vec<i64>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|_| bad_descriptor(descriptor)))
                .collect()
        };
        let exps = list(parts[1])?;
        if exps.iter().any(|&e| !(1..=62).contains(&e)) {
            return arg_err("elementary divisor exponents must lie in 1..=62");
        }
        let exps: Vec<u32> = exps.into_iter().map(|e| e as u32).collect();
        let entries = list(parts[2])?;
        let r = exps.len();
        if entries.len() != r * r {
            return arg_err(format!("sigma needs {} entries, got {}", r * r, entries.len()));
        }
        let sigma = entries.chunks(r.max(1)).take(r).map(|c| c.to_vec()).collect();
        GModule::new(p, exps, sigma)
    }

    pub fn descriptor(&self) -> String {
        let exps: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        let sigma: Vec<String> = self.sigma.iter().flatten().map(|e| e.to_string()).collect();
        format!("{}:{}:{}", self.p, exps.join(","), sigma.join(","))
    }

    fn validate(&self) -> Result<()> {
        let shape = self.shape();
        if !is_graded(&shape, &self.sigma) {
            return arg_err("sigma is not well defined on the direct sum");
        }
        if !invertible_mod_p(self.p, &self.sigma) {
            return arg_err("sigma is not invertible");
        }
        if mat_pow(&shape, &self.sigma, self.p) != identity(&shape) {
            return arg_err("sigma^p is not the identity");
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn sigma(&self) -> &[Vec<u64>] {
        &self.sigma
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.order_exp())
    }

    pub(crate) fn order_exp(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub(crate) fn shape(&self) -> Shape {
        Shape::new(self.p, self.exponents.clone())
    }

    pub(crate) fn id(&self) -> Mat {
        identity(&self.shape())
    }

    pub(crate) fn one_minus_sigma(&self) -> Mat {
        mat_sub(&self.shape(), &self.id(), &self.sigma)
    }

    pub(crate) fn nu_matrix(&self) -> Mat {
        let shape = self.shape();
        let mut acc = self.id();
        let mut pw = self.id();
        for _ in 1..self.p {
            pw = mat_mul(&shape, &pw, &self.sigma);
            acc = mat_add(&shape, &acc, &pw);
        }
        acc
    }

    pub(crate) fn scalar(&self, k: u64) -> Mat {
        let shape = self.shape();
        let id = self.id();
        id.iter().enumerate().map(|(i, row)| row.iter().map(|&x| mul_mod(x, k, shape.modulus(i))).collect()).collect()
    }

    pub(crate) fn kernel_gens(&self, a: &Mat) -> Vec<Elem> {
        let s = self.shape();
        abelian::kernel(&s, &s, a)
    }

    pub(crate) fn image_gens(&self, a: &Mat) -> Vec<Elem> {
        let s = self.shape();
        abelian::image(&s, &s, a)
    }

    pub(crate) fn sub_order_exp(&self, gens: &[Elem]) -> u32 {
        abelian::order_exp(&self.shape(), gens)
    }

    /// The submodule generated by `gens` as a module in its own right.
    pub(crate) fn submodule(&self, gens: &[Elem]) -> GModule {
        let shape = self.shape();
        let basis = abelian::Basis::new(&shape, gens);
        let sub = Shape::new(self.p, basis.exps.clone());
        let cols: Vec<Elem> = basis
            .elements
            .iter()
            .map(|h| {
                basis
                    .coordinates(&shape, &shape.apply(&self.sigma, h))
                    .expect("generators span a submodule")
            })
            .collect();
        let r = sub.rank();
        let sigma = (0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect();
        GModule { p: self.p, exponents: sub.exps, sigma }
    }
}

fn bad_descriptor(d: &str) -> crate::error::Error {
    crate::error::Error::Argument(format!("cannot parse module descriptor {d:?}"))
}

impl fmt::Display for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

pub(crate) fn identity(shape: &Shape) -> Mat {
    let r = shape.rank();
    (0..r).map(|i| (0..r).map(|j| if i == j { 1 % shape.modulus(i) } else { 0 }).collect()).collect()
}

/// Product of endomorphisms of `shape`; also used for homs into `shape`.
pub(crate) fn mat_mul(shape: &Shape, a: &Mat, b: &Mat) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    (0..shape.rank())
        .map(|i| {
            let m = shape.modulus(i);
            (0..cols)
                .map(|j| a[i].iter().zip(b).fold(0, |acc, (&x, row)| (acc + mul_mod(x, row[j], m)) % m))
                .collect()
        })
        .collect()
}

pub(crate) fn mat_add(shape: &Shape, a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| x.iter().zip(y).map(|(u, v)| (u + v) % shape.modulus(i)).collect())
        .collect()
}

pub(crate) fn mat_sub(shape: &Shape, a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let m = shape.modulus(i);
            x.iter().zip(y).map(|(u, v)| (u + m - v) % m).collect()
        })
        .collect()
}

pub(crate) fn mat_pow(shape: &Shape, a: &Mat, mut k: u64) -> Mat {
    let mut out = identity(shape);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            out = mat_mul(shape, &out, &base);
        }
        base = mat_mul(shape, &base, &base);
        k >>= 1;
    }
    out
}

/// Entry `(i, j)` must kill `p^{e_j}` modulo `p^{e_i}`.
pub(crate) fn is_graded(shape: &Shape, a: &Mat) -> bool {
    (0..shape.rank()).all(|i| {
        (0..shape.rank()).all(|j| {
            let need = shape.exps[i].saturating_sub(shape.exps[j]);
            a[i][j] % shape.p.pow(need) == 0
        })
    })
}

/// An endomorphism of a finite p-group is bijective iff it is so modulo `p`.
pub(crate) fn invertible_mod_p(p: u64, a: &Mat) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| m[i][c] != 0) else {
            return false;
        };
        m.swap(c, piv);
        let inv = mod_inv_u64(m[c][c], p).unwrap();
        for i in c + 1..n {
            let f = mul_mod(m[i][c], inv, p);
            if f == 0 {
                continue;
            }
            for j in c..n {
                m[i][j] = (m[i][j] + p - mul_mod(f, m[c][j], p)) % p;
            }
        }
    }
    true
}

/// An endomorphism of a module, with its kernel and image available.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Endomorphism {
    p: u64,
    exponents: Vec<u32>,
    matrix: Vec<Vec<u64>>,
}

impl Endomorphism {
    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    fn shape(&self) -> Shape {
        Shape::new(self.p, self.exponents.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.shape().apply(&self.matrix, x)
    }

    pub fn kernel_order(&self) -> u64 {
        let s = self.shape();
        self.p.pow(abelian::order_exp(&s, &abelian::kernel(&s, &s, &self.matrix)))
    }

    pub fn image_order(&self) -> u64 {
        let s = self.shape();
        self.p.pow(abelian::order_exp(&s, &abelian::image(&s, &s, &self.matrix)))
    }

    /// Elementary divisor exponents of the image.
    pub fn image_structure(&self) -> Vec<u32> {
        let s = self.shape();
        abelian::structure(&s, &abelian::image(&s, &s, &self.matrix))
    }
}

/// The algebraic norm `ν = 1 + σ + … + σ^{p-1}`.
pub fn nu(m: &GModule) -> Endomorphism {
    Endomorphism { p: m.p, exponents: m.exponents.clone(), matrix: m.nu_matrix() }
}

/// `1 - σ` as an endomorphism.
pub fn one_minus_sigma(m: &GModule) -> Endomorphism {
    Endomorphism { p: m.p, exponents: m.exponents.clone(), matrix: m.one_minus_sigma() }
}

/// Orders of `M_k = ker (1-σ)^k` up to the first `k` with `M_k = M`, and of
/// the torsion subgroups `M^{(k)} = ker p^k` up to `k = e_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub kernel_orders: Vec<u64>,
    pub torsion_orders: Vec<u64>,
}

pub fn filtration(m: &GModule) -> Filtration {
    let shape = m.shape();
    let t = m.order_exp();
    let d = m.one_minus_sigma();
    let mut kernel_orders = vec![1];
    let mut pw = m.id();
    // (1-σ)^p ∈ p Z[σ], so (1-σ)^{p e_1} kills M
    let bound = m.p as usize * m.exponents.first().copied().unwrap_or(0) as usize;
    for _ in 0..bound {
        if *kernel_orders.last().unwrap() == m.order() {
            break;
        }
        pw = mat_mul(&shape, &pw, &d);
        kernel_orders.push(m.p.pow(m.sub_order_exp(&m.kernel_gens(&pw))));
    }
    debug_assert_eq!(*kernel_orders.last().unwrap(), m.p.pow(t));
    let e1 = m.exponents.first().copied().unwrap_or(0);
    let torsion_orders = (0..=e1)
        .map(|k| m.p.pow(m.sub_order_exp(&m.kernel_gens(&m.scalar(m.p.pow(k))))))
        .collect();
    Filtration { kernel_orders, torsion_orders }
}

/// Verdict on the filtration properties of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InabaReport {
    pub module: String,
    pub filtration: Filtration,
    pub nu_trivial: bool,
    /// strict growth until `M_n = M`
    pub item1: bool,
    /// `(M_n:M_{n-1}) ≤ … ≤ (M_2:M_1) ≤ #M_1`
    pub item2: bool,
    /// `M^{(n)} = M_{n(p-1)}` and the index bounds; `None` unless `M^ν = 1`
    pub item3: Option<bool>,
    pub pass: bool,
    pub witness: Option<String>,
}

pub fn check_inaba(m: &GModule) -> InabaReport {
    let p = m.p;
    let shape = m.shape();
    let order = m.order();
    let mut witness = None;
    let mut fail = |w: String| {
        if witness.is_none() {
            witness = Some(w);
        }
        false
    };

    // M_k for k up to the stabilisation point and one step beyond
    let d = m.one_minus_sigma();
    let bound = p as usize * m.exponents.first().copied().unwrap_or(0) as usize + 1;
    let mut kernels: Vec<Vec<Elem>> = vec![vec![]];
    let mut pw = m.id();
    for _ in 0..bound {
        pw = mat_mul(&shape, &pw, &d);
        kernels.push(m.kernel_gens(&pw));
    }
    let orders: Vec<u64> = kernels.iter().map(|k| p.pow(m.sub_order_exp(k))).collect();
    let n = orders.iter().position(|&o| o == order);

    let mut item1 = n.is_some() || fail(format!("(1-σ)^{bound} does not kill M"));
    if let Some(n) = n {
        for k in 0..orders.len() - 1 {
            let grows = orders[k + 1] > orders[k];
            if (k < n) != grows {
                item1 = fail(format!("M_{k} = M_{} but M_{k} ≠ M, or growth past M", k + 1));
            }
            if !abelian::contains(&shape, &kernels[k + 1], &kernels[k]) {
                item1 = fail(format!("M_{k} ⊄ M_{}", k + 1));
            }
        }
    }
    let n = n.unwrap_or(orders.len() - 1);

    let mut item2 = true;
    if n >= 1 {
        let m1 = orders[1];
        let idx: Vec<u64> = (2..=n).map(|k| orders[k] / orders[k - 1]).collect();
        if idx.first().map_or(false, |&i| i > m1) {
            item2 = fail(format!("(M_2:M_1) = {} > #M_1 = {m1}", idx[0]));
        }
        for w in idx.windows(2) {
            if w[1] > w[0] {
                item2 = fail(format!("filtration indices increase: {idx:?}"));
            }
        }
    }

    let nu_gens = m.image_gens(&m.nu_matrix());
    let nu_trivial = m.sub_order_exp(&nu_gens) == 0;
    let item3 = nu_trivial.then(|| {
        let mut ok = true;
        let e1 = m.exponents.first().copied().unwrap_or(0);
        for k in 0..=e1 {
            let torsion = m.kernel_gens(&m.scalar(p.pow(k)));
            let idx = k as usize * (p as usize - 1);
            let mk = if idx < kernels.len() { kernels[idx].clone() } else { kernels[n].clone() };
            if !abelian::same_subgroup(&shape, &torsion, &mk) {
                ok = fail(format!("M^({k}) ≠ M_{idx}"));
            }
        }
        let m1 = orders.get(1).copied().unwrap_or(1);
        let mp = m.image_gens(&m.scalar(p));
        let index = p.pow(m.order_exp() - m.sub_order_exp(&mp));
        if index < m1 || (index as u128) > (m1 as u128).pow(p as u32 - 1) {
            ok = fail(format!("(M:M^p) = {index} outside [#M_1, #M_1^(p-1)] with #M_1 = {m1}"));
        }
        if m.sub_order_exp(&mp) > 0 && (index as u128) < (p as u128).pow(p as u32 - 2) * m1 as u128 {
            ok = fail(format!("(M:M^p) = {index} < p^(p-2) #M_1 = {}", p.pow(p as u32 - 2) * m1));
        }
        ok
    });

    let filtration = filtration(m);
    let pass = item1 && item2 && item3.unwrap_or(true);
    InabaReport { module: m.descriptor(), filtration, nu_trivial, item1, item2, item3, pass, witness }
}

/// Elementary divisor description of a Tate cohomology group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TateGroup {
    pub q: i32,
    pub exponents: Vec<u32>,
    pub order: u64,
}

/// `Ĥ^0 = M^G / νM` and `Ĥ^{-1} = ker ν / (1-σ)M`.
pub fn tate_cohomology(m: &GModule, q: i32) -> Result<TateGroup> {
    let (top, bottom) = tate_pair(m, q)?;
    let exponents = abelian::subquotient_exps(&m.shape(), &top, &bottom);
    let order = m.p.pow(exponents.iter().sum());
    Ok(TateGroup { q, exponents, order })
}

/// Generators of the numerator and denominator of `Ĥ^q`.
pub(crate) fn tate_pair(m: &GModule, q: i32) -> Result<(Vec<Elem>, Vec<Elem>)> {
    match q {
        0 => Ok((m.kernel_gens(&m.one_minus_sigma()), m.image_gens(&m.nu_matrix()))),
        -1 => Ok((m.kernel_gens(&m.nu_matrix()), m.image_gens(&m.one_minus_sigma()))),
        _ => arg_err(format!("Tate cohomology is only provided in degrees -1 and 0, not {q}")),
    }
}
