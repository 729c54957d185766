//! Decomposition under a commuting action of a cyclic group `Δ` of order
//! prime to `p`, and the minus part under an involution.

use serde::Serialize;

use super::abelian::{self, mul_mod, Elem, Mat, Shape};
use super::config::NormConfiguration;
use super::{identity, invertible_mod_p, is_graded, mat_add, mat_mul, tate_cohomology, tate_pair, GModule};
use crate::arith::mod_inv_u64;
use crate::error::{arg_err, Error, Result};

const MAX_DELTA_ORDER: u64 = 4096;
const MAX_IDEMPOTENT_SEARCH: u64 = 1_000_000;

/// One component `e_φ M` with both sides of `Ĥ^q(M)(φ) ≅ Ĥ^q(M(φ))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SfComponent {
    /// Coefficients of `e_φ` in `Z/p^E[Δ]`, lowest power of `δ` first.
    pub idempotent: Vec<u64>,
    pub module: GModule,
    pub h0_part: Vec<u32>,
    pub h0_of_part: Vec<u32>,
    pub hm1_part: Vec<u32>,
    pub hm1_of_part: Vec<u32>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub delta_order: u64,
    pub components: Vec<SfComponent>,
    /// the component orders multiply to `#M`
    pub complete: bool,
    pub holds: bool,
}

fn reduce_matrix(shape: &Shape, a: &[Vec<i64>]) -> Result<Mat> {
    let r = shape.rank();
    if a.len() != r || a.iter().any(|row| row.len() != r) {
        return arg_err(format!("the auxiliary action must be a {r}x{r} matrix"));
    }
    Ok(a.iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|&x| x.rem_euclid(shape.modulus(i) as i64) as u64).collect())
        .collect())
}

/// Validates an automorphism commuting with `σ` and returns it reduced.
fn commuting_automorphism(m: &GModule, delta: &[Vec<i64>]) -> Result<Mat> {
    let shape = m.shape();
    let d = reduce_matrix(&shape, delta)?;
    if !is_graded(&shape, &d) || !invertible_mod_p(m.p(), &d) {
        return arg_err("the auxiliary action is not an automorphism of the module");
    }
    if mat_mul(&shape, &d, &m.sigma) != mat_mul(&shape, &m.sigma, &d) {
        return arg_err("the auxiliary action does not commute with sigma");
    }
    Ok(d)
}

fn order_of(shape: &Shape, d: &Mat) -> Result<u64> {
    let id = identity(shape);
    let mut pw = d.clone();
    for q in 1..=MAX_DELTA_ORDER {
        if pw == id {
            return Ok(q);
        }
        pw = mat_mul(shape, &pw, d);
    }
    Err(Error::Unsupported(format!("auxiliary action of order above {MAX_DELTA_ORDER}")))
}

/// Product in `Z/m[x]/(x^q - 1)`.
fn cyc_mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let q = a.len();
    let mut c = vec![0; q];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[(i + j) % q] = (c[(i + j) % q] + mul_mod(x, y, m)) % m;
        }
    }
    c
}

/// Primitive idempotents of `F_p[x]/(x^q - 1)` by exhaustive search.
fn primitive_idempotents_mod_p(p: u64, q: u64) -> Result<Vec<Vec<u64>>> {
    let size = p.checked_pow(q as u32).filter(|&s| s <= MAX_IDEMPOTENT_SEARCH);
    let Some(size) = size else {
        return Err(Error::Unsupported(format!("idempotent search in F_{p}[C_{q}] is too large")));
    };
    let mut idem = Vec::new();
    for n in 1..size {
        let mut e = vec![0; q as usize];
        let mut t = n;
        for c in e.iter_mut() {
            *c = t % p;
            t /= p;
        }
        if cyc_mul(&e, &e, p) == e {
            idem.push(e);
        }
    }
    let primitive = idem
        .iter()
        .filter(|e| !idem.iter().any(|f| f != *e && cyc_mul(e, f, p) == *f))
        .cloned()
        .collect();
    Ok(primitive)
}

/// Hensel lift of an idempotent from `p` to `p^k` via `e ↦ 3e² - 2e³`.
fn lift_idempotent(e: &[u64], modulus: u64) -> Vec<u64> {
    let mut e = e.to_vec();
    loop {
        let e2 = cyc_mul(&e, &e, modulus);
        let e3 = cyc_mul(&e2, &e, modulus);
        let next: Vec<u64> = e2
            .iter()
            .zip(&e3)
            .map(|(&a, &b)| (mul_mod(3, a, modulus) + modulus - mul_mod(2, b, modulus)) % modulus)
            .collect();
        if next == e {
            return e;
        }
        e = next;
    }
}

/// `Σ c_k δ^k` acting on the module.
fn evaluate(shape: &Shape, d: &Mat, coeffs: &[u64]) -> Mat {
    let mut acc: Mat = identity(shape).iter().map(|r| vec![0; r.len()]).collect();
    let mut pw = identity(shape);
    for &c in coeffs {
        let term: Mat = pw
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&x| mul_mod(x, c, shape.modulus(i))).collect())
            .collect();
        acc = mat_add(shape, &acc, &term);
        pw = mat_mul(shape, &pw, d);
    }
    acc
}

fn tate_part(m: &GModule, e: &Mat, q: i32) -> Result<Vec<u32>> {
    let shape = m.shape();
    let (top, bottom) = tate_pair(m, q)?;
    let part: Vec<Elem> = top.iter().map(|x| shape.apply(e, x)).collect();
    Ok(abelian::subquotient_exps(&shape, &part, &bottom))
}

/// Splits `M` along the primitive idempotents of `Z/p^E[Δ]`, `Δ = <δ>`, and
/// compares `e_φ Ĥ^q(M)` with `Ĥ^q(e_φ M)` for `q = -1, 0`.
pub fn idempotent_split(m: &GModule, delta: &[Vec<i64>]) -> Result<SplitReport> {
    let shape = m.shape();
    let d = commuting_automorphism(m, delta)?;
    let q = order_of(&shape, &d)?;
    if q % m.p() == 0 {
        return arg_err(format!("the order {q} of Δ is divisible by p = {}", m.p()));
    }
    let top = m.p().pow(m.exponents().first().copied().unwrap_or(1));
    let mut components = Vec::new();
    for e0 in primitive_idempotents_mod_p(m.p(), q)? {
        let idempotent = lift_idempotent(&e0, top);
        let e = evaluate(&shape, &d, &idempotent);
        let module = m.submodule(&m.image_gens(&e));
        let h0_part = tate_part(m, &e, 0)?;
        let hm1_part = tate_part(m, &e, -1)?;
        let h0_of_part = tate_cohomology(&module, 0)?.exponents;
        let hm1_of_part = tate_cohomology(&module, -1)?.exponents;
        let agrees = h0_part == h0_of_part && hm1_part == hm1_of_part;
        components.push(SfComponent { idempotent, module, h0_part, h0_of_part, hm1_part, hm1_of_part, agrees });
    }
    let complete = components.iter().map(|c| c.module.order_exp()).sum::<u32>() == m.order_exp();
    let holds = complete && components.iter().all(|c| c.agrees);
    Ok(SplitReport { delta_order: q, components, complete, holds })
}

/// `M = M⁺ ⊕ M⁻` under an involution `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinusSplit {
    pub plus: GModule,
    pub minus: GModule,
    pub complete: bool,
}

fn half_idempotent(shape: &Shape, j: &Mat, sign: i64) -> Mat {
    let id = identity(shape);
    (0..shape.rank())
        .map(|i| {
            let md = shape.modulus(i);
            let half = mod_inv_u64(2 % md, md).unwrap_or(0);
            (0..shape.rank())
                .map(|k| {
                    let s = if sign > 0 { (id[i][k] + j[i][k]) % md } else { (id[i][k] + md - j[i][k]) % md };
                    mul_mod(s, half, md)
                })
                .collect()
        })
        .collect()
}

fn involution(m: &GModule, j: &[Vec<i64>]) -> Result<Mat> {
    if m.p() == 2 {
        return arg_err("the minus part needs 2 to be invertible, so p must be odd");
    }
    let jm = commuting_automorphism(m, j)?;
    let shape = m.shape();
    if mat_mul(&shape, &jm, &jm) != identity(&shape) {
        return arg_err("J is not an involution");
    }
    Ok(jm)
}

pub fn minus_split(m: &GModule, j: &[Vec<i64>]) -> Result<MinusSplit> {
    let jm = involution(m, j)?;
    let shape = m.shape();
    let plus = m.submodule(&m.image_gens(&half_idempotent(&shape, &jm, 1)));
    let minus = m.submodule(&m.image_gens(&half_idempotent(&shape, &jm, -1)));
    let complete = plus.order_exp() + minus.order_exp() == m.order_exp();
    Ok(MinusSplit { plus, minus, complete })
}

/// `1 → ker(N)⁻ → M⁻ → C⁻ → 1` for a configuration compatible with `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinusExactness {
    pub minus_order: u64,
    pub kernel_minus_order: u64,
    pub c_minus_order: u64,
    pub image_order: u64,
    /// `ker(N)⁻` lies in `M⁻` and is killed by `N`
    pub exact_left: bool,
    /// `ker(N)⁻` is the whole kernel of `N` on `M⁻`
    pub exact_middle: bool,
    /// `N(M⁻) = C⁻`
    pub surjective: bool,
    pub exact: bool,
}

pub fn check_minus_exactness(cfg: &NormConfiguration, j: &[Vec<i64>]) -> Result<MinusExactness> {
    let m = cfg.module();
    let jm = involution(m, j)?;
    let (ms, cs) = (m.shape(), cfg.c_shape());
    let norm: Mat = cfg.norm_matrix().to_vec();

    // J on C, induced through lifts of the generators
    let mut jc_cols = Vec::new();
    for k in 0..cs.rank() {
        let lift = abelian::preimage(&ms, &cs, &norm, &cs.unit(k)).expect("the norm map is onto");
        jc_cols.push(cs.apply(&norm, &ms.apply(&jm, &lift)));
    }
    let jc: Mat = (0..cs.rank()).map(|i| jc_cols.iter().map(|c| c[i]).collect()).collect();
    if mat_mul(&cs, &norm, &jm) != mat_mul(&cs, &jc, &norm) {
        return arg_err("the norm map is not compatible with J");
    }

    let em = half_idempotent(&ms, &jm, -1);
    let ec = half_idempotent(&cs, &jc, -1);
    let minus = m.image_gens(&em);
    let c_minus = abelian::image(&cs, &cs, &ec);
    let image: Vec<Elem> = minus.iter().map(|x| cs.apply(&norm, x)).collect();
    let kernel_minus: Vec<Elem> = cfg.norm_kernel().iter().map(|x| ms.apply(&em, x)).collect();

    let p = m.p();
    let minus_exp = m.sub_order_exp(&minus);
    let image_exp = abelian::order_exp(&cs, &image);
    let kernel_exp = m.sub_order_exp(&kernel_minus);
    let exact_left = abelian::contains(&ms, &minus, &kernel_minus)
        && kernel_minus.iter().all(|x| cs.apply(&norm, x).iter().all(|&v| v == 0));
    let exact_middle = exact_left && kernel_exp + image_exp == minus_exp;
    let surjective = abelian::same_subgroup(&cs, &image, &c_minus);
    Ok(MinusExactness {
        minus_order: p.pow(minus_exp),
        kernel_minus_order: p.pow(kernel_exp),
        c_minus_order: p.pow(abelian::order_exp(&cs, &c_minus)),
        image_order: p.pow(image_exp),
        exact_left,
        exact_middle,
        surjective,
        exact: exact_left && exact_middle && surjective,
    })
}
