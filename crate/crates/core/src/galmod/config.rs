//! Norm/transfer pairs `N: M → C`, `j: C → M` modelled on the norm and
//! extension maps of class groups in a cyclic extension of degree `p`.

use serde::Serialize;

use super::abelian::{self, Basis, Elem, Mat, Quotient, Shape};
use super::{mat_mul, mat_pow, GModule};
use crate::error::{arg_err, Error, Result};

/// `M` together with `N: M → C` (equivariant, onto, `C` with trivial action)
/// and `j: C → M^G` with `N ∘ j = p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormConfiguration {
    module: GModule,
    /// `C = ⊕ Z/p^{c_k}`
    c_exponents: Vec<u32>,
    /// rows indexed by the coordinates of `C`
    norm: Vec<Vec<u64>>,
    /// rows indexed by the coordinates of `M`
    transfer: Vec<Vec<u64>>,
}

/// Entry `(i, j)` of a map `src → dst` must kill `p^{e_j}` modulo `p^{f_i}`.
fn is_hom(src: &Shape, dst: &Shape, a: &Mat) -> bool {
    a.len() == dst.rank()
        && a.iter().enumerate().all(|(i, row)| {
            row.len() == src.rank()
                && row.iter().enumerate().all(|(j, &x)| {
                    x < dst.modulus(i) && x % src.p.pow(dst.exps[i].saturating_sub(src.exps[j])) == 0
                })
        })
}

fn reduce(dst: &Shape, a: &[Vec<i64>]) -> Mat {
    a.iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|&x| x.rem_euclid(dst.modulus(i) as i64) as u64).collect())
        .collect()
}

impl NormConfiguration {
    pub fn new(
        module: GModule,
        c_exponents: Vec<u32>,
        norm: Vec<Vec<i64>>,
        transfer: Vec<Vec<i64>>,
    ) -> Result<NormConfiguration> {
        if c_exponents.iter().any(|&e| e == 0) || c_exponents.windows(2).any(|w| w[0] < w[1]) {
            return arg_err("exponents of C must be positive and non-increasing");
        }
        let c = Shape::new(module.p(), c_exponents.clone());
        let m = module.shape();
        if norm.len() != c.rank() || transfer.len() != m.rank() {
            return arg_err("norm or transfer matrix has the wrong number of rows");
        }
        let cfg = NormConfiguration {
            norm: reduce(&c, &norm),
            transfer: reduce(&m, &transfer),
            module,
            c_exponents,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let m = self.module.shape();
        let c = self.c_shape();
        if !is_hom(&m, &c, &self.norm) || !is_hom(&c, &m, &self.transfer) {
            return arg_err("norm or transfer is not a well defined homomorphism");
        }
        if abelian::order_exp(&c, &abelian::image(&m, &c, &self.norm)) != c.order_exp() {
            return arg_err("the norm map is not surjective");
        }
        let n_sigma = mat_mul(&c, &self.norm, &self.module.sigma);
        if n_sigma != self.norm {
            return arg_err("the norm map is not equivariant");
        }
        let nj = mat_mul(&c, &self.norm, &self.transfer);
        let p_id: Mat = (0..c.rank())
            .map(|i| (0..c.rank()).map(|k| if i == k { self.module.p() % c.modulus(i) } else { 0 }).collect())
            .collect();
        if nj != p_id {
            return arg_err("N ∘ j is not the p-th power map");
        }
        let moved = mat_mul(&m, &self.module.one_minus_sigma(), &self.transfer);
        if moved.iter().flatten().any(|&x| x != 0) {
            return arg_err("the image of j is not fixed by sigma");
        }
        Ok(())
    }

    /// `C = M/K` with `N` the projection and `j` induced by `ν`; requires
    /// `(1-σ)M ⊆ K ⊆ ker ν`, so that `ν = j ∘ N`.
    pub fn canonical(module: &GModule, kernel: &[Vec<u64>]) -> Result<NormConfiguration> {
        let shape = module.shape();
        let nu = module.nu_matrix();
        if !abelian::contains(&shape, kernel, &module.image_gens(&module.one_minus_sigma())) {
            return arg_err("the kernel must contain (1-σ)M");
        }
        if kernel.iter().any(|k| shape.apply(&nu, k).iter().any(|&x| x != 0)) {
            return arg_err("the kernel must be killed by ν");
        }
        let q = Quotient::new(&shape, kernel);
        let transfer_cols: Vec<Elem> = q.lifts.iter().map(|l| shape.apply(&nu, l)).collect();
        Ok(Self::assemble(module, q, &transfer_cols))
    }

    /// Every configuration with norm kernel `K`, one per admissible `j`.
    pub fn all_with_kernel(module: &GModule, kernel: &[Vec<u64>]) -> Result<Vec<NormConfiguration>> {
        let shape = module.shape();
        if !abelian::contains(&shape, kernel, &module.image_gens(&module.one_minus_sigma())) {
            return arg_err("the kernel must contain (1-σ)M");
        }
        let q = Quotient::new(&shape, kernel);
        let fixed = Basis::new(&shape, &module.kernel_gens(&module.one_minus_sigma())).enumerate(&shape);
        // candidates for j of the k-th generator of C
        let choices: Vec<Vec<Elem>> = (0..q.shape.rank())
            .map(|k| {
                let target = q.shape.scale(&q.shape.unit(k), module.p());
                let ord = q.shape.modulus(k);
                fixed
                    .iter()
                    .filter(|x| q.shape.apply(&q.proj, x) == target)
                    .filter(|x| shape.scale(x, ord).iter().all(|&v| v == 0))
                    .cloned()
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        if choices.iter().any(|c| c.is_empty()) {
            return Ok(out);
        }
        loop {
            let cols: Vec<Elem> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            out.push(Self::assemble(module, q.clone(), &cols));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn assemble(module: &GModule, q: Quotient, transfer_cols: &[Elem]) -> NormConfiguration {
        let r = module.rank();
        let transfer = (0..r).map(|i| transfer_cols.iter().map(|c| c[i]).collect()).collect();
        let cfg = NormConfiguration {
            module: module.clone(),
            c_exponents: q.shape.exps,
            norm: q.proj,
            transfer,
        };
        debug_assert!(cfg.validate().is_ok());
        cfg
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn c_exponents(&self) -> &[u32] {
        &self.c_exponents
    }

    pub fn norm_matrix(&self) -> &[Vec<u64>] {
        &self.norm
    }

    pub fn transfer_matrix(&self) -> &[Vec<u64>] {
        &self.transfer
    }

    pub(crate) fn c_shape(&self) -> Shape {
        Shape::new(self.module.p(), self.c_exponents.clone())
    }

    pub fn c_order(&self) -> u64 {
        self.module.p().pow(self.c_exponents.iter().sum())
    }

    /// Rank of `C`.
    pub fn rank_c(&self) -> usize {
        self.c_exponents.len()
    }

    pub(crate) fn norm_kernel(&self) -> Vec<Elem> {
        abelian::kernel(&self.module.shape(), &self.c_shape(), &self.norm)
    }

    pub(crate) fn transfer_image(&self) -> Vec<Elem> {
        abelian::image(&self.c_shape(), &self.module.shape(), &self.transfer)
    }

    /// Rank of `ker j`.
    pub fn gamma(&self) -> usize {
        let c = self.c_shape();
        abelian::structure(&c, &abelian::kernel(&c, &self.module.shape(), &self.transfer)).len()
    }

    /// Whether `ν = j ∘ N`.
    pub fn is_canonical(&self) -> bool {
        let (m, c) = (self.module.shape(), self.c_shape());
        let nu = self.module.nu_matrix();
        (0..m.rank()).all(|i| {
            let e = m.unit(i);
            m.apply(&self.transfer, &c.apply(&self.norm, &e)) == m.apply(&nu, &e)
        })
    }
}

/// `#M^G = (ker N : (1-σ)M) · #C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1AmReport {
    pub fixed_order: u64,
    pub kernel_index: u64,
    pub c_order: u64,
    /// `#ker(1-σ) = #coker(1-σ)`
    pub kernel_equals_cokernel: bool,
    pub holds: bool,
}

pub fn check_p1am(cfg: &NormConfiguration) -> P1AmReport {
    let m = &cfg.module;
    let p = m.p();
    let d = m.one_minus_sigma();
    let fixed = m.sub_order_exp(&m.kernel_gens(&d));
    let moved = m.sub_order_exp(&m.image_gens(&d));
    let kernel = m.sub_order_exp(&cfg.norm_kernel());
    let c = cfg.c_exponents.iter().sum::<u32>();
    P1AmReport {
        fixed_order: p.pow(fixed),
        kernel_index: p.pow(kernel - moved),
        c_order: p.pow(c),
        kernel_equals_cokernel: fixed == m.order_exp() - moved,
        holds: fixed == kernel - moved + c,
    }
}

/// `#M ≥ p^{r-γ} #C` with `r = rank C`, `γ = rank ker j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P21Report {
    pub r: usize,
    pub gamma: usize,
    pub module_order: u64,
    pub bound: u64,
    pub holds: bool,
}

pub fn check_p21(cfg: &NormConfiguration) -> P21Report {
    let p = cfg.module.p();
    let (r, gamma) = (cfg.rank_c(), cfg.gamma());
    let bound_exp = (r - gamma) as u32 + cfg.c_exponents.iter().sum::<u32>();
    P21Report {
        r,
        gamma,
        module_order: cfg.module.order(),
        bound: p.pow(bound_exp),
        holds: cfg.module.order_exp() >= bound_exp,
    }
}

/// A hypothesis/conclusion pair; the check passes unless it is applicable and fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub applicable: bool,
    pub holds: bool,
}

impl Check {
    fn new(applicable: bool, holds: bool) -> Check {
        Check { applicable, holds }
    }

    pub fn ok(&self) -> bool {
        !self.applicable || self.holds
    }
}

/// Consequences of `ν = j ∘ N` for the image of `j` and for `M^p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P3Report {
    pub module: String,
    /// `log_p (M : j(C))`
    pub index_exp: u32,
    pub gamma: usize,
    pub rank_image: usize,
    pub rank_module: usize,
    /// `a ≤ p-2+γ ⇒ j(C) = M^p`
    pub p3: Check,
    /// `rank j(C) ≥ rank M - (p-3) ⇒ ker ν elementary abelian`
    pub pn: Check,
    /// `rank j(C) = rank M ⇒ j(C) = M^p`
    pub tbu: Check,
    /// `M cyclic and nontrivial ⇔ M/j(C) ≅ Z/p`
    pub guerry: Check,
    /// `(1-σ)^{p-1}M ≠ 1 ⇒ #M ≥ p^{p-1} #M_1`
    pub ingredient_growth: Check,
    /// `(1-σ)^{p-1}M = 1 ⇒ M^p = M^ν`
    pub ingredient_norm: Check,
    pub pass: bool,
    pub witness: Option<String>,
}

pub fn check_p3_tbu_guerry(cfg: &NormConfiguration) -> Result<P3Report> {
    let m = &cfg.module;
    let p = m.p();
    if p == 2 {
        return arg_err("these statements need an odd prime");
    }
    if !cfg.is_canonical() {
        return Err(Error::Argument("the configuration does not satisfy ν = j ∘ N".into()));
    }
    let shape = m.shape();
    let image = cfg.transfer_image();
    let index_exp = m.order_exp() - m.sub_order_exp(&image);
    let gamma = cfg.gamma();
    let rank_image = abelian::structure(&shape, &image).len();
    let rank_module = m.rank();
    let mp = m.image_gens(&m.scalar(p));
    let image_is_mp = abelian::same_subgroup(&shape, &image, &mp);

    let p3 = Check::new(index_exp as i64 <= p as i64 - 2 + gamma as i64, image_is_mp);

    let ker_nu = m.kernel_gens(&m.nu_matrix());
    let elementary = ker_nu.iter().all(|x| shape.scale(x, p).iter().all(|&v| v == 0));
    let pn = Check::new(rank_image as i64 + (p as i64 - 3) >= rank_module as i64, elementary);

    let tbu = Check::new(rank_image == rank_module, image_is_mp);

    let cyclic = rank_module == 1;
    let quotient_zp = abelian::subquotient_exps(&shape, &abelian::image(&shape, &shape, &m.id()), &image) == [1];
    let guerry = Check::new(true, cyclic == quotient_zp);

    let d = m.one_minus_sigma();
    let top = mat_pow(&shape, &d, p - 1);
    let killed = top.iter().flatten().all(|&x| x == 0);
    let m1 = m.sub_order_exp(&m.kernel_gens(&d));
    let ingredient_growth = Check::new(!killed, m.order_exp() >= (p as u32 - 1) + m1);
    let m_nu = m.image_gens(&m.nu_matrix());
    let ingredient_norm = Check::new(killed, abelian::same_subgroup(&shape, &mp, &m_nu));

    let named = [
        ("P3", p3),
        ("PN", pn),
        ("TBU", tbu),
        ("Guerry", guerry),
        ("growth", ingredient_growth),
        ("norm", ingredient_norm),
    ];
    let witness = named.iter().find(|(_, c)| !c.ok()).map(|(name, _)| {
        format!(
            "{name} fails on {} with C exponents {:?}, j = {:?}",
            m.descriptor(),
            cfg.c_exponents,
            cfg.transfer
        )
    });
    Ok(P3Report {
        module: m.descriptor(),
        index_exp,
        gamma,
        rank_image,
        rank_module,
        p3,
        pn,
        tbu,
        guerry,
        ingredient_growth,
        ingredient_norm,
        pass: witness.is_none(),
        witness,
    })
}
