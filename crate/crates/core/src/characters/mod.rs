//! Dirichlet characters of `(Z/f)*` on fixed generators, the character groups
//! of subfields of cyclotomic fields, and exact values in `Q(ζ_m)`.

mod cyclo;

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

pub use cyclo::{cyclotomic_polynomial, CycloRational};

use crate::arith::{euler_phi, factor_u64, mod_pow_u64};
use crate::error::{arg_err, Result};

/// `(Z/f)*` as a product of cyclic groups with discrete logarithms.
#[derive(Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    /// `(generator, order)`, one per cyclic factor.
    pub generators: Vec<(u64, u64)>,
    /// `logs[a]` is the exponent vector of `a`, or `None` when `gcd(a, f) > 1`.
    logs: Vec<Option<Vec<u64>>>,
}

fn smallest_primitive_root(pe: u64, p: u64) -> u64 {
    let phi = euler_phi(pe);
    let primes: Vec<u64> = factor_u64(phi).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| g % p != 0 && primes.iter().all(|&q| mod_pow_u64(g, phi / q, pe) != 1))
        .expect("odd prime powers have primitive roots")
}

/// Element congruent to `x` modulo `m` and to 1 modulo `f / m` (coprime parts).
fn crt_lift(x: u64, m: u64, f: u64) -> u64 {
    let other = f / m;
    if other == 1 {
        return x % f;
    }
    // t = 1 + k·other with k ≡ (x - 1)/other (mod m)
    let inv = crate::arith::mod_inv_u64(other % m, m).unwrap_or(0);
    let k = ((x % m + m - 1) % m) as u128 * inv as u128 % m as u128;
    ((1 + k * other as u128) % f as u128) as u64
}

/// Generators of `(Z/f)*` with their orders: the smallest primitive root for
/// each odd prime power, `-1` and `5` for `2^e` with `e ≥ 3`, `-1` for `4`.
pub fn unit_group_generators(f: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if f <= 2 {
        return out;
    }
    for (p, e) in factor_u64(f) {
        let pe = p.pow(e);
        if p == 2 {
            if e >= 2 {
                out.push((crt_lift(pe - 1, pe, f), 2));
            }
            if e >= 3 {
                out.push((crt_lift(5, pe, f), pe / 4));
            }
        } else {
            let g = smallest_primitive_root(pe, p);
            out.push((crt_lift(g, pe, f), euler_phi(pe)));
        }
    }
    out
}

impl UnitGroup {
    pub fn new(f: u64) -> Result<Arc<Self>> {
        if f == 0 {
            return arg_err("modulus must be positive");
        }
        let generators = unit_group_generators(f);
        let mut logs: Vec<Option<Vec<u64>>> = vec![None; f as usize];
        let mut cur = vec![(1 % f, Vec::new())];
        for &(g, n) in &generators {
            let mut next = Vec::with_capacity(cur.len() * n as usize);
            for (x, v) in cur {
                let mut y = x;
                for k in 0..n {
                    let mut w = v.clone();
                    w.push(k);
                    next.push((y, w));
                    y = (y as u128 * g as u128 % f as u128) as u64;
                }
            }
            cur = next;
        }
        for (x, v) in cur {
            logs[x as usize] = Some(v);
        }
        if f == 1 {
            logs[0] = Some(Vec::new());
        }
        Ok(Arc::new(UnitGroup { modulus: f, generators, logs }))
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.1).product()
    }

    pub fn log(&self, a: i64) -> Option<&[u64]> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        self.logs[r].as_deref()
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.generators.iter().fold(1, |l, g| l.lcm(&g.1))
    }

    pub fn is_cyclic(&self) -> bool {
        self.generators.len() <= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// `χ(g_i) = ζ_{n_i}^{k_i}` on the generators `g_i` of orders `n_i`.
#[derive(Debug, Clone, Serialize)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    pub parity: Parity,
    #[serde(skip)]
    group: Arc<UnitGroup>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn new(group: &Arc<UnitGroup>, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != group.generators.len() {
            return arg_err("exponent vector length does not match the generators");
        }
        let exponents: Vec<u64> =
            exponents.iter().zip(&group.generators).map(|(&k, &(_, n))| k % n).collect();
        let order = exponents
            .iter()
            .zip(&group.generators)
            .fold(1u64, |l, (&k, &(_, n))| l.lcm(&(n / k.gcd(&n))));
        let mut chi = DirichletCharacter {
            modulus: group.modulus,
            exponents,
            order,
            conductor: group.modulus,
            parity: Parity::Even,
            group: group.clone(),
        };
        chi.parity = match chi.exponent_at(-1) {
            Some(0) | None => Parity::Even,
            _ => Parity::Odd,
        };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    pub fn trivial(group: &Arc<UnitGroup>) -> Self {
        Self::new(group, vec![0; group.generators.len()]).unwrap()
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `k` with `χ(a) = ζ_order^k`, or `None` when `gcd(a, f) > 1`.
    pub fn exponent_at(&self, a: i64) -> Option<u64> {
        let log = self.group.log(a)?;
        let l = self.order;
        let mut e = 0u64;
        for ((&x, &k), &(_, n)) in log.iter().zip(&self.exponents).zip(&self.group.generators) {
            // ζ_n^{kx} = ζ_l^{kxl/n}; kl/n is integral since n/gcd(k, n) divides l
            let num = (k as u128 * x as u128 * l as u128) / n as u128;
            e = ((e as u128 + num) % l as u128) as u64;
        }
        Some(e)
    }

    fn compute_conductor(&self) -> u64 {
        let f = self.modulus;
        let mut ds = crate::arith::divisors_u64(f);
        ds.sort_unstable();
        for d in ds {
            let trivial_on_kernel = (1..=f as i64)
                .step_by(d as usize)
                .all(|a| matches!(self.exponent_at(a), Some(0) | None));
            if trivial_on_kernel {
                return d;
            }
        }
        f
    }

    /// Exponent of the associated primitive character at `a`, modulo the conductor.
    pub fn primitive_exponent_at(&self, a: i64) -> Option<u64> {
        let c = self.conductor as i64;
        if a.gcd(&c) != 1 {
            return None;
        }
        let base = a.rem_euclid(c);
        (0..self.modulus as i64)
            .map(|k| base + k * c)
            .find(|&x| x.gcd(&(self.modulus as i64)) == 1)
            .and_then(|x| self.exponent_at(x))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return arg_err("characters of different moduli");
        }
        let e = self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect();
        Self::new(&self.group, e)
    }

    pub fn conj(&self) -> Self {
        let e = self.exponents.iter().zip(&self.group.generators).map(|(&k, &(_, n))| (n - k) % n).collect();
        Self::new(&self.group, e).unwrap()
    }
}

/// `χ(a)` in `Q(ζ_order)`; zero when `gcd(a, f) > 1`.
pub fn char_value(chi: &DirichletCharacter, a: i64) -> CycloRational {
    match chi.exponent_at(a) {
        Some(k) => CycloRational::zeta_pow(chi.order, k as i64),
        None => CycloRational::zero(chi.order),
    }
}

/// Character group of an abelian field inside `Q(ζ_n)`.
#[derive(Debug, Clone, Serialize)]
pub struct SubfieldSpec {
    pub modulus: u64,
    pub degree: u64,
    pub characters: Vec<DirichletCharacter>,
}

impl SubfieldSpec {
    pub fn odd_characters(&self) -> impl Iterator<Item = &DirichletCharacter> {
        self.characters.iter().filter(|c| c.parity == Parity::Odd)
    }

    pub fn is_imaginary(&self) -> bool {
        self.odd_characters().next().is_some()
    }

    /// Conductor of the field: the lcm of the character conductors.
    pub fn conductor(&self) -> u64 {
        self.characters.iter().fold(1, |l, c| l.lcm(&c.conductor))
    }

    /// `a ∈ (Z/n)*` fixing the field, i.e. in the kernel of every character.
    pub fn fixing_subgroup(&self) -> Vec<u64> {
        (1..=self.modulus)
            .filter(|&a| a.gcd(&self.modulus) == 1)
            .filter(|&a| self.characters.iter().all(|c| c.exponent_at(a as i64) == Some(0)))
            .map(|a| a % self.modulus)
            .collect()
    }
}

fn all_characters(group: &Arc<UnitGroup>) -> Vec<DirichletCharacter> {
    let mut vecs: Vec<Vec<u64>> = vec![Vec::new()];
    for &(_, n) in &group.generators {
        vecs = vecs
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    vecs.into_iter().map(|v| DirichletCharacter::new(group, v).unwrap()).collect()
}

/// The degree-`d` subfield of `Q(ζ_n)`, when it is unique.
pub fn characters_of_subfield(n: u64, d: u64) -> Result<SubfieldSpec> {
    let group = UnitGroup::new(n)?;
    let phi = group.order();
    if d == 0 || phi % d != 0 {
        return arg_err(format!("degree {d} does not divide φ({n}) = {phi}"));
    }
    // the characters with χ^d = 1 form the unique subgroup of order d exactly
    // when there are d of them
    let chars: Vec<DirichletCharacter> =
        all_characters(&group).into_iter().filter(|c| d % c.order == 0).collect();
    if chars.len() as u64 != d {
        return arg_err(format!(
            "(Z/{n})* has several subgroups of index {d}; give the fixing subgroup explicitly"
        ));
    }
    Ok(SubfieldSpec { modulus: n, degree: d, characters: chars })
}

/// The subfield of `Q(ζ_n)` fixed by the subgroup generated by `gens`.
pub fn characters_of_subgroup(n: u64, gens: &[u64]) -> Result<SubfieldSpec> {
    let group = UnitGroup::new(n)?;
    for &g in gens {
        if g.gcd(&n) != 1 {
            return arg_err(format!("{g} is not a unit modulo {n}"));
        }
    }
    let chars: Vec<DirichletCharacter> = all_characters(&group)
        .into_iter()
        .filter(|c| gens.iter().all(|&g| c.exponent_at(g as i64) == Some(0)))
        .collect();
    Ok(SubfieldSpec { modulus: n, degree: chars.len() as u64, characters: chars })
}
