//! Finite abelian p-groups presented as `Z^r / diag(p^e) Z^r`, with subgroup,
//! kernel and quotient computations reduced to Smith normal form over `Z`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::linalg::{smith_normal_form, solve_integer, IntMatrix};

/// Underlying group `⊕ Z/p^{e_i}`; elements are vectors reduced per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Shape {
    pub p: u64,
    pub exps: Vec<u32>,
}

pub(crate) type Elem = Vec<u64>;

/// Matrix of a homomorphism, acting on column vectors.
pub(crate) type Mat = Vec<Vec<u64>>;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl Shape {
    pub fn new(p: u64, exps: Vec<u32>) -> Self {
        Shape { p, exps }
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn modulus(&self, i: usize) -> u64 {
        self.p.pow(self.exps[i])
    }

    pub fn order_exp(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn unit(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1 % self.modulus(i);
        e
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        (0..self.rank()).map(|i| (a[i] + b[i]) % self.modulus(i)).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Elem {
        (0..self.rank()).map(|i| mul_mod(a[i], k, self.modulus(i))).collect()
    }

    pub fn reduce_signed(&self, x: &[BigInt]) -> Elem {
        (0..self.rank())
            .map(|i| {
                let m = BigInt::from(self.modulus(i));
                let r = ((&x[i] % &m) + &m) % &m;
                r.to_u64().unwrap()
            })
            .collect()
    }

    /// `y = A x` for `A` mapping `src` into `self`.
    pub fn apply(&self, a: &Mat, x: &[u64]) -> Elem {
        (0..self.rank())
            .map(|i| {
                let m = self.modulus(i);
                a[i].iter().zip(x).fold(0, |acc, (&aij, &xj)| (acc + mul_mod(aij, xj, m)) % m)
            })
            .collect()
    }

    /// Columns of `diag(p^e)`.
    fn relations(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank())
            .map(|j| {
                (0..self.rank())
                    .map(|i| if i == j { BigInt::from(self.modulus(i)) } else { BigInt::zero() })
                    .collect()
            })
            .collect()
    }
}

/// `rows x cols` matrix from a list of columns.
fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..rows {
            m[(i, j)] = c[i].clone();
        }
    }
    m
}

fn big_cols(gens: &[Elem]) -> Vec<Vec<BigInt>> {
    gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn valuation(p: u64, d: &BigInt) -> u32 {
    let mut d = d.to_u64().expect("elementary divisor fits in u64");
    let mut v = 0;
    while d > 1 {
        debug_assert_eq!(d % p, 0);
        d /= p;
        v += 1;
    }
    v
}

/// Basis of the integer kernel of `a`.
fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.diag.iter().filter(|d| !d.is_zero()).count();
    (rank..a.cols()).map(|j| snf.v.col(j)).collect()
}

/// Exponents of the cokernel of `Z^g -> Z^n` given by `cols`, dropping trivial factors.
fn cokernel_exps(p: u64, n: usize, cols: &[Vec<BigInt>]) -> Vec<u32> {
    if n == 0 {
        return vec![];
    }
    let snf = smith_normal_form(&from_columns(n, cols));
    snf.diag.iter().map(|d| valuation(p, d)).filter(|&v| v > 0).collect()
}

/// `log_p` of the order of the subgroup generated by `gens`.
pub(crate) fn order_exp(shape: &Shape, gens: &[Elem]) -> u32 {
    let mut cols = big_cols(gens);
    cols.extend(shape.relations());
    shape.order_exp() - cokernel_exps(shape.p, shape.rank(), &cols).iter().sum::<u32>()
}

/// Generators of the kernel of `a: src -> dst`.
pub(crate) fn kernel(src: &Shape, dst: &Shape, a: &Mat) -> Vec<Elem> {
    let (r, s) = (src.rank(), dst.rank());
    if r == 0 {
        return vec![];
    }
    let mut cols: Vec<Vec<BigInt>> =
        (0..r).map(|j| (0..s).map(|i| BigInt::from(a[i][j])).collect()).collect();
    cols.extend(dst.relations());
    if s == 0 {
        return (0..r).map(|i| src.unit(i)).filter(|e| e.iter().any(|&x| x != 0)).collect();
    }
    integer_kernel(&from_columns(s, &cols))
        .into_iter()
        .map(|v| src.reduce_signed(&v[..r]))
        .filter(|e| e.iter().any(|&x| x != 0))
        .collect()
}

/// Generators of the image of `a: src -> dst`.
pub(crate) fn image(src: &Shape, dst: &Shape, a: &Mat) -> Vec<Elem> {
    (0..src.rank()).map(|j| dst.apply(a, &src.unit(j))).collect()
}

/// Some `x` with `a x = y` for `a: src -> dst`.
pub(crate) fn preimage(src: &Shape, dst: &Shape, a: &Mat, y: &[u64]) -> Option<Elem> {
    let r = src.rank();
    if dst.rank() == 0 {
        return Some(src.zero());
    }
    let mut cols: Vec<Vec<BigInt>> =
        (0..r).map(|j| (0..dst.rank()).map(|i| BigInt::from(a[i][j])).collect()).collect();
    cols.extend(dst.relations());
    let rhs: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
    let sol = solve_integer(&from_columns(dst.rank(), &cols), &rhs)?;
    Some(src.reduce_signed(&sol[..r]))
}

/// Exponents of `(H + K)/K` for subgroups generated by `h` and `k`.
pub(crate) fn subquotient_exps(shape: &Shape, h: &[Elem], k: &[Elem]) -> Vec<u32> {
    let g = h.len();
    if g == 0 || shape.rank() == 0 {
        return vec![];
    }
    let mut cols = big_cols(h);
    cols.extend(big_cols(k));
    cols.extend(shape.relations());
    let lattice: Vec<Vec<BigInt>> = integer_kernel(&from_columns(shape.rank(), &cols))
        .into_iter()
        .map(|v| v[..g].to_vec())
        .collect();
    let mut out = cokernel_exps(shape.p, g, &lattice);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Exponents of the subgroup generated by `gens`, largest first.
pub(crate) fn structure(shape: &Shape, gens: &[Elem]) -> Vec<u32> {
    subquotient_exps(shape, gens, &[])
}

pub(crate) fn contains(shape: &Shape, big: &[Elem], small: &[Elem]) -> bool {
    let mut all = big.to_vec();
    all.extend_from_slice(small);
    order_exp(shape, &all) == order_exp(shape, big)
}

pub(crate) fn same_subgroup(shape: &Shape, a: &[Elem], b: &[Elem]) -> bool {
    contains(shape, a, b) && contains(shape, b, a)
}

/// A basis `h_1, …, h_s` of a subgroup `H ≅ ⊕ Z/p^{f_k}` together with
/// the map back to coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Basis {
    pub exps: Vec<u32>,
    pub elements: Vec<Elem>,
    gens: Vec<Elem>,
    /// rows of the change of coordinates `c ↦ U c`, one per kept factor
    coords: Vec<Vec<BigInt>>,
}

impl Basis {
    pub fn new(shape: &Shape, gens: &[Elem]) -> Basis {
        let gens: Vec<Elem> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        let g = gens.len();
        if g == 0 {
            return Basis { exps: vec![], elements: vec![], gens, coords: vec![] };
        }
        let mut cols = big_cols(&gens);
        cols.extend(shape.relations());
        let lattice: Vec<Vec<BigInt>> = integer_kernel(&from_columns(shape.rank(), &cols))
            .into_iter()
            .map(|v| v[..g].to_vec())
            .collect();
        let snf = smith_normal_form(&from_columns(g, &lattice));
        let mut kept = Vec::new();
        for (k, d) in snf.diag.iter().enumerate() {
            let v = valuation(shape.p, d);
            if v > 0 {
                let c = snf.u_inv.col(k);
                let mut x = vec![BigInt::zero(); shape.rank()];
                for (gj, cj) in gens.iter().zip(&c) {
                    for i in 0..shape.rank() {
                        x[i] += cj * gj[i];
                    }
                }
                kept.push((v, shape.reduce_signed(&x), snf.u.row(k).to_vec()));
            }
        }
        // largest factor first
        kept.sort_by(|a, b| b.0.cmp(&a.0));
        Basis {
            exps: kept.iter().map(|t| t.0).collect(),
            elements: kept.iter().map(|t| t.1.clone()).collect(),
            coords: kept.into_iter().map(|t| t.2).collect(),
            gens,
        }
    }

    /// Coordinates of `x` in this basis, or `None` if `x` is not in the subgroup.
    pub fn coordinates(&self, shape: &Shape, x: &[u64]) -> Option<Elem> {
        if self.gens.is_empty() {
            return x.iter().all(|&v| v == 0).then(Vec::new);
        }
        let mut cols = big_cols(&self.gens);
        cols.extend(shape.relations());
        let rhs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let sol = solve_integer(&from_columns(shape.rank(), &cols), &rhs)?;
        let c = &sol[..self.gens.len()];
        let out = self
            .coords
            .iter()
            .zip(&self.exps)
            .map(|(row, &e)| {
                let m = BigInt::from(shape.p.pow(e));
                let s: BigInt = row.iter().zip(c).map(|(a, b)| a * b).sum();
                (((s % &m) + &m) % &m).to_u64().unwrap()
            })
            .collect();
        Some(out)
    }

    /// Every element of the subgroup, in mixed-radix order of coordinates.
    pub fn enumerate(&self, shape: &Shape) -> Vec<Elem> {
        let sub = Shape::new(shape.p, self.exps.clone());
        let mut out = Vec::new();
        let mut c = sub.zero();
        loop {
            let mut x = shape.zero();
            for (ck, hk) in c.iter().zip(&self.elements) {
                x = shape.add(&x, &shape.scale(hk, *ck));
            }
            out.push(x);
            let mut k = 0;
            loop {
                if k == c.len() {
                    return out;
                }
                c[k] += 1;
                if c[k] < sub.modulus(k) {
                    break;
                }
                c[k] = 0;
                k += 1;
            }
        }
    }
}

/// `M/K ≅ ⊕ Z/p^{c_k}` with the projection and lifts of the standard generators.
#[derive(Clone, Debug)]
pub(crate) struct Quotient {
    pub shape: Shape,
    pub proj: Mat,
    pub lifts: Vec<Elem>,
}

impl Quotient {
    pub fn new(shape: &Shape, k: &[Elem]) -> Quotient {
        let r = shape.rank();
        if r == 0 {
            return Quotient { shape: Shape::new(shape.p, vec![]), proj: vec![], lifts: vec![] };
        }
        let mut cols = big_cols(k);
        cols.extend(shape.relations());
        let snf = smith_normal_form(&from_columns(r, &cols));
        let mut kept = Vec::new();
        for (t, d) in snf.diag.iter().enumerate() {
            let v = valuation(shape.p, d);
            if v > 0 {
                let m = BigInt::from(shape.p.pow(v));
                let row: Vec<u64> = snf
                    .u
                    .row(t)
                    .iter()
                    .map(|a| (((a % &m) + &m) % &m).to_u64().unwrap())
                    .collect();
                kept.push((v, row, shape.reduce_signed(&snf.u_inv.col(t))));
            }
        }
        kept.sort_by(|a, b| b.0.cmp(&a.0));
        Quotient {
            shape: Shape::new(shape.p, kept.iter().map(|t| t.0).collect()),
            proj: kept.iter().map(|t| t.1.clone()).collect(),
            lifts: kept.into_iter().map(|t| t.2).collect(),
        }
    }
}

/// Every subgroup of `shape`, each given by generators, in order of discovery.
pub(crate) fn all_subgroups(shape: &Shape) -> Vec<Vec<Elem>> {
    use std::collections::{BTreeSet, HashMap};
    let full = Basis::new(shape, &(0..shape.rank()).map(|i| shape.unit(i)).collect::<Vec<_>>());
    let elems = full.enumerate(shape);
    let index: HashMap<Elem, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    // a subgroup joined with x is the union of its cosets by multiples of x
    let close = |set: &BTreeSet<usize>, x: usize| -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut m = shape.zero();
        loop {
            for &s in set {
                out.insert(index[&shape.add(&elems[s], &m)]);
            }
            m = shape.add(&m, &elems[x]);
            if set.contains(&index[&m]) {
                return out;
            }
        }
    };
    let zero = index[&shape.zero()];
    let start: BTreeSet<usize> = [zero].into_iter().collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut found: Vec<(BTreeSet<usize>, Vec<Elem>)> = Vec::new();
    seen.insert(start.iter().copied().collect());
    found.push((start, vec![]));
    let mut i = 0;
    while i < found.len() {
        let (set, gens) = found[i].clone();
        for x in 0..elems.len() {
            if set.contains(&x) {
                continue;
            }
            let next = close(&set, x);
            let key: Vec<usize> = next.iter().copied().collect();
            if seen.insert(key) {
                let mut g = gens.clone();
                g.push(elems[x].clone());
                found.push((next, g));
            }
        }
        i += 1;
    }
    found.into_iter().map(|(_, g)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_structures() {
        let s = Shape::new(3, vec![2, 1]);
        assert_eq!(order_exp(&s, &[vec![3, 0]]), 1);
        assert_eq!(order_exp(&s, &[vec![1, 1]]), 2);
        assert_eq!(structure(&s, &[vec![1, 1], vec![0, 1]]), vec![2, 1]);
        assert_eq!(subquotient_exps(&s, &[vec![1, 0], vec![0, 1]], &[vec![3, 0]]), vec![1, 1]);
    }

    #[test]
    fn kernel_of_multiplication_by_p() {
        let s = Shape::new(3, vec![2, 1]);
        let k = kernel(&s, &s, &vec![vec![3, 0], vec![0, 3]]);
        assert_eq!(order_exp(&s, &k), 2);
        assert_eq!(structure(&s, &k), vec![1, 1]);
    }

    #[test]
    fn quotient_presentation() {
        let s = Shape::new(3, vec![2, 1]);
        let q = Quotient::new(&s, &[vec![3, 1]]);
        assert_eq!(q.shape.exps, vec![2]);
        for (k, lift) in q.lifts.iter().enumerate() {
            assert_eq!(q.shape.apply(&q.proj, lift), q.shape.unit(k));
        }
        assert_eq!(q.shape.apply(&q.proj, &[3, 1]), vec![0]);
    }

    #[test]
    fn basis_coordinates_round_trip() {
        let s = Shape::new(5, vec![2, 1, 1]);
        let gens = vec![vec![5, 1, 0], vec![10, 2, 0], vec![0, 0, 3]];
        let b = Basis::new(&s, &gens);
        assert_eq!(b.exps, vec![1, 1]);
        let elems = b.enumerate(&s);
        assert_eq!(elems.len(), 25);
        for x in &elems {
            let c = b.coordinates(&s, x).unwrap();
            let mut y = s.zero();
            for (ck, hk) in c.iter().zip(&b.elements) {
                y = s.add(&y, &s.scale(hk, *ck));
            }
            assert_eq!(&y, x);
        }
        assert!(b.coordinates(&s, &[1, 0, 0]).is_none());
    }

    #[test]
    fn subgroup_counts() {
        // subgroups of (Z/3)^2: 1 + 4 + 1; of Z/9 x Z/3: 1 + 4 + 4 + 1 = 10
        assert_eq!(all_subgroups(&Shape::new(3, vec![1, 1])).len(), 6);
        assert_eq!(all_subgroups(&Shape::new(3, vec![2, 1])).len(), 10);
        assert_eq!(all_subgroups(&Shape::new(3, vec![1, 1, 1])).len(), 28);
    }
}
