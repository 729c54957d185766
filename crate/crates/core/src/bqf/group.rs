use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::form::{compose_unreduced, reduce_definite};
use super::indefinite::{self, Small};
use super::BinaryQuadraticForm;
use crate::linalg::{smith_normal_form, IntMatrix};

/// Decomposition `⊕ Z/orders[i]`, with `generators[i]` of order `orders[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGroup {
    pub generators: Vec<BinaryQuadraticForm>,
    pub orders: Vec<u64>,
}

impl ClassGroup {
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }
}

/// Proper equivalence classes of forms of one discriminant, each stored as a
/// canonical reduced form.
pub(crate) struct FormGroup {
    d: i64,
    dd: BigInt,
    /// Indefinite case: cycle index of every reduced form and each cycle's minimum.
    cycle_of: HashMap<Small, usize>,
    cycle_min: Vec<Small>,
}

impl FormGroup {
    pub fn new(d: i64) -> Self {
        let mut cycle_of = HashMap::new();
        let mut cycle_min = Vec::new();
        if d > 0 {
            for (i, cyc) in indefinite::cycles(d).into_iter().enumerate() {
                cycle_min.push(cyc[0]);
                for f in cyc {
                    cycle_of.insert(f, i);
                }
            }
        }
        FormGroup { d, dd: BigInt::from(d), cycle_of, cycle_min }
    }

    pub fn identity(&self) -> BinaryQuadraticForm {
        self.canonical(&BinaryQuadraticForm::principal(self.d))
    }

    /// One canonical form per class: the reduced form for `D < 0`, the
    /// smallest member of the rho cycle for `D > 0`.
    pub fn canonical(&self, f: &BinaryQuadraticForm) -> BinaryQuadraticForm {
        if self.d < 0 {
            return reduce_definite(f.clone());
        }
        let g = indefinite::rho_reduce(f, &self.dd);
        let small = Small {
            a: g.a.to_i64().expect("reduced coefficient"),
            b: g.b.to_i64().expect("reduced coefficient"),
            c: g.c.to_i64().expect("reduced coefficient"),
        };
        self.cycle_min[self.cycle_of[&small]].to_form()
    }

    pub fn cycle_representatives(&self) -> Vec<BinaryQuadraticForm> {
        self.cycle_min.iter().map(|f| f.to_form()).collect()
    }

    pub fn op(&self, f: &BinaryQuadraticForm, g: &BinaryQuadraticForm) -> BinaryQuadraticForm {
        self.canonical(&compose_unreduced(f, g, &self.dd))
    }

    pub fn pow(&self, f: &BinaryQuadraticForm, mut e: u64) -> BinaryQuadraticForm {
        let mut acc = self.identity();
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.op(&base, &base);
            }
        }
        acc
    }

    /// Invariant factors of the group generated by `elements`, modulo the
    /// subgroup generated by `kill`.
    pub fn structure(
        &self,
        elements: &[BinaryQuadraticForm],
        kill: &[BinaryQuadraticForm],
    ) -> ClassGroup {
        // exponent vectors of every element of the subgroup built so far
        let mut known: HashMap<BinaryQuadraticForm, Vec<u64>> = HashMap::new();
        known.insert(self.identity(), Vec::new());
        let mut gens: Vec<BinaryQuadraticForm> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for x in elements {
            let x = self.canonical(x);
            if known.contains_key(&x) {
                continue;
            }
            let mut n = 1u64;
            let mut y = x.clone();
            while !known.contains_key(&y) {
                y = self.op(&y, &x);
                n += 1;
            }
            let k = gens.len();
            let mut rel: Vec<i64> = known[&y].iter().map(|&v| -(v as i64)).collect();
            rel.resize(k, 0);
            rel.push(n as i64);
            relations.push(rel);
            gens.push(x.clone());

            let old: Vec<(BinaryQuadraticForm, Vec<u64>)> =
                known.iter().map(|(f, v)| (f.clone(), v.clone())).collect();
            for (f, v) in old {
                let mut g = f;
                for i in 1..n {
                    g = self.op(&g, &x);
                    let mut w = v.clone();
                    w.resize(k, 0);
                    w.push(i);
                    known.insert(g.clone(), w);
                }
            }
        }
        let k = gens.len();
        let total = known.len() as u64;
        for z in kill {
            let z = self.canonical(z);
            let mut rel: Vec<i64> = known[&z].iter().map(|&v| v as i64).collect();
            rel.resize(k, 0);
            relations.push(rel);
        }
        if k == 0 {
            return ClassGroup { generators: Vec::new(), orders: Vec::new() };
        }
        for r in relations.iter_mut() {
            r.resize(k, 0);
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(&relations));
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for j in 0..k {
            let dj = snf.diag[j].abs();
            if dj.is_one() {
                continue;
            }
            let mut h = self.identity();
            for (i, g) in gens.iter().enumerate() {
                let e = snf.v_inv[(j, i)].mod_floor(&BigInt::from(total));
                let e = e.to_u64().expect("exponent below group order");
                if !e.is_zero() {
                    h = self.op(&h, &self.pow(g, e));
                }
            }
            generators.push(h);
            orders.push(dj.to_u64().expect("invariant factor fits u64"));
        }
        ClassGroup { generators, orders }
    }
}
