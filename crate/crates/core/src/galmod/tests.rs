use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::enumerate::{delta_modules, sigma_classes_brute};
use super::*;

fn module(p: u64, exps: &[u32], sigma: &[&[i64]]) -> GModule {
    GModule::new(p, exps.to_vec(), sigma.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn jordan3() -> GModule {
    module(3, &[1, 1], &[&[1, 1], &[0, 1]])
}

// ---- naive oracle: every element listed, maps applied vector by vector ----

fn moduli(m: &GModule) -> Vec<u64> {
    m.exponents().iter().map(|&e| m.p().pow(e)).collect()
}

fn elements(m: &GModule) -> Vec<Vec<u64>> {
    let md = moduli(m);
    let mut out = vec![vec![]];
    for &q in &md {
        out = out.into_iter().flat_map(|v| (0..q).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn act(m: &GModule, a: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    let md = moduli(m);
    (0..md.len())
        .map(|i| (a[i].iter().zip(x).map(|(&s, &v)| s as u128 * v as u128).sum::<u128>() % md[i] as u128) as u64)
        .collect()
}

fn add(m: &GModule, x: &[u64], y: &[u64]) -> Vec<u64> {
    moduli(m).iter().enumerate().map(|(i, &q)| (x[i] + y[i]) % q).collect()
}

fn neg(m: &GModule, x: &[u64]) -> Vec<u64> {
    moduli(m).iter().enumerate().map(|(i, &q)| (q - x[i]) % q).collect()
}

fn mult(m: &GModule, x: &[u64], k: u64) -> Vec<u64> {
    (0..k).fold(vec![0; x.len()], |acc, _| add(m, &acc, x))
}

fn sig(m: &GModule, x: &[u64]) -> Vec<u64> {
    act(m, m.sigma(), x)
}

fn one_minus(m: &GModule, x: &[u64]) -> Vec<u64> {
    add(m, x, &neg(m, &sig(m, x)))
}

fn norm(m: &GModule, x: &[u64]) -> Vec<u64> {
    let mut acc = vec![0; x.len()];
    let mut y = x.to_vec();
    for _ in 0..m.p() {
        acc = add(m, &acc, &y);
        y = sig(m, &y);
    }
    acc
}

fn is_zero(x: &[u64]) -> bool {
    x.iter().all(|&v| v == 0)
}

type Set = HashSet<Vec<u64>>;

fn kernel_set(m: &GModule, f: impl Fn(&[u64]) -> Vec<u64>) -> Set {
    elements(m).into_iter().filter(|x| is_zero(&f(x))).collect()
}

fn image_set(m: &GModule, f: impl Fn(&[u64]) -> Vec<u64>) -> Set {
    elements(m).iter().map(|x| f(x)).collect()
}

/// Exponents of `S/T` from the counts of `p^k`-torsion.
fn quotient_exps(m: &GModule, s: &Set, t: &Set) -> Vec<u32> {
    let p = m.p();
    let log = |mut n: usize| {
        let mut e = 0;
        while n > 1 {
            n /= p as usize;
            e += 1;
        }
        e
    };
    let mut at_least = Vec::new();
    let mut prev = 0;
    for k in 1.. {
        let c = s.iter().filter(|x| t.contains(&mult(m, x, p.pow(k)))).count() / t.len();
        let l = log(c);
        at_least.push(l - prev);
        prev = l;
        if c * t.len() == s.len() {
            break;
        }
    }
    // at_least[k-1] = number of cyclic factors of exponent ≥ k
    let mut out = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let here = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        out.extend(std::iter::repeat(k as u32).take(here));
    }
    out
}

fn small_modules(p: u64, max: u64) -> Vec<GModule> {
    enumerate_modules(p, max, &EnumLimits::default()).unwrap()
}

// ---- construction ----

#[test]
fn descriptors_round_trip() {
    let m = GModule::parse("3:2,1:1,3,1,1").unwrap();
    assert_eq!(m.exponents(), &[2, 1]);
    assert_eq!(GModule::parse(&m.descriptor()).unwrap(), m);
    assert_eq!(m.to_string(), "3:2,1:1,3,1,1");
    assert!(GModule::parse("3:1,1:1,1,0").is_err());
    assert!(GModule::parse("4:1:1").is_err());
    assert!(GModule::parse("garbage").is_err());
}

#[test]
fn rejects_invalid_actions() {
    // order 2 on Z/3
    assert!(GModule::new(3, vec![1], vec![vec![2]]).is_err());
    // not invertible
    assert!(GModule::new(3, vec![1, 1], vec![vec![1, 1], vec![0, 0]]).is_err());
    // Z/3 -> Z/9 must land in 3Z/9
    assert!(GModule::new(3, vec![2, 1], vec![vec![1, 1], vec![0, 1]]).is_err());
    // exponents out of order
    assert!(GModule::trivial(3, vec![1, 2]).is_err());
    assert!(GModule::new(3, vec![2], vec![vec![4]]).is_ok());
}

// ---- nu, filtration, Inaba ----

#[test]
fn nu_examples() {
    assert!(nu(&GModule::trivial(3, vec![1]).unwrap()).is_zero());
    assert!(nu(&jordan3()).is_zero());
    let z9 = nu(&GModule::trivial(3, vec![2]).unwrap());
    assert_eq!(z9.matrix(), &[vec![3]]);
    assert_eq!(z9.image_order(), 3);
    assert_eq!(z9.kernel_order(), 3);
}

#[test]
fn filtration_examples() {
    assert_eq!(filtration(&jordan3()).kernel_orders, vec![1, 3, 9]);
    assert_eq!(filtration(&GModule::trivial(3, vec![2, 1]).unwrap()).kernel_orders, vec![1, 27]);
    let j = module(3, &[1, 1, 1], &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
    assert_eq!(filtration(&j).kernel_orders, vec![1, 3, 9, 27]);
    assert_eq!(filtration(&GModule::trivial(3, vec![2, 1]).unwrap()).torsion_orders, vec![1, 9, 27]);
}

#[test]
fn inaba_examples() {
    let r = check_inaba(&jordan3());
    assert!(r.pass && r.nu_trivial);
    assert_eq!(r.item3, Some(true));
    let r = check_inaba(&GModule::trivial(3, vec![2]).unwrap());
    assert!(r.pass && r.item1 && r.item2);
    assert_eq!(r.item3, None);
}

#[test]
fn inaba_index_bound_with_nontrivial_pth_powers() {
    // Z/9[ζ_3]: ν = 0 and M^3 ≠ 1
    let m = module(3, &[2, 2], &[&[0, -1], &[1, -1]]);
    assert!(nu(&m).is_zero());
    let r = check_inaba(&m);
    assert!(r.pass);
    assert_eq!(r.filtration.kernel_orders[1], 3);
}

#[test]
fn filtration_and_torsion_match_counting() {
    for p in [3, 5] {
        for m in small_modules(p, if p == 3 { 81 } else { 25 }) {
            let f = filtration(&m);
            for (k, &o) in f.kernel_orders.iter().enumerate() {
                let ker = kernel_set(&m, |x| (0..k).fold(x.to_vec(), |y, _| one_minus(&m, &y)));
                assert_eq!(ker.len() as u64, o, "{m} M_{k}");
            }
            for (k, &o) in f.torsion_orders.iter().enumerate() {
                assert_eq!(kernel_set(&m, |x| mult(&m, x, p.pow(k as u32))).len() as u64, o);
            }
            let n = nu(&m);
            assert_eq!(n.image_order(), image_set(&m, |x| norm(&m, x)).len() as u64, "{m}");
        }
    }
}

// ---- Tate cohomology ----

#[test]
fn tate_examples() {
    for p in [3, 5, 7] {
        let m = GModule::trivial(p, vec![1]).unwrap();
        assert_eq!(tate_cohomology(&m, 0).unwrap().exponents, vec![1]);
        assert_eq!(tate_cohomology(&m, -1).unwrap().exponents, vec![1]);
        // regular representation over F_p: σ permutes the basis cyclically
        let n = p as usize;
        let sigma = (0..n).map(|i| (0..n).map(|j| ((i + n - 1) % n == j) as i64).collect()).collect();
        let free = GModule::new(p, vec![1; n], sigma).unwrap();
        assert_eq!(tate_cohomology(&free, 0).unwrap().order, 1);
        assert_eq!(tate_cohomology(&free, -1).unwrap().order, 1);
    }
    assert_eq!(tate_cohomology(&jordan3(), 0).unwrap().order, 3);
    assert_eq!(tate_cohomology(&jordan3(), -1).unwrap().order, 3);
    assert!(tate_cohomology(&jordan3(), 1).is_err());
}

#[test]
fn tate_matches_counting() {
    for p in [3, 5] {
        for m in small_modules(p, if p == 3 { 81 } else { 25 }) {
            let fixed = kernel_set(&m, |x| one_minus(&m, x));
            let norms = image_set(&m, |x| norm(&m, x));
            let ker_nu = kernel_set(&m, |x| norm(&m, x));
            let moved = image_set(&m, |x| one_minus(&m, x));
            assert_eq!(tate_cohomology(&m, 0).unwrap().exponents, quotient_exps(&m, &fixed, &norms), "{m}");
            assert_eq!(tate_cohomology(&m, -1).unwrap().exponents, quotient_exps(&m, &ker_nu, &moved), "{m}");
            // Herbrand quotient of a finite module is 1
            assert_eq!(tate_cohomology(&m, 0).unwrap().order, tate_cohomology(&m, -1).unwrap().order);
        }
    }
}

// ---- (E1)/(E2) ----

#[test]
fn e1_e2_for_small_primes() {
    for p in [3, 5, 7, 11, 13] {
        let s = solve_e1_e2(p).unwrap();
        assert!(s.verified && s.e1_residual.is_zero() && s.e2_residual.is_zero());
        let a = GroupRingElement::one_minus_sigma(p).pow(p as u32 - 1);
        let nu = GroupRingElement::nu(p);
        let pp = GroupRingElement::constant(p, p as i64);
        assert_eq!(a.mul(&s.f).add(&nu.mul(&s.g)), pp);
        assert_eq!(a.add(&s.h.scale(&BigInt::from(p))), nu);
    }
    assert_eq!(solve_e1_e2(3).unwrap().h, GroupRingElement::sigma_pow(3, 1));
    assert!(matches!(solve_e1_e2(17), Err(crate::Error::Resource(_))));
    assert!(solve_e1_e2_with(17, 17).unwrap().verified);
    assert!(solve_e1_e2(9).is_err());
}

#[test]
fn e1_for_p3_by_hand() {
    // -σ²(1-σ)² + ν = 3
    let a = GroupRingElement::one_minus_sigma(3).pow(2);
    let f = GroupRingElement::from_i64(3, &[0, 0, -1]);
    let g = GroupRingElement::constant(3, 1);
    assert_eq!(a.mul(&f).add(&GroupRingElement::nu(3).mul(&g)), GroupRingElement::constant(3, 3));
    assert_eq!(f.to_string(), "-σ^2");
    assert_eq!(GroupRingElement::from_i64(3, &[1, -2, 1]).to_string(), "1 - 2σ + σ^2");
}

fn ring_element(p: u64) -> impl Strategy<Value = GroupRingElement> {
    proptest::collection::vec(-5i64..5, p as usize).prop_map(move |c| GroupRingElement::from_i64(p, &c))
}

proptest! {
    #[test]
    fn group_ring_is_commutative_and_associative(a in ring_element(5), b in ring_element(5), c in ring_element(5)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in ring_element(3), b in ring_element(3), idx in 0usize..40) {
        let mods = small_modules(3, 27);
        let m = &mods[idx % mods.len()];
        let (ea, eb, eab) = (a.evaluate(m), b.evaluate(m), a.mul(&b).evaluate(m));
        for x in elements(m) {
            prop_assert_eq!(act(m, &eab, &x), act(m, &ea, &act(m, &eb, &x)));
        }
    }
}

// ---- configurations ----

#[test]
fn p1am_examples() {
    let m = GModule::trivial(3, vec![1]).unwrap();
    let cfg = NormConfiguration::new(m.clone(), vec![1], vec![vec![1]], vec![vec![0]]).unwrap();
    let r = check_p1am(&cfg);
    assert_eq!((r.fixed_order, r.kernel_index, r.c_order), (3, 1, 3));
    assert!(r.holds && r.kernel_equals_cokernel);

    // C = M/M_1 for the Jordan block
    let j = jordan3();
    let cfg = NormConfiguration::canonical(&j, &[vec![1, 0]]).unwrap();
    assert_eq!(cfg.c_order(), 3);
    let r = check_p1am(&cfg);
    assert_eq!((r.fixed_order, r.kernel_index, r.c_order), (3, 1, 3));
    assert!(r.holds);
}

#[test]
fn rejects_invalid_configurations() {
    let m = GModule::trivial(3, vec![1]).unwrap();
    // N∘j must be the p-th power map, which is 0 on Z/3
    assert!(NormConfiguration::new(m.clone(), vec![1], vec![vec![1]], vec![vec![1]]).is_err());
    // not surjective
    assert!(NormConfiguration::new(m.clone(), vec![1], vec![vec![0]], vec![vec![0]]).is_err());
    // not equivariant
    let j = jordan3();
    assert!(NormConfiguration::new(j.clone(), vec![1, 1], vec![vec![1, 0], vec![0, 1]], vec![vec![0, 0], vec![0, 0]]).is_err());
    // kernel must contain (1-σ)M
    assert!(NormConfiguration::canonical(&j, &[]).is_err());
    // kernel must be killed by ν
    let z9 = GModule::trivial(3, vec![2]).unwrap();
    assert!(NormConfiguration::canonical(&z9, &[vec![1]]).is_err());
}

#[test]
fn p21_examples() {
    // C = (Z/3)^2 with j injective inside M = (Z/9)^2 trivial: #M = 81 ≥ 9 · 9
    let m = GModule::trivial(3, vec![2, 2]).unwrap();
    let cfg = NormConfiguration::canonical(&m, &[vec![3, 0], vec![0, 3]]).unwrap();
    assert_eq!(cfg.gamma(), 0);
    assert_eq!(cfg.rank_c(), 2);
    let r = check_p21(&cfg);
    assert_eq!(r.bound, 81);
    assert!(r.holds);
    // C trivial
    let full = NormConfiguration::canonical(&m, &[vec![1, 0], vec![0, 1]]);
    assert!(full.is_err(), "M is not killed by ν");
    let j = jordan3();
    let cfg = NormConfiguration::canonical(&j, &[vec![1, 0], vec![0, 1]]).unwrap();
    assert_eq!(cfg.c_order(), 1);
    assert!(check_p21(&cfg).holds);
}

#[test]
fn guerry_on_cyclic_module() {
    let z9 = GModule::trivial(3, vec![2]).unwrap();
    let cfg = NormConfiguration::canonical(&z9, &[vec![3]]).unwrap();
    assert!(cfg.is_canonical());
    let r = check_p3_tbu_guerry(&cfg).unwrap();
    assert_eq!(r.index_exp, 1);
    assert!(r.guerry.holds && r.p3.applicable && r.p3.holds && r.pass);
}

#[test]
fn p3_needs_canonical_configuration() {
    let m = GModule::trivial(3, vec![1]).unwrap();
    let cfg = NormConfiguration::new(m, vec![1], vec![vec![1]], vec![vec![0]]).unwrap();
    assert!(cfg.is_canonical());
    let z9 = GModule::trivial(3, vec![2]).unwrap();
    let cfg = NormConfiguration::new(z9, vec![1], vec![vec![1]], vec![vec![0]]);
    // N: Z/9 -> Z/3 with j = 0: ν = 3 ≠ 0 = j∘N
    let cfg = cfg.unwrap();
    assert!(!cfg.is_canonical());
    assert!(check_p3_tbu_guerry(&cfg).is_err());
}

#[test]
fn configurations_match_counting() {
    for m in small_modules(3, 27) {
        let moved = image_set(&m, |x| one_minus(&m, x));
        let fixed = kernel_set(&m, |x| one_minus(&m, x));
        for k in super::enumerate::norm_kernels(&m) {
            for cfg in NormConfiguration::all_with_kernel(&m, &k).unwrap() {
                let c_mod: Vec<u64> = cfg.c_exponents().iter().map(|&e| 3u64.pow(e)).collect();
                let apply_n = |x: &[u64]| -> Vec<u64> {
                    cfg.norm_matrix()
                        .iter()
                        .zip(&c_mod)
                        .map(|(row, &q)| row.iter().zip(x).map(|(&a, &b)| a * b).sum::<u64>() % q)
                        .collect()
                };
                let ker_n = kernel_set(&m, apply_n);
                let r = check_p1am(&cfg);
                assert_eq!(r.fixed_order as usize, fixed.len());
                assert_eq!(r.kernel_index as usize, ker_n.len() / moved.len());
                assert!(r.holds);
                assert!(check_p21(&cfg).holds);
            }
        }
    }
}

// ---- idempotents and the minus part ----

#[test]
fn sign_action_on_z3() {
    let m = GModule::trivial(3, vec![1]).unwrap();
    let r = idempotent_split(&m, &[vec![-1]]).unwrap();
    assert_eq!(r.delta_order, 2);
    assert!(r.holds && r.complete);
    let orders: Vec<u64> = r.components.iter().map(|c| c.module.order()).collect();
    assert_eq!(orders.iter().product::<u64>(), 3);
    let minus = r.components.iter().find(|c| c.module.order() == 3).unwrap();
    assert_eq!(minus.hm1_part, vec![1]);
    assert_eq!(minus.hm1_of_part, vec![1]);
    let s = minus_split(&m, &[vec![-1]]).unwrap();
    assert_eq!((s.plus.order(), s.minus.order()), (1, 3));
}

#[test]
fn trivial_delta_gives_one_component() {
    let r = idempotent_split(&jordan3(), &[vec![1, 0], vec![0, 1]]).unwrap();
    assert_eq!(r.delta_order, 1);
    assert_eq!(r.components.len(), 1);
    assert_eq!(r.components[0].module.order(), 9);
    assert!(r.holds);
}

#[test]
fn split_rejects_bad_auxiliary_actions() {
    let m = GModule::trivial(3, vec![1, 1]).unwrap();
    // order 3 = p
    assert!(idempotent_split(&m, &[vec![1, 1], vec![0, 1]]).is_err());
    // does not commute with σ
    assert!(idempotent_split(&jordan3(), &[vec![1, 0], vec![0, -1]]).is_err());
    assert!(minus_split(&GModule::trivial(2, vec![1]).unwrap(), &[vec![1]]).is_err());
}

#[test]
fn minus_split_extremes() {
    for m in small_modules(3, 27) {
        let r = m.rank();
        let id: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        let minus_id: Vec<Vec<i64>> = id.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        let s = minus_split(&m, &minus_id).unwrap();
        assert_eq!(s.minus.order(), m.order());
        let s = minus_split(&m, &id).unwrap();
        assert_eq!((s.minus.order(), s.plus.order()), (1, m.order()));
        for k in super::enumerate::norm_kernels(&m) {
            if let Ok(cfg) = NormConfiguration::canonical(&m, &k) {
                assert!(check_minus_exactness(&cfg, &minus_id).unwrap().exact);
                let e = check_minus_exactness(&cfg, &id).unwrap();
                assert!(e.exact && e.minus_order == 1);
            }
        }
    }
}

#[test]
fn sf_components_match_counting() {
    for (m, d) in delta_modules(3, 2, 27, &EnumLimits::default()).unwrap() {
        let r = idempotent_split(&m, &d).unwrap();
        assert!(r.holds, "{m}");
        let du: Vec<Vec<u64>> = d.iter().map(|row| row.iter().map(|&x| x as u64).collect()).collect();
        let minus = image_set(&m, |x| add(&m, x, &neg(&m, &act(&m, &du, x))));
        let plus = image_set(&m, |x| add(&m, x, &act(&m, &du, x)));
        let mut orders: Vec<u64> = r.components.iter().map(|c| c.module.order()).filter(|&o| o > 1).collect();
        orders.sort_unstable();
        let mut expect: Vec<u64> = [minus.len() as u64, plus.len() as u64].into_iter().filter(|&o| o > 1).collect();
        expect.sort_unstable();
        assert_eq!(orders, expect, "{m}");
    }
}

#[test]
fn sf_with_order_three_action() {
    for (m, d) in delta_modules(5, 3, 125, &EnumLimits::default()).unwrap() {
        let r = idempotent_split(&m, &d).unwrap();
        assert!(r.holds, "{m} {d:?}");
    }
}

// ---- enumeration ----

#[test]
fn brute_force_classes_match_jordan_forms() {
    let limits = EnumLimits::default();
    for (p, r, expect) in [(3, 2, 2), (3, 3, 3), (5, 2, 2), (2, 2, 2)] {
        let shape = abelian::Shape::new(p, vec![1; r]);
        assert_eq!(sigma_classes_brute(&shape, &limits).unwrap().len(), expect, "p = {p}, r = {r}");
    }
}

#[test]
fn enumeration_counts() {
    let mods = small_modules(3, 9);
    let names: Vec<String> = mods.iter().map(|m| m.descriptor()).collect();
    // Aut(Z/9) is abelian, so σ = 1, 4, 7 are pairwise non-conjugate
    assert_eq!(names, vec!["3:1,1:1,0,0,1", "3:1,1:1,1,0,1", "3:1:1", "3:2:1", "3:2:4", "3:2:7"]);
    let big = small_modules(3, 81);
    assert!(big.iter().all(|m| m.order() <= 81));
    assert!(big.windows(2).all(|w| w[0].descriptor() < w[1].descriptor()));
    assert!(matches!(
        enumerate_modules(5, 5u64.pow(4), &EnumLimits::default()),
        Err(crate::Error::Resource(_))
    ));
}

#[test]
fn small_enumeration_suites_pass() {
    let limits = EnumLimits::default();
    for check in [EnumCheck::Inaba, EnumCheck::P1am, EnumCheck::P21, EnumCheck::P3, EnumCheck::Sf, EnumCheck::Minus] {
        for (p, max) in [(3, 27), (5, 25)] {
            let r = run_enumeration(p, max, check, &limits).unwrap();
            assert!(r.instances > 0);
            assert!(r.counterexamples.is_empty(), "{check:?} p = {p}: {:?}", r.counterexamples);
        }
    }
}


#[test]
fn p3_hypotheses_are_met_somewhere() {
    let (mut p3, mut pn, mut tbu, mut cyclic) = (0, 0, 0, 0);
    for m in small_modules(3, 81) {
        for k in super::enumerate::norm_kernels(&m) {
            if let Ok(cfg) = NormConfiguration::canonical(&m, &k) {
                let r = check_p3_tbu_guerry(&cfg).unwrap();
                assert!(r.pass, "{:?}", r.witness);
                p3 += r.p3.applicable as usize;
                pn += r.pn.applicable as usize;
                tbu += r.tbu.applicable as usize;
                cyclic += (r.rank_module == 1) as usize;
            }
        }
    }
    assert!(p3 > 0 && pn > 0 && tbu > 0 && cyclic > 0);
}
