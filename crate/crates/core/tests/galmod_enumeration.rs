use std::time::Instant;

use cyclolab_core::galmod::{enumerate_modules, run_enumeration, EnumCheck, EnumLimits};

const CHECKS: [EnumCheck; 6] =
    [EnumCheck::Inaba, EnumCheck::P1am, EnumCheck::P21, EnumCheck::P3, EnumCheck::Sf, EnumCheck::Minus];

#[test]
fn exhaustive_p3_up_to_81() {
    let limits = EnumLimits::default();
    for check in CHECKS {
        let t = Instant::now();
        let r = run_enumeration(3, 81, check, &limits).unwrap();
        eprintln!("{check:?}: {} modules, {} instances, {:?}", r.modules, r.instances, t.elapsed());
        assert!(r.counterexamples.is_empty(), "{check:?}: {:?}", &r.counterexamples[..r.counterexamples.len().min(5)]);
    }
}

#[test]
fn exhaustive_p5_up_to_125() {
    let limits = EnumLimits::default();
    for check in CHECKS {
        let t = Instant::now();
        let r = run_enumeration(5, 125, check, &limits).unwrap();
        eprintln!("{check:?}: {} modules, {} instances, {:?}", r.modules, r.instances, t.elapsed());
        assert!(r.counterexamples.is_empty(), "{check:?}: {:?}", &r.counterexamples[..r.counterexamples.len().min(5)]);
    }
}

#[test]
fn enumeration_is_deterministic() {
    let limits = EnumLimits::default();
    let a = enumerate_modules(3, 81, &limits).unwrap();
    let b = enumerate_modules(3, 81, &limits).unwrap();
    assert_eq!(a, b);
    let r1 = run_enumeration(3, 27, EnumCheck::P3, &limits).unwrap();
    let r2 = run_enumeration(3, 27, EnumCheck::P3, &limits).unwrap();
    assert_eq!(r1, r2);
}
