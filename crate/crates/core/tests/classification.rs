use sklyrep::freealg::ParamEnv;
use sklyrep::matkit::CMat;
use sklyrep::reptheory::{classify, conjugation_error, find_invariant_line, is_irreducible_burnside, Tolerances};
use sklyrep::sklyanin::{family, family_unchecked, family_with_branch, Branch, FamilyId};
use sklyrep::solver::match_two_blocks;
use sklyrep::C64;

fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn env(c: C64, kv: &[(&str, C64)]) -> ParamEnv {
    let mut e = ParamEnv::new().with("c", c);
    for (k, v) in kv {
        e.set(k, *v);
    }
    e
}

#[test]
fn excluded_t4f3_members_fold_into_t4f1() {
    let c = cx(5.0, 0.0);
    let y4 = cx(0.8, -0.3);
    for k in 0..3 {
        let zeta = C64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 3.0);
        let rep = family_unchecked(FamilyId::T4f3, &env(c, &[("y4", y4), ("z4", zeta * y4)]), Branch::Principal).unwrap();
        // still irreducible, but no longer a new class
        assert!(is_irreducible_burnside(&rep, 1e-8));
        assert!(find_invariant_line(&rep, 1e-8).is_none());
        let m = match_two_blocks(&rep, c, 1e-7).expect("matches a table member");
        assert_eq!(m.family, "t4f1", "zeta index {k}");
        let kv: Vec<(&str, C64)> = m.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let member = family(FamilyId::T4f1, &env(c, &kv)).unwrap();
        assert!(conjugation_error(&m.conjugator, &member, &rep) <= 1e-7);
    }
}

#[test]
fn boundary_members_are_reducible() {
    let c = cx(5.0, 0.0);
    let t4f1 = family_unchecked(FamilyId::T4f1, &env(c, &[("y4", cx(1.0, 0.0)), ("z4", cx(0.0, 0.0))]), Branch::Principal);
    let t4f2 = family_unchecked(FamilyId::T4f2, &env(c, &[("x4", cx(0.0, 0.0))]), Branch::Principal);
    for rep in [t4f1, t4f2].into_iter().flatten() {
        assert!(find_invariant_line(&rep, 1e-8).is_some());
        assert!(!is_irreducible_burnside(&rep, 1e-8));
    }
}

#[test]
fn conjugates_collapse_and_table_members_separate() {
    let c = cx(5.0, 0.0);
    let base = family(FamilyId::T3f1, &env(c, &[("z2", cx(0.4, 0.3)), ("z3", cx(-0.8, 0.5))])).unwrap();
    let mut reps = Vec::new();
    for k in 0..10 {
        let t = k as f64;
        let q = CMat::m2(cx(1.0 + 0.1 * t, 0.2), cx(0.3 * t, -0.1), cx(-0.2, 0.05 * t), cx(1.0, 0.0));
        reps.push(base.conjugate(&q).unwrap());
    }
    let classes = classify(&reps, &Tolerances::default(), 1);
    assert_eq!(classes.len(), 1);
    for (m, q) in classes[0].members.iter().zip(&classes[0].conjugators) {
        assert!(conjugation_error(q, &reps[0], &reps[*m]) <= 1e-7);
    }

    let table4 = [
        family(FamilyId::T4f1, &env(c, &[("y4", cx(0.9, 0.2)), ("z4", cx(-0.5, 0.7))])).unwrap(),
        family(FamilyId::T4f2, &env(c, &[("x4", cx(1.3, 0.1))])).unwrap(),
        family(FamilyId::T4f3, &env(c, &[("y4", cx(0.6, -0.9)), ("z4", cx(1.2, 0.4))])).unwrap(),
        family_with_branch(
            FamilyId::T4f4,
            &env(c, &[("y4", cx(0.7, 0.1)), ("z3", cx(-1.1, 0.3)), ("z4", cx(0.5, 0.8))]),
            Branch::Negated,
        )
        .unwrap(),
    ];
    assert_eq!(classify(&table4, &Tolerances::default(), 1).len(), 4);
}
