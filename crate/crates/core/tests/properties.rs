use proptest::prelude::*;
use sklyrep::freealg::{eval_ncpoly, parse_ncpoly, NcPoly, ParamEnv};
use sklyrep::matkit::CMat;
use sklyrep::reptheory::{
    find_conjugator, fingerprint, is_irreducible_burnside, relation_residual, Rep,
};
use sklyrep::sklyanin::{family, presentation, FamilyId, SklyaninParams};
use sklyrep::C64;

fn gens() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

fn coef() -> impl Strategy<Value = C64> {
    prop_oneof![
        (-5.0..5.0f64).prop_map(|r| C64::new(r, 0.0)),
        (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(r, i)| C64::new(r, i)),
        (-4i32..=4).prop_map(|k| C64::new(k as f64, 0.0)),
    ]
}

fn poly() -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((coef(), prop::collection::vec(0usize..3, 0..=4)), 0..=6)
        .prop_map(NcPoly::from_terms)
}

fn mat2() -> impl Strategy<Value = CMat> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4)
        .prop_map(|v| CMat::from_vec(2, 2, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(p in poly()) {
        let text = p.to_text(&gens());
        let q = parse_ncpoly(&text, &["x", "y", "z"], &[]).unwrap();
        prop_assert_eq!(q, p, "{}", text);
    }

    #[test]
    fn evaluation_is_multiplicative(p in poly(), q in poly(), x in mat2(), y in mat2(), z in mat2()) {
        let mats = [x, y, z];
        let env = ParamEnv::new();
        let ep = eval_ncpoly(&p, &mats, &env).unwrap();
        let eq = eval_ncpoly(&q, &mats, &env).unwrap();
        let epq = eval_ncpoly(&(&p * &q), &mats, &env).unwrap();
        let mut d = epq;
        d.axpy(C64::new(-1.0, 0.0), &(&ep * &eq));
        prop_assert!(d.norm() <= 1e-10 * (1.0 + ep.norm() * eq.norm()));
    }

    #[test]
    fn evaluation_is_additive(p in poly(), q in poly(), x in mat2(), y in mat2(), z in mat2()) {
        let mats = [x, y, z];
        let env = ParamEnv::new();
        let ep = eval_ncpoly(&p, &mats, &env).unwrap();
        let eq = eval_ncpoly(&q, &mats, &env).unwrap();
        let mut d = eval_ncpoly(&(&p + &q), &mats, &env).unwrap();
        d.axpy(C64::new(-1.0, 0.0), &ep);
        d.axpy(C64::new(-1.0, 0.0), &eq);
        prop_assert!(d.norm() <= 1e-10 * (1.0 + ep.norm() + eq.norm()));
    }
}

fn t4f1(c: f64, y4: C64, z4: C64) -> Rep {
    let env = ParamEnv::new()
        .with("c", C64::new(c, 0.0))
        .with("y4", y4)
        .with("z4", z4);
    family(FamilyId::T4f1, &env).unwrap()
}

fn cplx() -> impl Strategy<Value = C64> {
    (0.3..2.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn unimodular_ish() -> impl Strategy<Value = CMat> {
    mat2().prop_filter("well conditioned", |q| q.det().norm() > 0.2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_preserves_everything(y4 in cplx(), z4 in cplx(), q in unimodular_ish()) {
        let c = 5.0;
        let rep = t4f1(c, y4, z4);
        let conj = rep.conjugate(&q).unwrap();
        let pres = presentation(&SklyaninParams::one_one(C64::new(c, 0.0)).unwrap()).unwrap();
        prop_assert!(relation_residual(&pres, &conj).unwrap() <= 1e-9);
        prop_assert!(fingerprint(&rep).close(&fingerprint(&conj), 1e-9));
        prop_assert!(is_irreducible_burnside(&conj, 1e-8));
        let found = find_conjugator(&rep, &conj, 1e-7);
        prop_assert!(found.is_some());
    }
}
