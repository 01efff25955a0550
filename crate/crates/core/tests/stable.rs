mod common;

use common::*;
use rephat::field::F101;
use rephat::module::{find_isomorphism, projective, Morphism};
use rephat::stable::{
    ar_triangle_from_sequence, check_ar_axioms, classify_irreducible, cosyzygy, factor_through_projinj,
    stable_equal, syzygy, triangle_from_ses, verify_shape_table, IrredClass, Universe,
};
use rephat::strings::{ar_sequence, enumerate_strings, string_module};

#[test]
fn zero_and_identity_factorization() {
    let rep = load("a3");
    let m = string_module::<Q>(&rep, &word(&rep, "a_0"));
    assert!(factor_through_projinj(&Morphism::zero(&m, &m)).is_some());
    assert!(factor_through_projinj(&Morphism::identity(&m)).is_none());
    let p = projective::<Q>(&rep, vx(&rep, "1", 0)).module;
    assert!(factor_through_projinj(&Morphism::identity(&p)).is_some());
}

#[test]
fn composite_through_projective_is_found() {
    let rep = load("a3");
    let p = projective::<Q>(&rep, vx(&rep, "2", 0)).module;
    let rad = p.radical();
    let top = p.top();
    let h = top.map.after(&rad.map);
    // rad P → P → top P is zero; use rad P → P → P / soc P instead
    assert!(h.is_zero());
    let q = p.quotient_by_socle();
    let h = q.map.after(&rad.map);
    assert!(!h.is_zero());
    let w = factor_through_projinj(&h).expect("factors through P");
    assert_eq!(w.v.after(&w.iota), h);
    assert!(stable_equal(&h, &Morphism::zero(h.source(), h.target())).unwrap());
}

#[test]
fn cosyzygy_of_socle_and_round_trip() {
    let rep = load("a3");
    let p = projective::<Q>(&rep, vx(&rep, "1", 0)).module;
    let soc = p.socle().module;
    let c = cosyzygy(&soc);
    assert!(find_isomorphism(&c.module, &p.quotient_by_socle().module).is_some());
    assert!(cosyzygy(&p).module.is_zero());
    for w in enumerate_strings(&rep, 0, 1, 2) {
        let m = string_module::<Q>(&rep, &w);
        let back = syzygy(&cosyzygy(&m).module).0;
        assert!(find_isomorphism(&back, &m).is_some(), "{}", w.display(&rep));
    }
}

#[test]
fn split_sequence_has_zero_connecting_map() {
    let rep = load("a2");
    let a = string_module::<Q>(&rep, &word(&rep, "a_0"));
    let b = string_module::<Q>(&rep, &word(&rep, "e_1_2"));
    let sum = rephat::module::direct_sum(&rep, &[a, b]);
    let t = triangle_from_ses(&sum.inclusions[0], &sum.projections[1]).unwrap();
    assert!(factor_through_projinj(&t.h3).is_some());
}

#[test]
fn socle_sequence_connecting_map_is_stably_invertible() {
    let rep = load("a3");
    let p = projective::<Q>(&rep, vx(&rep, "2", 0)).module;
    let soc = p.socle();
    let q = p.quotient_by_socle();
    let t = triangle_from_ses(&soc.map, &q.map).unwrap();
    // target is Ω⁻¹(soc P), itself computed independently from the hull
    assert!(t.h3.is_iso());
}

#[test]
fn ar_axioms_hold_in_two_characteristics() {
    for name in ["a2", "a3"] {
        let rep = load(name);
        let uq: Vec<_> = enumerate_strings(&rep, -1, 2, 4)
            .iter()
            .map(|w| string_module::<Q>(&rep, w))
            .collect();
        let up: Vec<_> = enumerate_strings(&rep, -1, 2, 4)
            .iter()
            .map(|w| string_module::<F101>(&rep, w))
            .collect();
        for w in enumerate_strings(&rep, 0, 1, 2) {
            let s = ar_sequence::<Q>(&rep, &w).unwrap();
            let r = check_ar_axioms(&s.h, &s.h2, &uq).unwrap();
            assert!(r.all_pass(), "{name} {}: {r:?}", w.display(&rep));
            let s = ar_sequence::<F101>(&rep, &w).unwrap();
            let r2 = check_ar_axioms(&s.h, &s.h2, &up).unwrap();
            assert_eq!(r, r2);
        }
    }
}

#[test]
fn split_sequence_fails_ars1() {
    let rep = load("a2");
    let a = string_module::<Q>(&rep, &word(&rep, "a_0"));
    let b = string_module::<Q>(&rep, &word(&rep, "e_2_0"));
    let sum = rephat::module::direct_sum(&rep, &[a.clone(), b]);
    let r = check_ar_axioms(&sum.inclusions[0], &sum.projections[1], &[a]).unwrap();
    assert!(!r.non_split && !r.ars1);
}

fn example_case(start: &str) -> (IrredClass, IrredClass, String) {
    let rep = load("example4");
    let uni = Universe::<Q>::strings(&rep, -1, 2, 4, None);
    let s = ar_sequence::<Q>(&rep, &word(&rep, start)).unwrap();
    let t = ar_triangle_from_sequence(&s.h, &s.h2, &[]).unwrap();
    let f = verify_shape_table(&t, Some(&uni));
    assert!(f.ok(), "{start}: {f:?}");
    (f.class_h.unwrap(), f.class_h2.unwrap(), f.clause)
}

#[test]
fn example_triangles() {
    let (a, b, c) = example_case("t_0^-1 ahat_0");
    assert_eq!((a, b, c.as_str()), (IrredClass::Smonic, IrredClass::Sepic, "i"));
    let (a, b, c) = example_case("ahat_0");
    assert_eq!(a, IrredClass::Sepic);
    assert!(matches!(b, IrredClass::Sirreducible(_)));
    assert_eq!(c, "ii");
    let (a, b, c) = example_case("l_1 b_1 t_1");
    assert!(matches!(a, IrredClass::Sirreducible(_)));
    assert_eq!((b, c.as_str()), (IrredClass::Smonic, "iii-a"));
    let (a, b, c) = example_case("e_1_0");
    assert!(matches!(a, IrredClass::Sirreducible(_)));
    assert!(matches!(b, IrredClass::Sirreducible(_)));
    assert_eq!(c, "iii-b");
}

#[test]
fn radical_inclusion_is_sirreducible() {
    let rep = load("a3");
    let p = projective::<Q>(&rep, vx(&rep, "1", 0)).module;
    let rad = p.radical();
    let c = classify_irreducible(&rad.map, None).unwrap();
    assert!(matches!(c, IrredClass::Sirreducible(_)), "{c}");
}
