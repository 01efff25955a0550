use std::sync::Arc;

use super::*;
use crate::field::{Rational, F101};
use crate::presentation::parse_presentation;
use crate::repetitive::Letter;

type Q = Rational;

const A2: &str = "vertices 1 2\narrow a : 1 -> 2\n";
const A3: &str = "vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n";

fn rep(src: &str) -> Arc<Repetitive> {
    Repetitive::new(parse_presentation(src).unwrap()).unwrap()
}

fn vx(rep: &Repetitive, name: &str, z: i64) -> RVertex {
    RVertex {
        z,
        v: rep.base_quiver().vertex(name).unwrap(),
    }
}

fn simple<F: Scalar>(rep: &Arc<Repetitive>, x: RVertex) -> GradedModule<F> {
    ModuleBuilder::new(rep).dim(x, 1).build()
}

#[test]
fn a2_projective_shape() {
    let r = rep(A2);
    let p = projective::<Q>(&r, vx(&r, "1", 0)).module;
    assert_eq!(p.degree_dims(), vec![(0, 2), (1, 1)]);
    assert_eq!(p.loewy_dims(), vec![1, 1, 1]);
    assert!(p.satisfies_relations());
    assert!(is_indecomposable(&p));
    assert_eq!(p.socle().module.dimension_vector(), vec![(vx(&r, "1", 1), 1)]);
}

#[test]
fn hom_from_projective_is_evaluation() {
    let r = rep(A3);
    let m = projective::<Q>(&r, vx(&r, "2", 0)).module;
    let n = m.quotient_by_socle().module;
    for target in [&m, &n] {
        for z in -1..=2 {
            for v in ["1", "2", "3"] {
                let x = vx(&r, v, z);
                let p = projective::<Q>(&r, x).module;
                assert_eq!(hom_dim(&p, target), target.dim(x), "at {}", r.vertex_name(x));
            }
        }
    }
}

#[test]
fn hom_dims_agree_across_characteristics() {
    let r = rep(A3);
    let xs = [vx(&r, "1", 0), vx(&r, "2", 0), vx(&r, "3", 0), vx(&r, "1", 1)];
    for &x in &xs {
        for &y in &xs {
            let q = hom_dim(&projective::<Q>(&r, x).module, &projective::<Q>(&r, y).module);
            let p = hom_dim(&projective::<F101>(&r, x).module, &projective::<F101>(&r, y).module);
            assert_eq!(q, p);
        }
    }
}

#[test]
fn hull_of_projective_socle_is_the_projective() {
    let r = rep(A3);
    let x = vx(&r, "1", 0);
    let p = projective::<Q>(&r, x).module;
    let soc = p.socle();
    let (i, iota, tops) = injective_hull(&soc.module).unwrap();
    assert_eq!(tops, vec![x]);
    assert!(is_isomorphic(&i, &p));
    assert!(iota.is_valid() && iota.is_injective());
    let (ip, _, _) = injective_hull(&p).unwrap();
    assert!(is_isomorphic(&ip, &p));
}

#[test]
fn splitness_of_basic_maps() {
    let r = rep(A2);
    let p = projective::<Q>(&r, vx(&r, "1", 0)).module;
    let soc = p.socle();
    let s = splitness(&soc.map);
    assert!(!s.is_split_mono() && !s.is_split_epi());
    let id = splitness(&Morphism::identity(&p));
    assert!(id.is_split_mono() && id.is_split_epi());

    let sum = direct_sum(&r, &[p.clone(), simple(&r, vx(&r, "2", 3))]);
    let s = splitness(&sum.inclusions[0]);
    assert!(s.is_split_mono());
    let g = s.retraction.unwrap();
    assert_eq!(g.after(&sum.inclusions[0]), Morphism::identity(&p));
    assert!(splitness(&sum.projections[1]).is_split_epi());
}

#[test]
fn kernel_and_cokernel_of_radical_inclusion() {
    let r = rep(A3);
    let p = projective::<Q>(&r, vx(&r, "2", 0)).module;
    let rad = p.radical();
    assert!(rad.map.is_injective() && rad.map.is_valid());
    assert!(rad.map.kernel().module.is_zero());
    let cok = rad.map.cokernel();
    assert_eq!(cok.module.dimension_vector(), vec![(vx(&r, "2", 0), 1)]);
    assert!(cok.map.is_surjective() && cok.map.is_valid());
    assert!(cok.map.after(&rad.map).is_zero());
    let report = check_ses(&rad.map, &cok.map);
    assert!(report.global_exact);
}

#[test]
fn decompose_sum_with_and_without_candidates() {
    let r = rep(A3);
    let p = projective::<Q>(&r, vx(&r, "1", 0)).module;
    let s = simple::<Q>(&r, vx(&r, "2", 0));
    let t = p.quotient_by_socle().module;
    let sum = direct_sum(&r, &[p.clone(), s.clone(), t.clone()]).module;
    for candidates in [vec![], vec![s.clone(), t.clone(), p.clone()]] {
        let parts = decompose_with(&sum, &candidates).unwrap();
        assert_eq!(parts.len(), 3);
        for part in &parts {
            assert!(part.projection.after(&part.inclusion).is_iso());
            assert!([&p, &s, &t].iter().any(|m| is_isomorphic(m, &part.module)));
        }
        let mut total = Morphism::zero(&sum, &sum);
        for part in &parts {
            total = total.add(&part.inclusion.after(&part.projection));
        }
        assert!(total.is_iso());
    }
}

#[test]
fn unique_eigenvalue_detects_mixed_spectra() {
    let m = Matrix::<Q>::from_i64(2, 2, &[3, 1, 0, 3]);
    assert_eq!(unique_eigenvalue(&m), Some(Q::from_i64(3)));
    let m = Matrix::<Q>::from_i64(2, 2, &[1, 0, 0, 2]);
    assert_eq!(unique_eigenvalue(&m), None);
    // trace/n is unavailable when the characteristic divides n
    let m = Matrix::<crate::field::Fp<2>>::from_i64(2, 2, &[1, 1, 0, 1]);
    assert_eq!(unique_eigenvalue(&m), Some(crate::field::Fp::<2>::from_i64(1)));
}

#[test]
fn text_round_trip() {
    let r = rep(A3);
    let p = projective::<Q>(&r, vx(&r, "1", -1)).module;
    let back: GradedModule<Q> = parse_module(&r, &p.to_text()).unwrap();
    assert_eq!(back, p);
    let h = p.radical().map;
    let back: Morphism<Q> = parse_morphism(&r, &h.to_text()).unwrap();
    assert_eq!(back.to_text(), h.to_text());
    assert!(back.is_valid());
}

#[test]
fn text_errors_carry_lines() {
    let r = rep(A2);
    let err = parse_module::<Q>(&r, "module\nvertex 1_0 1\nvertex 7_0 1\nend\n").unwrap_err();
    assert_eq!(err.line, 3);
    let err = parse_module::<Q>(&r, "module\nvertex 1_0 1\nvertex 2_0 1\narrow a_0 1 1\nx\nend\n")
        .unwrap_err();
    assert_eq!(err.line, 5);
    let err = parse_module::<Q>(&r, "module\nvertex 1_0 1\narrow a_0 1 1\n1\nend\n").unwrap_err();
    assert_eq!(err.line, 3);
}

#[test]
fn connector_actions_are_stored() {
    let r = rep(A2);
    let p = projective::<Q>(&r, vx(&r, "2", 0)).module;
    let conn = RArrow {
        z: 0,
        letter: Letter::Conn(0),
    };
    assert_eq!(p.action(conn).rank(), 1);
    assert!(p.connector_composites_vanish());
}
