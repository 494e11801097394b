//! End-to-end flows through the public API.

use std::sync::Arc;

use epsolve::chains::{check_local_determination, colimit_finite, is_colimiting};
use epsolve::functors::{named_constant, parse_functor, preserves_cocone};
use epsolve::json::{cocone_from_str, cocone_to_string};
use epsolve::presheaf::{verify_proof_step, FinOCategory};
use epsolve::solver::{iterate, parse_equation};
use epsolve::Caps;

#[test]
fn solver_chain_colimit_survives_json_and_functors() {
    let mut spec = parse_equation("D = const(vee)").unwrap();
    spec.depth = 3;
    let d = iterate(&spec).unwrap();
    assert_eq!(d.stab_index(), Some(1));
    let k = colimit_finite(&d).unwrap();
    let caps = Caps::default();
    assert!(check_local_determination(&k).unwrap().verdict);
    assert!(is_colimiting(&k, &caps).unwrap());

    let back = cocone_from_str(&cocone_to_string(&k).unwrap()).unwrap();
    assert_eq!(back.legs(), k.legs());

    for f in ["D", "lift(D)", "prod(D, const(2))", "D + unit", "fun(const(2), D)", "lift(lift(D))"] {
        let p = preserves_cocone(&parse_functor(f).unwrap(), &back, &caps).unwrap();
        assert!(p.colimiting, "{f}");
        assert!(p.locally_determined.verdict, "{f}");
    }
}

#[test]
fn proof_step_in_a_category_built_from_the_chain() {
    let k = colimit_finite(&epsolve::fixtures::one_two_two_chain()).unwrap();
    let objects: Vec<(String, Arc<_>)> = ["1", "2"]
        .iter()
        .map(|n| (n.to_string(), named_constant(n).unwrap().poset))
        .collect();
    let cat = FinOCategory::full_subcategory(&objects, &Caps::default()).unwrap();
    assert!(verify_proof_step(&cat, &k).unwrap());
    assert!(!verify_proof_step(&cat, &epsolve::fixtures::counterexample_cocone(3)).unwrap());
}
