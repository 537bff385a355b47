use std::collections::BTreeSet;

use minc::eval::{eval_dqbf, eval_iqbf};
use minc::qbf::DqbfInstance;
use minc::reduce::{
    atm_accepts, build_circuit_from_atm, build_phi_c, build_phi_c_witness, canonical_tree_check,
    dqbf_to_iqbf, expand_succinct, iqbf_to_minc, per_check, persistent_gfp, Atm, CircuitBuilder,
    DepEncoding,
};
use minc::sat::valuation_team_search;
use minc::{eval_lax, parse_minc, Semantics};

#[test]
fn circuit_to_formula_and_back() {
    let mut b = CircuitBuilder::new(1);
    let t = b.truth();
    let yes = b.finish(t);
    let inst = expand_succinct(&yes).unwrap();
    assert!(per_check(&inst));
    let gfp = persistent_gfp(&inst);
    assert_eq!(gfp, BTreeSet::from([1, 2]));
    let phi = build_phi_c(&yes);
    let (m, team) = build_phi_c_witness(&yes, &gfp).unwrap();
    assert_eq!(eval_lax(&m, team, &phi), Ok(true));
    assert!(valuation_team_search(&phi, Semantics::Lax, 24, None)
        .unwrap()
        .is_some());

    let mut b = CircuitBuilder::new(1);
    let f = b.falsity();
    let no = b.finish(f);
    let inst = expand_succinct(&no).unwrap();
    assert!(!per_check(&inst));
    assert!(build_phi_c_witness(&no, &persistent_gfp(&inst)).is_err());
    assert!(
        valuation_team_search(&build_phi_c(&no), Semantics::Lax, 24, None)
            .unwrap()
            .is_none()
    );
}

#[test]
fn machine_to_per() {
    let m = Atm::from_json(
        r#"{"states": ["acc"], "types": {"acc": "accept"}, "initial": "acc",
            "delta": [], "space": {"0": 2, "1": 2, "2": 2}}"#,
    )
    .unwrap();
    for w in [vec![], vec![true], vec![false, true]] {
        assert!(atm_accepts(&m, &w).unwrap());
        let c = build_circuit_from_atm(&m, &w).unwrap();
        assert!(per_check(&expand_succinct(&c).unwrap()));
    }
}

#[test]
fn dependence_to_modal() {
    let copy = parse_minc("(p1 & q1) | (!p1 & !q1)").unwrap();
    for (deps, truth) in [(&["p1"][..], true), (&[][..], false)] {
        let d = DqbfInstance::alternating(&[("p1", "q1", deps)], copy.clone()).unwrap();
        assert_eq!(eval_dqbf(&d), Ok(truth));
        let iq = dqbf_to_iqbf(&d, DepEncoding::Generalized).unwrap();
        assert_eq!(eval_iqbf(&iq), Ok(truth));
        let out = iqbf_to_minc(&iq).unwrap();
        assert_eq!(canonical_tree_check(&out), Ok(truth), "{d}");
    }
}
