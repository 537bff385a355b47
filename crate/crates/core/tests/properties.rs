use minc::model::{load_model, save_model};
use minc::{parse_fo, parse_l, parse_minc, FoFormula, Formula, KripkeModel, LFormula, Team, Var};
use proptest::prelude::*;

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["p", "q", "r", "p1", "q2", "s"]).prop_map(String::from)
}

fn names(k: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(name(), k)
}

fn inc() -> impl Strategy<Value = Formula> {
    (1usize..=3)
        .prop_flat_map(|k| (names(k), names(k)))
        .prop_map(|(l, r)| Formula::Inc(l, r))
}

fn modal_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        name().prop_map(Formula::Prop),
        name().prop_map(Formula::NegProp),
        inc(),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::diamond),
        ]
    })
}

/// Quantifiers and dependence atoms never occur below a modality.
fn minc_formula() -> impl Strategy<Value = Formula> {
    let base = prop_oneof![
        4 => modal_formula(),
        1 => (prop::collection::vec(name(), 0..3), name()).prop_map(|(c, t)| Formula::Dep(c, t)),
    ];
    base.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (name(), inner.clone()).prop_map(|(p, f)| Formula::forall(p, f)),
            (name(), inner).prop_map(|(p, f)| Formula::exists(p, f)),
        ]
    })
}

fn l_formula() -> impl Strategy<Value = LFormula> {
    let rel = || prop::sample::select(vec!["R", "S", "R_sub3"]).prop_map(String::from);
    name()
        .prop_map(LFormula::Prop)
        .prop_recursive(5, 40, 2, move |inner| {
            prop_oneof![
                inner.clone().prop_map(|f| LFormula::Not(Box::new(f))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| LFormula::and(a, b)),
                (rel(), inner.clone()).prop_map(|(r, f)| LFormula::Dia(r, Box::new(f))),
                (rel(), inner.clone()).prop_map(|(r, f)| LFormula::DiaInv(r, Box::new(f))),
                inner.prop_map(|f| LFormula::DiaE(Box::new(f))),
            ]
        })
}

fn fo_formula() -> impl Strategy<Value = FoFormula> {
    let var = || prop::sample::select(vec![Var::X, Var::Y]);
    let leaf = prop_oneof![
        (name(), var()).prop_map(|(p, v)| FoFormula::Unary(p, v)),
        (var(), var()).prop_map(|(a, b)| FoFormula::Binary("R".into(), a, b)),
    ];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(FoFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::iff(a, b)),
            (var(), inner.clone()).prop_map(|(v, f)| FoFormula::exists(v, f)),
            (var(), inner.clone()).prop_map(|(v, f)| FoFormula::forall(v, f)),
            (var(), inner).prop_map(|(v, f)| FoFormula::exists_one(v, f)),
        ]
    })
}

fn model() -> impl Strategy<Value = KripkeModel> {
    (1usize..=6)
        .prop_flat_map(|n| {
            let masks = prop::collection::vec(0u64..1 << n, n);
            (
                Just(n),
                masks.clone(),
                masks,
                prop::collection::vec(0u64..1 << n, 0..3),
            )
        })
        .prop_map(|(n, r, s, props)| {
            let valuation = props
                .into_iter()
                .enumerate()
                .map(|(i, m)| (format!("p{i}"), m));
            KripkeModel::from_masks(n, [("R".to_string(), r), ("S".to_string(), s)], valuation)
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 10_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn minc_print_parse_is_identity(f in minc_formula()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_minc(&printed).unwrap(), f, "{}", printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 2_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn l_print_parse_is_identity(f in l_formula()) {
        prop_assert_eq!(parse_l(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn fo_print_parse_is_identity(f in fo_formula()) {
        prop_assert_eq!(parse_fo(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn save_load_is_identity(m in model()) {
        let text = save_model(&m);
        let back = load_model(&text).unwrap();
        prop_assert_eq!(save_model(&back), text);
        prop_assert_eq!(back.worlds(), m.worlds());
        for (r, rel) in m.relations() {
            prop_assert_eq!(back.relation(r).unwrap().masks(), rel.masks());
        }
        for p in m.props() {
            prop_assert_eq!(back.valuation(p), m.valuation(p));
        }
    }

    #[test]
    fn legal_successors_match_brute_force(m in model(), t in 0u64..64) {
        let t = Team(t).intersection(m.all_worlds());
        let r = m.relation("R").unwrap();
        let got: Vec<Team> = m.legal_successor_teams("R", t).unwrap().collect();
        let want: Vec<Team> = m
            .all_worlds()
            .subsets()
            .filter(|s| s.is_subset(r.image(t)))
            .filter(|s| t.iter().all(|w| !r.successors_of(w).intersection(*s).is_empty()))
            .collect();
        prop_assert_eq!(got, want);
    }
}
