//! Minc under lax semantics into the multimodal language with global and
//! converse modalities.

use std::collections::BTreeSet;

use super::TranslateError;
use crate::eval::{eval_l, eval_lax, CompiledFormula, Semantics, TeamEvaluator};
use crate::formula::{subformulas, Formula, SubformulaTable};
use crate::modal::LFormula;
use crate::model::{KripkeModel, Team, MAIN_RELATION};

/// The translation `p_θ & χ_φ1 & .. & χ_φn` together with its pieces.
#[derive(Clone, Debug)]
pub struct LaxTranslation {
    pub formula: LFormula,
    /// `p_θ` followed by one χ per occurrence, in occurrence order.
    pub pieces: Vec<LFormula>,
    /// Fresh proposition `p_φ` per occurrence.
    pub names: Vec<String>,
    /// Fresh relation per inclusion-atom occurrence, as `(occurrence, relation)`.
    pub inclusion_relations: Vec<(usize, String)>,
}

impl LaxTranslation {
    /// Relation names of the output signature.
    pub fn relations(&self) -> BTreeSet<String> {
        std::iter::once(MAIN_RELATION.to_string())
            .chain(self.inclusion_relations.iter().map(|(_, r)| r.clone()))
            .collect()
    }
}

pub(crate) fn inclusion_relation(table: &SubformulaTable, id: usize) -> String {
    format!("R_{}", table.name(id))
}

/// χ_φ for every occurrence except diamonds, which the callers build
/// themselves because the strict translation replaces them.
pub(crate) fn chi(table: &SubformulaTable, id: usize) -> LFormula {
    let occ = table.get(id);
    let me = || LFormula::prop(&occ.name);
    let child = |k: usize| LFormula::prop(table.name(occ.children[k]));
    match occ.node {
        Formula::Prop(p) => LFormula::box_e(LFormula::implies(me(), LFormula::prop(p))),
        Formula::NegProp(p) => {
            LFormula::box_e(LFormula::implies(me(), LFormula::not(LFormula::prop(p))))
        }
        Formula::And(..) => LFormula::box_e(LFormula::and(
            LFormula::iff(me(), child(0)),
            LFormula::iff(me(), child(1)),
        )),
        Formula::Or(..) => LFormula::box_e(LFormula::iff(me(), LFormula::or(child(0), child(1)))),
        Formula::Box(_) => LFormula::box_e(LFormula::and(
            LFormula::implies(me(), LFormula::box_rel(MAIN_RELATION, child(0))),
            LFormula::implies(child(0), LFormula::dia_inv(MAIN_RELATION, me())),
        )),
        Formula::Diamond(_) => LFormula::box_e(LFormula::and(
            LFormula::implies(me(), LFormula::dia(MAIN_RELATION, child(0))),
            LFormula::implies(child(0), LFormula::dia_inv(MAIN_RELATION, me())),
        )),
        Formula::Inc(lhs, rhs) => {
            let r = inclusion_relation(table, id);
            let plus = lhs.iter().zip(rhs).map(|(p, q)| {
                LFormula::box_e(LFormula::implies(
                    LFormula::and(me(), LFormula::prop(p)),
                    LFormula::dia(&r, LFormula::and(me(), LFormula::prop(q))),
                ))
            });
            let minus = lhs.iter().zip(rhs).map(|(p, q)| {
                LFormula::box_e(LFormula::implies(
                    LFormula::and(me(), LFormula::not(LFormula::prop(p))),
                    LFormula::dia(&r, LFormula::and(me(), LFormula::not(LFormula::prop(q)))),
                ))
            });
            let agree = rhs.iter().map(|q| {
                LFormula::box_e(LFormula::implies(
                    LFormula::dia(&r, LFormula::prop(q)),
                    LFormula::box_rel(&r, LFormula::prop(q)),
                ))
            });
            let conj = |it: &mut dyn Iterator<Item = LFormula>| {
                LFormula::conj(it).expect("inclusion atoms have positive width")
            };
            LFormula::and(
                LFormula::and(conj(&mut { plus }), conj(&mut { minus })),
                conj(&mut { agree }),
            )
        }
        Formula::Dep(..) | Formula::Forall(..) | Formula::Exists(..) => {
            unreachable!("subformula tables reject the quantified layer")
        }
    }
}

pub fn translate_lax(theta: &Formula) -> Result<LaxTranslation, TranslateError> {
    let table = subformulas(theta)?;
    let mut pieces = vec![LFormula::prop(table.name(0))];
    pieces.extend((0..table.len()).map(|id| chi(&table, id)));
    let formula = LFormula::conj(pieces.iter().cloned()).expect("at least p_θ");
    Ok(LaxTranslation {
        formula,
        pieces,
        names: table.iter().map(|o| o.name.clone()).collect(),
        inclusion_relations: table
            .iter()
            .filter(|o| matches!(o.node, Formula::Inc(..)))
            .map(|o| (o.id, inclusion_relation(&table, o.id)))
            .collect(),
    })
}

/// Builds the multimodal model of the forward direction: `U(p_θ) = X`,
/// propagated from the root to the leaves, plus one `R_α` pair per member
/// of `U(p_α)`. Returns the model and a world of `X`.
pub fn embed_lax_witness(
    m: &KripkeModel,
    x: Team,
    theta: &Formula,
) -> Result<(KripkeModel, usize), TranslateError> {
    if x.is_empty() {
        return Err(TranslateError::EmptyTeam);
    }
    if !eval_lax(m, x, theta)? {
        return Err(TranslateError::NotSatisfied);
    }
    let table = subformulas(theta)?;
    let compiled = CompiledFormula::new(theta)?;
    let succ = m.relation_masks_or_empty(MAIN_RELATION);
    let val = compiled.valuation_masks(m);
    let mut ev = TeamEvaluator::new(&compiled, Semantics::Lax, &succ, &val);

    let mut u = vec![Team::EMPTY; table.len()];
    u[0] = x;
    let mut n = m.clone();
    n.declare_relation(MAIN_RELATION);
    // Pre-order visits every parent before its children.
    for occ in table.iter() {
        let t = u[occ.id];
        let kids = &occ.children;
        match occ.node {
            Formula::And(..) => {
                u[kids[0]] = t;
                u[kids[1]] = t;
            }
            Formula::Or(..) => {
                let (s, s2) = ev
                    .witness_split(occ.id, t)
                    .expect("satisfied disjunction has a split");
                u[kids[0]] = s;
                u[kids[1]] = s2;
            }
            Formula::Box(_) => {
                u[kids[0]] = Team(t.iter().fold(0, |a, w| a | succ[w]));
            }
            Formula::Diamond(_) => {
                u[kids[0]] = ev
                    .witness_successor(occ.id, t)
                    .expect("satisfied diamond has a successor team");
            }
            Formula::Inc(lhs, rhs) => {
                let r = inclusion_relation(&table, occ.id);
                n.declare_relation(r.clone());
                for a in t.iter() {
                    let b = t
                        .iter()
                        .find(|b| {
                            lhs.iter().zip(rhs).all(|(p, q)| {
                                m.valuation(p).contains(a) == m.valuation(q).contains(*b)
                            })
                        })
                        .expect("satisfied inclusion atom has a matching world");
                    n.add_edge(&r, a, b)?;
                }
            }
            _ => {}
        }
    }
    for occ in table.iter() {
        n.set_prop(occ.name.clone(), u[occ.id])?;
    }
    let w = x.iter().next().expect("team is nonempty");
    Ok((n, w))
}

/// Reads a lax witness off a model of the translation: the team is the
/// interpretation of `p_θ` and the model is the restriction to `R` and the
/// propositions of θ.
pub fn extract_lax_witness(
    n: &KripkeModel,
    w: usize,
    theta: &Formula,
) -> Result<(KripkeModel, Team), TranslateError> {
    let tr = translate_lax(theta)?;
    for (i, piece) in tr.pieces.iter().enumerate() {
        if !eval_l(n, w, piece)? {
            return Err(TranslateError::ConjunctFails {
                index: i,
                conjunct: piece.to_string(),
            });
        }
    }
    let props = theta.props();
    let m = n.restrict([MAIN_RELATION], props.iter().map(String::as_str));
    Ok((m, n.valuation(&tr.names[0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;

    #[test]
    fn literal_translation() {
        let tr = translate_lax(&parse_minc("p").unwrap()).unwrap();
        assert_eq!(tr.formula.to_string(), "(sub0 & [E](sub0 -> p))");
    }

    #[test]
    fn diamond_translation() {
        let tr = translate_lax(&parse_minc("dia p").unwrap()).unwrap();
        assert_eq!(
            tr.formula.to_string(),
            "((sub0 & [E]((sub0 -> <R>sub1) & (sub1 -> <R^-1>sub0))) & [E](sub1 -> p))"
        );
        assert_eq!(tr.pieces.len(), 3);
    }

    #[test]
    fn inclusion_translation_per_coordinate() {
        let tr = translate_lax(&parse_minc("p1 p2 <= q1 q2").unwrap()).unwrap();
        let chi = tr.pieces[1].to_string();
        assert_eq!(
            chi,
            "((([E]((sub0 & p1) -> <R_sub0>(sub0 & q1)) & [E]((sub0 & p2) -> <R_sub0>(sub0 & q2))) \
             & ([E]((sub0 & !p1) -> <R_sub0>(sub0 & !q1)) & [E]((sub0 & !p2) -> <R_sub0>(sub0 & !q2)))) \
             & ([E](<R_sub0>q1 -> [R_sub0]q1) & [E](<R_sub0>q2 -> [R_sub0]q2)))"
        );
        assert_eq!(
            tr.relations().into_iter().collect::<Vec<_>>(),
            vec!["R".to_string(), "R_sub0".to_string()]
        );
    }

    #[test]
    fn piece_count_is_occurrences_plus_one() {
        for src in ["p & p", "dia (q <= p) | box !r", "p1 p2 <= q1 q2"] {
            let f = parse_minc(src).unwrap();
            assert_eq!(translate_lax(&f).unwrap().pieces.len(), f.size() + 1);
        }
    }

    fn fork() -> KripkeModel {
        let mut m = KripkeModel::new(["w", "u", "v"]).unwrap();
        m.add_edge("R", 0, 1).unwrap();
        m.add_edge("R", 0, 2).unwrap();
        m.set_prop("p", Team::singleton(1)).unwrap();
        m.set_prop("q", Team::singleton(2)).unwrap();
        m
    }

    #[test]
    fn embed_divergence_witness() {
        let theta = parse_minc("dia (q <= p)").unwrap();
        let (n, w) = embed_lax_witness(&fork(), Team::singleton(0), &theta).unwrap();
        assert_eq!(w, 0);
        assert_eq!(n.valuation("sub0"), Team::singleton(0));
        assert_eq!(n.valuation("sub1"), Team::from_indices([1, 2]));
        let r = n.relation("R_sub1").unwrap();
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(1, 2), (2, 1)]);
        let tr = translate_lax(&theta).unwrap();
        assert!(eval_l(&n, w, &tr.formula).unwrap());
        assert_eq!(n.world_count(), 3);
    }

    #[test]
    fn extract_round_trip_and_refusal() {
        let theta = parse_minc("dia (q <= p)").unwrap();
        let (n, w) = embed_lax_witness(&fork(), Team::singleton(0), &theta).unwrap();
        let (m, t) = extract_lax_witness(&n, w, &theta).unwrap();
        assert_eq!(t, Team::singleton(0));
        assert!(eval_lax(&m, t, &theta).unwrap());

        let mut broken = n.clone();
        broken.set_prop("sub1", Team::singleton(1)).unwrap();
        let err = extract_lax_witness(&broken, w, &theta).unwrap_err();
        // The inclusion piece loses its R_sub1 target.
        assert!(
            matches!(err, TranslateError::ConjunctFails { index: 2, .. }),
            "{err}"
        );
    }

    #[test]
    fn embed_refuses_unsatisfied_input() {
        let theta = parse_minc("dia (q <= p)").unwrap();
        assert!(matches!(
            embed_lax_witness(&fork(), Team::singleton(1), &theta),
            Err(TranslateError::NotSatisfied)
        ));
        assert!(matches!(
            embed_lax_witness(&fork(), Team::EMPTY, &theta),
            Err(TranslateError::EmptyTeam)
        ));
    }
}
