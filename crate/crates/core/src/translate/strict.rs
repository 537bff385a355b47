//! Minc under strict semantics into two-variable logic with counting.
//!
//! The lax pieces are reused through the standard translation. Disjunctions
//! additionally demand disjoint disjunct teams, and every diamond gets a fresh
//! relation `F_φ` that is forced to be a function from `p_◇φ` onto `p_φ`
//! contained in `R`.

use super::lax::chi;
use super::TranslateError;
use crate::eval::{eval_fo2c, eval_strict, CompiledFormula, Semantics, TeamEvaluator};
use crate::fo::{standard_translation, FoFormula, Var};
use crate::formula::{subformulas, Formula, SubformulaTable};
use crate::model::{FoStructure, KripkeModel, Relation, Team, MAIN_RELATION};

#[derive(Clone, Debug)]
pub struct StrictTranslation {
    pub sentence: FoFormula,
    /// `exists x p_θ(x)` followed by one piece per occurrence.
    pub pieces: Vec<FoFormula>,
    pub names: Vec<String>,
    /// Fresh function relation per diamond occurrence.
    pub diamond_relations: Vec<(usize, String)>,
}

pub(crate) fn diamond_relation(table: &SubformulaTable, id: usize) -> String {
    format!("F_{}", table.name(id))
}

fn piece(table: &SubformulaTable, id: usize) -> FoFormula {
    use FoFormula as F;
    let (x, y) = (Var::X, Var::Y);
    let occ = table.get(id);
    match occ.node {
        Formula::Or(..) => {
            let (a, b) = (table.name(occ.children[0]), table.name(occ.children[1]));
            F::and(
                standard_translation(&chi(table, id), x),
                F::not(F::exists(x, F::and(F::unary(a, x), F::unary(b, x)))),
            )
        }
        Formula::Diamond(_) => {
            let f = diamond_relation(table, id);
            let me = &occ.name;
            let child = table.name(occ.children[0]);
            let total = F::forall(
                x,
                F::implies(
                    F::unary(me, x),
                    F::exists_one(y, F::and(F::binary(&f, x, y), F::unary(child, y))),
                ),
            );
            let typed = F::forall(
                x,
                F::forall(
                    y,
                    F::implies(
                        F::binary(&f, x, y),
                        F::and(F::unary(me, x), F::unary(child, y)),
                    ),
                ),
            );
            let onto = F::forall(
                y,
                F::implies(
                    F::unary(child, y),
                    F::exists(x, F::and(F::unary(me, x), F::binary(&f, x, y))),
                ),
            );
            let inside = F::forall(
                x,
                F::forall(
                    y,
                    F::implies(F::binary(&f, x, y), F::binary(MAIN_RELATION, x, y)),
                ),
            );
            F::and(F::and(F::and(total, typed), onto), inside)
        }
        _ => standard_translation(&chi(table, id), x),
    }
}

pub fn translate_strict(theta: &Formula) -> Result<StrictTranslation, TranslateError> {
    let table = subformulas(theta)?;
    let mut pieces = vec![FoFormula::exists(
        Var::X,
        FoFormula::unary(table.name(0), Var::X),
    )];
    pieces.extend((0..table.len()).map(|id| piece(&table, id)));
    let sentence = FoFormula::conj(pieces.iter().cloned()).expect("at least one piece");
    Ok(StrictTranslation {
        sentence,
        pieces,
        names: table.iter().map(|o| o.name.clone()).collect(),
        diamond_relations: table
            .iter()
            .filter(|o| matches!(o.node, Formula::Diamond(_)))
            .map(|o| (o.id, diamond_relation(&table, o.id)))
            .collect(),
    })
}

/// Reads a strict witness off a structure satisfying the translation: the
/// Kripke model keeps `R` and the propositions of θ, the team is `p_θ`.
pub fn extract_strict_witness(
    a: &FoStructure,
    theta: &Formula,
) -> Result<(KripkeModel, Team), TranslateError> {
    let tr = translate_strict(theta)?;
    for (i, piece) in tr.pieces.iter().enumerate() {
        if !eval_fo2c(a, piece)? {
            return Err(TranslateError::ConjunctFails {
                index: i,
                conjunct: piece.to_string(),
            });
        }
    }
    let n = a.to_kripke();
    let props = theta.props();
    let m = n.restrict([MAIN_RELATION], props.iter().map(String::as_str));
    Ok((m, a.unary(&tr.names[0])))
}

/// Builds a structure satisfying the translation from a strict witness.
pub fn embed_strict_witness(
    m: &KripkeModel,
    x: Team,
    theta: &Formula,
) -> Result<FoStructure, TranslateError> {
    if x.is_empty() {
        return Err(TranslateError::EmptyTeam);
    }
    if !eval_strict(m, x, theta)? {
        return Err(TranslateError::NotSatisfied);
    }
    let table = subformulas(theta)?;
    let compiled = CompiledFormula::new(theta)?;
    let succ = m.relation_masks_or_empty(MAIN_RELATION);
    let val = compiled.valuation_masks(m);
    let mut ev = TeamEvaluator::new(&compiled, Semantics::Strict, &succ, &val);
    let mut a = FoStructure::from_kripke(m);
    a.binary
        .entry(MAIN_RELATION.to_string())
        .or_insert_with(|| Relation::empty(m.world_count()));
    let mut u = vec![Team::EMPTY; table.len()];
    u[0] = x;
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
            Formula::Box(_) => u[kids[0]] = Team(t.iter().fold(0, |acc, w| acc | succ[w])),
            Formula::Diamond(_) => {
                let img = ev
                    .witness_successor(occ.id, t)
                    .expect("satisfied diamond has a successor team");
                u[kids[0]] = img;
                let rel = a
                    .binary
                    .entry(diamond_relation(&table, occ.id))
                    .or_insert_with(|| Relation::empty(m.world_count()));
                for (from, to) in selector(&succ, t, img) {
                    rel.add(from, to);
                }
            }
            Formula::Inc(lhs, rhs) => {
                let rel = a
                    .binary
                    .entry(super::lax::inclusion_relation(&table, occ.id))
                    .or_insert_with(|| Relation::empty(m.world_count()));
                for w in t.iter() {
                    let v = t
                        .iter()
                        .find(|v| {
                            lhs.iter().zip(rhs).all(|(p, q)| {
                                m.valuation(p).contains(w) == m.valuation(q).contains(*v)
                            })
                        })
                        .expect("satisfied inclusion atom has a matching world");
                    rel.add(w, v);
                }
            }
            _ => {}
        }
    }
    for occ in table.iter() {
        a.unary.insert(occ.name.clone(), u[occ.id]);
    }
    Ok(a)
}

/// A function from `t` onto `img` inside the relation. `img` is known to be
/// a selector image, so a matching saturating `t` exists; the surplus
/// members of `t` then map anywhere inside `img`.
fn selector(succ: &[u64], t: Team, img: Team) -> Vec<(usize, usize)> {
    let sources: Vec<usize> = t.iter().collect();
    let targets: Vec<usize> = img.iter().collect();
    // Match every target to a distinct source (targets are at most |t|).
    let mut owner: Vec<Option<usize>> = vec![None; sources.len()];
    fn augment(
        v: usize,
        targets: &[usize],
        sources: &[usize],
        succ: &[u64],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for (i, &s) in sources.iter().enumerate() {
            if succ[s] >> targets[v] & 1 == 1 && !seen[i] {
                seen[i] = true;
                if owner[i].is_none_or(|o| augment(o, targets, sources, succ, owner, seen)) {
                    owner[i] = Some(v);
                    return true;
                }
            }
        }
        false
    }
    for v in 0..targets.len() {
        let mut seen = vec![false; sources.len()];
        let ok = augment(v, &targets, &sources, succ, &mut owner, &mut seen);
        assert!(ok, "selector image admits a matching");
    }
    sources
        .iter()
        .zip(&owner)
        .map(|(&s, o)| {
            let to = match o {
                Some(v) => targets[*v],
                None => targets
                    .iter()
                    .copied()
                    .find(|&v| succ[s] >> v & 1 == 1)
                    .expect("every source reaches the image"),
            };
            (s, to)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;

    #[test]
    fn disjunction_demands_disjointness() {
        let tr = translate_strict(&parse_minc("p | q").unwrap()).unwrap();
        assert_eq!(
            tr.pieces[1].to_string(),
            "(forall x (sub0(x) <-> (sub1(x) | sub2(x))) & !exists x (sub1(x) & sub2(x)))"
        );
        assert_eq!(tr.pieces[0].to_string(), "exists x sub0(x)");
    }

    #[test]
    fn diamond_piece_is_functional() {
        let tr = translate_strict(&parse_minc("dia p").unwrap()).unwrap();
        assert_eq!(tr.diamond_relations, vec![(0, "F_sub0".to_string())]);
        let s = tr.pieces[1].to_string();
        assert!(s.contains("exists1 y (F_sub0(x,y) & sub1(y))"), "{s}");
        assert!(
            s.contains("forall x forall y (F_sub0(x,y) -> R(x,y))"),
            "{s}"
        );
        assert!(tr.sentence.is_sentence());
    }

    fn two_to_one() -> KripkeModel {
        // a and b both see only c; c is p.
        let mut m = KripkeModel::new(["a", "b", "c", "d"]).unwrap();
        m.add_edge("R", 0, 2).unwrap();
        m.add_edge("R", 1, 2).unwrap();
        m.add_edge("R", 1, 3).unwrap();
        m.set_prop("p", Team::from_indices([2])).unwrap();
        m.set_prop("q", Team::from_indices([3])).unwrap();
        m
    }

    #[test]
    fn embed_and_extract_round_trip() {
        let m = two_to_one();
        for (src, team) in [
            ("dia p", [0, 1]),
            ("dia (p | q)", [0, 1]),
            ("box (p | q)", [0, 1]),
        ] {
            let theta = parse_minc(src).unwrap();
            let x = Team::from_indices(team);
            let a = embed_strict_witness(&m, x, &theta).unwrap();
            let tr = translate_strict(&theta).unwrap();
            assert!(eval_fo2c(&a, &tr.sentence).unwrap(), "{src}");
            let (m2, t2) = extract_strict_witness(&a, &theta).unwrap();
            assert_eq!(t2, x);
            assert!(eval_strict(&m2, t2, &theta).unwrap());
        }
    }

    #[test]
    fn extraction_names_the_failing_piece() {
        let m = two_to_one();
        let theta = parse_minc("dia p").unwrap();
        let mut a = embed_strict_witness(&m, Team::from_indices([0, 1]), &theta).unwrap();
        a.binary.get_mut("F_sub0").unwrap().add(1, 3);
        let err = extract_strict_witness(&a, &theta).unwrap_err();
        assert!(
            matches!(err, TranslateError::ConjunctFails { index: 1, .. }),
            "{err}"
        );
    }
}
