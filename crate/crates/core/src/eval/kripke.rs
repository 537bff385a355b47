//! Pointwise semantics: classical Kripke semantics for inclusion-free Minc
//! and for the multimodal language.

use super::EvalError;
use crate::formula::Formula;
use crate::modal::LFormula;
use crate::model::{KripkeModel, Team, MAIN_RELATION};

/// Set of worlds where an inclusion-free Minc formula holds.
pub fn kripke_truth_set(m: &KripkeModel, f: &Formula) -> Result<Team, EvalError> {
    let succ = m.relation_masks_or_empty(MAIN_RELATION);
    truth_set(m, &succ, f)
}

fn truth_set(m: &KripkeModel, succ: &[u64], f: &Formula) -> Result<Team, EvalError> {
    let all = m.all_worlds();
    Ok(match f {
        Formula::Prop(p) => m.valuation(p),
        Formula::NegProp(p) => all.difference(m.valuation(p)),
        Formula::And(l, r) => truth_set(m, succ, l)?.intersection(truth_set(m, succ, r)?),
        Formula::Or(l, r) => truth_set(m, succ, l)?.union(truth_set(m, succ, r)?),
        Formula::Box(g) => {
            let s = truth_set(m, succ, g)?;
            all.iter().filter(|w| Team(succ[*w]).is_subset(s)).collect()
        }
        Formula::Diamond(g) => {
            let s = truth_set(m, succ, g)?;
            all.iter().filter(|w| succ[*w] & s.0 != 0).collect()
        }
        Formula::Inc(..) => return Err(EvalError::InclusionAtom),
        Formula::Dep(..) | Formula::Forall(..) | Formula::Exists(..) => {
            return Err(EvalError::Unsupported(f.head_name().into()))
        }
    })
}

/// `M, w ⊩ f` for an inclusion-free Minc formula.
pub fn eval_kripke(m: &KripkeModel, w: usize, f: &Formula) -> Result<bool, EvalError> {
    check_world(m, w)?;
    Ok(kripke_truth_set(m, f)?.contains(w))
}

fn check_world(m: &KripkeModel, w: usize) -> Result<(), EvalError> {
    if w < m.world_count() {
        Ok(())
    } else {
        Err(EvalError::WorldOutsideModel(w))
    }
}

/// Set of worlds where a multimodal formula holds.
pub fn l_truth_set(m: &KripkeModel, f: &LFormula) -> Result<Team, EvalError> {
    let all = m.all_worlds();
    Ok(match f {
        LFormula::Prop(p) => m.valuation(p),
        LFormula::Not(g) => all.difference(l_truth_set(m, g)?),
        LFormula::And(l, r) => l_truth_set(m, l)?.intersection(l_truth_set(m, r)?),
        LFormula::Dia(r, g) => {
            let rel = m.relation(r)?;
            rel.preimage(l_truth_set(m, g)?)
        }
        LFormula::DiaInv(r, g) => {
            let rel = m.relation(r)?;
            rel.image(l_truth_set(m, g)?)
        }
        LFormula::DiaE(g) => {
            if l_truth_set(m, g)?.is_empty() {
                Team::EMPTY
            } else {
                all
            }
        }
    })
}

/// `N, w ⊩ f` for the multimodal language.
pub fn eval_l(m: &KripkeModel, w: usize, f: &LFormula) -> Result<bool, EvalError> {
    check_world(m, w)?;
    Ok(l_truth_set(m, f)?.contains(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;
    use crate::modal::parse_l;

    fn chain() -> KripkeModel {
        // v -> u, w -> u; p at u and v.
        let mut m = KripkeModel::new(["w", "u", "v"]).unwrap();
        m.add_edge("R", 0, 1).unwrap();
        m.add_edge("R", 2, 1).unwrap();
        m.set_prop("p", Team::from_indices([1, 2])).unwrap();
        m
    }

    #[test]
    fn kripke_basics() {
        let m = chain();
        assert!(eval_kripke(&m, 1, &parse_minc("p").unwrap()).unwrap());
        assert!(eval_kripke(&m, 0, &parse_minc("dia p").unwrap()).unwrap());
        assert!(eval_kripke(&m, 1, &parse_minc("box !p").unwrap()).unwrap());
        assert_eq!(
            eval_kripke(&m, 0, &parse_minc("p <= p").unwrap()),
            Err(EvalError::InclusionAtom)
        );
    }

    #[test]
    fn converse_and_global() {
        let m = chain();
        assert!(eval_l(&m, 1, &parse_l("<R^-1>p").unwrap()).unwrap());
        assert!(!eval_l(&m, 1, &parse_l("[R^-1]p").unwrap()).unwrap());
        assert!(eval_l(&m, 0, &parse_l("<E>p").unwrap()).unwrap());
        assert!(!eval_l(&m, 0, &parse_l("[E]p").unwrap()).unwrap());
        assert!(eval_l(&m, 0, &parse_l("[E](p | !p)").unwrap()).unwrap());
        assert!(eval_l(&m, 0, &parse_l("<S>p").unwrap()).is_err());
    }
}
