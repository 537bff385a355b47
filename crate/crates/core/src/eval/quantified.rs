//! Team semantics of the quantified propositional layer.
//!
//! A team is a list of worlds, each world a bit vector of proposition
//! values. Quantifiers rebuild the team: `forall p` replaces every world by
//! two copies disagreeing on `p`, `exists p` picks a value of `p` per world.
//! Connectives follow strict semantics.

use std::collections::{BTreeSet, HashMap};

use super::EvalError;
use crate::formula::Formula;
use crate::qbf::{free_props, DqbfInstance, IqbfInstance};

/// Teams larger than this make `exists` and non-flat splits infeasible.
pub const MAX_CHOICE_TEAM: usize = 24;

struct Ctx {
    index: HashMap<String, usize>,
}

impl Ctx {
    fn bit(&self, p: &str) -> usize {
        self.index[p]
    }

    fn holds(&self, f: &Formula, t: &[u64]) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Prop(p) => {
                let b = self.bit(p);
                t.iter().all(|w| w >> b & 1 == 1)
            }
            Formula::NegProp(p) => {
                let b = self.bit(p);
                t.iter().all(|w| w >> b & 1 == 0)
            }
            Formula::And(l, r) => self.holds(l, t)? && self.holds(r, t)?,
            Formula::Or(l, r) => {
                if is_flat(l) && is_flat(r) {
                    // Flat disjuncts: a disjoint split exists iff every world
                    // satisfies one of them.
                    t.iter().all(|w| self.point(l, *w) || self.point(r, *w))
                } else {
                    if t.len() > MAX_CHOICE_TEAM {
                        return Err(EvalError::TeamTooLarge(t.len()));
                    }
                    let mut found = false;
                    for s in 0u64..1 << t.len() {
                        let side = |bit: u64| -> Vec<u64> {
                            t.iter()
                                .enumerate()
                                .filter(|(i, _)| s >> i & 1 == bit)
                                .map(|(_, w)| *w)
                                .collect()
                        };
                        let (a, b) = (side(1), side(0));
                        if self.holds(l, &a)? && self.holds(r, &b)? {
                            found = true;
                            break;
                        }
                    }
                    found
                }
            }
            Formula::Inc(lhs, rhs) => {
                let code = |w: u64, ps: &[String]| -> Vec<bool> {
                    ps.iter().map(|p| w >> self.bit(p) & 1 == 1).collect()
                };
                let avail: BTreeSet<Vec<bool>> = t.iter().map(|w| code(*w, rhs)).collect();
                t.iter().all(|w| avail.contains(&code(*w, lhs)))
            }
            Formula::Dep(ctrl, target) => {
                let tb = self.bit(target);
                let mut seen: HashMap<Vec<bool>, bool> = HashMap::new();
                t.iter().all(|w| {
                    let key: Vec<bool> = ctrl.iter().map(|p| w >> self.bit(p) & 1 == 1).collect();
                    let v = w >> tb & 1 == 1;
                    *seen.entry(key).or_insert(v) == v
                })
            }
            Formula::Forall(p, g) => {
                let b = self.bit(p);
                let doubled: Vec<u64> =
                    t.iter().flat_map(|w| [w & !(1 << b), w | 1 << b]).collect();
                self.holds(g, &doubled)?
            }
            Formula::Exists(p, g) => {
                if t.len() > MAX_CHOICE_TEAM {
                    return Err(EvalError::TeamTooLarge(t.len()));
                }
                let b = self.bit(p);
                let mut found = false;
                for choice in 0u64..1 << t.len() {
                    let chosen: Vec<u64> = t
                        .iter()
                        .enumerate()
                        .map(|(i, w)| (w & !(1 << b)) | (choice >> i & 1) << b)
                        .collect();
                    if self.holds(g, &chosen)? {
                        found = true;
                        break;
                    }
                }
                found
            }
            Formula::Box(_) | Formula::Diamond(_) => {
                return Err(EvalError::Unsupported(f.head_name().into()))
            }
        })
    }

    /// Classical truth of a flat formula at one world.
    fn point(&self, f: &Formula, w: u64) -> bool {
        match f {
            Formula::Prop(p) => w >> self.bit(p) & 1 == 1,
            Formula::NegProp(p) => w >> self.bit(p) & 1 == 0,
            Formula::And(l, r) => self.point(l, w) && self.point(r, w),
            Formula::Or(l, r) => self.point(l, w) || self.point(r, w),
            _ => unreachable!("point evaluation of a non-flat formula"),
        }
    }
}

fn is_flat(f: &Formula) -> bool {
    match f {
        Formula::Prop(_) | Formula::NegProp(_) => true,
        Formula::And(l, r) | Formula::Or(l, r) => is_flat(l) && is_flat(r),
        _ => false,
    }
}

/// Evaluates a quantified formula on the seed team: a single world with
/// every proposition false. Free propositions therefore read as false.
pub fn eval_quantified(f: &Formula) -> Result<bool, EvalError> {
    f.validate()?;
    let props = f.props();
    if props.len() > 64 {
        return Err(EvalError::Unsupported("more than 64 propositions".into()));
    }
    let ctx = Ctx {
        index: props.into_iter().enumerate().map(|(i, p)| (p, i)).collect(),
    };
    ctx.holds(f, &[0])
}

fn closed(f: Formula) -> Result<Formula, EvalError> {
    match free_props(&f).into_iter().next() {
        Some(p) => Err(EvalError::UnboundProposition(p)),
        None => Ok(f),
    }
}

/// Truth of the instance; every matrix proposition must be quantified.
pub fn eval_dqbf(d: &DqbfInstance) -> Result<bool, EvalError> {
    eval_quantified(&closed(d.to_formula())?)
}

/// Truth of the instance; every matrix proposition must be quantified.
pub fn eval_iqbf(i: &IqbfInstance) -> Result<bool, EvalError> {
    eval_quantified(&closed(i.to_formula())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;

    fn eval(src: &str) -> bool {
        eval_quantified(&parse_minc(src).unwrap()).unwrap()
    }

    #[test]
    fn skolem_copy_is_found() {
        assert!(eval(
            "forall p1 exists q1 (dep(p1; q1) & ((q1 & p1) | (!q1 & !p1)))"
        ));
    }

    #[test]
    fn constant_cannot_copy() {
        assert!(!eval(
            "forall p1 exists q1 (dep(; q1) & ((q1 & p1) | (!q1 & !p1)))"
        ));
        assert!(eval("forall p1 exists q1 ((q1 & p1) | (!q1 & !p1))"));
    }

    #[test]
    fn empty_prefix_contradiction() {
        assert!(!eval("p & !p"));
        assert!(eval("!p"));
        let bad = IqbfInstance {
            prefix: vec![],
            matrix: parse_minc("p & !p").unwrap(),
        };
        assert_eq!(
            eval_iqbf(&bad),
            Err(EvalError::UnboundProposition("p".into()))
        );
    }

    #[test]
    fn inclusion_under_universal() {
        // The atom says q does not depend on p.
        assert!(!eval(
            "forall p exists q (dep(p; q) & ((q & p) | (!q & !p)) & forall s (s q <= p q))"
        ));
        assert!(eval("forall p exists q (dep(; q) & forall s (s q <= p q))"));
    }

    #[test]
    fn non_flat_disjunction_splits() {
        assert!(eval("forall p (dep(; p) | dep(; p))"));
        assert!(!eval(
            "forall p forall r ((dep(; p) & dep(; r)) | (dep(; p) & dep(; r)))"
        ));
    }
}
