//! Dependence atoms simulated by universally guarded inclusion atoms.

use std::collections::BTreeSet;

use super::ReduceError;
use crate::formula::Formula;
use crate::qbf::{DqbfInstance, DqbfQuant, IqbfInstance, Quantifier};

/// How `dep(P; q)` becomes an inclusion atom.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DepEncoding {
    /// `forall s1 .. forall sj (s1..sj P q ⊆ u1..uj P q)` where `u1..uj` are
    /// the universals preceding `q` outside `P`; omitted when there are none.
    #[default]
    Generalized,
    /// `forall s (s P q ⊆ u P q)` with `u` the outermost universal. Correct
    /// only for some prefixes; kept so that its failures can be exhibited.
    OutermostUniversal,
}

struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    fn next(&mut self) -> String {
        let name = std::iter::once("s".to_string())
            .chain((1..).map(|i| format!("s{i}")))
            .find(|n| !self.taken.contains(n))
            .expect("names are unbounded");
        self.taken.insert(name.clone());
        name
    }
}

fn guarded(fresh: &mut Fresh, hidden: &[String], ctrl: &[String], q: &str) -> Formula {
    let s: Vec<String> = hidden.iter().map(|_| fresh.next()).collect();
    let tail = ctrl.iter().cloned().chain([q.to_string()]);
    let lhs: Vec<String> = s.iter().cloned().chain(tail.clone()).collect();
    let rhs: Vec<String> = hidden.iter().cloned().chain(tail).collect();
    s.iter().rev().fold(Formula::inc(lhs, rhs), |acc, v| {
        Formula::forall(v.clone(), acc)
    })
}

pub fn dqbf_to_iqbf(d: &DqbfInstance, enc: DepEncoding) -> Result<IqbfInstance, ReduceError> {
    let mut fresh = Fresh {
        taken: d
            .prefix
            .iter()
            .map(|q| q.var().to_string())
            .chain(d.matrix.props())
            .collect(),
    };
    let mut atoms = Vec::new();
    let mut universals: Vec<String> = Vec::new();
    for q in &d.prefix {
        match q {
            DqbfQuant::Forall(p) => universals.push(p.clone()),
            DqbfQuant::Exists { var, deps } => {
                let hidden: Vec<String> = match enc {
                    DepEncoding::Generalized => universals
                        .iter()
                        .filter(|u| !deps.contains(u))
                        .cloned()
                        .collect(),
                    DepEncoding::OutermostUniversal => d
                        .prefix
                        .iter()
                        .find_map(|q| match q {
                            DqbfQuant::Forall(u) => Some(u.clone()),
                            _ => None,
                        })
                        .into_iter()
                        .collect(),
                };
                if !hidden.is_empty() {
                    atoms.push(guarded(&mut fresh, &hidden, deps, var));
                }
            }
        }
    }
    let prefix = d
        .prefix
        .iter()
        .map(|q| match q {
            DqbfQuant::Forall(v) => (Quantifier::Forall, v.clone()),
            DqbfQuant::Exists { var, .. } => (Quantifier::Exists, var.clone()),
        })
        .collect();
    let matrix = Formula::conj(atoms.into_iter().chain([d.matrix.clone()])).expect("matrix");
    Ok(IqbfInstance::new(prefix, matrix)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_dqbf, eval_iqbf};
    use crate::formula::parse_minc;

    fn sample_instance(matrix: &str) -> DqbfInstance {
        DqbfInstance::new(
            vec![
                DqbfQuant::Forall("p".into()),
                DqbfQuant::Forall("q".into()),
                DqbfQuant::Exists {
                    var: "r".into(),
                    deps: vec!["q".into()],
                },
            ],
            parse_minc(matrix).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_dependence_example() {
        let i = dqbf_to_iqbf(&sample_instance("r | !r"), DepEncoding::Generalized).unwrap();
        assert_eq!(
            i.to_string(),
            "forall p forall q exists r (forall s (s q r <= p q r) & (r | !r))"
        );
        let literal =
            dqbf_to_iqbf(&sample_instance("r | !r"), DepEncoding::OutermostUniversal).unwrap();
        assert_eq!(literal, i);
    }

    #[test]
    fn dep_free_instances_unchanged() {
        let d = DqbfInstance::new(
            vec![
                DqbfQuant::Forall("p".into()),
                DqbfQuant::Exists {
                    var: "q".into(),
                    deps: vec!["p".into()],
                },
            ],
            parse_minc("(p & q) | (!p & !q)").unwrap(),
        )
        .unwrap();
        let i = dqbf_to_iqbf(&d, DepEncoding::Generalized).unwrap();
        assert_eq!(i.matrix, d.matrix);
        assert!(eval_iqbf(&i).unwrap());
    }

    #[test]
    fn several_hidden_universals() {
        // q may depend on p2 only; the matrix demands q = p1.
        let d = DqbfInstance::new(
            vec![
                DqbfQuant::Forall("p1".into()),
                DqbfQuant::Forall("p2".into()),
                DqbfQuant::Exists {
                    var: "q".into(),
                    deps: vec!["p2".into()],
                },
            ],
            parse_minc("(p1 & q) | (!p1 & !q)").unwrap(),
        )
        .unwrap();
        let i = dqbf_to_iqbf(&d, DepEncoding::Generalized).unwrap();
        assert_eq!(
            i.matrix.to_string(),
            "(forall s (s p2 q <= p1 p2 q) & ((p1 & q) | (!p1 & !q)))"
        );
        assert!(!eval_dqbf(&d).unwrap());
        assert!(!eval_iqbf(&i).unwrap());
    }

    #[test]
    fn fresh_names_avoid_clashes() {
        let d = DqbfInstance::new(
            vec![
                DqbfQuant::Forall("s".into()),
                DqbfQuant::Forall("p".into()),
                DqbfQuant::Exists {
                    var: "q".into(),
                    deps: vec![],
                },
            ],
            parse_minc("q | !q").unwrap(),
        )
        .unwrap();
        let i = dqbf_to_iqbf(&d, DepEncoding::Generalized).unwrap();
        assert_eq!(
            i.matrix.to_string(),
            "(forall s1 forall s2 (s1 s2 q <= s p q) & (q | !q))"
        );
    }
}
