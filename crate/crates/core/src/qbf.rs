//! Quantified propositional formulas under team semantics: instances with
//! dependence atoms (DQBF) and with inclusion atoms (IQBF).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QbfError {
    #[error("proposition {0:?} is quantified twice")]
    Requantified(String),
    #[error("dependency {dep:?} of {var:?} is not an earlier universal variable")]
    BadDependency { var: String, dep: String },
    #[error("matrix mentions unbound proposition {0:?}")]
    Unbound(String),
    #[error("matrix may not contain {0}")]
    BadMatrix(&'static str),
    #[error("dependence atom on {0:?} does not belong to an existential variable")]
    StrayDependence(String),
    #[error("existential {0:?} has more than one dependence atom")]
    DuplicateDependence(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

/// One quantifier of a dependency prefix. Existentials carry the universal
/// variables they may depend on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DqbfQuant {
    Forall(String),
    Exists { var: String, deps: Vec<String> },
}

impl DqbfQuant {
    pub fn var(&self) -> &str {
        match self {
            DqbfQuant::Forall(v) | DqbfQuant::Exists { var: v, .. } => v,
        }
    }
}

/// `Q1 x1 .. Qn xn (phi & dep(P1; q1) & ..)` with a propositional matrix `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DqbfInstance {
    pub prefix: Vec<DqbfQuant>,
    pub matrix: Formula,
}

fn check_propositional(f: &Formula, allow_inc: bool) -> Result<(), QbfError> {
    match f {
        Formula::Box(_) | Formula::Diamond(_) => Err(QbfError::BadMatrix("modalities")),
        Formula::Dep(..) => Err(QbfError::BadMatrix("dependence atoms")),
        Formula::Exists(..) => Err(QbfError::BadMatrix("existential quantifiers")),
        Formula::Forall(..) if !allow_inc => Err(QbfError::BadMatrix("quantifiers")),
        Formula::Inc(..) if !allow_inc => Err(QbfError::BadMatrix("inclusion atoms")),
        _ => f
            .children()
            .into_iter()
            .try_for_each(|c| check_propositional(c, allow_inc)),
    }
}

/// Propositions occurring free in `f`.
pub fn free_props(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Forall(p, g) | Formula::Exists(p, g) => {
            let mut s = free_props(g);
            s.remove(p);
            s
        }
        Formula::Prop(_) | Formula::NegProp(_) | Formula::Inc(..) | Formula::Dep(..) => f.props(),
        _ => f.children().into_iter().flat_map(free_props).collect(),
    }
}

impl DqbfInstance {
    pub fn new(prefix: Vec<DqbfQuant>, matrix: Formula) -> Result<Self, QbfError> {
        let mut seen = BTreeSet::new();
        let mut universals = BTreeSet::new();
        for q in &prefix {
            if !seen.insert(q.var().to_string()) {
                return Err(QbfError::Requantified(q.var().to_string()));
            }
            match q {
                DqbfQuant::Forall(v) => {
                    universals.insert(v.clone());
                }
                DqbfQuant::Exists { var, deps } => {
                    if let Some(d) = deps.iter().find(|d| !universals.contains(*d)) {
                        return Err(QbfError::BadDependency {
                            var: var.clone(),
                            dep: d.clone(),
                        });
                    }
                }
            }
        }
        check_propositional(&matrix, false)?;
        if let Some(p) = matrix.props().into_iter().find(|p| !seen.contains(p)) {
            return Err(QbfError::Unbound(p));
        }
        Ok(DqbfInstance { prefix, matrix })
    }

    /// The alternating shape `forall p1 exists q1 .. forall pk exists qk`.
    pub fn alternating(
        blocks: &[(&str, &str, &[&str])],
        matrix: Formula,
    ) -> Result<Self, QbfError> {
        let mut prefix = Vec::new();
        for (p, q, deps) in blocks {
            prefix.push(DqbfQuant::Forall(p.to_string()));
            prefix.push(DqbfQuant::Exists {
                var: q.to_string(),
                deps: deps.iter().map(|d| d.to_string()).collect(),
            });
        }
        Self::new(prefix, matrix)
    }

    /// The team-semantics formula: prefix over `matrix & dep(P1; q1) & ..`.
    pub fn to_formula(&self) -> Formula {
        let deps = self.prefix.iter().filter_map(|q| match q {
            DqbfQuant::Exists { var, deps } => Some(Formula::Dep(deps.clone(), var.clone())),
            DqbfQuant::Forall(_) => None,
        });
        let body = Formula::conj(std::iter::once(self.matrix.clone()).chain(deps))
            .expect("matrix is always present");
        self.prefix.iter().rev().fold(body, |acc, q| match q {
            DqbfQuant::Forall(v) => Formula::forall(v.clone(), acc),
            DqbfQuant::Exists { var, .. } => Formula::exists(var.clone(), acc),
        })
    }

    /// Reads the form produced by [`DqbfInstance::to_formula`]. Top-level
    /// dependence conjuncts may appear anywhere in the conjunction; an
    /// existential without one depends on nothing.
    pub fn from_formula(f: &Formula) -> Result<Self, QbfError> {
        let (quants, body) = peel(f);
        let mut conjuncts = Vec::new();
        flatten_and(body, &mut conjuncts);
        let mut deps: Vec<(String, Vec<String>)> = Vec::new();
        let mut rest = Vec::new();
        for c in conjuncts {
            match c {
                Formula::Dep(ctrl, t) => {
                    if deps.iter().any(|(v, _)| v == t) {
                        return Err(QbfError::DuplicateDependence(t.clone()));
                    }
                    deps.push((t.clone(), ctrl.clone()));
                }
                other => rest.push(other.clone()),
            }
        }
        let mut prefix = Vec::new();
        for (q, v) in quants {
            prefix.push(match q {
                Quantifier::Forall => DqbfQuant::Forall(v.to_string()),
                Quantifier::Exists => DqbfQuant::Exists {
                    var: v.to_string(),
                    deps: deps
                        .iter()
                        .find(|(t, _)| t == v)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_default(),
                },
            });
        }
        for (t, _) in &deps {
            let is_existential = prefix
                .iter()
                .any(|q| matches!(q, DqbfQuant::Exists { var, .. } if var == t));
            if !is_existential {
                return Err(QbfError::StrayDependence(t.clone()));
            }
        }
        let matrix = Formula::conj(rest).ok_or(QbfError::BadMatrix("only dependence atoms"))?;
        Self::new(prefix, matrix)
    }
}

fn peel(f: &Formula) -> (Vec<(Quantifier, &str)>, &Formula) {
    let mut quants = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Forall(p, g) => {
                quants.push((Quantifier::Forall, p.as_str()));
                cur = g;
            }
            Formula::Exists(p, g) => {
                quants.push((Quantifier::Exists, p.as_str()));
                cur = g;
            }
            _ => return (quants, cur),
        }
    }
}

fn flatten_and<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(l, r) => {
            flatten_and(l, out);
            flatten_and(r, out);
        }
        _ => out.push(f),
    }
}

impl fmt::Display for DqbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// `Q1 x1 .. Qn xn matrix` where the matrix may use inclusion atoms and
/// universal quantifiers over fresh propositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqbfInstance {
    pub prefix: Vec<(Quantifier, String)>,
    pub matrix: Formula,
}

impl IqbfInstance {
    pub fn new(prefix: Vec<(Quantifier, String)>, matrix: Formula) -> Result<Self, QbfError> {
        let mut seen = BTreeSet::new();
        for (_, v) in &prefix {
            if !seen.insert(v.clone()) {
                return Err(QbfError::Requantified(v.clone()));
            }
        }
        check_propositional(&matrix, true)?;
        if let Some(p) = free_props(&matrix).into_iter().find(|p| !seen.contains(p)) {
            return Err(QbfError::Unbound(p));
        }
        Ok(IqbfInstance { prefix, matrix })
    }

    pub fn to_formula(&self) -> Formula {
        self.prefix
            .iter()
            .rev()
            .fold(self.matrix.clone(), |acc, (q, v)| match q {
                Quantifier::Forall => Formula::forall(v.clone(), acc),
                Quantifier::Exists => Formula::exists(v.clone(), acc),
            })
    }

    /// Takes the maximal quantifier prefix as the prefix.
    pub fn from_formula(f: &Formula) -> Result<Self, QbfError> {
        let (quants, body) = peel(f);
        let prefix = quants
            .into_iter()
            .map(|(q, v)| (q, v.to_string()))
            .collect();
        Self::new(prefix, body.clone())
    }
}

impl fmt::Display for IqbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;

    #[test]
    fn dqbf_formula_round_trip() {
        let d =
            DqbfInstance::alternating(&[("p1", "q1", &["p1"])], parse_minc("q1 | !p1").unwrap())
                .unwrap();
        assert_eq!(
            d.to_string(),
            "forall p1 exists q1 ((q1 | !p1) & dep(p1; q1))"
        );
        assert_eq!(DqbfInstance::from_formula(&d.to_formula()).unwrap(), d);
    }

    #[test]
    fn dependencies_must_precede() {
        let err = DqbfInstance::new(
            vec![
                DqbfQuant::Exists {
                    var: "q".into(),
                    deps: vec!["p".into()],
                },
                DqbfQuant::Forall("p".into()),
            ],
            parse_minc("q").unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, QbfError::BadDependency { .. }));
    }

    #[test]
    fn unbound_matrix_proposition() {
        let f = parse_minc("forall p (p | z)").unwrap();
        assert_eq!(
            IqbfInstance::from_formula(&f).unwrap_err(),
            QbfError::Unbound("z".into())
        );
        let g = parse_minc("forall p (forall s (s <= p) & p)").unwrap();
        assert!(IqbfInstance::from_formula(&g).is_ok());
    }
}
