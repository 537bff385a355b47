//! Lax and strict team semantics for Minc.

use std::collections::HashMap;

use super::EvalError;
use crate::formula::Formula;
use crate::model::{selector_images, KripkeModel, LegalSuccessors, Team, MAIN_RELATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Lax,
    Strict,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Lax => "lax",
            Semantics::Strict => "strict",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Lit { prop: usize, positive: bool },
    And(usize, usize),
    Or(usize, usize),
    Inc { lhs: Vec<usize>, rhs: Vec<usize> },
    Box(usize),
    Dia(usize),
}

/// A Minc formula flattened into pre-order nodes. Node ids coincide with
/// the occurrence ids of [`crate::formula::subformulas`].
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    nodes: Vec<Node>,
    props: Vec<String>,
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> Result<Self, EvalError> {
        f.require_minc()?;
        let props: Vec<String> = f.props().into_iter().collect();
        let mut c = CompiledFormula {
            nodes: Vec::with_capacity(f.size()),
            props,
        };
        c.push(f)?;
        Ok(c)
    }

    fn prop_index(&self, p: &str) -> usize {
        self.props
            .binary_search_by(|q| q.as_str().cmp(p))
            .expect("props collected from formula")
    }

    fn push(&mut self, f: &Formula) -> Result<usize, EvalError> {
        let id = self.nodes.len();
        // Placeholder, patched once the children have ids.
        self.nodes.push(Node::Box(usize::MAX));
        let node = match f {
            Formula::Prop(p) => Node::Lit {
                prop: self.prop_index(p),
                positive: true,
            },
            Formula::NegProp(p) => Node::Lit {
                prop: self.prop_index(p),
                positive: false,
            },
            Formula::And(l, r) => Node::And(self.push(l)?, self.push(r)?),
            Formula::Or(l, r) => Node::Or(self.push(l)?, self.push(r)?),
            Formula::Inc(l, r) => {
                if l.len() > 64 {
                    return Err(EvalError::Unsupported(
                        "inclusion atom wider than 64".into(),
                    ));
                }
                Node::Inc {
                    lhs: l.iter().map(|p| self.prop_index(p)).collect(),
                    rhs: r.iter().map(|p| self.prop_index(p)).collect(),
                }
            }
            Formula::Box(g) => Node::Box(self.push(g)?),
            Formula::Diamond(g) => Node::Dia(self.push(g)?),
            Formula::Dep(..) | Formula::Forall(..) | Formula::Exists(..) => {
                return Err(EvalError::Unsupported(f.head_name().into()))
            }
        };
        self.nodes[id] = node;
        Ok(id)
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_or(&self, id: usize) -> bool {
        matches!(self.nodes[id], Node::Or(..))
    }

    /// Children of node `id`.
    pub fn children(&self, id: usize) -> Vec<usize> {
        match &self.nodes[id] {
            Node::Lit { .. } | Node::Inc { .. } => vec![],
            Node::And(a, b) | Node::Or(a, b) => vec![*a, *b],
            Node::Box(a) | Node::Dia(a) => vec![*a],
        }
    }

    /// Bit masks of the formula's propositions, in [`CompiledFormula::props`] order.
    pub fn valuation_masks(&self, m: &KripkeModel) -> Vec<u64> {
        self.props.iter().map(|p| m.valuation(p).0).collect()
    }
}

enum Memo {
    /// One cell per (node, team): 0 unknown, 1 false, 2 true.
    Dense {
        n: usize,
        cells: Vec<u8>,
    },
    Sparse(HashMap<(u32, u64), bool>),
}

const DENSE_LIMIT: usize = 12;

/// Evaluates one compiled formula on many teams of a fixed model, sharing
/// the memo table between calls.
pub struct TeamEvaluator<'a> {
    f: &'a CompiledFormula,
    semantics: Semantics,
    succ: &'a [u64],
    val: &'a [u64],
    memo: Memo,
    calls: u64,
    /// Pointwise truth sets of inclusion-free nodes, when the flatness
    /// shortcut is on.
    flat: Option<Vec<Option<u64>>>,
}

impl<'a> TeamEvaluator<'a> {
    /// `succ[w]` is the successor mask of world `w`; `val[i]` is the
    /// valuation of the `i`-th proposition of the compiled formula.
    pub fn new(
        f: &'a CompiledFormula,
        semantics: Semantics,
        succ: &'a [u64],
        val: &'a [u64],
    ) -> Self {
        let n = succ.len();
        let memo = if n <= DENSE_LIMIT {
            Memo::Dense {
                n,
                cells: vec![0; f.len() << n],
            }
        } else {
            Memo::Sparse(HashMap::new())
        };
        TeamEvaluator {
            f,
            semantics,
            succ,
            val,
            memo,
            calls: 0,
            flat: None,
        }
    }

    /// Decides inclusion-free subformulas by their pointwise truth sets
    /// (flatness) instead of by the team clauses. Off by default, so that
    /// the plain evaluator stays a direct reading of the definitions.
    pub fn flat_shortcut(mut self) -> Self {
        let n = self.succ.len();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut truth: Vec<Option<u64>> = vec![None; self.f.len()];
        // Children come after their parent in pre-order.
        for id in (0..self.f.len()).rev() {
            let get = |i: usize| truth[i];
            truth[id] = match &self.f.nodes[id] {
                Node::Lit { prop, positive } => {
                    let m = self.val[*prop];
                    Some(if *positive { m } else { full & !m })
                }
                Node::Inc { .. } => None,
                Node::And(a, b) => get(*a).zip(get(*b)).map(|(x, y)| x & y),
                Node::Or(a, b) => get(*a).zip(get(*b)).map(|(x, y)| x | y),
                Node::Box(a) => get(*a).map(|x| {
                    (0..n)
                        .filter(|&w| self.succ[w] & !x == 0)
                        .fold(0, |acc, w| acc | 1 << w)
                }),
                Node::Dia(a) => get(*a).map(|x| {
                    (0..n)
                        .filter(|&w| self.succ[w] & x != 0)
                        .fold(0, |acc, w| acc | 1 << w)
                }),
            };
        }
        self.flat = Some(truth);
        self
    }

    /// Number of node evaluations that missed the memo so far.
    pub fn work(&self) -> u64 {
        self.calls
    }

    pub fn eval(&mut self, team: Team) -> bool {
        self.node(0, team.0)
    }

    pub fn eval_node(&mut self, id: usize, team: Team) -> bool {
        self.node(id, team.0)
    }

    fn lookup(&self, id: usize, t: u64) -> Option<bool> {
        match &self.memo {
            Memo::Dense { n, cells } => match cells[(id << n) | t as usize] {
                0 => None,
                c => Some(c == 2),
            },
            Memo::Sparse(map) => map.get(&(id as u32, t)).copied(),
        }
    }

    fn store(&mut self, id: usize, t: u64, v: bool) {
        match &mut self.memo {
            Memo::Dense { n, cells } => cells[(id << *n) | t as usize] = 1 + v as u8,
            Memo::Sparse(map) => {
                map.insert((id as u32, t), v);
            }
        }
    }

    fn node(&mut self, id: usize, t: u64) -> bool {
        if let Some(v) = self.lookup(id, t) {
            return v;
        }
        self.calls += 1;
        if let Some(Some(truth)) = self.flat.as_ref().map(|v| v[id]) {
            return t & !truth == 0;
        }
        let f = self.f;
        let v = match &f.nodes[id] {
            Node::Lit { prop, positive } => {
                let m = self.val[*prop];
                if *positive {
                    t & !m == 0
                } else {
                    t & m == 0
                }
            }
            Node::And(a, b) => self.node(*a, t) && self.node(*b, t),
            Node::Or(a, b) => self.split(*a, *b, t).is_some(),
            Node::Inc { lhs, rhs } => inclusion_holds(self.val, lhs, rhs, t),
            Node::Box(a) => {
                let img = image(self.succ, t);
                self.node(*a, img)
            }
            Node::Dia(a) => self.successor(*a, t).is_some(),
        };
        self.store(id, t, v);
        v
    }

    /// First split `(S, S')` of `t` witnessing the disjunction `a | b`.
    fn split(&mut self, a: usize, b: usize, t: u64) -> Option<(Team, Team)> {
        for s in Team(t).subsets() {
            if !self.node(a, s.0) {
                continue;
            }
            let rest = t & !s.0;
            match self.semantics {
                Semantics::Strict => {
                    if self.node(b, rest) {
                        return Some((s, Team(rest)));
                    }
                }
                Semantics::Lax => {
                    for x in s.subsets() {
                        if self.node(b, rest | x.0) {
                            return Some((s, Team(rest | x.0)));
                        }
                    }
                }
            }
        }
        None
    }

    /// First successor team of `t` satisfying node `a`: a legal successor
    /// team under lax semantics, a selector image under strict semantics.
    fn successor(&mut self, a: usize, t: u64) -> Option<Team> {
        match self.semantics {
            Semantics::Lax => {
                let succ = self.succ;
                LegalSuccessors::new(succ, Team(t)).find(|s| self.node(a, s.0))
            }
            Semantics::Strict => selector_images(self.succ, Team(t))
                .into_iter()
                .find(|s| self.node(a, s.0)),
        }
    }

    /// The split chosen for disjunction node `id` on `team`, if any.
    pub fn witness_split(&mut self, id: usize, team: Team) -> Option<(Team, Team)> {
        match self.f.nodes[id] {
            Node::Or(a, b) => self.split(a, b, team.0),
            _ => None,
        }
    }

    /// The successor team chosen for diamond node `id` on `team`, if any.
    pub fn witness_successor(&mut self, id: usize, team: Team) -> Option<Team> {
        match self.f.nodes[id] {
            Node::Dia(a) => self.successor(a, team.0),
            _ => None,
        }
    }
}

fn image(succ: &[u64], t: u64) -> u64 {
    Team(t).iter().fold(0, |acc, w| acc | succ[w])
}

fn code(val: &[u64], props: &[usize], w: usize) -> u64 {
    props
        .iter()
        .enumerate()
        .fold(0, |c, (i, p)| c | (val[*p] >> w & 1) << i)
}

fn inclusion_holds(val: &[u64], lhs: &[usize], rhs: &[usize], t: u64) -> bool {
    let mut available: Vec<u64> = Team(t).iter().map(|w| code(val, rhs, w)).collect();
    available.sort_unstable();
    Team(t)
        .iter()
        .all(|w| available.binary_search(&code(val, lhs, w)).is_ok())
}

fn check_team(m: &KripkeModel, t: Team) -> Result<(), EvalError> {
    if t.is_subset(m.all_worlds()) {
        Ok(())
    } else {
        Err(EvalError::TeamOutsideModel)
    }
}

/// Evaluates `f` on team `t` of the unimodal model `m`; a missing `R` is empty.
pub fn eval_team(
    m: &KripkeModel,
    t: Team,
    f: &Formula,
    semantics: Semantics,
) -> Result<bool, EvalError> {
    check_team(m, t)?;
    let c = CompiledFormula::new(f)?;
    let succ = m.relation_masks_or_empty(MAIN_RELATION);
    let val = c.valuation_masks(m);
    Ok(TeamEvaluator::new(&c, semantics, &succ, &val).eval(t))
}

pub fn eval_lax(m: &KripkeModel, t: Team, f: &Formula) -> Result<bool, EvalError> {
    eval_team(m, t, f, Semantics::Lax)
}

pub fn eval_strict(m: &KripkeModel, t: Team, f: &Formula) -> Result<bool, EvalError> {
    eval_team(m, t, f, Semantics::Strict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;

    fn fork() -> KripkeModel {
        let mut m = KripkeModel::new(["w", "u", "v"]).unwrap();
        m.add_edge("R", 0, 1).unwrap();
        m.add_edge("R", 0, 2).unwrap();
        m.set_prop("p", Team::singleton(1)).unwrap();
        m.set_prop("q", Team::singleton(2)).unwrap();
        m
    }

    #[test]
    fn divergence_model() {
        let m = fork();
        let f = parse_minc("dia (q <= p)").unwrap();
        assert!(eval_lax(&m, Team::singleton(0), &f).unwrap());
        assert!(!eval_strict(&m, Team::singleton(0), &f).unwrap());
    }

    #[test]
    fn inclusion_atom_needs_matching_value() {
        let mut m = KripkeModel::new(["u", "v"]).unwrap();
        m.set_prop("p", Team::singleton(0)).unwrap();
        m.set_prop("q", Team::full(2)).unwrap();
        let f = parse_minc("p <= q").unwrap();
        assert!(!eval_lax(&m, Team::full(2), &f).unwrap());
        assert!(eval_lax(&m, Team::singleton(0), &f).unwrap());
        assert!(eval_lax(&m, Team::EMPTY, &f).unwrap());
    }

    #[test]
    fn disjunction_must_cover_team() {
        // Both disjuncts force p false, so u cannot be covered.
        let mut m = KripkeModel::new(["u", "v"]).unwrap();
        m.set_prop("p", Team::singleton(0)).unwrap();
        let f = parse_minc("(p <= q & !q) | (p <= q)").unwrap();
        assert!(!eval_lax(&m, Team::full(2), &f).unwrap());
        assert!(eval_lax(&m, Team::singleton(1), &f).unwrap());
    }

    #[test]
    fn box_on_dead_end_is_vacuous() {
        let m = fork();
        let f = parse_minc("box p").unwrap();
        assert!(eval_strict(&m, Team::singleton(1), &f).unwrap());
        assert!(!eval_lax(&m, Team::singleton(0), &f).unwrap());
    }

    #[test]
    fn rejects_quantified_layer() {
        let m = fork();
        let f = parse_minc("dep(; p)").unwrap();
        assert!(eval_lax(&m, Team::EMPTY, &f).is_err());
    }

    #[test]
    fn witness_split_is_first_in_order() {
        let m = fork();
        let f = parse_minc("p | q").unwrap();
        let c = CompiledFormula::new(&f).unwrap();
        let succ = m.relation_masks_or_empty("R");
        let val = c.valuation_masks(&m);
        let mut ev = TeamEvaluator::new(&c, Semantics::Lax, &succ, &val);
        let got = ev.witness_split(0, Team::from_indices([1, 2]));
        assert_eq!(got, Some((Team::singleton(1), Team::singleton(2))));
    }

    #[test]
    fn flat_shortcut_agrees() {
        let m = fork();
        let succ = m.relation_masks_or_empty("R");
        for src in [
            "dia p & box (p | q)",
            "(p | q) & dia (q <= p)",
            "box !p | dia (p & q)",
            "dia (p | q) | (q <= p)",
        ] {
            let f = parse_minc(src).unwrap();
            let c = CompiledFormula::new(&f).unwrap();
            let val = c.valuation_masks(&m);
            for sem in [Semantics::Lax, Semantics::Strict] {
                let mut plain = TeamEvaluator::new(&c, sem, &succ, &val);
                let mut fast = TeamEvaluator::new(&c, sem, &succ, &val).flat_shortcut();
                for t in m.all_worlds().subsets() {
                    assert_eq!(plain.eval(t), fast.eval(t), "{src} on {t:?}");
                }
            }
        }
    }
}
