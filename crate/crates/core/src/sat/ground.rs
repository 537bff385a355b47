//! Grounded search for two-variable sentences and multimodal formulas.
//!
//! A sentence over a domain of size `n` becomes a propositional formula
//! (Tseitin encoded) over one variable per predicate instance. The least
//! model in canonical order is then fixed bit by bit, most significant
//! first.

use std::collections::HashMap;

use varisat::{ExtendFormula, Lit, Solver};

use super::{Budget, SatError, SearchOptions};
use crate::eval::{eval_fo2c, eval_l};
use crate::fo::{standard_translation, FoFormula, Var};
use crate::modal::LFormula;
use crate::model::{FoStructure, KripkeModel, Relation, Team};

type Env = [Option<usize>; 2];

struct Grounder<'s> {
    solver: Solver<'s>,
    n: usize,
    unary: HashMap<String, Vec<Lit>>,
    binary: HashMap<String, Vec<Lit>>,
    cache: HashMap<(usize, Env), Lit>,
    truth: Lit,
}

impl Grounder<'_> {
    fn new(n: usize, unary: &[String], binary: &[String]) -> Self {
        let mut solver = Solver::new();
        // Variables are created in canonical significance order, least
        // significant first, which keeps the extraction loop simple.
        let mut binary_lits = HashMap::new();
        for r in binary {
            binary_lits.insert(r.clone(), (0..n * n).map(|_| solver.new_lit()).collect());
        }
        let mut unary_lits = HashMap::new();
        for p in unary {
            unary_lits.insert(p.clone(), (0..n).map(|_| solver.new_lit()).collect());
        }
        let truth = solver.new_lit();
        solver.add_clause(&[truth]);
        Grounder {
            solver,
            n,
            unary: unary_lits,
            binary: binary_lits,
            cache: HashMap::new(),
            truth,
        }
    }

    fn and_all(&mut self, xs: Vec<Lit>) -> Lit {
        match xs.len() {
            0 => self.truth,
            1 => xs[0],
            _ => {
                let g = self.solver.new_lit();
                for x in &xs {
                    self.solver.add_clause(&[!g, *x]);
                }
                let mut big: Vec<Lit> = xs.iter().map(|x| !*x).collect();
                big.push(g);
                self.solver.add_clause(&big);
                g
            }
        }
    }

    fn or_all(&mut self, xs: Vec<Lit>) -> Lit {
        let neg = self.and_all(xs.into_iter().map(|x| !x).collect());
        !neg
    }

    fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let g = self.solver.new_lit();
        self.solver.add_clause(&[!g, !a, b]);
        self.solver.add_clause(&[!g, a, !b]);
        self.solver.add_clause(&[g, a, b]);
        self.solver.add_clause(&[g, !a, !b]);
        g
    }

    fn lit(&mut self, f: &FoFormula, env: Env) -> Lit {
        let key = (f as *const FoFormula as usize, env);
        if let Some(&l) = self.cache.get(&key) {
            return l;
        }
        let at = |v: Var| env[v.index()].expect("grounded formulas are closed");
        let n = self.n;
        let l = match f {
            FoFormula::Unary(p, v) => self.unary[p][at(*v)],
            FoFormula::Binary(r, a, b) => self.binary[r][at(*a) * n + at(*b)],
            FoFormula::Not(g) => !self.lit(g, env),
            FoFormula::And(a, b) => {
                let xs = vec![self.lit(a, env), self.lit(b, env)];
                self.and_all(xs)
            }
            FoFormula::Or(a, b) => {
                let xs = vec![self.lit(a, env), self.lit(b, env)];
                self.or_all(xs)
            }
            FoFormula::Implies(a, b) => {
                let xs = vec![!self.lit(a, env), self.lit(b, env)];
                self.or_all(xs)
            }
            FoFormula::Iff(a, b) => {
                let (x, y) = (self.lit(a, env), self.lit(b, env));
                self.iff(x, y)
            }
            FoFormula::Exists(v, g) | FoFormula::Forall(v, g) | FoFormula::ExistsOne(v, g) => {
                let xs: Vec<Lit> = (0..n)
                    .map(|d| {
                        let mut e = env;
                        e[v.index()] = Some(d);
                        self.lit(g, e)
                    })
                    .collect();
                match f {
                    FoFormula::Exists(..) => self.or_all(xs),
                    FoFormula::Forall(..) => self.and_all(xs),
                    _ => {
                        let options: Vec<Lit> = (0..n)
                            .map(|i| {
                                let only: Vec<Lit> = (0..n)
                                    .map(|j| if i == j { xs[j] } else { !xs[j] })
                                    .collect();
                                self.and_all(only)
                            })
                            .collect();
                        self.or_all(options)
                    }
                }
            }
        };
        self.cache.insert(key, l);
        l
    }

    fn distinct_rows(&mut self, unary: &[String]) {
        for u in 0..self.n {
            for v in u + 1..self.n {
                let differs: Vec<Lit> = unary
                    .iter()
                    .map(|p| {
                        let (a, b) = (self.unary[p][u], self.unary[p][v]);
                        !self.iff(a, b)
                    })
                    .collect();
                self.solver.add_clause(&differs);
            }
        }
    }

    /// Searchable bits, most significant first.
    fn order(&self, unary: &[String], binary: &[String]) -> Vec<Lit> {
        let mut bits = Vec::new();
        for r in binary.iter().rev() {
            bits.extend(self.binary[r].iter().rev());
        }
        for p in unary.iter().rev() {
            bits.extend(self.unary[p].iter().rev());
        }
        bits
    }

    fn solve(&mut self, assume: &[Lit], budget: &mut Budget) -> Result<bool, SatError> {
        budget.charge(1)?;
        self.solver.assume(assume);
        self.solver
            .solve()
            .map_err(|e| SatError::Solver(e.to_string()))
    }

    /// Fixes the searchable bits to their least satisfying values.
    fn least_model(
        &mut self,
        bits: &[Lit],
        budget: &mut Budget,
    ) -> Result<Option<Vec<bool>>, SatError> {
        if !self.solve(&[], budget)? {
            return Ok(None);
        }
        let mut model = self.model();
        let mut fixed: Vec<Lit> = Vec::with_capacity(bits.len());
        for &b in bits {
            if !model[b.index()] {
                fixed.push(!b);
                continue;
            }
            fixed.push(!b);
            if self.solve(&fixed, budget)? {
                model = self.model();
            } else {
                fixed.pop();
                fixed.push(b);
            }
        }
        Ok(Some(bits.iter().map(|b| model[b.index()]).collect()))
    }

    /// Truth value per variable index.
    fn model(&self) -> Vec<bool> {
        let lits = self
            .solver
            .model()
            .expect("called after a satisfiable solve");
        let mut v = vec![false; lits.len() + 1];
        for l in lits {
            if l.index() >= v.len() {
                v.resize(l.index() + 1, false);
            }
            v[l.index()] = l.is_positive();
        }
        v
    }

    fn structure(&self, unary: &[String], binary: &[String], bits: &[bool]) -> FoStructure {
        let n = self.n;
        let order = self.order(unary, binary);
        let value: HashMap<usize, bool> = order
            .iter()
            .zip(bits)
            .map(|(l, b)| (l.index(), *b))
            .collect();
        let is = |l: &Lit| value[&l.index()];
        let mut a = FoStructure::from_masks(n, [], []);
        for p in unary {
            let t = self.unary[p]
                .iter()
                .enumerate()
                .filter(|(_, l)| is(l))
                .map(|(w, _)| w);
            a.unary.insert(p.clone(), Team::from_indices(t));
        }
        for r in binary {
            let mut rel = Relation::empty(n);
            for (i, l) in self.binary[r].iter().enumerate() {
                if is(l) {
                    rel.add(i / n, i % n);
                }
            }
            a.binary.insert(r.clone(), rel);
        }
        a
    }
}

fn search(
    root: &FoFormula,
    free_x: bool,
    unary: &[String],
    binary: &[String],
    opts: &SearchOptions,
) -> Result<Option<FoStructure>, SatError> {
    let mut budget = Budget::new(opts.budget);
    for n in 1..=opts.max_size {
        if n > crate::model::MAX_WORLDS {
            return Err(SatError::TooLarge(format!("{n} elements")));
        }
        let mut g = Grounder::new(n, unary, binary);
        let top = if free_x {
            let xs: Vec<Lit> = (0..n).map(|w| g.lit(root, [Some(w), None])).collect();
            g.or_all(xs)
        } else {
            g.lit(root, [None, None])
        };
        g.solver.add_clause(&[top]);
        if opts.empty_relation {
            for r in binary {
                let ls = g.binary[r].clone();
                ls.into_iter().for_each(|l| g.solver.add_clause(&[!l]));
            }
        }
        if opts.distinct_valuations {
            g.distinct_rows(unary);
        }
        let order = g.order(unary, binary);
        if let Some(bits) = g.least_model(&order, &mut budget)? {
            return Ok(Some(g.structure(unary, binary, &bits)));
        }
    }
    Ok(None)
}

/// The least structure of at most `opts.max_size` elements satisfying the
/// sentence. Absence is inconclusive: the logic lacks the finite model
/// property.
pub fn bounded_sat_fo2c(
    f: &FoFormula,
    opts: &SearchOptions,
) -> Result<Option<FoStructure>, SatError> {
    if !f.is_sentence() {
        return Err(SatError::NotASentence);
    }
    let unary: Vec<String> = f.unary_predicates().into_iter().collect();
    let binary: Vec<String> = f.binary_predicates().into_iter().collect();
    let found = search(f, false, &unary, &binary, opts)?;
    if let Some(a) = &found {
        if !eval_fo2c(a, f)? {
            return Err(SatError::Solver("grounded model fails the sentence".into()));
        }
    }
    Ok(found)
}

/// The least multimodal model over the formula's signature, with the least
/// world at which it holds.
pub fn bounded_sat_l(
    f: &LFormula,
    opts: &SearchOptions,
) -> Result<Option<(KripkeModel, usize)>, SatError> {
    let st = standard_translation(f, Var::X);
    let unary: Vec<String> = f.props().into_iter().collect();
    let binary: Vec<String> = f.relations().into_iter().collect();
    let Some(a) = search(&st, true, &unary, &binary, opts)? else {
        return Ok(None);
    };
    let m = a.to_kripke();
    for w in 0..m.world_count() {
        if eval_l(&m, w, f)? {
            return Ok(Some((m, w)));
        }
    }
    Err(SatError::Solver(
        "grounded model satisfies the formula nowhere".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::parse_fo;
    use crate::modal::parse_l;

    #[test]
    fn existential_needs_one_element() {
        let a = bounded_sat_fo2c(&parse_fo("exists x p(x)").unwrap(), &SearchOptions::new(3))
            .unwrap()
            .unwrap();
        assert_eq!(a.size(), 1);
        assert_eq!(a.unary("p"), Team::singleton(0));
    }

    #[test]
    fn functional_constraint() {
        let f = parse_fo(
            "forall x exists1 y R(x,y) & exists x p(x) & exists x !p(x) & forall x (p(x) -> forall y (R(x,y) -> !p(y)))",
        )
        .unwrap();
        let a = bounded_sat_fo2c(&f, &SearchOptions::new(3))
            .unwrap()
            .unwrap();
        assert_eq!(a.size(), 2);
        assert!(eval_fo2c(&a, &f).unwrap());
    }

    #[test]
    fn least_model_is_canonical() {
        // Least relation first: the smallest relation integer with a
        // reflexive point is {(0,0)}.
        let f = parse_fo("exists x R(x,x)").unwrap();
        let a = bounded_sat_fo2c(&f, &SearchOptions::new(2))
            .unwrap()
            .unwrap();
        assert_eq!(a.size(), 1);
        let g = parse_fo("exists x exists y (R(x,y) & !R(y,x))").unwrap();
        let b = bounded_sat_fo2c(&g, &SearchOptions::new(2))
            .unwrap()
            .unwrap();
        // Bits: (0,0)=0, (0,1)=1, (1,0)=2, (1,1)=3; least is (0,1) alone.
        assert_eq!(
            b.binary("R").unwrap().pairs().collect::<Vec<_>>(),
            vec![(0, 1)]
        );
    }

    #[test]
    fn global_contradiction_in_l() {
        let f = parse_l("<E>p & [E]!p").unwrap();
        assert!(bounded_sat_l(&f, &SearchOptions::new(3)).unwrap().is_none());
        let g = parse_l("p & <R^-1>q & [E](q -> !p)").unwrap();
        let (m, w) = bounded_sat_l(&g, &SearchOptions::new(3)).unwrap().unwrap();
        assert_eq!(m.world_count(), 2);
        assert!(eval_l(&m, w, &g).unwrap());
    }

    #[test]
    fn empty_relation_mode() {
        let f = parse_l("<R>p").unwrap();
        let opts = SearchOptions::new(3).empty_relation(true);
        assert!(bounded_sat_l(&f, &opts).unwrap().is_none());
    }
}
