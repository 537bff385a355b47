//! Enumerative search over Kripke models for Minc formulas.

use std::collections::HashSet;

use super::{Budget, SatError, SearchOptions};
use crate::eval::{CompiledFormula, Semantics, TeamEvaluator};
use crate::formula::Formula;
use crate::model::{KripkeModel, Team, MAIN_RELATION};

/// Models per parallel round and worker.
const CHUNK_PER_JOB: u64 = 256;

/// Visits `0..total` in index order, `jobs` workers at a time. `visit`
/// returns the evaluator calls spent and an optional result; `accept` sees
/// results in index order and stops the scan by returning true. The budget
/// is charged exactly as a sequential scan would charge it.
fn scan<T: Send>(
    total: u64,
    jobs: usize,
    budget: &mut Budget,
    visit: impl Fn(u64) -> (u64, Option<T>) + Sync,
    mut accept: impl FnMut(u64, T) -> bool,
) -> Result<bool, SatError> {
    if jobs <= 1 {
        for i in 0..total {
            let (calls, hit) = visit(i);
            budget.charge(calls)?;
            if let Some(t) = hit {
                if accept(i, t) {
                    return Ok(true);
                }
            }
        }
        return Ok(false);
    }
    let chunk = CHUNK_PER_JOB * jobs as u64;
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        let mut results: Vec<(u64, u64, Option<T>)> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs as u64)
                .map(|j| {
                    let visit = &visit;
                    s.spawn(move || {
                        (start + j..end)
                            .step_by(jobs)
                            .map(|i| {
                                let (c, t) = visit(i);
                                (i, c, t)
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        results.sort_by_key(|r| r.0);
        for (i, calls, hit) in results {
            budget.charge(calls)?;
            if let Some(t) = hit {
                if accept(i, t) {
                    return Ok(true);
                }
            }
        }
        start = end;
    }
    Ok(false)
}

/// Bit layout of the models of one size.
#[derive(Clone, Copy)]
struct Layout {
    n: usize,
    props: usize,
    rel_bits: usize,
}

impl Layout {
    fn new(n: usize, props: usize, opts: &SearchOptions) -> Result<Self, SatError> {
        let rel_bits = if opts.empty_relation { 0 } else { n * n };
        let l = Layout { n, props, rel_bits };
        if n > 8 || rel_bits + n * props > 62 {
            return Err(SatError::TooLarge(format!(
                "{n} worlds with {props} propositions"
            )));
        }
        Ok(l)
    }

    fn val_bits(self) -> usize {
        self.n * self.props
    }

    fn total(self) -> u64 {
        1 << (self.rel_bits + self.val_bits())
    }

    fn full(self) -> u64 {
        (1u64 << self.n) - 1
    }

    fn split(self, idx: u64) -> (u64, u64) {
        (
            idx >> self.val_bits(),
            idx & ((1u64 << self.val_bits()) - 1),
        )
    }

    fn succ(self, rel: u64) -> Vec<u64> {
        (0..self.n)
            .map(|u| rel >> (u * self.n) & self.full())
            .collect()
    }

    fn val(self, val: u64) -> Vec<u64> {
        (0..self.props)
            .map(|i| val >> (i * self.n) & self.full())
            .collect()
    }
}

fn distinct_worlds(n: usize, val: &[u64]) -> bool {
    let mut seen = HashSet::new();
    (0..n).all(|w| seen.insert(val.iter().fold(0u64, |acc, m| acc << 1 | (m >> w & 1))))
}

/// Model number `(rel, val)` over worlds `w0 .. w(n-1)`.
pub fn canonical_model(n: usize, props: &[String], rel: u64, val: u64) -> KripkeModel {
    let layout = Layout {
        n,
        props: props.len(),
        rel_bits: n * n,
    };
    KripkeModel::from_masks(
        n,
        [(MAIN_RELATION.to_string(), layout.succ(rel))],
        props.iter().cloned().zip(layout.val(val)),
    )
}

/// The first model (in canonical order) of at most `opts.max_size` worlds
/// with a nonempty team satisfying `f`.
pub fn bounded_sat_minc(
    f: &Formula,
    semantics: Semantics,
    opts: &SearchOptions,
) -> Result<Option<(KripkeModel, Team)>, SatError> {
    let c = CompiledFormula::new(f)?;
    let props = c.props().to_vec();
    let mut budget = Budget::new(opts.budget);
    for n in 1..=opts.max_size {
        let layout = Layout::new(n, props.len(), opts)?;
        let visit = |idx: u64| {
            let (rel, val) = layout.split(idx);
            let succ = layout.succ(rel);
            let val = layout.val(val);
            if opts.distinct_valuations && !distinct_worlds(n, &val) {
                return (0, None);
            }
            let mut ev = TeamEvaluator::new(&c, semantics, &succ, &val);
            let mut calls = 0;
            for t in 1..=layout.full() {
                calls += 1;
                if ev.eval(Team(t)) {
                    return (calls, Some(Team(t)));
                }
            }
            (calls, None)
        };
        let mut found = None;
        scan(layout.total(), opts.jobs, &mut budget, visit, |idx, t| {
            found = Some((idx, t));
            true
        })?;
        if let Some((idx, team)) = found {
            let (rel, val) = layout.split(idx);
            return Ok(Some((canonical_model(n, &props, rel, val), team)));
        }
    }
    Ok(None)
}

/// Outcome of comparing the two semantics over all small models.
#[derive(Clone, Debug)]
pub struct DiffReport {
    pub lax: Option<(KripkeModel, Team)>,
    pub strict: Option<(KripkeModel, Team)>,
    /// First model and team on which the semantics disagree, with the lax
    /// and strict values.
    pub divergence: Option<(KripkeModel, Team, bool, bool)>,
}

pub fn differential_check(f: &Formula, opts: &SearchOptions) -> Result<DiffReport, SatError> {
    let c = CompiledFormula::new(f)?;
    let props = c.props().to_vec();
    let mut budget = Budget::new(opts.budget);
    let mut report = DiffReport {
        lax: None,
        strict: None,
        divergence: None,
    };
    type Firsts = (Option<Team>, Option<Team>, Option<(Team, bool, bool)>);
    for n in 1..=opts.max_size {
        let layout = Layout::new(n, props.len(), opts)?;
        let visit = |idx: u64| -> (u64, Option<Firsts>) {
            let (rel, val) = layout.split(idx);
            let succ = layout.succ(rel);
            let val = layout.val(val);
            if opts.distinct_valuations && !distinct_worlds(n, &val) {
                return (0, None);
            }
            let mut lax = TeamEvaluator::new(&c, Semantics::Lax, &succ, &val);
            let mut strict = TeamEvaluator::new(&c, Semantics::Strict, &succ, &val);
            let mut firsts: Firsts = (None, None, None);
            let mut calls = 0;
            for t in (1..=layout.full()).map(Team) {
                calls += 2;
                let (a, b) = (lax.eval(t), strict.eval(t));
                if a && firsts.0.is_none() {
                    firsts.0 = Some(t);
                }
                if b && firsts.1.is_none() {
                    firsts.1 = Some(t);
                }
                if a != b && firsts.2.is_none() {
                    firsts.2 = Some((t, a, b));
                }
            }
            (calls, Some(firsts))
        };
        let model = |idx: u64| {
            let (rel, val) = layout.split(idx);
            canonical_model(n, &props, rel, val)
        };
        let done = scan(
            layout.total(),
            opts.jobs,
            &mut budget,
            visit,
            |idx, (l, s, d)| {
                if let (None, Some(t)) = (&report.lax, l) {
                    report.lax = Some((model(idx), t));
                }
                if let (None, Some(t)) = (&report.strict, s) {
                    report.strict = Some((model(idx), t));
                }
                if let (None, Some((t, a, b))) = (&report.divergence, d) {
                    report.divergence = Some((model(idx), t, a, b));
                }
                report.lax.is_some() && report.strict.is_some() && report.divergence.is_some()
            },
        )?;
        if done {
            break;
        }
    }
    Ok(report)
}

fn pointwise(f: &Formula, props: &[String], v: u64) -> Option<bool> {
    let bit = |p: &String| props.binary_search(p).map(|i| v >> i & 1 == 1).ok();
    Some(match f {
        Formula::Prop(p) => bit(p)?,
        Formula::NegProp(p) => !bit(p)?,
        Formula::And(l, r) => pointwise(l, props, v)? && pointwise(r, props, v)?,
        Formula::Or(l, r) => pointwise(l, props, v)? || pointwise(r, props, v)?,
        _ => return None,
    })
}

fn top_conjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(l, r) => {
            top_conjuncts(l, out);
            top_conjuncts(r, out);
        }
        _ => out.push(f),
    }
}

/// Exhaustive search over models with `R = ∅` and pairwise distinct
/// valuations, for a modality-free formula.
///
/// Such a model is a set of valuations, and the formula only sees the
/// valuations in the team, so the team can be taken to be every world.
/// Flat top-level conjuncts hold at each world of a satisfying team, which
/// prunes the candidate valuations before subsets are enumerated.
pub fn valuation_team_search(
    f: &Formula,
    semantics: Semantics,
    max_candidates: usize,
    budget: Option<u64>,
) -> Result<Option<(KripkeModel, Team)>, SatError> {
    if !f.is_modality_free() {
        return Err(SatError::TooLarge(
            "valuation search needs a modality-free formula".into(),
        ));
    }
    let c = CompiledFormula::new(f)?;
    let props = c.props().to_vec();
    if props.len() > 20 {
        return Err(SatError::TooLarge(format!("{} propositions", props.len())));
    }
    let mut conjuncts = Vec::new();
    top_conjuncts(f, &mut conjuncts);
    let flat: Vec<&Formula> = conjuncts
        .into_iter()
        .filter(|g| g.is_inclusion_free())
        .collect();
    let candidates: Vec<u64> = (0u64..1 << props.len())
        .filter(|v| flat.iter().all(|g| pointwise(g, &props, *v) == Some(true)))
        .collect();
    if candidates.len() > max_candidates.min(24) {
        return Err(SatError::TooLarge(format!(
            "{} candidate valuations",
            candidates.len()
        )));
    }
    let mut budget = Budget::new(budget);
    for subset in 1u64..1 << candidates.len() {
        let worlds: Vec<u64> = Team(subset).iter().map(|i| candidates[i]).collect();
        let n = worlds.len();
        let val: Vec<u64> = (0..props.len())
            .map(|i| {
                worlds
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (w, v)| acc | (v >> i & 1) << w)
            })
            .collect();
        let succ = vec![0u64; n];
        budget.charge(1)?;
        let all = Team::full(n);
        if TeamEvaluator::new(&c, semantics, &succ, &val).eval(all) {
            let m = KripkeModel::from_masks(
                n,
                [(MAIN_RELATION.to_string(), succ)],
                props.iter().cloned().zip(val),
            );
            return Ok(Some((m, all)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_lax, eval_strict};
    use crate::formula::parse_minc;

    #[test]
    fn single_proposition_needs_one_world() {
        for sem in [Semantics::Lax, Semantics::Strict] {
            let (m, t) = bounded_sat_minc(&parse_minc("p").unwrap(), sem, &SearchOptions::new(2))
                .unwrap()
                .unwrap();
            assert_eq!(m.world_count(), 1);
            assert_eq!(t, Team::singleton(0));
        }
    }

    #[test]
    fn contradiction_has_no_model() {
        let f = parse_minc("p & !p").unwrap();
        assert!(bounded_sat_minc(&f, Semantics::Lax, &SearchOptions::new(2))
            .unwrap()
            .is_none());
        let tight = SearchOptions::new(2).budget(Some(5));
        assert_eq!(
            bounded_sat_minc(&f, Semantics::Lax, &tight),
            Err(SatError::BudgetExceeded { budget: 5 })
        );
    }

    #[test]
    fn witnesses_reverify_and_jobs_agree() {
        let f = parse_minc("dia (q <= p) & box ((p & !q) | (!p & q))").unwrap();
        let one = bounded_sat_minc(&f, Semantics::Lax, &SearchOptions::new(3)).unwrap();
        let four = bounded_sat_minc(&f, Semantics::Lax, &SearchOptions::new(3).jobs(4)).unwrap();
        let (m, t) = one.clone().unwrap();
        assert!(eval_lax(&m, t, &f).unwrap());
        assert_eq!(one, four);
    }

    #[test]
    fn divergence_of_the_diamond_inclusion() {
        let f = parse_minc("dia (q <= p)").unwrap();
        let r = differential_check(&f, &SearchOptions::new(3)).unwrap();
        let (m, t, lax, strict) = r.divergence.unwrap();
        // A reflexive world seeing one more world already separates them.
        assert_eq!(m.world_count(), 2);
        assert_eq!(m.relation("R").unwrap().pairs().count(), 2);
        assert!(lax && !strict);
        assert!(eval_lax(&m, t, &f).unwrap() && !eval_strict(&m, t, &f).unwrap());
        let flat = differential_check(
            &parse_minc("dia p | box !q").unwrap(),
            &SearchOptions::new(2),
        )
        .unwrap();
        assert!(flat.divergence.is_none());
        assert!(flat.lax.is_some() && flat.strict.is_some());
    }

    #[test]
    fn valuation_search_respects_inclusions() {
        let f = parse_minc("(p | !p) & p <= q & q <= p & p").unwrap();
        let (m, t) = valuation_team_search(&f, Semantics::Lax, 24, None)
            .unwrap()
            .unwrap();
        assert!(eval_lax(&m, t, &f).unwrap());
        let g = parse_minc("p & !q & p <= q").unwrap();
        assert!(valuation_team_search(&g, Semantics::Lax, 24, None)
            .unwrap()
            .is_none());
    }
}
