//! Quantifier prefixes as modality strings over an assignment tree.
//!
//! `iqbf_to_minc` produces `φ_struc & △1 .. △n matrix` with `△ = box` for a
//! universal and `dia` for an existential. `φ_struc` uses depth markers
//! `d0 .. dn`: the root is `d0`, and every depth-`i` world has a `d(i+1)`
//! successor with `r(i+1)` and one without, all successors are `d(i+1)`, and
//! the values of `r1 .. ri` are inherited by every successor.

use super::ReduceError;
use crate::eval::{CompiledFormula, Semantics, TeamEvaluator};
use crate::formula::{fresh_prefix, Formula};
use crate::model::{KripkeModel, Team, MAIN_RELATION, MAX_WORLDS};
use crate::qbf::{IqbfInstance, Quantifier};

/// Deepest assignment tree that fits a model (`2^(n+1) - 1` worlds).
pub const MAX_TREE_DEPTH: usize = 5;

#[derive(Clone, Debug)]
pub struct LadnerOutput {
    pub formula: Formula,
    pub structure: Formula,
    /// The prenex prefix the modality string follows.
    pub prefix: Vec<(Quantifier, String)>,
    pub depth_props: Vec<String>,
}

/// Moves universal quantifiers out of the matrix conjunction into the
/// prefix. Sound because the moved variables are fresh and every other
/// conjunct is blind to world duplication.
pub fn prenex(i: &IqbfInstance) -> Result<IqbfInstance, ReduceError> {
    fn pull(f: &Formula, out: &mut Vec<(Quantifier, String)>) -> Result<Formula, ReduceError> {
        match f {
            Formula::And(l, r) => Ok(Formula::and(pull(l, out)?, pull(r, out)?)),
            Formula::Forall(v, g) => {
                out.push((Quantifier::Forall, v.clone()));
                pull(g, out)
            }
            g if g.children().iter().any(|c| c.has_quantified_layer()) => Err(
                ReduceError::MalformedPrefix("quantifier below a disjunction".into()),
            ),
            g => Ok(g.clone()),
        }
    }
    let mut prefix = i.prefix.clone();
    let matrix = pull(&i.matrix, &mut prefix)?;
    IqbfInstance::new(prefix, matrix)
        .map_err(|e| ReduceError::MalformedPrefix(format!("after prenexing: {e}")))
}

/// `d0 & AND_i box^i (!di | (dia(d(i+1) & ri+1) & dia(d(i+1) & !ri+1) &
/// box d(i+1) & persistence))`.
pub fn structure_formula(vars: &[String], depth: &[String]) -> Formula {
    let lit = |p: &String, pos: bool| Formula::literal(p.clone(), pos);
    let levels = (0..vars.len()).map(|i| {
        let next = || lit(&depth[i + 1], true);
        let mut parts = vec![
            Formula::diamond(Formula::and(next(), lit(&vars[i], true))),
            Formula::diamond(Formula::and(next(), lit(&vars[i], false))),
            Formula::boxed(next()),
        ];
        for r in &vars[..i] {
            parts.push(Formula::or(lit(r, false), Formula::boxed(lit(r, true))));
            parts.push(Formula::or(lit(r, true), Formula::boxed(lit(r, false))));
        }
        let body = Formula::or(
            lit(&depth[i], false),
            Formula::conj(parts).expect("three conjuncts at least"),
        );
        Formula::box_power(i, body)
    });
    Formula::conj(std::iter::once(lit(&depth[0], true)).chain(levels)).expect("d0")
}

pub fn iqbf_to_minc(i: &IqbfInstance) -> Result<LadnerOutput, ReduceError> {
    let flat = prenex(i)?;
    let vars: Vec<String> = flat.prefix.iter().map(|(_, v)| v.clone()).collect();
    let d = fresh_prefix("d", vars.iter());
    let depth_props: Vec<String> = (0..=vars.len()).map(|k| format!("{d}{k}")).collect();
    let structure = structure_formula(&vars, &depth_props);
    let body = flat
        .prefix
        .iter()
        .rev()
        .fold(flat.matrix.clone(), |acc, (q, _)| match q {
            Quantifier::Forall => Formula::boxed(acc),
            Quantifier::Exists => Formula::diamond(acc),
        });
    Ok(LadnerOutput {
        formula: Formula::and(structure.clone(), body),
        structure,
        prefix: flat.prefix,
        depth_props,
    })
}

/// The full binary assignment tree: depth-`k` worlds carry `dk`, the
/// `k`-th step goes to a child with `r_k` and one without, and values are
/// inherited. World 0 is the root.
pub fn canonical_tree(vars: &[String], depth: &[String]) -> Result<KripkeModel, ReduceError> {
    let n = vars.len();
    if n > MAX_TREE_DEPTH {
        return Err(ReduceError::PrefixTooLong {
            len: n,
            max: MAX_TREE_DEPTH,
        });
    }
    // Heap layout: children of w are 2w+1 (var true) and 2w+2 (var false).
    let count = (1usize << (n + 1)) - 1;
    debug_assert!(count <= MAX_WORLDS);
    let name = |w: usize| {
        let mut path = String::new();
        let mut x = w;
        while x > 0 {
            path.insert(0, if x % 2 == 1 { '1' } else { '0' });
            x = (x - 1) / 2;
        }
        format!("t{path}")
    };
    let mut m = KripkeModel::new((0..count).map(name))?;
    m.declare_relation(MAIN_RELATION);
    let mut level = vec![Team::EMPTY; n + 1];
    let mut truth = vec![Team::EMPTY; n];
    for w in 0..count {
        let depth_of = usize::BITS as usize - 1 - (w + 1).leading_zeros() as usize;
        level[depth_of].insert(w);
        if depth_of < n {
            m.add_edge(MAIN_RELATION, w, 2 * w + 1)?;
            m.add_edge(MAIN_RELATION, w, 2 * w + 2)?;
        }
        // Walk up to read the path.
        let mut x = w;
        let mut k = depth_of;
        while x > 0 {
            if x % 2 == 1 {
                truth[k - 1].insert(w);
            }
            x = (x - 1) / 2;
            k -= 1;
        }
    }
    for (k, t) in level.into_iter().enumerate() {
        m.set_prop(depth[k].clone(), t)?;
    }
    for (v, t) in vars.iter().zip(truth) {
        m.set_prop(v.clone(), t)?;
    }
    Ok(m)
}

/// Strict truth of the reduction output at the root of the canonical tree.
/// Inclusion-free parts are decided pointwise, which keeps disjunctions over
/// the wide lower levels of the tree cheap.
pub fn canonical_tree_check(out: &LadnerOutput) -> Result<bool, ReduceError> {
    let vars: Vec<String> = out.prefix.iter().map(|(_, v)| v.clone()).collect();
    let tree = canonical_tree(&vars, &out.depth_props)?;
    let c = CompiledFormula::new(&out.formula)?;
    let succ = tree.relation_masks_or_empty(MAIN_RELATION);
    let val = c.valuation_masks(&tree);
    let mut ev = TeamEvaluator::new(&c, Semantics::Strict, &succ, &val).flat_shortcut();
    Ok(ev.eval(Team::singleton(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_iqbf, eval_strict};
    use crate::formula::parse_minc;

    fn iqbf(src: &str) -> IqbfInstance {
        IqbfInstance::from_formula(&parse_minc(src).unwrap()).unwrap()
    }

    #[test]
    fn single_existential() {
        let out = iqbf_to_minc(&iqbf("exists r1 r1")).unwrap();
        assert_eq!(
            out.formula.to_string(),
            "((d0 & (!d0 | ((dia (d1 & r1) & dia (d1 & !r1)) & box d1))) & dia r1)"
        );
        assert!(canonical_tree_check(&out).unwrap());
    }

    #[test]
    fn modality_string_follows_prefix() {
        let out = iqbf_to_minc(&iqbf("forall a exists b forall c ((b & a) | (!b & !a))")).unwrap();
        let Formula::And(_, body) = &out.formula else {
            panic!()
        };
        assert!(body.to_string().starts_with("box dia box"));
        assert_eq!(out.depth_props.len(), 4);
    }

    #[test]
    fn tree_satisfies_structure() {
        let vars: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let depth: Vec<String> = (0..4).map(|k| format!("d{k}")).collect();
        let tree = canonical_tree(&vars, &depth).unwrap();
        assert_eq!(tree.world_count(), 15);
        assert!(eval_strict(&tree, Team::singleton(0), &structure_formula(&vars, &depth)).unwrap());
        // Breaking inheritance of `a` breaks the structure formula.
        let mut bad = tree.clone();
        let a = bad.valuation("a");
        bad.set_prop("a", a.difference(Team::singleton(3))).unwrap();
        assert!(!eval_strict(&bad, Team::singleton(0), &structure_formula(&vars, &depth)).unwrap());
    }

    #[test]
    fn inner_universals_are_prenexed() {
        let i = iqbf("forall p exists q (forall s (s q <= p q) & (q | !q))");
        let out = iqbf_to_minc(&i).unwrap();
        assert_eq!(out.prefix.len(), 3);
        assert_eq!(canonical_tree_check(&out).unwrap(), eval_iqbf(&i).unwrap());
        assert!(iqbf_to_minc(&iqbf("forall p ((forall s (s <= p)) | p)")).is_err());
    }

    #[test]
    fn audit_agrees_on_small_instances() {
        for (src, expect) in [
            ("forall p exists q ((q & p) | (!q & !p))", true),
            ("exists q forall p ((q & p) | (!q & !p))", false),
            ("forall p exists q (p <= q)", true),
            ("forall p forall q (p <= q)", true),
            ("exists p (p & !p)", false),
        ] {
            let i = iqbf(src);
            assert_eq!(eval_iqbf(&i).unwrap(), expect, "{src}");
            let out = iqbf_to_minc(&i).unwrap();
            assert_eq!(canonical_tree_check(&out).unwrap(), expect, "{src}");
        }
    }

    #[test]
    fn deep_prefixes_are_refused() {
        let i = iqbf("forall a forall b forall c forall d forall e forall f (a | !a)");
        let out = iqbf_to_minc(&i).unwrap();
        assert!(matches!(
            canonical_tree_check(&out),
            Err(ReduceError::PrefixTooLong { len: 6, .. })
        ));
    }
}
