//! The propositional inclusion formula `φ_C` of a circuit, satisfiable under
//! lax semantics iff the circuit is a positive succinct PER instance.

use std::collections::BTreeSet;

use super::circuit::{expand_succinct, sharp, Circuit, Gate};
use super::ReduceError;
use crate::formula::Formula;
use crate::model::{KripkeModel, Team, MAIN_RELATION, MAX_WORLDS};

/// Proposition of gate `i` (0-based): `p1 .. pm`.
pub fn gate_prop(i: usize) -> String {
    format!("p{}", i + 1)
}

fn lit(i: usize, positive: bool) -> Formula {
    Formula::literal(gate_prop(i), positive)
}

/// `p_i <-> gate`, written in negation normal form.
pub fn gate_formula(i: usize, g: Gate) -> Option<Formula> {
    let (pos, neg) = (lit(i, true), lit(i, false));
    Some(match g {
        Gate::Input => return None,
        Gate::Not(j) => Formula::or(
            Formula::and(pos, lit(j, false)),
            Formula::and(neg, lit(j, true)),
        ),
        Gate::And(j, k) => Formula::or(
            Formula::and(pos, Formula::and(lit(j, true), lit(k, true))),
            Formula::and(neg, Formula::or(lit(j, false), lit(k, false))),
        ),
        Gate::Or(j, k) => Formula::or(
            Formula::and(pos, Formula::or(lit(j, true), lit(k, true))),
            Formula::and(neg, Formula::and(lit(j, false), lit(k, false))),
        ),
    })
}

/// `ψ_C = θ_(3l+1) & .. & θ_m & p_m`.
pub fn build_psi_c(c: &Circuit) -> Formula {
    let m = c.len();
    let thetas = c
        .gates()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| gate_formula(i, *g));
    Formula::conj(thetas.chain([lit(m - 1, true)])).expect("p_m is always present")
}

/// `ψ_C & q ⊆ p & r ⊆ p & p_m..p_m ⊆ p_1..p_l`, where `q` and `r` are the
/// second and third input blocks.
pub fn build_phi_c(c: &Circuit) -> Formula {
    let l = c.l();
    let block = |from: usize| (from..from + l).map(gate_prop).collect::<Vec<_>>();
    let out = vec![gate_prop(c.len() - 1); l];
    Formula::conj([
        build_psi_c(c),
        Formula::inc(block(l), block(0)),
        Formula::inc(block(2 * l), block(0)),
        Formula::inc(out, block(0)),
    ])
    .expect("four conjuncts")
}

/// The model of the converse direction: worlds are the accepting gate
/// valuations whose three input blocks encode members of `p`, `R = ∅`,
/// and the team is every world.
pub fn build_phi_c_witness(
    c: &Circuit,
    p: &BTreeSet<usize>,
) -> Result<(KripkeModel, Team), ReduceError> {
    let l = c.l();
    let inst = expand_succinct(c)?;
    if !p.contains(&inst.n()) || !inst.is_persistent(p) {
        return Err(ReduceError::Precondition(format!(
            "the set must be persistent and contain 2^l = {}",
            inst.n()
        )));
    }
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for x in 0usize..1 << (3 * l) {
        let bits: Vec<bool> = (0..3 * l).map(|t| x >> (3 * l - 1 - t) & 1 == 1).collect();
        let in_p = (0..3).all(|b| p.contains(&sharp(&bits[b * l..(b + 1) * l])));
        if !in_p {
            continue;
        }
        let values = c.gate_values(&bits)?;
        if *values.last().expect("nonempty") {
            rows.push(values);
        }
    }
    if rows.len() > MAX_WORLDS {
        return Err(ReduceError::Precondition(format!(
            "witness needs {} worlds, more than {MAX_WORLDS}",
            rows.len()
        )));
    }
    let names = rows.iter().map(|r| {
        r.iter()
            .map(|b| if *b { '1' } else { '0' })
            .collect::<String>()
    });
    let mut m = KripkeModel::new(names.map(|s| format!("a{s}")))?;
    m.declare_relation(MAIN_RELATION);
    for t in 0..c.len() {
        let worlds = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r[t])
            .map(|(w, _)| w);
        m.set_prop(gate_prop(t), Team::from_indices(worlds))?;
    }
    let team = m.all_worlds();
    Ok((m, team))
}
