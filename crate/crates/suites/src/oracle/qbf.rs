//! Dependency quantified formulas decided by trying every tuple of Skolem
//! functions.

use std::collections::BTreeMap;

use minc::qbf::{DqbfInstance, DqbfQuant};
use minc::Formula;

fn classical(f: &Formula, a: &BTreeMap<&str, bool>) -> bool {
    match f {
        Formula::Prop(p) => a[p.as_str()],
        Formula::NegProp(p) => !a[p.as_str()],
        Formula::And(x, y) => classical(x, a) && classical(y, a),
        Formula::Or(x, y) => classical(x, a) || classical(y, a),
        _ => panic!("matrix must be propositional"),
    }
}

pub fn skolem(d: &DqbfInstance) -> bool {
    let universals: Vec<&str> = d
        .prefix
        .iter()
        .filter_map(|q| match q {
            DqbfQuant::Forall(v) => Some(v.as_str()),
            _ => None,
        })
        .collect();
    let existentials: Vec<(&str, &[String])> = d
        .prefix
        .iter()
        .filter_map(|q| match q {
            DqbfQuant::Exists { var, deps } => Some((var.as_str(), deps.as_slice())),
            _ => None,
        })
        .collect();
    // Function e is a truth table over its dependencies, stored at `offsets[e]`.
    let mut offsets = Vec::new();
    let mut width = 0;
    for (_, deps) in &existentials {
        offsets.push(width);
        width += 1 << deps.len();
    }
    assert!(width <= 20, "too many Skolem table bits");
    (0u64..1 << width).any(|table| {
        (0u64..1 << universals.len()).all(|u| {
            let mut a: BTreeMap<&str, bool> = universals
                .iter()
                .enumerate()
                .map(|(i, v)| (*v, u >> i & 1 == 1))
                .collect();
            for ((var, deps), off) in existentials.iter().zip(&offsets) {
                let row = deps
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, p)| acc | (a[p.as_str()] as usize) << i);
                a.insert(var, table >> (off + row) & 1 == 1);
            }
            classical(&d.matrix, &a)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use minc::parse_minc;

    #[test]
    fn copy_needs_dependency() {
        let m = parse_minc("(p & q) | (!p & !q)").unwrap();
        let free = DqbfInstance::alternating(&[("p", "q", &["p"])], m.clone()).unwrap();
        let blind = DqbfInstance::alternating(&[("p", "q", &[])], m).unwrap();
        assert!(skolem(&free));
        assert!(!skolem(&blind));
    }
}
