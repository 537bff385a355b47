//! Seeded, deterministic test corpora.

use std::collections::BTreeSet;

use minc::qbf::DqbfInstance;
use minc::reduce::{Atm, Circuit, Gate};
use minc::{Formula, KripkeModel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct FormulaShape {
    /// Tree height bound, atoms at height 0.
    pub depth: usize,
    pub max_inclusions: usize,
    /// Chance that a leaf is an inclusion atom while the budget lasts.
    pub inclusion_rate: f64,
    pub modal: bool,
}

pub fn random_formula<R: Rng>(rng: &mut R, props: &[&str], shape: FormulaShape) -> Formula {
    let mut budget = shape.max_inclusions;
    grow(rng, props, shape, shape.depth, &mut budget)
}

fn grow<R: Rng>(
    rng: &mut R,
    props: &[&str],
    shape: FormulaShape,
    depth: usize,
    inclusions: &mut usize,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        if *inclusions > 0 && rng.gen_bool(shape.inclusion_rate) {
            *inclusions -= 1;
            let width = rng.gen_range(1..=props.len().min(2));
            let side = |rng: &mut R| -> Vec<String> {
                (0..width)
                    .map(|_| props.choose(rng).unwrap().to_string())
                    .collect()
            };
            let lhs = side(rng);
            return Formula::inc(lhs, side(rng));
        }
        return Formula::literal(*props.choose(rng).unwrap(), rng.gen_bool(0.5));
    }
    let ops = if shape.modal { 4 } else { 2 };
    let mut sub = |rng: &mut R| grow(rng, props, shape, depth - 1, inclusions);
    match rng.gen_range(0..ops) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::boxed(sub(rng)),
        _ => Formula::diamond(sub(rng)),
    }
}

/// `count` pairwise distinct formulas.
pub fn formula_corpus(
    seed: u64,
    count: usize,
    props: &[&str],
    shape: FormulaShape,
) -> Vec<Formula> {
    let mut rng = rng(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < 1000 * count,
            "formula shape too narrow for {count} formulas"
        );
        let f = random_formula(&mut rng, props, shape);
        if seen.insert(f.to_string()) {
            out.push(f);
        }
    }
    out
}

fn model(n: usize, props: &[&str], rel: u64, val: u64) -> KripkeModel {
    let succ = (0..n).map(|u| rel >> (u * n) & ((1 << n) - 1)).collect();
    let valuation = props
        .iter()
        .enumerate()
        .map(|(i, p)| (p.to_string(), val >> (i * n) & ((1 << n) - 1)));
    KripkeModel::from_masks(n, [("R".to_string(), succ)], valuation)
}

/// Every one-world model plus `two` random two-world and `three` random
/// three-world models.
pub fn model_sample<R: Rng>(
    rng: &mut R,
    props: &[&str],
    two: usize,
    three: usize,
) -> Vec<KripkeModel> {
    let k = props.len();
    let mut out = Vec::new();
    for rel in 0..2 {
        for val in 0..1 << k {
            out.push(model(1, props, rel, val));
        }
    }
    for (n, count) in [(2, two), (3, three)] {
        for _ in 0..count {
            let rel = rng.gen_range(0..1u64 << (n * n));
            let val = rng.gen_range(0..1u64 << (n * k));
            out.push(model(n, props, rel, val));
        }
    }
    out
}

/// All circuits with three inputs (`l = 1`) followed by one to three gates.
/// Each added gate is NOT of any earlier gate, or AND / OR of two distinct
/// earlier gates.
pub fn small_circuits() -> Vec<Circuit> {
    fn extend(gates: &mut Vec<Gate>, left: usize, out: &mut Vec<Circuit>) {
        if gates.len() > 3 {
            out.push(Circuit::new(gates.clone()).expect("well-formed circuit"));
        }
        if left == 0 {
            return;
        }
        let n = gates.len();
        let mut options: Vec<Gate> = (0..n).map(Gate::Not).collect();
        for j in 0..n {
            for k in j + 1..n {
                options.push(Gate::And(j, k));
                options.push(Gate::Or(j, k));
            }
        }
        for g in options {
            gates.push(g);
            extend(gates, left - 1, out);
            gates.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![Gate::Input; 3], 3, &mut out);
    out
}

const SPACE: &str = r#""space": {"0": 2, "1": 2, "2": 2}"#;

fn machine(body: &str) -> Atm {
    Atm::from_json(&format!("{{{body}, {SPACE}}}")).expect("toy machine")
}

/// Small acyclic machines with two tape cells, named by what they exercise.
pub fn toy_machines() -> Vec<(&'static str, Atm)> {
    let t = |read: u8, state: &str, write: u8, next: &str, mv: &str| {
        format!(
            r#"{{"read": {read}, "state": "{state}", "write": {write}, "next": "{next}", "move": "{mv}"}}"#
        )
    };
    let branch = |ty: &str| {
        machine(&format!(
            r#""states": ["s0", "acc", "rej"],
               "types": {{"s0": "{ty}", "acc": "accept", "rej": "reject"}},
               "initial": "s0",
               "delta": [{}, {}, {}, {}]"#,
            t(0, "s0", 0, "acc", "stay"),
            t(0, "s0", 0, "rej", "stay"),
            t(1, "s0", 1, "acc", "stay"),
            t(1, "s0", 1, "rej", "stay"),
        ))
    };
    // Universal on the first cell: 0 leads to two accepting successors that
    // differ in the written symbol, 1 leads to acc and rej.
    let first_bit = machine(&format!(
        r#""states": ["s0", "acc", "rej"],
           "types": {{"s0": "forall", "acc": "accept", "rej": "reject"}},
           "initial": "s0",
           "delta": [{}, {}, {}, {}]"#,
        t(0, "s0", 0, "acc", "stay"),
        t(0, "s0", 1, "acc", "stay"),
        t(1, "s0", 1, "acc", "stay"),
        t(1, "s0", 1, "rej", "stay"),
    ));
    // Steps right from cell 1, then branches universally on cell 2.
    let walker = machine(&format!(
        r#""states": ["s0", "s1", "acc"],
           "types": {{"s0": "exists", "s1": "forall", "acc": "accept"}},
           "initial": "s0",
           "delta": [{}, {}, {}, {}, {}, {}, {}, {}]"#,
        t(0, "s0", 0, "s1", "right"),
        t(0, "s0", 1, "s1", "right"),
        t(1, "s0", 1, "s1", "right"),
        t(1, "s0", 0, "s1", "right"),
        t(0, "s1", 0, "acc", "stay"),
        t(0, "s1", 1, "acc", "stay"),
        t(1, "s1", 1, "acc", "stay"),
        t(1, "s1", 0, "acc", "left"),
    ));
    vec![
        (
            "pure-accept",
            machine(
                r#""states": ["acc"], "types": {"acc": "accept"}, "initial": "acc", "delta": []"#,
            ),
        ),
        ("exists-branch", branch("exists")),
        ("forall-branch", branch("forall")),
        ("first-bit", first_bit),
        ("walker", walker),
    ]
}

/// Every word of length at most `n`.
pub fn words(n: usize) -> Vec<Vec<bool>> {
    (0..=n)
        .flat_map(|len| (0..1u32 << len).map(move |x| (0..len).map(|i| x >> i & 1 == 1).collect()))
        .collect()
}

/// Dependency shapes `forall p1 exists q1 [forall p2 exists q2]` with every
/// admissible dependency set, each paired with seeded propositional
/// matrices of height at most 2.
pub fn dqbf_corpus(seed: u64, per_shape_k1: usize, per_shape_k2: usize) -> Vec<DqbfInstance> {
    let mut out = Vec::new();
    let mut rng = rng(seed);
    let shape = FormulaShape {
        depth: 2,
        max_inclusions: 0,
        inclusion_rate: 0.0,
        modal: false,
    };
    let m1 = formula_corpus(rng.gen(), per_shape_k1, &["p1", "q1"], shape);
    for deps in [&[][..], &["p1"][..]] {
        for m in &m1 {
            out.push(DqbfInstance::alternating(&[("p1", "q1", deps)], m.clone()).unwrap());
        }
    }
    let m2 = formula_corpus(rng.gen(), per_shape_k2, &["p1", "q1", "p2", "q2"], shape);
    let subsets_of = |xs: &[&'static str]| -> Vec<Vec<&'static str>> {
        (0..1u32 << xs.len())
            .map(|mask| {
                (0..xs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| xs[i])
                    .collect()
            })
            .collect()
    };
    for d1 in subsets_of(&["p1"]) {
        for d2 in subsets_of(&["p1", "p2"]) {
            for m in &m2 {
                out.push(
                    DqbfInstance::alternating(&[("p1", "q1", &d1), ("p2", "q2", &d2)], m.clone())
                        .unwrap(),
                );
            }
        }
    }
    out
}

pub type Triples = BTreeSet<(usize, usize, usize)>;

/// Random explicit PER instances: `n` in `1..=max_n`, triple density drawn
/// per instance.
pub fn per_corpus(seed: u64, count: usize, max_n: usize) -> Vec<(usize, Triples)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let density = rng.gen_range(1..=4) as f64 / (2 * n * n) as f64;
            let mut s = BTreeSet::new();
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        if rng.gen_bool(density.min(1.0)) {
                            s.insert((i, j, k));
                        }
                    }
                }
            }
            (n, s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_family_size() {
        assert_eq!(small_circuits().len(), 9 + 9 * 16 + 9 * 16 * 25);
    }

    #[test]
    fn corpora_are_deterministic() {
        let shape = FormulaShape {
            depth: 3,
            max_inclusions: 1,
            inclusion_rate: 0.3,
            modal: true,
        };
        assert_eq!(
            formula_corpus(7, 50, &["p", "q"], shape),
            formula_corpus(7, 50, &["p", "q"], shape)
        );
        assert_eq!(dqbf_corpus(3, 20, 15).len(), 160);
        assert_eq!(words(2).len(), 7);
    }

    #[test]
    fn models_cover_one_world_cases() {
        let ms = model_sample(&mut rng(1), &["p", "q"], 64, 128);
        assert_eq!(ms.len(), 200);
        assert!(ms.iter().all(|m| m.relation("R").is_ok()));
    }
}
