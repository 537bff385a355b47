//! Alternating Turing machines over `{0,1}` with an explicit space bound,
//! and the circuit `C_{M,w}` whose persistent sets track accepting
//! configurations.
//!
//! JSON description:
//!
//! ```json
//! {
//!   "states": ["s0", "acc", "rej"],
//!   "types": {"s0": "exists", "acc": "accept", "rej": "reject"},
//!   "initial": "s0",
//!   "delta": [{"read": 0, "state": "s0", "write": 0, "next": "acc", "move": "stay"}],
//!   "space": {"1": 2}
//! }
//! ```
//!
//! `space` maps input lengths to the number of tape cells.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, CircuitBuilder};
use super::ReduceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateType {
    #[serde(alias = "universal")]
    Forall,
    #[serde(alias = "existential")]
    Exists,
    Accept,
    Reject,
}

impl StateType {
    pub fn is_halting(self) -> bool {
        matches!(self, StateType::Accept | StateType::Reject)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Left,
    Right,
    Stay,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub write: bool,
    pub next: usize,
    pub mv: Move,
}

#[derive(Serialize, Deserialize)]
struct RawTransition {
    read: u8,
    state: String,
    write: u8,
    next: String,
    #[serde(rename = "move")]
    mv: Move,
}

#[derive(Serialize, Deserialize)]
struct RawAtm {
    states: Vec<String>,
    types: BTreeMap<String, StateType>,
    initial: String,
    delta: Vec<RawTransition>,
    space: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atm {
    states: Vec<String>,
    types: Vec<StateType>,
    initial: usize,
    /// Indexed by `2 * state + read`.
    delta: Vec<Vec<Transition>>,
    space: BTreeMap<usize, usize>,
}

/// A configuration within `m` cells: tape, head cell, state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub tape: Vec<bool>,
    pub head: usize,
    pub state: usize,
}

impl Atm {
    /// Validates the machine shape: two transitions per symbol for
    /// alternating states, none for halting ones.
    pub fn new(
        states: Vec<String>,
        types: Vec<StateType>,
        initial: usize,
        transitions: Vec<(bool, usize, Transition)>,
        space: BTreeMap<usize, usize>,
    ) -> Result<Self, ReduceError> {
        let bad = |m: String| Err(ReduceError::Atm(m));
        if states.is_empty() || states.len() != types.len() {
            return bad("every state needs exactly one type".into());
        }
        if initial >= states.len() {
            return bad("initial state out of range".into());
        }
        let mut delta = vec![Vec::new(); 2 * states.len()];
        for (read, s, t) in transitions {
            if s >= states.len() || t.next >= states.len() {
                return bad("transition mentions an unknown state".into());
            }
            if delta[2 * s + read as usize].contains(&t) {
                return bad(format!("duplicate transition from {}", states[s]));
            }
            delta[2 * s + read as usize].push(t);
        }
        for (s, ty) in types.iter().enumerate() {
            for read in 0..2 {
                let n = delta[2 * s + read].len();
                let want = if ty.is_halting() { 0 } else { 2 };
                if n != want {
                    return bad(format!(
                        "state {} reading {read} has {n} transitions, expected {want}",
                        states[s]
                    ));
                }
            }
        }
        Ok(Atm {
            states,
            types,
            initial,
            delta,
            space,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ReduceError> {
        let raw: RawAtm =
            serde_json::from_str(text).map_err(|e| ReduceError::Atm(format!("bad JSON: {e}")))?;
        let index: HashMap<&str, usize> = raw
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != raw.states.len() {
            return Err(ReduceError::Atm("duplicate state name".into()));
        }
        let state = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| ReduceError::Atm(format!("unknown state {s:?}")))
        };
        let bit = |b: u8| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(ReduceError::Atm(format!("tape symbol {b} is not 0 or 1"))),
        };
        let types = raw
            .states
            .iter()
            .map(|s| {
                raw.types
                    .get(s)
                    .copied()
                    .ok_or_else(|| ReduceError::Atm(format!("state {s:?} has no type")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(s) = raw.types.keys().find(|s| !index.contains_key(s.as_str())) {
            return Err(ReduceError::Atm(format!(
                "type given for unknown state {s:?}"
            )));
        }
        let transitions = raw
            .delta
            .iter()
            .map(|t| {
                Ok((
                    bit(t.read)?,
                    state(&t.state)?,
                    Transition {
                        write: bit(t.write)?,
                        next: state(&t.next)?,
                        mv: t.mv,
                    },
                ))
            })
            .collect::<Result<Vec<_>, ReduceError>>()?;
        Atm::new(
            raw.states.clone(),
            types,
            state(&raw.initial)?,
            transitions,
            raw.space,
        )
    }

    pub fn to_json(&self) -> String {
        let mut delta = Vec::new();
        for s in 0..self.states.len() {
            for read in 0..2u8 {
                for t in &self.delta[2 * s + read as usize] {
                    delta.push(RawTransition {
                        read,
                        state: self.states[s].clone(),
                        write: t.write as u8,
                        next: self.states[t.next].clone(),
                        mv: t.mv,
                    });
                }
            }
        }
        let raw = RawAtm {
            states: self.states.clone(),
            types: self
                .states
                .iter()
                .cloned()
                .zip(self.types.iter().copied())
                .collect(),
            initial: self.states[self.initial].clone(),
            delta,
            space: self.space.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("machine descriptions serialize")
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_type(&self, s: usize) -> StateType {
        self.types[s]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self, read: bool, s: usize) -> &[Transition] {
        &self.delta[2 * s + read as usize]
    }

    /// Tape cells available on inputs of length `n`.
    pub fn space(&self, n: usize) -> Result<usize, ReduceError> {
        match self.space.get(&n) {
            Some(&m) if m >= n.max(1) => Ok(m),
            Some(&m) => Err(ReduceError::Atm(format!(
                "space bound {m} cannot hold an input of length {n}"
            ))),
            None => Err(ReduceError::Atm(format!(
                "no space bound for input length {n}"
            ))),
        }
    }

    pub fn initial_config(&self, w: &[bool]) -> Result<Config, ReduceError> {
        let m = self.space(w.len())?;
        let mut tape = w.to_vec();
        tape.resize(m, false);
        Ok(Config {
            tape,
            head: 0,
            state: self.initial,
        })
    }

    /// Successor configurations, `None` for a move past either end of the tape.
    pub fn step(&self, c: &Config) -> Vec<Option<Config>> {
        self.transitions(c.tape[c.head], c.state)
            .iter()
            .map(|t| {
                let head = match t.mv {
                    Move::Left => c.head.checked_sub(1)?,
                    Move::Right => Some(c.head + 1).filter(|h| *h < c.tape.len())?,
                    Move::Stay => c.head,
                };
                let mut tape = c.tape.clone();
                tape[c.head] = t.write;
                Some(Config {
                    tape,
                    head,
                    state: t.next,
                })
            })
            .collect()
    }

    /// Configuration bits `(tape, one-hot head, one-hot state)`, `l = 2m + k`.
    pub fn encode(&self, c: &Config) -> Vec<bool> {
        let m = c.tape.len();
        let mut bits = c.tape.clone();
        bits.extend((0..m).map(|i| i == c.head));
        bits.extend((0..self.states.len()).map(|s| s == c.state));
        bits
    }

    pub fn decode(&self, bits: &[bool], m: usize) -> Option<Config> {
        let k = self.states.len();
        if bits.len() != 2 * m + k {
            return None;
        }
        let one_hot = |xs: &[bool]| {
            let mut on = xs.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i);
            match (on.next(), on.next()) {
                (Some(i), None) => Some(i),
                _ => None,
            }
        };
        Some(Config {
            tape: bits[..m].to_vec(),
            head: one_hot(&bits[m..2 * m])?,
            state: one_hot(&bits[2 * m..])?,
        })
    }
}

/// Membership of the initial configuration in AC(M), by memoized recursion
/// over the configuration graph.
pub fn atm_accepts(machine: &Atm, w: &[bool]) -> Result<bool, ReduceError> {
    struct Search<'a> {
        machine: &'a Atm,
        done: HashMap<Config, bool>,
        active: HashSet<Config>,
    }
    impl Search<'_> {
        fn accepts(&mut self, c: &Config) -> Result<bool, ReduceError> {
            if let Some(&v) = self.done.get(c) {
                return Ok(v);
            }
            if !self.active.insert(c.clone()) {
                return Err(ReduceError::Atm("configuration graph has a cycle".into()));
            }
            let v = match self.machine.state_type(c.state) {
                StateType::Accept => true,
                StateType::Reject => false,
                ty => {
                    let mut results = Vec::new();
                    for next in self.machine.step(c) {
                        let next = next.ok_or_else(|| {
                            ReduceError::Atm("head leaves the space-bounded tape".into())
                        })?;
                        results.push(self.accepts(&next)?);
                    }
                    if ty == StateType::Forall {
                        results.iter().all(|b| *b)
                    } else {
                        results.iter().any(|b| *b)
                    }
                }
            };
            self.active.remove(c);
            self.done.insert(c.clone(), v);
            Ok(v)
        }
    }
    let start = machine.initial_config(w)?;
    Search {
        machine,
        done: HashMap::new(),
        active: HashSet::new(),
    }
    .accepts(&start)
}

/// The circuit `C_{M,w}` on three blocks of `l = 2m + k` bits. It accepts
/// exactly: `a a a` for accepting configurations `a`; `a b c` for a
/// universal `a` with distinct successors `b`, `c`; `a b b` for an
/// existential `a` with successor `b`; and `1..1 b b` for the initial
/// configuration `b`. Moves past the tape ends yield no successor.
pub fn build_circuit_from_atm(machine: &Atm, w: &[bool]) -> Result<Circuit, ReduceError> {
    let init = machine.initial_config(w)?;
    let m = init.tape.len();
    let k = machine.states().len();
    let l = 2 * m + k;
    let mut b = CircuitBuilder::new(l);
    let block = |x: usize| move |t: usize| x * l + t;
    let (ba, bb, bc) = (block(0), block(1), block(2));
    let tape = |blk: &dyn Fn(usize) -> usize, i: usize| blk(i);
    let head = |blk: &dyn Fn(usize) -> usize, i: usize| blk(m + i);
    let state = |blk: &dyn Fn(usize) -> usize, s: usize| blk(2 * m + s);

    // Exactly one of the given gates is on.
    fn exactly_one(b: &mut CircuitBuilder, xs: &[usize]) -> usize {
        let options: Vec<usize> = (0..xs.len())
            .map(|i| {
                let parts: Vec<usize> = xs
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| b.literal(x, i == j))
                    .collect();
                b.and_all(parts)
            })
            .collect();
        b.or_all(options)
    }
    // The gates spell out exactly the given bits.
    fn spells(b: &mut CircuitBuilder, xs: &[usize], bits: &[bool]) -> usize {
        let lits: Vec<usize> = xs
            .iter()
            .zip(bits)
            .map(|(&x, &v)| b.literal(x, v))
            .collect();
        b.and_all(lits)
    }
    fn same(b: &mut CircuitBuilder, xs: &[usize], ys: &[usize]) -> usize {
        let eqs: Vec<usize> = xs.iter().zip(ys).map(|(&x, &y)| b.iff(x, y)).collect();
        b.and_all(eqs)
    }

    let all = |blk: &dyn Fn(usize) -> usize| (0..l).map(blk).collect::<Vec<_>>();
    let (va, vb, vc) = (all(&ba), all(&bb), all(&bc));

    let heads_a: Vec<usize> = (0..m).map(|i| head(&ba, i)).collect();
    let states_a: Vec<usize> = (0..k).map(|s| state(&ba, s)).collect();
    let h1 = exactly_one(&mut b, &heads_a);
    let s1 = exactly_one(&mut b, &states_a);
    let valid_a = b.and(h1, s1);

    let of_type = |b: &mut CircuitBuilder, ty: StateType| {
        let xs: Vec<usize> = (0..k)
            .filter(|&s| machine.state_type(s) == ty)
            .map(|s| state(&ba, s))
            .collect();
        b.or_all(xs)
    };

    // step(a, y): y encodes a successor of a, given that a is valid.
    let step = |b: &mut CircuitBuilder, y: &dyn Fn(usize) -> usize| {
        let mut options = Vec::new();
        for s in (0..k).filter(|&s| !machine.state_type(s).is_halting()) {
            for i in 0..m {
                for read in [false, true] {
                    for t in machine.transitions(read, s) {
                        let to = match t.mv {
                            Move::Left => i.checked_sub(1),
                            Move::Right => Some(i + 1).filter(|h| *h < m),
                            Move::Stay => Some(i),
                        };
                        let Some(to) = to else { continue };
                        let mut parts = vec![head(&ba, i), state(&ba, s)];
                        parts.push(b.literal(tape(&ba, i), read));
                        parts.push(b.literal(tape(y, i), t.write));
                        for j in (0..m).filter(|&j| j != i) {
                            parts.push(b.iff(tape(&ba, j), tape(y, j)));
                        }
                        let heads: Vec<usize> = (0..m).map(|j| head(y, j)).collect();
                        let onehot: Vec<bool> = (0..m).map(|j| j == to).collect();
                        parts.push(spells(b, &heads, &onehot));
                        let sts: Vec<usize> = (0..k).map(|q| state(y, q)).collect();
                        let target: Vec<bool> = (0..k).map(|q| q == t.next).collect();
                        parts.push(spells(b, &sts, &target));
                        options.push(b.and_all(parts));
                    }
                }
            }
        }
        b.or_all(options)
    };

    let acc = of_type(&mut b, StateType::Accept);
    let ab = same(&mut b, &va, &vb);
    let ac = same(&mut b, &va, &vc);
    let cond2 = b.and_all([valid_a, acc, ab, ac]);

    let univ = of_type(&mut b, StateType::Forall);
    let step_b = step(&mut b, &bb);
    let step_c = step(&mut b, &bc);
    let bc_same = same(&mut b, &vb, &vc);
    let bc_differ = b.not(bc_same);
    let cond3 = b.and_all([valid_a, univ, step_b, step_c, bc_differ]);

    let exis = of_type(&mut b, StateType::Exists);
    let cond4 = b.and_all([valid_a, exis, step_b, bc_same]);

    let ones = b.and_all(va.clone());
    let init_bits = machine.encode(&init);
    let b_init = spells(&mut b, &vb, &init_bits);
    let cond5 = b.and_all([ones, b_init, bc_same]);

    let out = b.or_all([cond2, cond3, cond4, cond5]);
    Ok(b.finish(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branching(ty: &str) -> Atm {
        Atm::from_json(&format!(
            r#"{{"states": ["s0", "acc", "rej"],
                "types": {{"s0": "{ty}", "acc": "accept", "rej": "reject"}},
                "initial": "s0",
                "delta": [
                  {{"read": 0, "state": "s0", "write": 0, "next": "acc", "move": "stay"}},
                  {{"read": 0, "state": "s0", "write": 0, "next": "rej", "move": "stay"}},
                  {{"read": 1, "state": "s0", "write": 1, "next": "acc", "move": "stay"}},
                  {{"read": 1, "state": "s0", "write": 1, "next": "rej", "move": "stay"}}
                ],
                "space": {{"0": 1, "1": 1}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn acceptance_by_recursion() {
        let acc = Atm::from_json(
            r#"{"states": ["s0"], "types": {"s0": "accept"}, "initial": "s0",
                "delta": [], "space": {"0": 1, "2": 2}}"#,
        )
        .unwrap();
        assert!(atm_accepts(&acc, &[]).unwrap());
        assert!(atm_accepts(&acc, &[true, false]).unwrap());
        assert!(atm_accepts(&branching("exists"), &[true]).unwrap());
        assert!(!atm_accepts(&branching("forall"), &[true]).unwrap());
    }

    #[test]
    fn malformed_machines() {
        let err = Atm::from_json(
            r#"{"states": ["s0"], "types": {"s0": "exists"}, "initial": "s0",
                "delta": [], "space": {}}"#,
        );
        assert!(err.is_err());
        assert!(atm_accepts(&branching("exists"), &[true, true]).is_err());
    }

    #[test]
    fn cycles_are_detected() {
        let looping = Atm::from_json(
            r#"{"states": ["s0", "acc"], "types": {"s0": "exists", "acc": "accept"},
                "initial": "s0",
                "delta": [
                  {"read": 0, "state": "s0", "write": 0, "next": "s0", "move": "stay"},
                  {"read": 0, "state": "s0", "write": 1, "next": "s0", "move": "stay"},
                  {"read": 1, "state": "s0", "write": 1, "next": "s0", "move": "stay"},
                  {"read": 1, "state": "s0", "write": 0, "next": "s0", "move": "stay"}
                ],
                "space": {"1": 1}}"#,
        )
        .unwrap();
        assert!(atm_accepts(&looping, &[false]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = branching("forall");
        assert_eq!(Atm::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn encoding_round_trip() {
        let m = branching("exists");
        let c = m.initial_config(&[true]).unwrap();
        let bits = m.encode(&c);
        assert_eq!(bits, vec![true, true, true, false, false]);
        assert_eq!(m.decode(&bits, 1), Some(c));
        assert_eq!(m.decode(&[true, false, true, false, false], 1), None);
    }

    #[test]
    fn circuit_spot_checks() {
        let m = branching("exists");
        let c = build_circuit_from_atm(&m, &[true]).unwrap();
        assert_eq!(c.l(), 5);
        let acc = m.encode(&Config {
            tape: vec![false],
            head: 0,
            state: 1,
        });
        let triple = [acc.clone(), acc.clone(), acc.clone()].concat();
        assert!(c.eval(&triple).unwrap());
        let init = m.encode(&m.initial_config(&[true]).unwrap());
        let start = [vec![true; 5], init.clone(), init.clone()].concat();
        assert!(c.eval(&start).unwrap());
        let rej = m.encode(&Config {
            tape: vec![true],
            head: 0,
            state: 2,
        });
        assert!(!c.eval(&[rej.clone(), rej.clone(), rej].concat()).unwrap());
    }
}
