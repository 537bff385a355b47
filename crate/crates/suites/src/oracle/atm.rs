//! The acceptance conditions of the machine circuit, read directly off the
//! machine: a triple of configuration encodings is accepted when the first
//! is accepting and all three agree, when the first is universal and the
//! other two are distinct successors, when the first is existential and the
//! other two are the same successor, or when the first block is all ones
//! and the other two encode the initial configuration.

use minc::reduce::{Atm, Move, StateType};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Conf {
    tape: Vec<bool>,
    head: usize,
    state: usize,
}

fn one_hot(xs: &[bool]) -> Option<usize> {
    let mut on = (0..xs.len()).filter(|i| xs[*i]);
    match (on.next(), on.next()) {
        (Some(i), None) => Some(i),
        _ => None,
    }
}

fn read(block: &[bool], m: usize) -> Option<Conf> {
    let head = one_hot(&block[m..2 * m])?;
    let state = one_hot(&block[2 * m..])?;
    Some(Conf {
        tape: block[..m].to_vec(),
        head,
        state,
    })
}

fn successors(machine: &Atm, c: &Conf) -> Vec<Conf> {
    let m = c.tape.len() as isize;
    machine
        .transitions(c.tape[c.head], c.state)
        .iter()
        .filter_map(|t| {
            let delta = match t.mv {
                Move::Left => -1,
                Move::Right => 1,
                Move::Stay => 0,
            };
            let head = c.head as isize + delta;
            if head < 0 || head >= m {
                return None;
            }
            let mut tape = c.tape.clone();
            tape[c.head] = t.write;
            Some(Conf {
                tape,
                head: head as usize,
                state: t.next,
            })
        })
        .collect()
}

/// Decides the circuit's intended relation on one input of `3l` bits.
pub struct Conditions<'a> {
    machine: &'a Atm,
    m: usize,
    l: usize,
    init: Conf,
}

impl<'a> Conditions<'a> {
    pub fn new(machine: &'a Atm, w: &[bool], m: usize) -> Self {
        let mut tape = w.to_vec();
        tape.resize(m, false);
        let l = 2 * m + machine.states().len();
        let init = Conf {
            tape,
            head: 0,
            state: machine.initial(),
        };
        Conditions {
            machine,
            m,
            l,
            init,
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn accepts(&self, bits: &[bool]) -> bool {
        let (a, rest) = bits.split_at(self.l);
        let (b, c) = rest.split_at(self.l);
        let (cb, cc) = (read(b, self.m), read(c, self.m));
        if a.iter().all(|x| *x) && cb.as_ref() == Some(&self.init) && b == c {
            return true;
        }
        let Some(ca) = read(a, self.m) else {
            return false;
        };
        match self.machine.state_type(ca.state) {
            StateType::Accept => a == b && a == c,
            StateType::Reject => false,
            StateType::Forall => {
                let next = successors(self.machine, &ca);
                b != c
                    && cb.is_some_and(|x| next.contains(&x))
                    && cc.is_some_and(|x| next.contains(&x))
            }
            StateType::Exists => {
                b == c && cb.is_some_and(|x| successors(self.machine, &ca).contains(&x))
            }
        }
    }
}
