//! Boolean circuits with `3l` input gates, read as succinct PER instances.
//!
//! Text format, one gate per line, gates numbered from 1:
//!
//! ```text
//! g1 = IN
//! g2 = IN
//! g3 = IN
//! g4 = NOT g1
//! g5 = OR g1 g4
//! ```
//!
//! `#` starts a comment. The last gate is the output.

use std::collections::HashMap;
use std::fmt;

use super::per::PerInstance;
use super::ReduceError;

/// Largest `l` for which [`expand_succinct`] enumerates all `2^(3l)` inputs.
pub const MAX_EXPAND_L: usize = 8;

/// A gate; operands are 0-based indices of earlier gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Input,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    l: usize,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Result<Self, ReduceError> {
        let inputs = gates.iter().take_while(|g| **g == Gate::Input).count();
        let bad = |msg: String| Err(ReduceError::Circuit(msg));
        if inputs == 0 || inputs % 3 != 0 {
            return bad(format!(
                "{inputs} input gates; need a positive multiple of 3"
            ));
        }
        for (i, g) in gates.iter().enumerate().skip(inputs) {
            let ok = match *g {
                Gate::Input => return bad(format!("input gate g{} follows a logic gate", i + 1)),
                Gate::Not(j) => j < i,
                Gate::And(j, k) | Gate::Or(j, k) => j < i && k < i,
            };
            if !ok {
                return bad(format!("gate g{} reads a later gate", i + 1));
            }
        }
        Ok(Circuit {
            gates,
            l: inputs / 3,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ReduceError> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| ReduceError::Circuit(format!("line {}: {msg}", lineno + 1));
            let gate_ref = |tok: Option<&str>| -> Result<usize, ReduceError> {
                let t = tok.ok_or_else(|| err("missing operand"))?;
                let n: usize = t
                    .strip_prefix('g')
                    .and_then(|d| d.parse().ok())
                    .filter(|n| *n >= 1)
                    .ok_or_else(|| err(&format!("bad gate reference {t:?}")))?;
                Ok(n - 1)
            };
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| err("expected `g<i> = ...`"))?;
            if gate_ref(Some(lhs.trim()))? != gates.len() {
                return Err(err(&format!("expected gate g{}", gates.len() + 1)));
            }
            let mut toks = rhs.split_whitespace();
            let gate = match toks.next() {
                Some("IN") => Gate::Input,
                Some("NOT") => Gate::Not(gate_ref(toks.next())?),
                Some("AND") => Gate::And(gate_ref(toks.next())?, gate_ref(toks.next())?),
                Some("OR") => Gate::Or(gate_ref(toks.next())?, gate_ref(toks.next())?),
                _ => return Err(err("expected IN, NOT, AND or OR")),
            };
            if toks.next().is_some() {
                return Err(err("trailing tokens"));
            }
            gates.push(gate);
        }
        Circuit::new(gates)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Width `l` of each of the three input blocks.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Values of all gates on the given inputs.
    pub fn gate_values(&self, bits: &[bool]) -> Result<Vec<bool>, ReduceError> {
        if bits.len() != 3 * self.l {
            return Err(ReduceError::Circuit(format!(
                "expected {} input bits, got {}",
                3 * self.l,
                bits.len()
            )));
        }
        let mut v: Vec<bool> = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let x = match *g {
                Gate::Input => bits[i],
                Gate::Not(j) => !v[j],
                Gate::And(j, k) => v[j] && v[k],
                Gate::Or(j, k) => v[j] || v[k],
            };
            v.push(x);
        }
        Ok(v)
    }

    /// Output of the circuit on `a1..al b1..bl c1..cl`.
    pub fn eval(&self, bits: &[bool]) -> Result<bool, ReduceError> {
        Ok(*self
            .gate_values(bits)?
            .last()
            .expect("circuits are nonempty"))
    }

    /// Evaluates 64 inputs at once; bit `x` of `inputs[t]` is input `t` of lane `x`.
    pub fn eval_lanes(&self, inputs: &[u64]) -> u64 {
        let mut v: Vec<u64> = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            let x = match *g {
                Gate::Input => inputs[i],
                Gate::Not(j) => !v[j],
                Gate::And(j, k) => v[j] & v[k],
                Gate::Or(j, k) => v[j] | v[k],
            };
            v.push(x);
        }
        *v.last().expect("circuits are nonempty")
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            write!(f, "g{} = ", i + 1)?;
            match *g {
                Gate::Input => writeln!(f, "IN")?,
                Gate::Not(j) => writeln!(f, "NOT g{}", j + 1)?,
                Gate::And(j, k) => writeln!(f, "AND g{} g{}", j + 1, k + 1)?,
                Gate::Or(j, k) => writeln!(f, "OR g{} g{}", j + 1, k + 1)?,
            }
        }
        Ok(())
    }
}

/// `♯(a1..al)`: one plus the binary number `a1..al`, most significant bit
/// first, so that elements range over `1..2^l` and `♯(1..1) = 2^l`.
pub fn sharp(bits: &[bool]) -> usize {
    1 + bits.iter().fold(0, |acc, b| acc << 1 | *b as usize)
}

/// Inverse of [`sharp`] for width `l`.
pub fn unsharp(i: usize, l: usize) -> Vec<bool> {
    let v = i - 1;
    (0..l).map(|t| v >> (l - 1 - t) & 1 == 1).collect()
}

/// The explicit instance `A_C = {1..2^l}`, `(i,j,k) ∈ S_C` iff C accepts
/// the input whose blocks encode `i`, `j`, `k`.
pub fn expand_succinct(c: &Circuit) -> Result<PerInstance, ReduceError> {
    let l = c.l();
    if l > MAX_EXPAND_L {
        return Err(ReduceError::Precondition(format!(
            "l = {l} exceeds the expansion limit {MAX_EXPAND_L}"
        )));
    }
    let width = 3 * l;
    let total: u64 = 1 << width;
    let block = (1usize << l) - 1;
    let mut triples = Vec::new();
    let mut inputs = vec![0u64; width];
    let mut base = 0u64;
    while base < total {
        let lanes = (total - base).min(64);
        // Input t is bit (width-1-t) of the input index, so a1 is the MSB.
        for (t, slot) in inputs.iter_mut().enumerate() {
            let pos = width - 1 - t;
            *slot = if pos < 6 {
                LANE_PATTERNS[pos]
            } else if base >> pos & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        let mut out = c.eval_lanes(&inputs);
        if lanes < 64 {
            out &= (1u64 << lanes) - 1;
        }
        while out != 0 {
            let x = (base + out.trailing_zeros() as u64) as usize;
            out &= out - 1;
            triples.push((
                (x >> (2 * l) & block) + 1,
                (x >> l & block) + 1,
                (x & block) + 1,
            ));
        }
        base += 64;
    }
    PerInstance::new(1 << l, triples)
}

/// Lane `x` of pattern `pos` is bit `pos` of `x`.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Builds circuits gate by gate, sharing structurally equal gates.
#[derive(Debug)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    index: HashMap<Gate, usize>,
    l: usize,
}

impl CircuitBuilder {
    pub fn new(l: usize) -> Self {
        assert!(l > 0, "circuits need at least one input per block");
        CircuitBuilder {
            gates: vec![Gate::Input; 3 * l],
            index: HashMap::new(),
            l,
        }
    }

    /// Input gate `t` (0-based across all three blocks).
    pub fn input(&self, t: usize) -> usize {
        assert!(t < 3 * self.l);
        t
    }

    fn add(&mut self, g: Gate) -> usize {
        if let Some(&i) = self.index.get(&g) {
            return i;
        }
        self.gates.push(g);
        self.index.insert(g, self.gates.len() - 1);
        self.gates.len() - 1
    }

    pub fn not(&mut self, j: usize) -> usize {
        self.add(Gate::Not(j))
    }

    pub fn and(&mut self, j: usize, k: usize) -> usize {
        self.add(Gate::And(j.min(k), j.max(k)))
    }

    pub fn or(&mut self, j: usize, k: usize) -> usize {
        self.add(Gate::Or(j.min(k), j.max(k)))
    }

    pub fn truth(&mut self) -> usize {
        let n = self.not(0);
        self.or(0, n)
    }

    pub fn falsity(&mut self) -> usize {
        let n = self.not(0);
        self.and(0, n)
    }

    pub fn and_all(&mut self, xs: impl IntoIterator<Item = usize>) -> usize {
        let xs: Vec<usize> = xs.into_iter().collect();
        match xs.split_first() {
            None => self.truth(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.and(acc, x)),
        }
    }

    pub fn or_all(&mut self, xs: impl IntoIterator<Item = usize>) -> usize {
        let xs: Vec<usize> = xs.into_iter().collect();
        match xs.split_first() {
            None => self.falsity(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.or(acc, x)),
        }
    }

    /// `x` if `positive`, else `NOT x`.
    pub fn literal(&mut self, x: usize, positive: bool) -> usize {
        if positive {
            x
        } else {
            self.not(x)
        }
    }

    pub fn iff(&mut self, x: usize, y: usize) -> usize {
        let both = self.and(x, y);
        let (nx, ny) = (self.not(x), self.not(y));
        let neither = self.and(nx, ny);
        self.or(both, neither)
    }

    /// Finishes with `out` as the output gate.
    pub fn finish(mut self, out: usize) -> Circuit {
        if out != self.gates.len() - 1 || out < 3 * self.l {
            // The output must be the last gate; a self-conjunction moves it there.
            self.gates.push(Gate::And(out, out));
        }
        Circuit::new(self.gates).expect("builder keeps circuits well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::per_check;

    const TRUE_L1: &str = "g1 = IN\ng2 = IN\ng3 = IN\ng4 = NOT g1\ng5 = OR g1 g4\n";

    #[test]
    fn parse_print_round_trip() {
        let c = Circuit::parse(TRUE_L1).unwrap();
        assert_eq!(c.to_string(), TRUE_L1);
        assert_eq!(c.l(), 1);
        assert_eq!(Circuit::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn malformed_circuits() {
        assert!(Circuit::parse("g1 = IN\ng2 = IN\n").is_err());
        assert!(Circuit::parse("g1 = IN\ng2 = IN\ng3 = IN\ng4 = NOT g4\n").is_err());
        assert!(Circuit::parse("g1 = IN\ng3 = IN\ng3 = IN\n").is_err());
        assert!(Circuit::parse("g1 = IN\ng2 = IN\ng3 = IN\ng4 = XOR g1 g2\n").is_err());
        let c = Circuit::parse(TRUE_L1).unwrap();
        assert!(c.eval(&[true, false]).is_err());
    }

    #[test]
    fn sharp_convention() {
        assert_eq!(sharp(&[true, true, true]), 8);
        assert_eq!(sharp(&[false, false]), 1);
        assert_eq!(sharp(&[true, false]), 3);
        assert_eq!(unsharp(3, 2), vec![true, false]);
    }

    #[test]
    fn constant_circuits() {
        let t = expand_succinct(&Circuit::parse(TRUE_L1).unwrap()).unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.triples().len(), 8);
        let f = Circuit::parse("g1 = IN\ng2 = IN\ng3 = IN\ng4 = NOT g1\ng5 = AND g1 g4\n").unwrap();
        let f = expand_succinct(&f).unwrap();
        assert!(f.triples().is_empty());
        assert!(!per_check(&f));
    }

    #[test]
    fn lanes_agree_with_scalar_eval() {
        // (a1 AND NOT b2) OR c1, l = 2: 64 inputs, exactly one chunk.
        let c = Circuit::parse(
            "g1 = IN\ng2 = IN\ng3 = IN\ng4 = IN\ng5 = IN\ng6 = IN\n\
             g7 = NOT g4\ng8 = AND g1 g7\ng9 = OR g8 g5\n",
        )
        .unwrap();
        let inst = expand_succinct(&c).unwrap();
        for x in 0..64usize {
            let bits: Vec<bool> = (0..6).map(|t| x >> (5 - t) & 1 == 1).collect();
            let triple = (sharp(&bits[0..2]), sharp(&bits[2..4]), sharp(&bits[4..6]));
            assert_eq!(inst.triples().contains(&triple), c.eval(&bits).unwrap());
        }
    }

    #[test]
    fn builder_output_is_last() {
        let b = CircuitBuilder::new(1);
        let x = b.input(0);
        let c = b.finish(x);
        assert_eq!(c.len(), 4);
        assert!(c.eval(&[true, false, false]).unwrap());
    }
}
