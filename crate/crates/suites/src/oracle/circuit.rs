//! One input at a time: the triple relation a circuit represents.

use std::collections::BTreeSet;

use minc::reduce::{Circuit, Gate};

fn accepts(c: &Circuit, bits: &[bool]) -> bool {
    let mut v: Vec<bool> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let x = match *g {
            Gate::Input => bits[v.len()],
            Gate::Not(j) => !v[j],
            Gate::And(j, k) => v[j] && v[k],
            Gate::Or(j, k) => v[j] || v[k],
        };
        v.push(x);
    }
    *v.last().expect("nonempty circuit")
}

/// Input of width `3l` for the triple `(i, j, k)`, each block written most
/// significant bit first after subtracting one.
pub fn triple_bits(l: usize, i: usize, j: usize, k: usize) -> Vec<bool> {
    [i, j, k]
        .iter()
        .flat_map(|x| (0..l).rev().map(move |t| (x - 1) >> t & 1 == 1))
        .collect()
}

pub fn triples(c: &Circuit) -> BTreeSet<(usize, usize, usize)> {
    let l = c.l();
    let n = 1usize << l;
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if accepts(c, &triple_bits(l, i, j, k)) {
                    out.insert((i, j, k));
                }
            }
        }
    }
    out
}

/// Compares `c` with `accept` on every input; returns the input count or
/// the first input where they differ. The circuit runs on 64 inputs at a
/// time, one per bit of a word.
pub fn accepted_by(c: &Circuit, mut accept: impl FnMut(&[bool]) -> bool) -> Result<u64, Vec<bool>> {
    let w = 3 * c.l();
    let total = 1u64 << w;
    let mut bits = vec![false; w];
    let mut v: Vec<u64> = Vec::with_capacity(c.gates().len());
    let mut base = 0;
    while base < total {
        v.clear();
        for g in c.gates() {
            let x = match *g {
                Gate::Input => {
                    let t = v.len();
                    (0..64).fold(0u64, |acc, lane| {
                        acc | ((base + lane) >> (w - 1 - t) & 1) << lane
                    })
                }
                Gate::Not(j) => !v[j],
                Gate::And(j, k) => v[j] & v[k],
                Gate::Or(j, k) => v[j] | v[k],
            };
            v.push(x);
        }
        let out = *v.last().expect("nonempty circuit");
        for lane in 0..64.min(total - base) {
            let x = base + lane;
            for (t, b) in bits.iter_mut().enumerate() {
                *b = x >> (w - 1 - t) & 1 == 1;
            }
            if (out >> lane & 1 == 1) != accept(&bits) {
                return Err(bits);
            }
        }
        base += 64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanes_match_single_inputs() {
        let c =
            Circuit::parse("g1 = IN\ng2 = IN\ng3 = IN\ng4 = AND g1 g3\ng5 = NOT g2\ng6 = OR g4 g5")
                .unwrap();
        let r = accepted_by(&c, |b| (b[0] && b[2]) || !b[1]);
        assert_eq!(r, Ok(8));
        assert_eq!(triples(&c).len(), 5);
        assert!(accepted_by(&c, |b| b[0]).is_err());
    }
}
