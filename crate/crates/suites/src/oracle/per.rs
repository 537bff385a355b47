//! Persistence by enumerating every subset of `{1..n}`.

use std::collections::BTreeSet;

/// Union of all persistent subsets, found by trying all `2^n` of them.
pub fn union_of_persistent(n: usize, triples: &BTreeSet<(usize, usize, usize)>) -> BTreeSet<usize> {
    assert!(n <= 16, "subset enumeration is capped at n = 16");
    let mut union = 0u32;
    for mask in 0u32..1 << n {
        let has = |i: usize| mask >> (i - 1) & 1 == 1;
        let persistent = (1..=n)
            .filter(|&i| has(i))
            .all(|i| triples.iter().any(|&(a, b, c)| a == i && has(b) && has(c)));
        if persistent {
            union |= mask;
        }
    }
    (1..=n).filter(|i| union >> (i - 1) & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let s: BTreeSet<_> = [(1, 1, 1), (2, 1, 1)].into();
        assert_eq!(union_of_persistent(2, &s), [1, 2].into());
        assert!(union_of_persistent(3, &BTreeSet::new()).is_empty());
        let s: BTreeSet<_> = [(1, 2, 2), (2, 1, 3)].into();
        assert!(union_of_persistent(3, &s).is_empty());
    }
}
