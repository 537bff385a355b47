//! PER: given `S ⊆ A³` over `A = {1..n}`, is `n` in some S-persistent set?

use std::collections::BTreeSet;

use super::ReduceError;

/// Explicit PER instance; elements are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerInstance {
    n: usize,
    triples: BTreeSet<(usize, usize, usize)>,
}

impl PerInstance {
    pub fn new(
        n: usize,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, ReduceError> {
        if n == 0 {
            return Err(ReduceError::Precondition(
                "PER instances need n >= 1".into(),
            ));
        }
        let triples: BTreeSet<_> = triples.into_iter().collect();
        let in_range = |x: usize| (1..=n).contains(&x);
        if let Some(t) = triples
            .iter()
            .find(|(i, j, k)| !(in_range(*i) && in_range(*j) && in_range(*k)))
        {
            return Err(ReduceError::Precondition(format!(
                "triple {t:?} lies outside 1..={n}"
            )));
        }
        Ok(PerInstance { n, triples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triples(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.triples
    }

    /// Condition (*) for every member of `p`.
    pub fn is_persistent(&self, p: &BTreeSet<usize>) -> bool {
        p.iter().all(|i| {
            self.triples
                .range((*i, 0, 0)..=(*i, usize::MAX, usize::MAX))
                .any(|(_, j, k)| p.contains(j) && p.contains(k))
        })
    }
}

/// The largest S-persistent subset of A. Persistence is closed under
/// unions, so deleting violators of (*) until nothing changes reaches it.
pub fn persistent_gfp(inst: &PerInstance) -> BTreeSet<usize> {
    let mut alive = vec![true; inst.n + 1];
    alive[0] = false;
    let mut support: Vec<Vec<(usize, usize)>> = vec![Vec::new(); inst.n + 1];
    for &(i, j, k) in &inst.triples {
        support[i].push((j, k));
    }
    loop {
        let mut changed = false;
        for i in 1..=inst.n {
            if alive[i] && !support[i].iter().any(|&(j, k)| alive[j] && alive[k]) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (1..=inst.n).filter(|&i| alive[i]).collect()
}

pub fn per_check(inst: &PerInstance) -> bool {
    persistent_gfp(inst).contains(&inst.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_gfp_rounds() {
        let inst = PerInstance::new(2, [(1, 1, 1), (2, 1, 1)]).unwrap();
        assert_eq!(persistent_gfp(&inst), BTreeSet::from([1, 2]));
        assert!(per_check(&inst));
    }

    #[test]
    fn unsupported_elements_fall() {
        let empty = PerInstance::new(3, []).unwrap();
        assert!(persistent_gfp(&empty).is_empty());
        assert!(per_check(&PerInstance::new(1, [(1, 1, 1)]).unwrap()));
        assert!(!per_check(&PerInstance::new(2, [(1, 1, 1)]).unwrap()));
        // 3 leans on 2, which leans on the unsupported 4.
        let chain = PerInstance::new(4, [(1, 1, 1), (3, 2, 1), (2, 4, 4)]).unwrap();
        assert_eq!(persistent_gfp(&chain), BTreeSet::from([1]));
    }

    #[test]
    fn out_of_range_triple() {
        assert!(PerInstance::new(2, [(1, 3, 1)]).is_err());
        assert!(PerInstance::new(0, []).is_err());
    }
}
