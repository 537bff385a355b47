use std::fmt;

/// A set of worlds, stored as a bitset over world indices (at most 64).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team(pub u64);

impl Team {
    pub const EMPTY: Team = Team(0);

    /// All of the first `n` worlds.
    pub fn full(n: usize) -> Team {
        Team(full_mask(n))
    }

    pub fn singleton(i: usize) -> Team {
        Team(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Team {
        Team(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Team) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Team) -> Team {
        Team(self.0 | other.0)
    }

    pub fn intersection(self, other: Team) -> Team {
        Team(self.0 & other.0)
    }

    pub fn difference(self, other: Team) -> Team {
        Team(self.0 & !other.0)
    }

    /// Member indices in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Every subteam, in ascending bitset order, starting with the empty team.
    pub fn subsets(self) -> Submasks {
        Submasks::new(self.0)
    }
}

impl fmt::Debug for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Team {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Team::from_indices(iter)
    }
}

impl IntoIterator for Team {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Ascending enumeration of the submasks of a mask via `s = (s - mask) & mask`.
#[derive(Clone, Debug)]
pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Submasks {
    pub fn new(mask: u64) -> Self {
        Submasks {
            mask,
            next: Some(0),
        }
    }

    pub(crate) fn exhausted() -> Self {
        Submasks {
            mask: 0,
            next: None,
        }
    }
}

impl Iterator for Submasks {
    type Item = Team;

    fn next(&mut self) -> Option<Team> {
        let s = self.next?;
        let n = s.wrapping_sub(self.mask) & self.mask;
        self.next = (n != 0).then_some(n);
        Some(Team(s))
    }
}
