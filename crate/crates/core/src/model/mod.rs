//! Finite Kripke models, teams and first-order structures.

mod json;
mod structure;
mod team;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use json::{load_model, load_structure, parse_team, save_model, save_structure, team_to_json};
pub use structure::FoStructure;
pub use team::{Members, Submasks, Team};

pub(crate) use team::full_mask;

/// Name of the accessibility relation of a unimodal model.
pub const MAIN_RELATION: &str = "R";

pub const MAX_WORLDS: usize = 64;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("{0} worlds exceed the supported maximum of 64")]
    TooManyWorlds(usize),
    #[error("world {0:?} is declared twice")]
    DuplicateWorld(String),
    #[error("{path}: unknown world {name:?}")]
    UnknownWorld { path: String, name: String },
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("world index {0} out of range")]
    WorldIndex(usize),
    #[error("{0}")]
    Syntax(String),
}

/// A binary relation over world indices, stored as one successor mask per world.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    succ: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { succ: vec![0; n] }
    }

    pub fn from_masks(succ: Vec<u64>) -> Self {
        Relation { succ }
    }

    pub fn masks(&self) -> &[u64] {
        &self.succ
    }

    pub fn add(&mut self, from: usize, to: usize) {
        self.succ[from] |= 1 << to;
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.succ[from] >> to & 1 == 1
    }

    pub fn successors_of(&self, w: usize) -> Team {
        Team(self.succ[w])
    }

    pub fn predecessors_of(&self, w: usize) -> Team {
        self.succ
            .iter()
            .enumerate()
            .filter(|(_, m)| *m >> w & 1 == 1)
            .map(|(u, _)| u)
            .collect()
    }

    /// R(T): every world reachable in one step from the team.
    pub fn image(&self, t: Team) -> Team {
        Team(t.iter().fold(0, |acc, w| acc | self.succ[w]))
    }

    /// Worlds with at least one successor in `t`.
    pub fn preimage(&self, t: Team) -> Team {
        self.succ
            .iter()
            .enumerate()
            .filter(|(_, m)| *m & t.0 != 0)
            .map(|(u, _)| u)
            .collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, m)| Team(*m).iter().map(move |v| (u, v)))
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(|m| *m == 0)
    }
}

/// A finite multimodal Kripke model. Unimodal models use the relation `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    relations: BTreeMap<String, Relation>,
    valuation: BTreeMap<String, Team>,
}

impl KripkeModel {
    pub fn new<S: Into<String>>(worlds: impl IntoIterator<Item = S>) -> Result<Self, ModelError> {
        let worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        if worlds.len() > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(worlds.len()));
        }
        let mut seen = BTreeSet::new();
        for w in &worlds {
            if !seen.insert(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        Ok(KripkeModel {
            worlds,
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
        })
    }

    /// Model with worlds `w0 .. w{n-1}` built from raw masks.
    pub fn from_masks(
        n: usize,
        relations: impl IntoIterator<Item = (String, Vec<u64>)>,
        valuation: impl IntoIterator<Item = (String, u64)>,
    ) -> Self {
        assert!((1..=MAX_WORLDS).contains(&n), "world count out of range");
        let mask = full_mask(n);
        KripkeModel {
            worlds: (0..n).map(|i| format!("w{i}")).collect(),
            relations: relations
                .into_iter()
                .map(|(r, mut succ)| {
                    succ.resize(n, 0);
                    succ.iter_mut().for_each(|m| *m &= mask);
                    (r, Relation { succ })
                })
                .collect(),
            valuation: valuation
                .into_iter()
                .map(|(p, m)| (p, Team(m & mask)))
                .collect(),
        }
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn all_worlds(&self) -> Team {
        Team::full(self.worlds.len())
    }

    /// Declares a relation (initially empty) if it is not present yet.
    pub fn declare_relation(&mut self, rel: impl Into<String>) -> &mut Relation {
        let n = self.worlds.len();
        self.relations
            .entry(rel.into())
            .or_insert_with(|| Relation::empty(n))
    }

    pub fn add_edge(&mut self, rel: &str, from: usize, to: usize) -> Result<(), ModelError> {
        let n = self.worlds.len();
        for i in [from, to] {
            if i >= n {
                return Err(ModelError::WorldIndex(i));
            }
        }
        self.declare_relation(rel).add(from, to);
        Ok(())
    }

    pub fn set_prop(&mut self, p: impl Into<String>, t: Team) -> Result<(), ModelError> {
        if !t.is_subset(self.all_worlds()) {
            return Err(ModelError::WorldIndex(63 - t.0.leading_zeros() as usize));
        }
        self.valuation.insert(p.into(), t);
        Ok(())
    }

    pub fn relation(&self, rel: &str) -> Result<&Relation, ModelError> {
        self.relations
            .get(rel)
            .ok_or_else(|| ModelError::UnknownRelation(rel.to_string()))
    }

    /// Successor masks of `rel`, all empty when the relation is not declared.
    pub fn relation_masks_or_empty(&self, rel: &str) -> Vec<u64> {
        self.relations
            .get(rel)
            .map_or_else(|| vec![0; self.worlds.len()], |r| r.succ.clone())
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    /// V(p); undeclared propositions are false everywhere.
    pub fn valuation(&self, p: &str) -> Team {
        self.valuation.get(p).copied().unwrap_or_default()
    }

    pub fn valuations(&self) -> &BTreeMap<String, Team> {
        &self.valuation
    }

    pub fn props(&self) -> impl Iterator<Item = &String> {
        self.valuation.keys()
    }

    /// Same worlds, keeping only the listed relations and propositions.
    /// Listed names that are absent are declared empty.
    pub fn restrict<'a>(
        &self,
        rels: impl IntoIterator<Item = &'a str>,
        props: impl IntoIterator<Item = &'a str>,
    ) -> KripkeModel {
        let mut m = KripkeModel {
            worlds: self.worlds.clone(),
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
        };
        for r in rels {
            let rel = self
                .relations
                .get(r)
                .cloned()
                .unwrap_or_else(|| Relation::empty(self.worlds.len()));
            m.relations.insert(r.to_string(), rel);
        }
        for p in props {
            m.valuation.insert(p.to_string(), self.valuation(p));
        }
        m
    }

    /// R(T) for the named relation.
    pub fn successors(&self, rel: &str, t: Team) -> Result<Team, ModelError> {
        Ok(self.relation(rel)?.image(t))
    }

    /// R⟨T⟩: teams T′ ⊆ R(T) in which every member of T has a successor,
    /// in ascending bitset order.
    pub fn legal_successor_teams(&self, rel: &str, t: Team) -> Result<LegalSuccessors, ModelError> {
        Ok(LegalSuccessors::new(self.relation(rel)?.masks(), t))
    }

    /// Images f(T) of selector functions f with (u, f(u)) in the relation,
    /// in ascending bitset order.
    pub fn selector_images(&self, rel: &str, t: Team) -> Result<Vec<Team>, ModelError> {
        Ok(selector_images(self.relation(rel)?.masks(), t))
    }

    /// T(p1..pn): the set of truth-value vectors realised in the team.
    pub fn team_tuples(&self, t: Team, props: &[String]) -> BTreeSet<Vec<bool>> {
        let masks: Vec<u64> = props.iter().map(|p| self.valuation(p).0).collect();
        t.iter()
            .map(|w| masks.iter().map(|m| m >> w & 1 == 1).collect())
            .collect()
    }
}

/// Iterator over legal successor teams, filtering the submasks of R(T).
#[derive(Clone, Debug)]
pub struct LegalSuccessors {
    required: Vec<u64>,
    subs: Submasks,
}

impl LegalSuccessors {
    pub(crate) fn new(succ: &[u64], t: Team) -> Self {
        let required: Vec<u64> = t.iter().map(|w| succ[w]).collect();
        let image = required.iter().fold(0, |a, m| a | m);
        let subs = if required.contains(&0) {
            Submasks::exhausted()
        } else {
            Submasks::new(image)
        };
        LegalSuccessors { required, subs }
    }
}

impl Iterator for LegalSuccessors {
    type Item = Team;

    fn next(&mut self) -> Option<Team> {
        let required = &self.required;
        self.subs
            .by_ref()
            .find(|s| required.iter().all(|m| m & s.0 != 0))
    }
}

pub(crate) fn selector_images(succ: &[u64], t: Team) -> Vec<Team> {
    let members: Vec<usize> = t.iter().collect();
    LegalSuccessors::new(succ, t)
        .filter(|s| s.len() <= members.len() && has_saturating_matching(succ, &members, *s))
        .collect()
}

/// Whether every world of `target` can be assigned a distinct predecessor
/// among `sources`. Together with the cover condition this is exactly the
/// existence of a surjective selector from the sources onto the target.
pub(crate) fn has_saturating_matching(succ: &[u64], sources: &[usize], target: Team) -> bool {
    let targets: Vec<usize> = target.iter().collect();
    let mut owner: Vec<Option<usize>> = vec![None; sources.len()];
    for &v in &targets {
        let mut seen = vec![false; sources.len()];
        if !augment(succ, sources, v, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(
    succ: &[u64],
    sources: &[usize],
    v: usize,
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for (k, &u) in sources.iter().enumerate() {
        if succ[u] >> v & 1 == 0 || seen[k] {
            continue;
        }
        seen[k] = true;
        let free = match owner[k] {
            None => true,
            Some(w) => augment(succ, sources, w, owner, seen),
        };
        if free {
            owner[k] = Some(v);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fork() -> KripkeModel {
        let mut m = KripkeModel::new(["w", "u", "v"]).unwrap();
        m.add_edge("R", 0, 1).unwrap();
        m.add_edge("R", 0, 2).unwrap();
        m
    }

    #[test]
    fn successors_of_fork() {
        let m = fork();
        assert_eq!(
            m.successors("R", Team::singleton(0)).unwrap(),
            Team::from_indices([1, 2])
        );
        assert_eq!(m.successors("R", Team::EMPTY).unwrap(), Team::EMPTY);
        assert!(m.successors("S", Team::EMPTY).is_err());
    }

    #[test]
    fn legal_successors_of_fork() {
        let m = fork();
        let got: Vec<Team> = m
            .legal_successor_teams("R", Team::singleton(0))
            .unwrap()
            .collect();
        assert_eq!(
            got,
            vec![
                Team::from_indices([1]),
                Team::from_indices([2]),
                Team::from_indices([1, 2])
            ]
        );
        let empty: Vec<Team> = m.legal_successor_teams("R", Team::EMPTY).unwrap().collect();
        assert_eq!(empty, vec![Team::EMPTY]);
        let dead: Vec<Team> = m
            .legal_successor_teams("R", Team::singleton(1))
            .unwrap()
            .collect();
        assert!(dead.is_empty());
    }

    #[test]
    fn selector_images_are_at_most_team_sized() {
        let m = fork();
        let got = m.selector_images("R", Team::singleton(0)).unwrap();
        assert_eq!(got, vec![Team::from_indices([1]), Team::from_indices([2])]);
    }

    #[test]
    fn selector_images_need_distinct_preimages() {
        // a -> {x, y}, b -> {x}: {x, y} is an image (a->y, b->x).
        // c -> {x}, d -> {x}: only {x}.
        let mut m = KripkeModel::new(["a", "b", "x", "y"]).unwrap();
        m.add_edge("R", 0, 2).unwrap();
        m.add_edge("R", 0, 3).unwrap();
        m.add_edge("R", 1, 2).unwrap();
        let got = m.selector_images("R", Team::from_indices([0, 1])).unwrap();
        assert_eq!(
            got,
            vec![Team::from_indices([2]), Team::from_indices([2, 3])]
        );
    }

    #[test]
    fn team_tuples_per_world() {
        let mut m = KripkeModel::new(["u", "v"]).unwrap();
        m.set_prop("p", Team::from_indices([0])).unwrap();
        m.set_prop("q", Team::from_indices([0, 1])).unwrap();
        let tuples = m.team_tuples(Team::full(2), &["p".into(), "q".into()]);
        assert_eq!(
            tuples,
            BTreeSet::from([vec![true, true], vec![false, true]])
        );
        assert!(m.team_tuples(Team::EMPTY, &["p".into()]).is_empty());
    }

    #[test]
    fn rejects_bad_world_lists() {
        assert_eq!(
            KripkeModel::new(Vec::<String>::new()),
            Err(ModelError::NoWorlds)
        );
        assert!(matches!(
            KripkeModel::new(["a", "a"]),
            Err(ModelError::DuplicateWorld(_))
        ));
    }
}
