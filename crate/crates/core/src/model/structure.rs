use std::collections::BTreeMap;

use super::{full_mask, KripkeModel, ModelError, Relation, Team, MAX_WORLDS};

/// A finite relational structure with unary and binary predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoStructure {
    pub domain: Vec<String>,
    pub unary: BTreeMap<String, Team>,
    pub binary: BTreeMap<String, Relation>,
}

impl FoStructure {
    pub fn new<S: Into<String>>(domain: impl IntoIterator<Item = S>) -> Result<Self, ModelError> {
        // Reuse the world-list checks of Kripke models.
        let m = KripkeModel::new(domain)?;
        Ok(FoStructure {
            domain: m.worlds().to_vec(),
            unary: BTreeMap::new(),
            binary: BTreeMap::new(),
        })
    }

    /// Structure over elements `w0 .. w{n-1}` built from raw masks.
    pub fn from_masks(
        n: usize,
        unary: impl IntoIterator<Item = (String, u64)>,
        binary: impl IntoIterator<Item = (String, Vec<u64>)>,
    ) -> Self {
        assert!((1..=MAX_WORLDS).contains(&n), "domain size out of range");
        let mask = full_mask(n);
        FoStructure {
            domain: (0..n).map(|i| format!("w{i}")).collect(),
            unary: unary
                .into_iter()
                .map(|(p, m)| (p, Team(m & mask)))
                .collect(),
            binary: binary
                .into_iter()
                .map(|(r, mut succ)| {
                    succ.resize(n, 0);
                    succ.iter_mut().for_each(|m| *m &= mask);
                    (r, Relation::from_masks(succ))
                })
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    /// Interpretation of a unary predicate; absent predicates are empty.
    pub fn unary(&self, p: &str) -> Team {
        self.unary.get(p).copied().unwrap_or_default()
    }

    pub fn binary(&self, r: &str) -> Option<&Relation> {
        self.binary.get(r)
    }

    /// Reads a multimodal Kripke model as a structure: propositions become
    /// unary predicates and relations binary ones.
    pub fn from_kripke(m: &KripkeModel) -> Self {
        FoStructure {
            domain: m.worlds().to_vec(),
            unary: m.valuations().clone(),
            binary: m.relations().clone(),
        }
    }

    /// The inverse of [`FoStructure::from_kripke`].
    pub fn to_kripke(&self) -> KripkeModel {
        let mut m = KripkeModel::new(self.domain.iter().cloned())
            .expect("structure domain was validated on construction");
        for (p, t) in &self.unary {
            m.set_prop(p.clone(), *t).expect("predicate within domain");
        }
        for (r, rel) in &self.binary {
            let dst = m.declare_relation(r.clone());
            for (u, v) in rel.pairs() {
                dst.add(u, v);
            }
        }
        m
    }
}
