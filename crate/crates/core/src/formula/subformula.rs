use super::{fresh_prefix, Formula, FormulaError};

/// One syntactic occurrence of a subformula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence<'a> {
    pub id: usize,
    pub node: &'a Formula,
    /// Fresh proposition naming the occurrence.
    pub name: String,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// All occurrences of a formula in pre-order, root first.
#[derive(Clone, Debug)]
pub struct SubformulaTable<'a> {
    pub entries: Vec<Occurrence<'a>>,
    prefix: String,
}

impl<'a> SubformulaTable<'a> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn root(&self) -> &Occurrence<'a> {
        &self.entries[0]
    }

    pub fn get(&self, id: usize) -> &Occurrence<'a> {
        &self.entries[id]
    }

    pub fn name(&self, id: usize) -> &str {
        &self.entries[id].name
    }

    /// Prefix shared by every fresh name, e.g. `sub` or `_sub`.
    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn iter(&self) -> impl Iterator<Item = &Occurrence<'a>> {
        self.entries.iter()
    }
}

/// Enumerates every occurrence of a subformula; `p & p` has three entries.
pub fn subformulas(f: &Formula) -> Result<SubformulaTable<'_>, FormulaError> {
    f.require_minc()?;
    let props = f.props();
    let prefix = fresh_prefix("sub", &props);
    let mut entries = Vec::with_capacity(f.size());
    walk(f, None, &prefix, &mut entries);
    Ok(SubformulaTable { entries, prefix })
}

fn walk<'a>(f: &'a Formula, parent: Option<usize>, prefix: &str, out: &mut Vec<Occurrence<'a>>) {
    let id = out.len();
    out.push(Occurrence {
        id,
        node: f,
        name: format!("{prefix}{id}"),
        parent,
        children: Vec::new(),
    });
    for c in f.children() {
        let cid = out.len();
        out[id].children.push(cid);
        walk(c, Some(id), prefix, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_minc;

    #[test]
    fn repeated_literal_occurrences_are_distinct() {
        let f = parse_minc("p & p").unwrap();
        let t = subformulas(&f).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(0).children, vec![1, 2]);
        assert_eq!(t.get(2).parent, Some(0));
        assert_eq!(t.name(1), "sub1");
    }

    #[test]
    fn diamond_over_atom_has_two_entries() {
        let f = parse_minc("dia (q <= p)").unwrap();
        let t = subformulas(&f).unwrap();
        assert_eq!(t.len(), 2);
        assert!(matches!(t.get(1).node, Formula::Inc(..)));
    }

    #[test]
    fn fresh_names_avoid_formula_symbols() {
        let f = parse_minc("sub1 | sub0").unwrap();
        let t = subformulas(&f).unwrap();
        assert_eq!(t.name(0), "_sub0");
    }

    #[test]
    fn rejects_quantified_layer() {
        let f = parse_minc("exists q q").unwrap();
        assert!(subformulas(&f).is_err());
    }
}
