//! Modal inclusion logic formulas.
//!
//! Formulas are in negation normal form: negation only occurs directly in
//! front of proposition symbols. The same AST also carries the nodes of the
//! quantified propositional layer (dependence atoms and the team quantifiers
//! `forall p` / `exists p`), which never appear under a modality.

mod parse;
mod subformula;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parse::parse_minc;
pub use subformula::{subformulas, Occurrence, SubformulaTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(String),
    NegProp(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `p1 .. pk <= q1 .. qk`; both sides have the same positive length.
    Inc(Vec<String>, Vec<String>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    /// `dep(p1 .. pk; q)`, possibly with no controllers.
    Dep(Vec<String>, String),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("inclusion atom has {lhs} proposition(s) on the left and {rhs} on the right")]
    ArityMismatch { lhs: usize, rhs: usize },
    #[error("inclusion atom must have at least one proposition on each side")]
    EmptyInclusion,
    #[error("{0} occurs under a modality")]
    QuantifierUnderModality(String),
    #[error("{0} is not allowed here")]
    Unsupported(String),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    pub fn neg(name: impl Into<String>) -> Self {
        Formula::NegProp(name.into())
    }

    /// Literal with the given polarity.
    pub fn literal(name: impl Into<String>, positive: bool) -> Self {
        if positive {
            Formula::Prop(name.into())
        } else {
            Formula::NegProp(name.into())
        }
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    /// Inclusion atom. Panics if the sides differ in length or are empty;
    /// use [`Formula::try_inc`] for unchecked input.
    pub fn inc<S: Into<String>>(
        lhs: impl IntoIterator<Item = S>,
        rhs: impl IntoIterator<Item = S>,
    ) -> Self {
        Self::try_inc(lhs, rhs).expect("malformed inclusion atom")
    }

    pub fn try_inc<S: Into<String>>(
        lhs: impl IntoIterator<Item = S>,
        rhs: impl IntoIterator<Item = S>,
    ) -> Result<Self, FormulaError> {
        let lhs: Vec<String> = lhs.into_iter().map(Into::into).collect();
        let rhs: Vec<String> = rhs.into_iter().map(Into::into).collect();
        if lhs.len() != rhs.len() {
            return Err(FormulaError::ArityMismatch {
                lhs: lhs.len(),
                rhs: rhs.len(),
            });
        }
        if lhs.is_empty() {
            return Err(FormulaError::EmptyInclusion);
        }
        Ok(Formula::Inc(lhs, rhs))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Self {
        Formula::Diamond(Box::new(f))
    }

    pub fn dep<S: Into<String>>(controllers: impl IntoIterator<Item = S>, target: S) -> Self {
        Formula::Dep(
            controllers.into_iter().map(Into::into).collect(),
            target.into(),
        )
    }

    pub fn forall(p: impl Into<String>, f: Formula) -> Self {
        Formula::Forall(p.into(), Box::new(f))
    }

    pub fn exists(p: impl Into<String>, f: Formula) -> Self {
        Formula::Exists(p.into(), Box::new(f))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty iterator.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::or)
    }

    /// `n` nested boxes.
    pub fn box_power(n: usize, f: Formula) -> Self {
        (0..n).fold(f, |acc, _| Formula::boxed(acc))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::NegProp(_) | Formula::Inc(..) | Formula::Dep(..) => vec![],
            Formula::And(l, r) | Formula::Or(l, r) => vec![l, r],
            Formula::Box(f)
            | Formula::Diamond(f)
            | Formula::Forall(_, f)
            | Formula::Exists(_, f) => {
                vec![f]
            }
        }
    }

    /// Every proposition symbol mentioned anywhere, including quantified ones.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Prop(p) | Formula::NegProp(p) => {
                out.insert(p.clone());
            }
            Formula::Inc(l, r) => out.extend(l.iter().chain(r).cloned()),
            Formula::Dep(c, t) => {
                out.extend(c.iter().cloned());
                out.insert(t.clone());
            }
            Formula::Forall(p, f) | Formula::Exists(p, f) => {
                out.insert(p.clone());
                f.collect_props(out);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_props(out)),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    /// Nesting height; atoms and literals have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    fn any_node(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    pub fn is_inclusion_free(&self) -> bool {
        !self.any_node(&|f| matches!(f, Formula::Inc(..)))
    }

    pub fn is_modality_free(&self) -> bool {
        !self.any_node(&|f| matches!(f, Formula::Box(_) | Formula::Diamond(_)))
    }

    /// True when the formula contains dependence atoms or team quantifiers.
    pub fn has_quantified_layer(&self) -> bool {
        self.any_node(&|f| {
            matches!(
                f,
                Formula::Dep(..) | Formula::Forall(..) | Formula::Exists(..)
            )
        })
    }

    /// Plain Minc: no dependence atoms and no team quantifiers.
    pub fn is_minc(&self) -> bool {
        !self.has_quantified_layer()
    }

    /// Checks the structural invariants of the AST.
    pub fn validate(&self) -> Result<(), FormulaError> {
        self.validate_in(false)
    }

    fn validate_in(&self, under_modality: bool) -> Result<(), FormulaError> {
        match self {
            Formula::Inc(l, r) => {
                if l.len() != r.len() {
                    return Err(FormulaError::ArityMismatch {
                        lhs: l.len(),
                        rhs: r.len(),
                    });
                }
                if l.is_empty() {
                    return Err(FormulaError::EmptyInclusion);
                }
                Ok(())
            }
            Formula::Dep(..) | Formula::Forall(..) | Formula::Exists(..) if under_modality => Err(
                FormulaError::QuantifierUnderModality(self.head_name().to_string()),
            ),
            Formula::Box(f) | Formula::Diamond(f) => f.validate_in(true),
            _ => self
                .children()
                .into_iter()
                .try_for_each(|c| c.validate_in(under_modality)),
        }
    }

    /// Short name of the outermost constructor, for diagnostics.
    pub fn head_name(&self) -> &'static str {
        match self {
            Formula::Prop(_) => "proposition",
            Formula::NegProp(_) => "negated proposition",
            Formula::And(..) => "conjunction",
            Formula::Or(..) => "disjunction",
            Formula::Inc(..) => "inclusion atom",
            Formula::Box(_) => "box",
            Formula::Diamond(_) => "diamond",
            Formula::Dep(..) => "dependence atom",
            Formula::Forall(..) => "universal team quantifier",
            Formula::Exists(..) => "existential team quantifier",
        }
    }

    /// Rejects dependence atoms and team quantifiers.
    pub fn require_minc(&self) -> Result<(), FormulaError> {
        if self.has_quantified_layer() {
            Err(FormulaError::Unsupported(
                self.first_quantified_node().to_string(),
            ))
        } else {
            Ok(())
        }
    }

    fn first_quantified_node(&self) -> &'static str {
        match self {
            Formula::Dep(..) | Formula::Forall(..) | Formula::Exists(..) => self.head_name(),
            _ => self
                .children()
                .into_iter()
                .find(|c| c.has_quantified_layer())
                .map_or("quantified node", Formula::first_quantified_node),
        }
    }

    fn is_prefix_operand(&self) -> bool {
        !matches!(self, Formula::Inc(..))
    }
}

/// Fully parenthesised printing; the output re-parses to the same AST.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Prop(p) => f.write_str(p),
            Formula::NegProp(p) => write!(f, "!{p}"),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
            Formula::Inc(l, r) => write!(f, "{} <= {}", l.join(" "), r.join(" ")),
            Formula::Box(g) => write!(f, "box {}", Operand(g)),
            Formula::Diamond(g) => write!(f, "dia {}", Operand(g)),
            Formula::Dep(c, t) => {
                if c.is_empty() {
                    write!(f, "dep(; {t})")
                } else {
                    write!(f, "dep({}; {t})", c.join(" "))
                }
            }
            Formula::Forall(p, g) => write!(f, "forall {p} {}", Operand(g)),
            Formula::Exists(p, g) => write!(f, "exists {p} {}", Operand(g)),
        }
    }
}

/// Operand of a prefix operator; inclusion atoms get parentheses for readability.
struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_prefix_operand() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

/// Canonical printed form.
pub fn print_minc(f: &Formula) -> String {
    f.to_string()
}

/// Picks a name prefix such that `{prefix}{number}` never collides with a
/// symbol in `taken`.
pub(crate) fn fresh_prefix<'a>(base: &str, taken: impl IntoIterator<Item = &'a String>) -> String {
    let taken: Vec<&String> = taken.into_iter().collect();
    let mut prefix = base.to_string();
    loop {
        let clash = taken.iter().any(|name| {
            name.strip_prefix(prefix.as_str())
                .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        });
        if !clash {
            return prefix;
        }
        prefix.insert(0, '_');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_inclusion_bare_at_top_level() {
        assert_eq!(print_minc(&Formula::inc(["p"], ["q"])), "p <= q");
    }

    #[test]
    fn prints_binary_connectives_parenthesised() {
        let f = Formula::and(Formula::prop("p"), Formula::neg("p"));
        assert_eq!(print_minc(&f), "(p & !p)");
    }

    #[test]
    fn prints_modal_inclusion_with_parentheses() {
        let f = Formula::diamond(Formula::inc(["q"], ["p"]));
        assert_eq!(print_minc(&f), "dia (q <= p)");
    }

    #[test]
    fn prints_quantified_layer() {
        let f = Formula::forall(
            "p",
            Formula::exists(
                "q",
                Formula::and(Formula::dep(["p"], "q"), Formula::dep([], "q")),
            ),
        );
        assert_eq!(print_minc(&f), "forall p exists q (dep(p; q) & dep(; q))");
    }

    #[test]
    fn try_inc_rejects_mismatch() {
        assert_eq!(
            Formula::try_inc(["p"], ["q", "r"]),
            Err(FormulaError::ArityMismatch { lhs: 1, rhs: 2 })
        );
        assert_eq!(
            Formula::try_inc(Vec::<String>::new(), vec![]),
            Err(FormulaError::EmptyInclusion)
        );
    }

    #[test]
    fn validate_rejects_quantifier_under_box() {
        let f = Formula::boxed(Formula::forall("p", Formula::prop("p")));
        assert!(matches!(
            f.validate(),
            Err(FormulaError::QuantifierUnderModality(_))
        ));
        assert!(Formula::forall("p", Formula::boxed(Formula::prop("p")))
            .validate()
            .is_ok());
    }

    #[test]
    fn depth_and_size() {
        let f = Formula::diamond(Formula::and(Formula::prop("p"), Formula::inc(["q"], ["p"])));
        assert_eq!(f.size(), 4);
        assert_eq!(f.depth(), 2);
        assert_eq!(Formula::prop("p").depth(), 0);
    }

    #[test]
    fn fresh_prefix_avoids_numbered_clashes() {
        let taken = vec!["sub0".to_string(), "subway".to_string()];
        assert_eq!(fresh_prefix("sub", &taken), "_sub");
        let taken = vec!["subway".to_string(), "sub".to_string()];
        assert_eq!(fresh_prefix("sub", &taken), "sub");
    }
}
