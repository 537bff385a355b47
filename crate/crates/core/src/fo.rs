//! Two-variable first-order logic with the counting quantifier `exists1`.

use std::collections::BTreeSet;
use std::fmt;

use crate::lexer::{Cursor, ParseError, Tok};
use crate::modal::{LFormula, Modality, View};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Unary(String, Var),
    Binary(String, Var, Var),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Iff(Box<FoFormula>, Box<FoFormula>),
    Exists(Var, Box<FoFormula>),
    Forall(Var, Box<FoFormula>),
    /// Exactly one witness.
    ExistsOne(Var, Box<FoFormula>),
}

impl FoFormula {
    pub fn unary(p: impl Into<String>, v: Var) -> Self {
        FoFormula::Unary(p.into(), v)
    }

    pub fn binary(r: impl Into<String>, a: Var, b: Var) -> Self {
        FoFormula::Binary(r.into(), a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> Self {
        FoFormula::Not(Box::new(f))
    }

    pub fn and(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: FoFormula, r: FoFormula) -> Self {
        FoFormula::Iff(Box::new(l), Box::new(r))
    }

    pub fn exists(v: Var, f: FoFormula) -> Self {
        FoFormula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: FoFormula) -> Self {
        FoFormula::Forall(v, Box::new(f))
    }

    pub fn exists_one(v: Var, f: FoFormula) -> Self {
        FoFormula::ExistsOne(v, Box::new(f))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conj(parts: impl IntoIterator<Item = FoFormula>) -> Option<Self> {
        parts.into_iter().reduce(Self::and)
    }

    pub fn children(&self) -> Vec<&FoFormula> {
        match self {
            FoFormula::Unary(..) | FoFormula::Binary(..) => vec![],
            FoFormula::Not(g)
            | FoFormula::Exists(_, g)
            | FoFormula::Forall(_, g)
            | FoFormula::ExistsOne(_, g) => vec![g],
            FoFormula::And(l, r)
            | FoFormula::Or(l, r)
            | FoFormula::Implies(l, r)
            | FoFormula::Iff(l, r) => vec![l, r],
        }
    }

    /// Top-level conjuncts of a left-nested conjunction chain.
    pub fn conjuncts(&self) -> Vec<&FoFormula> {
        match self {
            FoFormula::And(l, r) => {
                let mut v = l.conjuncts();
                v.push(r);
                v
            }
            _ => vec![self],
        }
    }

    pub fn unary_predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let FoFormula::Unary(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn binary_predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let FoFormula::Binary(r, ..) = f {
                out.insert(r.clone());
            }
        });
        out
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            FoFormula::Unary(_, v) => {
                out.insert(*v);
            }
            FoFormula::Binary(_, a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            FoFormula::Exists(v, _) | FoFormula::Forall(v, _) | FoFormula::ExistsOne(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        match self {
            FoFormula::Unary(_, v) => BTreeSet::from([*v]),
            FoFormula::Binary(_, a, b) => BTreeSet::from([*a, *b]),
            FoFormula::Exists(v, g) | FoFormula::Forall(v, g) | FoFormula::ExistsOne(v, g) => {
                let mut s = g.free_variables();
                s.remove(v);
                s
            }
            _ => self
                .children()
                .into_iter()
                .flat_map(FoFormula::free_variables)
                .collect(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    fn visit(&self, f: &mut impl FnMut(&FoFormula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoFormula::Unary(p, v) => write!(f, "{p}({v})"),
            FoFormula::Binary(r, a, b) => write!(f, "{r}({a},{b})"),
            FoFormula::Not(g) => write!(f, "!{g}"),
            FoFormula::And(l, r) => write!(f, "({l} & {r})"),
            FoFormula::Or(l, r) => write!(f, "({l} | {r})"),
            FoFormula::Implies(l, r) => write!(f, "({l} -> {r})"),
            FoFormula::Iff(l, r) => write!(f, "({l} <-> {r})"),
            FoFormula::Exists(v, g) => write!(f, "exists {v} {g}"),
            FoFormula::Forall(v, g) => write!(f, "forall {v} {g}"),
            FoFormula::ExistsOne(v, g) => write!(f, "exists1 {v} {g}"),
        }
    }
}

/// Standard translation of a multimodal formula at variable `v`.
///
/// Derived connectives are kept readable: `[R]φ` becomes
/// `forall y (R(x,y) -> ST_y φ)` rather than a negated diamond, and the
/// global box reuses the current variable.
pub fn standard_translation(f: &LFormula, v: Var) -> FoFormula {
    let w = v.other();
    match f.view() {
        View::Prop(p) => FoFormula::unary(p, v),
        View::Not(g) => FoFormula::not(standard_translation(g, v)),
        View::And(l, r) => FoFormula::and(standard_translation(l, v), standard_translation(r, v)),
        View::Or(l, r) => FoFormula::or(standard_translation(l, v), standard_translation(r, v)),
        View::Implies(l, r) => {
            FoFormula::implies(standard_translation(l, v), standard_translation(r, v))
        }
        View::Iff(l, r) => FoFormula::iff(standard_translation(l, v), standard_translation(r, v)),
        View::Dia(m, g) => match m {
            Modality::Rel(r) => FoFormula::exists(
                w,
                FoFormula::and(FoFormula::binary(r, v, w), standard_translation(g, w)),
            ),
            Modality::Inv(r) => FoFormula::exists(
                w,
                FoFormula::and(FoFormula::binary(r, w, v), standard_translation(g, w)),
            ),
            Modality::Global => FoFormula::exists(v, standard_translation(g, v)),
        },
        View::Box(m, g) => match m {
            Modality::Rel(r) => FoFormula::forall(
                w,
                FoFormula::implies(FoFormula::binary(r, v, w), standard_translation(g, w)),
            ),
            Modality::Inv(r) => FoFormula::forall(
                w,
                FoFormula::implies(FoFormula::binary(r, w, v), standard_translation(g, w)),
            ),
            Modality::Global => FoFormula::forall(v, standard_translation(g, v)),
        },
    }
}

/// Parses the printed syntax: `p(x)`, `R(x,y)`, `!`, `&`, `|`, `->`, `<->`,
/// `exists x`, `forall y`, `exists1 y`. Quantifiers scope over the
/// following unary formula only.
pub fn parse_fo(text: &str) -> Result<FoFormula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = iff(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

fn iff(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    let mut f = implication(cur)?;
    while cur.eat(&Tok::DoubleArrow) {
        f = FoFormula::iff(f, implication(cur)?);
    }
    Ok(f)
}

fn implication(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    let f = disjunction(cur)?;
    if cur.eat(&Tok::Arrow) {
        Ok(FoFormula::implies(f, implication(cur)?))
    } else {
        Ok(f)
    }
}

fn disjunction(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    let mut f = conjunction(cur)?;
    while cur.eat(&Tok::Pipe) {
        f = FoFormula::or(f, conjunction(cur)?);
    }
    Ok(f)
}

fn conjunction(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    let mut f = unary(cur)?;
    while cur.eat(&Tok::Amp) {
        f = FoFormula::and(f, unary(cur)?);
    }
    Ok(f)
}

fn variable(cur: &mut Cursor) -> Result<Var, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if s == "x" => {
            cur.bump();
            Ok(Var::X)
        }
        Some(Tok::Ident(s)) if s == "y" => {
            cur.bump();
            Ok(Var::Y)
        }
        _ => Err(cur.unexpected("variable 'x' or 'y'")),
    }
}

fn unary(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    match cur.peek() {
        Some(Tok::Bang) => {
            cur.bump();
            Ok(FoFormula::not(unary(cur)?))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let f = iff(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(kw))
            if matches!(kw.as_str(), "exists" | "forall" | "exists1")
                && !matches!(cur.peek_at(1), Some(Tok::LParen)) =>
        {
            let kw = kw.clone();
            cur.bump();
            let v = variable(cur)?;
            let body = unary(cur)?;
            Ok(match kw.as_str() {
                "exists" => FoFormula::exists(v, body),
                "forall" => FoFormula::forall(v, body),
                _ => FoFormula::exists_one(v, body),
            })
        }
        Some(Tok::Ident(_)) => {
            let name = cur.ident("predicate")?;
            cur.expect(&Tok::LParen)?;
            let a = variable(cur)?;
            if cur.eat(&Tok::Comma) {
                let b = variable(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(FoFormula::Binary(name, a, b))
            } else {
                cur.expect(&Tok::RParen)?;
                Ok(FoFormula::Unary(name, a))
            }
        }
        _ => Err(cur.unexpected("formula")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::parse_l;

    #[test]
    fn round_trip() {
        for src in [
            "exists x p(x)",
            "forall x (p(x) -> exists1 y (R(x,y) & q(y)))",
            "!exists x (a(x) & b(x))",
            "(forall x p(x) <-> exists y !R(y,y))",
        ] {
            let f = parse_fo(src).unwrap();
            assert_eq!(parse_fo(&f.to_string()).unwrap(), f, "{src}");
        }
    }

    #[test]
    fn standard_translation_of_box_and_converse() {
        let f = parse_l("[E](a -> <R^-1>b)").unwrap();
        assert_eq!(
            standard_translation(&f, Var::X).to_string(),
            "forall x (a(x) -> exists y (R(y,x) & b(y)))"
        );
        let g = parse_l("[R]<R>p").unwrap();
        assert_eq!(
            standard_translation(&g, Var::X).to_string(),
            "forall y (R(x,y) -> exists x (R(y,x) & p(x)))"
        );
    }

    #[test]
    fn free_variables() {
        assert!(parse_fo("exists x p(x)").unwrap().is_sentence());
        let f = parse_fo("exists x R(x,y)").unwrap();
        assert_eq!(f.free_variables(), BTreeSet::from([Var::Y]));
    }

    #[test]
    fn rejects_third_variable() {
        assert!(parse_fo("exists z p(z)").is_err());
    }
}
