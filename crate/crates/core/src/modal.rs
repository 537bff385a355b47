//! The multimodal target language with a global modality `<E>` and
//! converse modalities `<R^-1>`.
//!
//! The AST keeps only the primitive connectives; `|`, `->`, `<->`, `[R]`
//! and `[E]` are built from them and recognised again when printing.

use std::collections::BTreeSet;
use std::fmt;

use crate::lexer::{Cursor, ParseError, Tok};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LFormula {
    Prop(String),
    Not(Box<LFormula>),
    And(Box<LFormula>, Box<LFormula>),
    /// `<R>φ`
    Dia(String, Box<LFormula>),
    /// `<R^-1>φ`
    DiaInv(String, Box<LFormula>),
    /// `<E>φ`
    DiaE(Box<LFormula>),
}

impl LFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        LFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LFormula) -> Self {
        LFormula::Not(Box::new(f))
    }

    pub fn and(l: LFormula, r: LFormula) -> Self {
        LFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: LFormula, r: LFormula) -> Self {
        Self::not(Self::and(Self::not(l), Self::not(r)))
    }

    pub fn implies(l: LFormula, r: LFormula) -> Self {
        Self::not(Self::and(l, Self::not(r)))
    }

    pub fn iff(l: LFormula, r: LFormula) -> Self {
        Self::and(Self::implies(l.clone(), r.clone()), Self::implies(r, l))
    }

    pub fn dia(rel: impl Into<String>, f: LFormula) -> Self {
        LFormula::Dia(rel.into(), Box::new(f))
    }

    pub fn dia_inv(rel: impl Into<String>, f: LFormula) -> Self {
        LFormula::DiaInv(rel.into(), Box::new(f))
    }

    pub fn dia_e(f: LFormula) -> Self {
        LFormula::DiaE(Box::new(f))
    }

    pub fn box_rel(rel: impl Into<String>, f: LFormula) -> Self {
        Self::not(Self::dia(rel, Self::not(f)))
    }

    pub fn box_inv(rel: impl Into<String>, f: LFormula) -> Self {
        Self::not(Self::dia_inv(rel, Self::not(f)))
    }

    pub fn box_e(f: LFormula) -> Self {
        Self::not(Self::dia_e(Self::not(f)))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conj(parts: impl IntoIterator<Item = LFormula>) -> Option<Self> {
        parts.into_iter().reduce(Self::and)
    }

    /// Relation names used by `<R>`, `<R^-1>` and their duals.
    pub fn relations(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let LFormula::Dia(r, _) | LFormula::DiaInv(r, _) = f {
                out.insert(r.clone());
            }
        });
        out
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let LFormula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&LFormula)) {
        f(self);
        match self {
            LFormula::Prop(_) => {}
            LFormula::Not(g) | LFormula::Dia(_, g) | LFormula::DiaInv(_, g) | LFormula::DiaE(g) => {
                g.visit(f)
            }
            LFormula::And(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Top-level conjuncts of a left-nested conjunction chain.
    pub fn conjuncts(&self) -> Vec<&LFormula> {
        match self {
            LFormula::And(l, r) => {
                let mut v = l.conjuncts();
                v.push(r);
                v
            }
            _ => vec![self],
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Recognises the derived forms, for printing and for the standard translation.
    pub fn view(&self) -> View<'_> {
        if let Some((a, b)) = self.as_iff() {
            return View::Iff(a, b);
        }
        match self {
            LFormula::Prop(p) => View::Prop(p),
            LFormula::And(l, r) => View::And(l, r),
            LFormula::Dia(r, g) => View::Dia(Modality::Rel(r), g),
            LFormula::DiaInv(r, g) => View::Dia(Modality::Inv(r), g),
            LFormula::DiaE(g) => View::Dia(Modality::Global, g),
            LFormula::Not(g) => match g.as_ref() {
                LFormula::And(l, r) => match (l.as_ref(), r.as_ref()) {
                    (LFormula::Not(a), LFormula::Not(b)) => View::Or(a, b),
                    (a, LFormula::Not(b)) => View::Implies(a, b),
                    _ => View::Not(g),
                },
                LFormula::Dia(r, h) => match h.as_ref() {
                    LFormula::Not(b) => View::Box(Modality::Rel(r), b),
                    _ => View::Not(g),
                },
                LFormula::DiaInv(r, h) => match h.as_ref() {
                    LFormula::Not(b) => View::Box(Modality::Inv(r), b),
                    _ => View::Not(g),
                },
                LFormula::DiaE(h) => match h.as_ref() {
                    LFormula::Not(b) => View::Box(Modality::Global, b),
                    _ => View::Not(g),
                },
                _ => View::Not(g),
            },
        }
    }

    fn as_iff(&self) -> Option<(&LFormula, &LFormula)> {
        let LFormula::And(l, r) = self else {
            return None;
        };
        let (a1, b1) = as_implication(l)?;
        let (a2, b2) = as_implication(r)?;
        (a1 == b2 && b1 == a2).then_some((a1, b1))
    }
}

fn as_implication(f: &LFormula) -> Option<(&LFormula, &LFormula)> {
    let LFormula::Not(g) = f else { return None };
    let LFormula::And(a, nb) = g.as_ref() else {
        return None;
    };
    let LFormula::Not(b) = nb.as_ref() else {
        return None;
    };
    Some((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modality<'a> {
    Rel(&'a str),
    Inv(&'a str),
    Global,
}

impl fmt::Display for Modality<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::Rel(r) => f.write_str(r),
            Modality::Inv(r) => write!(f, "{r}^-1"),
            Modality::Global => f.write_str("E"),
        }
    }
}

/// A formula seen through its outermost derived connective.
#[derive(Clone, Copy, Debug)]
pub enum View<'a> {
    Prop(&'a str),
    Not(&'a LFormula),
    And(&'a LFormula, &'a LFormula),
    Or(&'a LFormula, &'a LFormula),
    Implies(&'a LFormula, &'a LFormula),
    Iff(&'a LFormula, &'a LFormula),
    Dia(Modality<'a>, &'a LFormula),
    Box(Modality<'a>, &'a LFormula),
}

impl fmt::Display for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.view() {
            View::Prop(p) => f.write_str(p),
            View::Not(g) => write!(f, "!{g}"),
            View::And(l, r) => write!(f, "({l} & {r})"),
            View::Or(l, r) => write!(f, "({l} | {r})"),
            View::Implies(l, r) => write!(f, "({l} -> {r})"),
            View::Iff(l, r) => write!(f, "({l} <-> {r})"),
            View::Dia(m, g) => write!(f, "<{m}>{g}"),
            View::Box(m, g) => write!(f, "[{m}]{g}"),
        }
    }
}

/// Parses the printed syntax. Precedence from tightest: prefix operators,
/// `&`, `|`, `->` (right associative), `<->`.
pub fn parse_l(text: &str) -> Result<LFormula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = iff(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

fn iff(cur: &mut Cursor) -> Result<LFormula, ParseError> {
    let mut f = implication(cur)?;
    while cur.eat(&Tok::DoubleArrow) {
        f = LFormula::iff(f, implication(cur)?);
    }
    Ok(f)
}

fn implication(cur: &mut Cursor) -> Result<LFormula, ParseError> {
    let f = disjunction(cur)?;
    if cur.eat(&Tok::Arrow) {
        Ok(LFormula::implies(f, implication(cur)?))
    } else {
        Ok(f)
    }
}

fn disjunction(cur: &mut Cursor) -> Result<LFormula, ParseError> {
    let mut f = conjunction(cur)?;
    while cur.eat(&Tok::Pipe) {
        f = LFormula::or(f, conjunction(cur)?);
    }
    Ok(f)
}

fn conjunction(cur: &mut Cursor) -> Result<LFormula, ParseError> {
    let mut f = unary(cur)?;
    while cur.eat(&Tok::Amp) {
        f = LFormula::and(f, unary(cur)?);
    }
    Ok(f)
}

enum ParsedModality {
    Rel(String),
    Inv(String),
    Global,
}

fn modality(cur: &mut Cursor, close: &Tok) -> Result<ParsedModality, ParseError> {
    let name = cur.ident("relation name or 'E'")?;
    let m = if cur.eat(&Tok::Converse) {
        if name == "E" {
            return Err(cur.unexpected(&close.to_string()));
        }
        ParsedModality::Inv(name)
    } else if name == "E" {
        ParsedModality::Global
    } else {
        ParsedModality::Rel(name)
    };
    cur.expect(close)?;
    Ok(m)
}

fn unary(cur: &mut Cursor) -> Result<LFormula, ParseError> {
    match cur.peek() {
        Some(Tok::Bang) => {
            cur.bump();
            Ok(LFormula::not(unary(cur)?))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let f = iff(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::LAngle) => {
            cur.bump();
            let m = modality(cur, &Tok::RAngle)?;
            let g = unary(cur)?;
            Ok(match m {
                ParsedModality::Rel(r) => LFormula::dia(r, g),
                ParsedModality::Inv(r) => LFormula::dia_inv(r, g),
                ParsedModality::Global => LFormula::dia_e(g),
            })
        }
        Some(Tok::LBracket) => {
            cur.bump();
            let m = modality(cur, &Tok::RBracket)?;
            let g = unary(cur)?;
            Ok(match m {
                ParsedModality::Rel(r) => LFormula::box_rel(r, g),
                ParsedModality::Inv(r) => LFormula::box_inv(r, g),
                ParsedModality::Global => LFormula::box_e(g),
            })
        }
        Some(Tok::Ident(_)) => Ok(LFormula::Prop(cur.ident("proposition")?)),
        _ => Err(cur.unexpected("formula")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_forms_print_as_sugar() {
        let f = LFormula::box_e(LFormula::implies(
            LFormula::prop("a"),
            LFormula::dia_inv("R", LFormula::prop("b")),
        ));
        assert_eq!(f.to_string(), "[E](a -> <R^-1>b)");
        let g = LFormula::iff(
            LFormula::prop("p"),
            LFormula::or(LFormula::prop("x"), LFormula::prop("y")),
        );
        assert_eq!(g.to_string(), "(p <-> (x | y))");
    }

    #[test]
    fn printed_form_reparses() {
        for src in [
            "[E](sub0 -> !p)",
            "(sub0 & [E]((sub0 -> <R>sub1) & (sub1 -> <R^-1>sub0)))",
            "[R_sub1]q <-> <E>!!q",
            "!(a & b) | [R^-1]c",
        ] {
            let f = parse_l(src).unwrap();
            assert_eq!(parse_l(&f.to_string()).unwrap(), f, "{src}");
        }
    }

    #[test]
    fn precedence() {
        let f = parse_l("a & b | c -> d").unwrap();
        let expect = LFormula::implies(
            LFormula::or(
                LFormula::and(LFormula::prop("a"), LFormula::prop("b")),
                LFormula::prop("c"),
            ),
            LFormula::prop("d"),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn signature() {
        let f = parse_l("<R>p & [R_a]q & <F^-1>r & <E>s").unwrap();
        let rels: Vec<String> = f.relations().into_iter().collect();
        assert_eq!(rels, ["F", "R", "R_a"]);
        assert!(parse_l("<E^-1>p").is_err());
    }
}
