use super::Formula;
use crate::lexer::{Cursor, ParseError, Tok};

const KEYWORDS: [&str; 5] = ["box", "dia", "forall", "exists", "dep"];

/// Parses the concrete Minc syntax.
///
/// ```text
/// form ::= lit | inc | '(' form op form ')' | 'box' form | 'dia' form
///        | 'forall' ident form | 'exists' ident form | 'dep' '(' ident* ';' ident ')'
/// op   ::= '&' | '|'
/// lit  ::= ['!'] ident
/// inc  ::= ident+ '<=' ident+
/// ```
///
/// Outer parentheses of binary connectives may be omitted; `&` binds
/// tighter than `|` and both associate to the left. Prefix operators bind
/// tighter than either connective.
pub fn parse_minc(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = disjunction(&mut cur, 0)?;
    cur.finish()?;
    Ok(f)
}

fn disjunction(cur: &mut Cursor, modal_depth: usize) -> Result<Formula, ParseError> {
    let mut f = conjunction(cur, modal_depth)?;
    while cur.eat(&Tok::Pipe) {
        f = Formula::or(f, conjunction(cur, modal_depth)?);
    }
    Ok(f)
}

fn conjunction(cur: &mut Cursor, modal_depth: usize) -> Result<Formula, ParseError> {
    let mut f = unary(cur, modal_depth)?;
    while cur.eat(&Tok::Amp) {
        f = Formula::and(f, unary(cur, modal_depth)?);
    }
    Ok(f)
}

fn proposition(cur: &mut Cursor) -> Result<String, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => cur.ident("proposition"),
        _ => Err(cur.unexpected("proposition symbol")),
    }
}

fn unary(cur: &mut Cursor, modal_depth: usize) -> Result<Formula, ParseError> {
    let start = cur.offset();
    match cur.peek() {
        Some(Tok::LParen) => {
            cur.bump();
            let f = disjunction(cur, modal_depth)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Bang) => {
            cur.bump();
            match cur.peek() {
                Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                    Ok(Formula::NegProp(proposition(cur)?))
                }
                _ => Err(ParseError::NegationNotOnProposition { pos: start }),
            }
        }
        Some(Tok::Ident(kw)) if kw == "box" || kw == "dia" => {
            let is_box = kw == "box";
            cur.bump();
            let f = unary(cur, modal_depth + 1)?;
            Ok(if is_box {
                Formula::boxed(f)
            } else {
                Formula::diamond(f)
            })
        }
        Some(Tok::Ident(kw)) if kw == "forall" || kw == "exists" => {
            if modal_depth > 0 {
                return Err(ParseError::QuantifierUnderModality { pos: start });
            }
            let universal = kw == "forall";
            cur.bump();
            let p = proposition(cur)?;
            let f = unary(cur, modal_depth)?;
            Ok(if universal {
                Formula::forall(p, f)
            } else {
                Formula::exists(p, f)
            })
        }
        Some(Tok::Ident(kw)) if kw == "dep" => {
            if modal_depth > 0 {
                return Err(ParseError::QuantifierUnderModality { pos: start });
            }
            cur.bump();
            cur.expect(&Tok::LParen)?;
            let mut controllers = Vec::new();
            while !cur.eat(&Tok::Semi) {
                controllers.push(proposition(cur)?);
                cur.eat(&Tok::Comma);
            }
            let target = proposition(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(Formula::Dep(controllers, target))
        }
        Some(Tok::Ident(_)) => {
            let mut lhs = vec![proposition(cur)?];
            while matches!(cur.peek(), Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str())) {
                lhs.push(proposition(cur)?);
            }
            if !cur.eat(&Tok::Subset) {
                if lhs.len() == 1 {
                    return Ok(Formula::Prop(lhs.pop().unwrap_or_default()));
                }
                return Err(cur.unexpected("'<=' after a list of propositions"));
            }
            let mut rhs = vec![proposition(cur)?];
            while matches!(cur.peek(), Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str())) {
                rhs.push(proposition(cur)?);
            }
            if lhs.len() != rhs.len() {
                return Err(ParseError::ArityMismatch {
                    pos: start,
                    lhs: lhs.len(),
                    rhs: rhs.len(),
                });
            }
            Ok(Formula::Inc(lhs, rhs))
        }
        _ => Err(cur.unexpected("formula")),
    }
}
