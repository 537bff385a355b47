//! Tokenizer shared by the three concrete syntaxes (Minc, the multimodal
//! language with global and converse modalities, and two-variable
//! first-order logic with counting).

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Amp,
    Pipe,
    Bang,
    Semi,
    Comma,
    /// `<=`
    Subset,
    /// `->`
    Arrow,
    /// `<->`
    DoubleArrow,
    /// `^-1`
    Converse,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::LAngle => f.write_str("'<'"),
            Tok::RAngle => f.write_str("'>'"),
            Tok::Amp => f.write_str("'&'"),
            Tok::Pipe => f.write_str("'|'"),
            Tok::Bang => f.write_str("'!'"),
            Tok::Semi => f.write_str("';'"),
            Tok::Comma => f.write_str("','"),
            Tok::Subset => f.write_str("'<='"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::DoubleArrow => f.write_str("'<->'"),
            Tok::Converse => f.write_str("'^-1'"),
        }
    }
}

/// A syntax error with the byte offset at which it was detected.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at byte {pos}")]
    BadChar { pos: usize, ch: char },
    #[error("unexpected {found} at byte {pos}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: String,
        expected: String,
    },
    #[error(
        "inclusion atom at byte {pos} has {lhs} proposition(s) on the left and {rhs} on the right"
    )]
    ArityMismatch { pos: usize, lhs: usize, rhs: usize },
    #[error("negation at byte {pos} must be applied to a proposition symbol")]
    NegationNotOnProposition { pos: usize },
    #[error("quantifier or dependence atom at byte {pos} occurs under a modality")]
    QuantifierUnderModality { pos: usize },
    #[error("{message} at byte {pos}")]
    Invalid { pos: usize, message: String },
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &src[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with("^-1") {
            (Tok::Converse, 3)
        } else if rest.starts_with("<=") {
            (Tok::Subset, 2)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (Tok::Ident(src[i..j].to_string()), j - i)
        } else {
            let tok = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b'<' => Tok::LAngle,
                b'>' => Tok::RAngle,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'!' => Tok::Bang,
                b';' => Tok::Semi,
                b',' => Tok::Comma,
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(ParseError::BadChar { pos: i, ch });
                }
            };
            (tok, 1)
        };
        out.push((start, tok));
        i += len;
    }
    Ok(out)
}

/// Token cursor with the helpers the recursive-descent parsers share.
pub(crate) struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: tokenize(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    pub(crate) fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Unexpected {
            pos: self.offset(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |t| t.to_string()),
            expected: expected.to_string(),
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_char_operators_win() {
        let toks: Vec<Tok> = tokenize("a<=b <-> <R^-1>c -> d")
            .unwrap()
            .into_iter()
            .map(|(_, t)| t)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::Subset,
                Tok::Ident("b".into()),
                Tok::DoubleArrow,
                Tok::LAngle,
                Tok::Ident("R".into()),
                Tok::Converse,
                Tok::RAngle,
                Tok::Ident("c".into()),
                Tok::Arrow,
                Tok::Ident("d".into()),
            ]
        );
    }

    #[test]
    fn reports_offset_of_bad_character() {
        assert_eq!(
            tokenize("p & $").unwrap_err(),
            ParseError::BadChar { pos: 4, ch: '$' }
        );
    }
}
