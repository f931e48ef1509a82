//! Text grammar for words and presentations.
//!
//! ```text
//! presentation := gens '|' [word (',' word)*]
//! gens         := letter (',' letter)*
//! word         := factor*            ('1' alone is the identity)
//! factor       := atom ['^' ['-'] digits]
//! atom         := letter | '[' word ',' word ']' | '(' word ')'
//! ```
//!
//! Lowercase letters are declared generators, uppercase letters their inverses.

use thiserror::Error;

use super::word::{Letter, Word};
use super::Presentation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("missing '|' between generators and relators")]
    MissingBar,
    #[error("bad generator list: {0}")]
    BadGenerators(String),
    #[error("unknown letter '{letter}' at byte {pos}")]
    UnknownLetter { letter: char, pos: usize },
    #[error("malformed input at byte {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// A relator reduced to the empty word and was dropped.
    EmptyRelatorDropped { index: usize },
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
    names: &'a [char],
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Malformed {
            pos: self.offset + self.pos,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    /// Parses a word up to (not including) one of `,`, `]`, `)` or end of input.
    fn word(&mut self) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        let mut saw_one = false;
        while let Some(c) = self.peek() {
            let atom = match c {
                b',' | b']' | b')' => break,
                b'[' => {
                    self.pos += 1;
                    let u = self.word()?;
                    self.expect(b',')?;
                    let v = self.word()?;
                    self.expect(b']')?;
                    Word::commutator(&u, &v)
                }
                b'(' => {
                    self.pos += 1;
                    let u = self.word()?;
                    self.expect(b')')?;
                    u
                }
                b'1' if !saw_one && letters.is_empty() => {
                    self.pos += 1;
                    saw_one = true;
                    Word::empty()
                }
                c if c.is_ascii_alphabetic() => {
                    let ch = c as char;
                    let lower = ch.to_ascii_lowercase();
                    let Some(g) = self.names.iter().position(|&n| n == lower) else {
                        return Err(ParseError::UnknownLetter {
                            letter: ch,
                            pos: self.offset + self.pos,
                        });
                    };
                    self.pos += 1;
                    Word::new(vec![Letter::new(g as u8, ch.is_ascii_uppercase())])
                }
                _ => return Err(self.err(format!("unexpected character '{}'", c as char))),
            };
            let atom = if self.peek() == Some(b'^') {
                self.pos += 1;
                let neg = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected digits after '^'"));
                }
                let n: i64 = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("power out of range"))?;
                if n > 10_000 {
                    return Err(self.err("power out of range"));
                }
                atom.pow(if neg { -n } else { n })
            } else {
                atom
            };
            letters.extend(atom.into_letters());
        }
        Ok(Word::new(letters))
    }
}

/// Parses a single word (not reduced) over the given generator names.
pub fn parse_word(text: &str, names: &[char]) -> Result<Word, ParseError> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
        offset: 0,
        names,
    };
    let w = cur.word()?;
    if cur.peek().is_some() {
        return Err(cur.err("trailing input"));
    }
    Ok(w)
}

fn parse_generators(text: &str) -> Result<Vec<char>, ParseError> {
    let mut names = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let mut chars = part.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => {
                if names.contains(&c) {
                    return Err(ParseError::BadGenerators(format!(
                        "duplicate generator '{c}'"
                    )));
                }
                names.push(c);
            }
            _ => {
                return Err(ParseError::BadGenerators(format!(
                    "'{part}' is not a single lowercase letter"
                )))
            }
        }
    }
    Ok(names)
}

/// Parses `gens | rel, rel, ...`, reducing relators freely and cyclically.
pub fn parse_presentation(text: &str) -> Result<(Presentation, Vec<ParseWarning>), ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let bar = text.find('|').ok_or(ParseError::MissingBar)?;
    let names = parse_generators(&text[..bar])?;
    let body = &text[bar + 1..];
    let mut cur = Cursor {
        src: body.as_bytes(),
        pos: 0,
        offset: bar + 1,
        names: &names,
    };
    let mut raw = Vec::new();
    if cur.peek().is_some() {
        loop {
            raw.push(cur.word()?);
            match cur.peek() {
                Some(b',') => cur.pos += 1,
                None => break,
                Some(_) => return Err(cur.err("expected ',' or end of input")),
            }
        }
    }
    let mut warnings = Vec::new();
    let mut relators = Vec::new();
    for (i, r) in raw.into_iter().enumerate() {
        let r = r.cyclic_reduce();
        if r.is_empty() {
            warnings.push(ParseWarning::EmptyRelatorDropped { index: i });
        } else {
            relators.push(r);
        }
    }
    Ok((Presentation::with_names(names, relators), warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf() {
        let (p, w) = parse_presentation("a,b | [a,b]").unwrap();
        assert!(w.is_empty());
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators(), &[Word::parse_abc("abAB").unwrap()]);
    }

    #[test]
    fn whitehead_relator_length() {
        let (p, _) = parse_presentation("a,b | ab^3a^2bAB^3A^2B").unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].len(), 14);
    }

    #[test]
    fn rank_three() {
        let (p, _) = parse_presentation("a,b,c | a^2c^2, b^2c^2, aBCaBc").unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.relators().len(), 3);
    }

    #[test]
    fn nested_commutator_power() {
        let (p, _) = parse_presentation("a,b | [a,b^2]").unwrap();
        assert_eq!(p.relators()[0], Word::parse_abc("abbABB").unwrap());
        let (q, _) = parse_presentation("a,b | [a,[a,b]]").unwrap();
        assert_eq!(q.relators()[0], Word::parse_abc("abABAbaB").unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(parse_presentation(""), Err(ParseError::Empty));
        assert!(matches!(
            parse_presentation("a,b | abc"),
            Err(ParseError::UnknownLetter { letter: 'c', .. })
        ));
        assert!(matches!(
            parse_presentation("a,b | [a,b"),
            Err(ParseError::Malformed { .. })
        ));
        assert!(matches!(
            parse_presentation("a,b | a^"),
            Err(ParseError::Malformed { .. })
        ));
        assert!(matches!(
            parse_presentation("a b"),
            Err(ParseError::MissingBar)
        ));
    }

    #[test]
    fn empty_relator_dropped_with_warning() {
        let (p, w) = parse_presentation("a,b | aA, ab").unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(w, vec![ParseWarning::EmptyRelatorDropped { index: 0 }]);
    }

    #[test]
    fn free_group_has_no_relators() {
        let (p, _) = parse_presentation("a |").unwrap();
        assert_eq!(p.rank(), 1);
        assert!(p.relators().is_empty());
    }
}
