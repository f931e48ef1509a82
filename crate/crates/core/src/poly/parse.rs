use num_bigint::BigInt;
use thiserror::Error;

use super::{Monomial, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyParseError {
    #[error("empty polynomial text")]
    Empty,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("unexpected '{found}' at byte {pos}")]
    Unexpected { found: String, pos: usize },
}

#[derive(Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, i)),
            b'-' => out.push((Tok::Minus, i)),
            b'*' => out.push((Tok::Star, i)),
            b'^' => out.push((Tok::Caret, i)),
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(text[start..i].parse().unwrap()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(PolyParseError::Unexpected {
                    found: (c as char).to_string(),
                    pos: i,
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Parses a sum of terms `c*x^a*y^b` with optional signs between terms.
pub(super) fn parse_poly(text: &str, names: &[String]) -> Result<SparsePoly, PolyParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(PolyParseError::Empty);
    }
    let n = names.len();
    let mut p = SparsePoly::zero(n);
    let mut i = 0;
    let unexpected = |i: usize| -> PolyParseError {
        match toks.get(i) {
            Some((t, pos)) => PolyParseError::Unexpected {
                found: format!("{t:?}"),
                pos: *pos,
            },
            None => PolyParseError::Unexpected {
                found: "end of input".into(),
                pos: text.len(),
            },
        }
    };
    while i < toks.len() {
        let mut sign = 1;
        loop {
            match toks.get(i) {
                Some((Tok::Plus, _)) => i += 1,
                Some((Tok::Minus, _)) => {
                    sign = -sign;
                    i += 1
                }
                _ => break,
            }
        }
        let mut coef = BigInt::from(sign);
        let mut exps = vec![0u32; n];
        loop {
            match toks.get(i) {
                Some((Tok::Num(v), _)) => {
                    coef *= v;
                    i += 1;
                }
                Some((Tok::Ident(name), _)) => {
                    let v = names
                        .iter()
                        .position(|s| s == name)
                        .ok_or_else(|| PolyParseError::UnknownVariable(name.clone()))?;
                    i += 1;
                    let mut e = 1u32;
                    if let Some((Tok::Caret, _)) = toks.get(i) {
                        i += 1;
                        match toks.get(i) {
                            Some((Tok::Num(k), _)) => {
                                e = u32::try_from(k).map_err(|_| unexpected(i))?;
                                i += 1;
                            }
                            _ => return Err(unexpected(i)),
                        }
                    }
                    exps[v] += e;
                }
                _ => return Err(unexpected(i)),
            }
            match toks.get(i) {
                Some((Tok::Star, _)) => {
                    i += 1;
                }
                Some((Tok::Plus, _)) | Some((Tok::Minus, _)) | None => break,
                _ => return Err(unexpected(i)),
            }
        }
        p.add_term(Monomial(exps), coef);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_print() {
        let f = SparsePoly::parse("4 + x*y*z - z^2 - y^2 - x^2", 3).unwrap();
        assert_eq!(f.to_string(), "x*y*z - x^2 - y^2 - z^2 + 4");
        assert_eq!(SparsePoly::parse(&f.to_string(), 3).unwrap(), f);
    }

    #[test]
    fn like_terms_combine() {
        let f = SparsePoly::parse("x*y - y*x + 2*x*x", 3).unwrap();
        assert_eq!(f.to_string(), "2*x^2");
    }

    #[test]
    fn errors() {
        assert_eq!(SparsePoly::parse("", 3), Err(PolyParseError::Empty));
        assert_eq!(
            SparsePoly::parse("x + q", 3),
            Err(PolyParseError::UnknownVariable("q".into()))
        );
        assert!(SparsePoly::parse("x +", 3).is_err());
        assert!(SparsePoly::parse("x y", 3).is_err());
        assert!(SparsePoly::parse("x^", 3).is_err());
    }

    #[test]
    fn seven_variable_names() {
        let f = SparsePoly::parse("x*y*z - x^2 - y^2 - z^2 + 4 + w*x*k - 2*k^2", 7).unwrap();
        assert_eq!(f.nvars(), 7);
        assert_eq!(f.to_string(), "k*x*w + x*y*z - 2*k^2 - x^2 - y^2 - z^2 + 4");
    }
}
