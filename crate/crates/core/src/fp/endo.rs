use thiserror::Error;

use super::word::Word;
use super::{parse_word, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("generator {gen} is outside the map's domain of rank {rank}")]
    OutOfDomain { gen: u8, rank: usize },
    #[error("bad map description: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An endomorphism of the free group, given by the image of each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(images: Vec<Word>) -> Self {
        Endomorphism {
            images: images.into_iter().map(|w| w.free_reduce()).collect(),
        }
    }

    pub fn identity(rank: usize) -> Self {
        Self::new((0..rank as u8).map(Word::generator).collect())
    }

    /// Fibonacci substitution `a -> ab, b -> a`.
    pub fn golden() -> Self {
        Self::from_spec("a=ab, b=a").unwrap()
    }

    /// `a -> aba, b -> a`.
    pub fn silver() -> Self {
        Self::from_spec("a=aba, b=a").unwrap()
    }

    /// `a -> b, b -> abc, c -> a`.
    pub fn tribonacci() -> Self {
        Self::from_spec("a=b, b=abc, c=a").unwrap()
    }

    /// Parses `a=ab, b=a` (also accepts `->` or `>` in place of `=`).
    /// Generators must be listed in order `a, b, c, ...`.
    pub fn from_spec(spec: &str) -> Result<Self, EndoError> {
        const NAMES: [char; 26] = [
            'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q',
            'r', 's', 't', 'u', 'v', 'w', 'x', 'y', 'z',
        ];
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        let rank = parts.len();
        let mut images = Vec::with_capacity(rank);
        for (i, part) in parts.iter().enumerate() {
            let (lhs, rhs) = part
                .split_once("->")
                .or_else(|| part.split_once('='))
                .or_else(|| part.split_once('>'))
                .ok_or_else(|| EndoError::BadSpec(format!("'{part}' has no '='")))?;
            if lhs.trim() != NAMES[i].to_string() {
                return Err(EndoError::BadSpec(format!(
                    "expected image of '{}' in position {}",
                    NAMES[i],
                    i + 1
                )));
            }
            images.push(parse_word(rhs, &NAMES[..rank])?);
        }
        Ok(Self::new(images))
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of `w`, freely reduced.
    pub fn apply(&self, w: &Word) -> Result<Word, EndoError> {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = self
                .images
                .get(l.gen as usize)
                .ok_or(EndoError::OutOfDomain {
                    gen: l.gen,
                    rank: self.rank(),
                })?;
            if l.inverse {
                out.extend(img.inverse().into_letters());
            } else {
                out.extend_from_slice(img.letters());
            }
        }
        Ok(Word::new(out).free_reduce())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, EndoError> {
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Endomorphism::new(images))
    }

    pub fn power(&self, n: usize) -> Result<Endomorphism, EndoError> {
        let mut acc = Endomorphism::identity(self.rank());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }
}
