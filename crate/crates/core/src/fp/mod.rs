//! Free-group words, finite presentations and free-group endomorphisms.

mod endo;
mod parse;
mod word;

use std::fmt;
use std::str::FromStr;

pub use endo::{EndoError, Endomorphism};
pub use parse::{parse_presentation, parse_word, ParseError, ParseWarning};
pub use word::{Letter, Word};

/// Generators plus relators. Relators are kept freely and cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<char>,
    relators: Vec<Word>,
}

fn default_names(rank: usize) -> Vec<char> {
    (0..rank as u8).map(|i| (b'a' + i) as char).collect()
}

impl Presentation {
    /// Builds a presentation on generators `a, b, c, ...`.
    ///
    /// Panics if a relator mentions a generator `>= rank`.
    pub fn new(rank: usize, relators: Vec<Word>) -> Self {
        Self::with_names(default_names(rank), relators)
    }

    pub(crate) fn with_names(names: Vec<char>, relators: Vec<Word>) -> Self {
        let rank = names.len();
        let relators = relators
            .into_iter()
            .map(|r| {
                assert!(
                    r.max_generator().is_none_or(|g| (g as usize) < rank),
                    "relator uses a generator outside the presentation"
                );
                r.cyclic_reduce()
            })
            .filter(|r| !r.is_empty())
            .collect();
        Presentation { names, relators }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Same group with relators replaced by their images under `e`.
    pub fn map_relators(&self, e: &Endomorphism) -> Result<Presentation, EndoError> {
        let rels = self
            .relators
            .iter()
            .map(|r| e.apply(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation::with_names(self.names.clone(), rels))
    }

    /// Renames generators by `perm`: generator `i` becomes `perm[i]`.
    pub fn permute_generators(&self, perm: &[u8]) -> Presentation {
        assert_eq!(perm.len(), self.rank());
        let rels = self
            .relators
            .iter()
            .map(|r| {
                r.letters()
                    .iter()
                    .map(|l| Letter::new(perm[l.gen as usize], l.inverse))
                    .collect()
            })
            .collect();
        Presentation::new(self.rank(), rels)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.names.iter().map(|c| c.to_string()).collect();
        write!(f, "{} |", gens.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{}", r.display_with(&self.names))?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s).map(|(p, _)| p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_uses_same_grammar() {
        let p: Presentation = "a,b,c | a^2c^2, b^2c^2, aBCaBc".parse().unwrap();
        assert_eq!(p.to_string(), "a,b,c | a^2c^2, b^2c^2, aBCaBc");
        let q: Presentation = p.to_string().parse().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn custom_generator_names_round_trip() {
        let p: Presentation = "x,y | xyXY".parse().unwrap();
        assert_eq!(p.to_string(), "x,y | xyXY");
    }

    #[test]
    fn free_group_prints() {
        let p: Presentation = "a |".parse().unwrap();
        assert_eq!(p.to_string(), "a |");
        assert_eq!(p.to_string().parse::<Presentation>().unwrap(), p);
    }
}
