use std::fmt;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(gen: u8, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub const fn pos(gen: u8) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub const fn neg(gen: u8) -> Self {
        Letter { gen, inverse: true }
    }

    #[must_use]
    pub const fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub const fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column of this letter in a coset table with columns `g0, G0, g1, G1, ...`.
    pub const fn column(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub const fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// Lowercase for the generator, uppercase for its inverse.
    pub fn to_char(self, names: &[char]) -> char {
        let c = names
            .get(self.gen as usize)
            .copied()
            .unwrap_or((b'a' + self.gen) as char);
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// A word in a free group, stored as a plain letter sequence. Nothing is
/// reduced unless asked for.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(gen: u8) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// Word from `(generator, ±1)` pairs.
    pub fn from_pairs(pairs: &[(u8, i8)]) -> Self {
        Word(pairs.iter().map(|&(g, e)| Letter::new(g, e < 0)).collect())
    }

    /// Parses a word over `a, b, c, ...` with uppercase inverses.
    /// Convenience wrapper used mostly in tests.
    pub fn parse_abc(text: &str) -> Result<Self, super::ParseError> {
        super::parse_word(text, &['a', 'b', 'c', 'd', 'e', 'f'])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<u8> {
        self.0.iter().map(|l| l.gen).max()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Product followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        self.concat(other).free_reduce()
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// `u v u⁻¹ v⁻¹`, unreduced.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    /// Free reduction followed by removal of cancelling first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce();
        let n = w.len();
        let mut i = 0;
        while n >= 2 * i + 2 && w.0[i].cancels(w.0[n - 1 - i]) {
            i += 1;
        }
        Word(w.0[i..n - i].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.len() < 2 || !f.cancels(l),
                _ => true,
            }
    }

    /// Left rotation by `k` letters.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Number of letters with negative exponent.
    pub fn inverse_count(&self) -> usize {
        self.0.iter().filter(|l| l.inverse).count()
    }

    /// Prints the word with `^n` for runs of length at least two.
    pub fn display_with(&self, names: &[char]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            s.push(l.to_char(names));
            if j - i >= 2 {
                s.push('^');
                s.push_str(&(j - i).to_string());
            }
            i = j;
        }
        s
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_abc(s).unwrap()
    }

    #[test]
    fn free_reduce_examples() {
        assert!(w("aA").free_reduce().is_empty());
        assert!(w("abBA").free_reduce().is_empty());
        assert_eq!(w("abAB").free_reduce(), w("abAB"));
    }

    #[test]
    fn cyclic_reduce_strips_conjugation() {
        assert_eq!(w("baBA").cyclic_reduce(), w("baBA"));
        assert_eq!(w("abaBAA").cyclic_reduce(), w("baBA"));
        assert_eq!(w("cabC").cyclic_reduce(), w("ab"));
        assert!(w("abBA").cyclic_reduce().is_empty());
    }

    #[test]
    fn display_collapses_runs() {
        assert_eq!(w("abbbaabABBBAAB").to_string(), "ab^3a^2bAB^3A^2B");
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn rotation_and_inverse() {
        let x = w("abC");
        assert_eq!(x.rotate(1), w("bCa"));
        assert_eq!(x.inverse(), w("cBA"));
        assert_eq!(x.inverse().inverse(), x);
        assert!(x.concat(&x.inverse()).free_reduce().is_empty());
    }
}
