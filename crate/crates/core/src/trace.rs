//! Trace polynomials of free-group words in Fricke coordinates.
//!
//! For rank 2 the coordinates are `x = tr a, y = tr b, z = tr ab`. For rank 3
//! they are `k = tr a, x = tr b, y = tr c, z = tr ab, u = tr ac, v = tr bc,
//! w = tr abc`. Every word trace is rewritten with the SL₂ identities
//!
//! ```text
//! tr 1 = 2,  tr W⁻¹ = tr W,  tr UV = tr VU,  tr UV + tr UV⁻¹ = tr U · tr V
//! ```
//!
//! and, for rank 3, `tr abc + tr acb = k·v + x·u + y·z − k·x·y`.
//!
//! A word is keyed by the lexicographically least rotation of whichever of
//! `w`, `w⁻¹` has fewer inverse letters. Two reductions are applied:
//! an inverse letter is removed with `tr(W g⁻¹) = tr W · tr g − tr(W g)`,
//! and a positive word with a repeated generator `g X g Y` becomes
//! `tr(gX) tr(gY) − tr(X Y⁻¹)`. The pair (length, inverse count) strictly
//! drops on every recursive call; that is checked at runtime.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::fp::{Letter, Word};
use crate::poly::SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace coordinates exist for rank 2 and 3 only (got rank {0})")]
    UnsupportedRank(usize),
    #[error("word uses generator {gen} but the rank is {rank}")]
    GeneratorOutOfRange { gen: u8, rank: usize },
    #[error("rewriting made no progress on {0}")]
    NoProgress(String),
    #[error("matrix {index} has determinant {det}, expected 1")]
    BadDeterminant { index: usize, det: BigInt },
    #[error("{expected} matrices needed, got {got}")]
    MatrixCount { expected: usize, got: usize },
}

/// The basic trace functions for a free group of rank 2 or 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceCoordinates {
    rank: usize,
}

impl TraceCoordinates {
    pub fn new(rank: usize) -> Result<Self, TraceError> {
        match rank {
            2 | 3 => Ok(TraceCoordinates { rank }),
            r => Err(TraceError::UnsupportedRank(r)),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        if self.rank == 2 {
            3
        } else {
            7
        }
    }

    pub fn names(&self) -> &'static [&'static str] {
        if self.rank == 2 {
            &["x", "y", "z"]
        } else {
            &["k", "x", "y", "z", "u", "v", "w"]
        }
    }

    /// The words whose traces are the coordinates, in variable order.
    pub fn basic_words(&self) -> Vec<Word> {
        let texts: &[&str] = if self.rank == 2 {
            &["a", "b", "ab"]
        } else {
            &["a", "b", "c", "ab", "ac", "bc", "abc"]
        };
        texts.iter().map(|t| Word::parse_abc(t).unwrap()).collect()
    }

    fn var(&self, i: usize) -> SparsePoly {
        SparsePoly::var(self.nvars(), i)
    }
}

fn measure(key: &[Letter]) -> (usize, usize) {
    (key.len(), key.iter().filter(|l| l.inverse).count())
}

/// Canonical representative of the conjugacy-and-inversion class of `w`.
pub fn canonical_key(w: &Word) -> Vec<Letter> {
    let w = w.cyclic_reduce();
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let inv = w.inverse_count();
    let mut orientations = Vec::with_capacity(2);
    if 2 * inv <= n {
        orientations.push(w.clone());
    }
    if 2 * inv >= n {
        orientations.push(w.inverse());
    }
    let mut best: Option<Vec<Letter>> = None;
    for o in &orientations {
        let l = o.letters();
        for k in 0..n {
            let rot: Vec<Letter> = l[k..].iter().chain(&l[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

/// Memoizing rewriter. One engine per worker; the cache is not shared.
pub struct TraceEngine {
    coords: TraceCoordinates,
    cache: HashMap<Vec<Letter>, SparsePoly>,
}

impl TraceEngine {
    pub fn new(rank: usize) -> Result<Self, TraceError> {
        Ok(TraceEngine {
            coords: TraceCoordinates::new(rank)?,
            cache: HashMap::new(),
        })
    }

    pub fn coordinates(&self) -> TraceCoordinates {
        self.coords
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn trace_poly(&mut self, w: &Word) -> Result<SparsePoly, TraceError> {
        if let Some(g) = w.max_generator() {
            if g as usize >= self.coords.rank {
                return Err(TraceError::GeneratorOutOfRange {
                    gen: g,
                    rank: self.coords.rank,
                });
            }
        }
        let key = canonical_key(w);
        self.trace_key(key)
    }

    fn child(&mut self, parent: &[Letter], w: Word) -> Result<SparsePoly, TraceError> {
        let key = canonical_key(&w);
        if measure(&key) >= measure(parent) {
            return Err(TraceError::NoProgress(
                Word::new(parent.to_vec()).to_string(),
            ));
        }
        self.trace_key(key)
    }

    fn trace_key(&mut self, key: Vec<Letter>) -> Result<SparsePoly, TraceError> {
        if let Some(p) = self.cache.get(&key) {
            return Ok(p.clone());
        }
        let p = self.rewrite(&key)?;
        self.cache.insert(key, p.clone());
        Ok(p)
    }

    fn rewrite(&mut self, key: &[Letter]) -> Result<SparsePoly, TraceError> {
        let n = self.coords.nvars();
        if key.is_empty() {
            return Ok(SparsePoly::constant(n, 2));
        }
        if let Some(i) = key.iter().position(|l| l.inverse) {
            // key = U g⁻¹ V  ~  W g⁻¹ with W = V U
            let g = key[i].inv();
            let rest: Vec<Letter> = key[i + 1..].iter().chain(&key[..i]).copied().collect();
            let w = Word::new(rest);
            let tw = self.child(key, w.clone())?;
            let tg = self.child(key, Word::new(vec![g]))?;
            let twg = self.child(key, w.concat(&Word::new(vec![g])))?;
            return Ok(&(&tw * &tg) - &twg);
        }
        let len = key.len();
        for i in 0..len {
            for j in i + 1..len {
                if key[i].gen == key[j].gen {
                    // g X g Y
                    let g = Word::new(vec![key[i]]);
                    let x = Word::new(key[i + 1..j].to_vec());
                    let y: Word = key[j + 1..].iter().chain(&key[..i]).copied().collect();
                    let t1 = self.child(key, g.concat(&x))?;
                    let t2 = self.child(key, g.concat(&y))?;
                    let t3 = self.child(key, x.concat(&y.inverse()))?;
                    return Ok(&(&t1 * &t2) - &t3);
                }
            }
        }
        self.basic(key)
    }

    /// Positive words with pairwise distinct generators.
    fn basic(&mut self, key: &[Letter]) -> Result<SparsePoly, TraceError> {
        let c = self.coords;
        let gens: Vec<u8> = key.iter().map(|l| l.gen).collect();
        let idx = match gens.as_slice() {
            [g] => *g as usize,
            [g, h] => {
                let (a, b) = if g < h { (*g, *h) } else { (*h, *g) };
                match (c.rank, a, b) {
                    (2, 0, 1) => 2,
                    (3, 0, 1) => 3,
                    (3, 0, 2) => 4,
                    (3, 1, 2) => 5,
                    _ => unreachable!("distinct generators below rank"),
                }
            }
            // canonical rotation starts at generator 0
            [0, 1, 2] => 6,
            [0, 2, 1] => {
                // tr acb = k v + x u + y z - k x y - w
                let (k, x, y, z, u, v, w) = (
                    c.var(0),
                    c.var(1),
                    c.var(2),
                    c.var(3),
                    c.var(4),
                    c.var(5),
                    c.var(6),
                );
                return Ok(&(&(&(&k * &v) + &(&x * &u)) + &(&y * &z)) - &(&(&(&k * &x) * &y) + &w));
            }
            _ => return Err(TraceError::NoProgress(Word::new(key.to_vec()).to_string())),
        };
        Ok(c.var(idx))
    }
}

/// One-shot convenience wrapper with a fresh cache.
pub fn trace_poly(w: &Word, coords: TraceCoordinates) -> Result<SparsePoly, TraceError> {
    TraceEngine::new(coords.rank())?.trace_poly(w)
}

/// 2×2 integer matrix of determinant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSl2 {
    m: [[BigInt; 2]; 2],
}

impl IntSl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, TraceError> {
        Self::from_big([[a.into(), b.into()], [c.into(), d.into()]])
    }

    pub fn from_big(m: [[BigInt; 2]; 2]) -> Result<Self, TraceError> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if !det.is_one() {
            return Err(TraceError::BadDeterminant { index: 0, det });
        }
        Ok(IntSl2 { m })
    }

    pub fn identity() -> Self {
        IntSl2::new(1, 0, 0, 1).unwrap()
    }

    pub fn entries(&self) -> &[[BigInt; 2]; 2] {
        &self.m
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> IntSl2 {
        let m = &self.m;
        IntSl2 {
            m: [[m[1][1].clone(), -&m[0][1]], [-&m[1][0], m[0][0].clone()]],
        }
    }

    pub fn mul(&self, o: &IntSl2) -> IntSl2 {
        let (a, b) = (&self.m, &o.m);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        IntSl2 {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }
}

/// Exact trace of the matrix product along `w`, one matrix per generator.
pub fn numeric_trace_oracle(w: &Word, matrices: &[IntSl2]) -> Result<BigInt, TraceError> {
    for (i, m) in matrices.iter().enumerate() {
        let e = m.entries();
        let det = &e[0][0] * &e[1][1] - &e[0][1] * &e[1][0];
        if !det.is_one() {
            return Err(TraceError::BadDeterminant { index: i, det });
        }
    }
    if let Some(g) = w.max_generator() {
        if g as usize >= matrices.len() {
            return Err(TraceError::MatrixCount {
                expected: g as usize + 1,
                got: matrices.len(),
            });
        }
    }
    let mut acc = IntSl2::identity();
    for l in w.letters() {
        let m = &matrices[l.gen as usize];
        acc = if l.inverse {
            acc.mul(&m.inverse())
        } else {
            acc.mul(m)
        };
    }
    Ok(acc.trace())
}

/// Values of the coordinates at the given matrices.
pub fn basic_traces(
    coords: TraceCoordinates,
    matrices: &[IntSl2],
) -> Result<Vec<BigInt>, TraceError> {
    coords
        .basic_words()
        .iter()
        .map(|w| numeric_trace_oracle(w, matrices))
        .collect()
}

impl Default for IntSl2 {
    fn default() -> Self {
        Self::identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_abc(s).unwrap()
    }

    fn tr2(s: &str) -> SparsePoly {
        trace_poly(&w(s), TraceCoordinates::new(2).unwrap()).unwrap()
    }

    fn p3(s: &str) -> SparsePoly {
        SparsePoly::parse(s, 3).unwrap()
    }

    #[test]
    fn examples_rank_two() {
        assert_eq!(tr2(""), p3("2"));
        assert_eq!(tr2("aB"), p3("x*y - z"));
        assert_eq!(tr2("abAB"), p3("x^2 + y^2 + z^2 - x*y*z - 2"));
        assert_eq!(tr2("aa"), p3("x^2 - 2"));
        assert_eq!(tr2("ba"), p3("z"));
    }

    #[test]
    fn rank_three_acb() {
        let t = trace_poly(&w("acb"), TraceCoordinates::new(3).unwrap()).unwrap();
        let expected = SparsePoly::parse("k*v + x*u + y*z - k*x*y - w", 7).unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn rejects_bad_rank_and_generator() {
        assert_eq!(
            TraceEngine::new(4).err(),
            Some(TraceError::UnsupportedRank(4))
        );
        let mut e = TraceEngine::new(2).unwrap();
        assert!(matches!(
            e.trace_poly(&w("c")),
            Err(TraceError::GeneratorOutOfRange { gen: 2, rank: 2 })
        ));
    }

    #[test]
    fn oracle_examples() {
        let a = IntSl2::new(1, 1, 0, 1).unwrap();
        let b = IntSl2::new(1, 0, 1, 1).unwrap();
        assert_eq!(
            numeric_trace_oracle(&w("a"), std::slice::from_ref(&a)).unwrap(),
            2.into()
        );
        // [[1,1],[0,1]][[1,0],[1,1]] = [[2,1],[1,1]]; times A⁻¹B⁻¹ gives trace 3
        assert_eq!(
            numeric_trace_oracle(&w("abAB"), &[a.clone(), b.clone()]).unwrap(),
            3.into()
        );
        let c = IntSl2::new(2, 3, 1, 2).unwrap();
        assert_eq!(numeric_trace_oracle(&w("aA"), &[c]).unwrap(), 2.into());
        assert!(IntSl2::new(2, 0, 0, 1).is_err());
        let bad = IntSl2 {
            m: [[2.into(), 0.into()], [0.into(), 1.into()]],
        };
        assert!(matches!(
            numeric_trace_oracle(&w("a"), &[bad]),
            Err(TraceError::BadDeterminant { index: 0, .. })
        ));
    }

    #[test]
    fn commutator_trace_matches_oracle_at_example() {
        let a = IntSl2::new(1, 1, 0, 1).unwrap();
        let b = IntSl2::new(1, 0, 1, 1).unwrap();
        let coords = TraceCoordinates::new(2).unwrap();
        let pt = basic_traces(coords, &[a, b]).unwrap();
        assert_eq!(tr2("abAB").evaluate_int(&pt).unwrap(), 3.into());
    }

    #[test]
    fn canonical_key_collapses_rotations_and_inverses() {
        let k = canonical_key(&w("bAba"));
        assert_eq!(k, canonical_key(&w("abAb")));
        assert_eq!(k, canonical_key(&w("bAba").inverse()));
        assert!(canonical_key(&w("aA")).is_empty());
    }
}
