//! Character-variety ideals from relator trace conditions.
//!
//! A representation ρ kills a relator r exactly when `ρ(r) = I`. For SL₂ this is
//! detected by traces: `tr(r·s) = tr(s)` for every `s` in a spanning set of test
//! words. Each such difference is an ideal generator; their gcd is the
//! codimension-one part of the variety, called the hypersurface here.

use rayon::prelude::*;
use thiserror::Error;

use crate::fp::{Presentation, Word};
use crate::poly::{gcd_all, SparsePoly};
use crate::trace::{TraceEngine, TraceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharVarError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("every ideal generator is zero; the relators impose no condition")]
    NoGenerators,
    #[error("expected polynomials in {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
}

/// One ideal generator with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGenerator {
    pub relator: usize,
    pub test_word: Word,
    pub poly: SparsePoly,
}

/// The test words `s` used for the condition `tr(r s) = tr(s)`.
pub fn test_words(rank: usize) -> Vec<Word> {
    let texts: &[&str] = if rank == 2 {
        &["", "a", "b", "ab"]
    } else {
        &["", "a", "b", "c", "ab", "ac", "bc", "abc"]
    };
    texts.iter().map(|t| Word::parse_abc(t).unwrap()).collect()
}

/// All nonzero generators with provenance, as primitive parts (sign kept),
/// with duplicates after the first occurrence removed.
pub fn ideal_generator_records(p: &Presentation) -> Result<Vec<IdealGenerator>, CharVarError> {
    let rank = p.rank();
    let tests = test_words(rank);
    let jobs: Vec<(usize, Word)> = (0..p.relators().len())
        .flat_map(|i| tests.iter().map(move |s| (i, s.clone())))
        .collect();
    let computed: Result<Vec<Option<IdealGenerator>>, TraceError> = jobs
        .into_par_iter()
        .map_init(
            || TraceEngine::new(rank),
            |engine, (i, s)| {
                let engine = engine.as_mut().map_err(|e| e.clone())?;
                let rs = p.relators()[i].mul(&s);
                let d = &engine.trace_poly(&rs)? - &engine.trace_poly(&s)?;
                Ok((!d.is_zero()).then(|| IdealGenerator {
                    relator: i,
                    test_word: s,
                    poly: d.primitive_part(),
                }))
            },
        )
        .collect();
    let mut out: Vec<IdealGenerator> = Vec::new();
    for g in computed?.into_iter().flatten() {
        if !out.iter().any(|o| o.poly == g.poly) {
            out.push(g);
        }
    }
    Ok(out)
}

pub fn ideal_generators(p: &Presentation) -> Result<Vec<SparsePoly>, CharVarError> {
    Ok(ideal_generator_records(p)?
        .into_iter()
        .map(|g| g.poly)
        .collect())
}

/// Primitive, sign-normalized gcd of the generators.
pub fn hypersurface_part(gens: &[SparsePoly]) -> Result<SparsePoly, CharVarError> {
    match gcd_all(gens.iter().filter(|g| !g.is_zero())) {
        Some(h) if !h.is_zero() => Ok(h),
        _ => Err(CharVarError::NoGenerators),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCheck {
    pub factor: SparsePoly,
    pub multiplicity: u32,
    pub divides: bool,
    /// How many individual ideal generators the factor divides.
    pub generators_divided: usize,
}

/// Trial-divides `h` by each candidate in turn (with multiplicity) and
/// returns the per-candidate table plus the residual quotient.
pub fn verify_factors(
    h: &SparsePoly,
    candidates: &[SparsePoly],
    gens: &[SparsePoly],
) -> Result<(Vec<FactorCheck>, SparsePoly), CharVarError> {
    let mut residual = h.clone();
    let mut table = Vec::with_capacity(candidates.len());
    for c in candidates {
        if c.nvars() != h.nvars() {
            return Err(CharVarError::VariableCount {
                expected: h.nvars(),
                got: c.nvars(),
            });
        }
        let c = c.canonical();
        let (multiplicity, rest) = if c.is_constant() {
            (0, residual.clone())
        } else {
            residual.multiplicity_of(&c)
        };
        residual = rest;
        let generators_divided = gens.par_iter().filter(|g| c.divides(g)).count();
        table.push(FactorCheck {
            factor: c,
            multiplicity,
            divides: multiplicity >= 1,
            generators_divided,
        });
    }
    Ok((table, residual))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharVarietyResult {
    pub generators: Vec<IdealGenerator>,
    pub hypersurface: SparsePoly,
    pub factors: Vec<FactorCheck>,
    pub residual: SparsePoly,
}

impl CharVarietyResult {
    /// Product of verified factors (with multiplicity) times the residual.
    pub fn reassembled(&self) -> SparsePoly {
        self.factors.iter().fold(self.residual.clone(), |acc, f| {
            &acc * &f.factor.pow(f.multiplicity)
        })
    }
}

/// Generators, hypersurface and factor table in one pass.
pub fn character_variety(
    p: &Presentation,
    candidates: &[SparsePoly],
) -> Result<CharVarietyResult, CharVarError> {
    let generators = ideal_generator_records(p)?;
    let polys: Vec<SparsePoly> = generators.iter().map(|g| g.poly.clone()).collect();
    let hypersurface = hypersurface_part(&polys)?;
    let (factors, residual) = verify_factors(&hypersurface, candidates, &polys)?;
    Ok(CharVarietyResult {
        generators,
        hypersurface,
        factors,
        residual,
    })
}

/// Every permutation of `0..n` in lexicographic order, identity first.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// First variable assignment (candidate variable `i` ↦ engine coordinate
/// `perm[i]`) under which the candidate divides `h`.
pub fn match_variables(h: &SparsePoly, candidate: &SparsePoly) -> Option<Vec<usize>> {
    assert_eq!(h.nvars(), candidate.nvars(), "variable count mismatch");
    permutations(h.nvars())
        .into_par_iter()
        .find_first(|perm| candidate.permute_variables(perm).divides(h))
}

/// Like [`match_variables`] but against a list: returns the permutation and
/// the index of the first polynomial it divides.
pub fn match_variables_any(
    polys: &[SparsePoly],
    candidate: &SparsePoly,
) -> Option<(Vec<usize>, usize)> {
    permutations(candidate.nvars())
        .into_par_iter()
        .find_map_first(|perm| {
            let c = candidate.permute_variables(&perm);
            polys.iter().position(|g| c.divides(g)).map(|i| (perm, i))
        })
}

/// Named factors that recur in the link and singular-fiber varieties.
pub fn factor_library(nvars: usize) -> Vec<(&'static str, SparsePoly)> {
    let rank2: &[(&str, &str)] = &[
        ("f_H", "x*y*z - x^2 - y^2 - z^2 + 4"),
        ("y", "y"),
        ("y^2-1", "y^2 - 1"),
        ("x-y", "x - y"),
        ("xy-z+1", "x*y - z + 1"),
        ("x^2+xy+y^2-3", "x^2 + x*y + y^2 - 3"),
        ("y-z^2+2", "y - z^2 + 2"),
        ("L5a1", "x*y^2*z - y^3 - x^2*y - x*z + 2*y"),
        ("L13n5885", "x^2*y^2 - x*y*z - x^2 + 1"),
        ("L6a2", "x*y^3*z - x^2*y^2 - y^4 - x*y*z + 3*y^2 - 1"),
        ("f_1", "x*y^3 - y^2*z - x^2 - 2*x*y + z + 2"),
        ("f_2", "y^4 - x^2*z + x*y - 4*y^2 + z + 2"),
    ];
    let rank3: &[(&str, &str)] = &[
        (
            "f_H+wxk-2k^2",
            "x*y*z - x^2 - y^2 - z^2 + 4 + w*x*k - 2*k^2",
        ),
        ("uk^2+vx-2u", "u*k^2 + v*x - 2*u"),
        ("vk^2+ux-2v", "v*k^2 + u*x - 2*v"),
        ("wk^2+xk-2w", "w*k^2 + x*k - 2*w"),
        ("k^3+wx-2k", "k^3 + w*x - 2*k"),
        ("u^2-k^2", "u^2 - k^2"),
        ("uv-wk", "u*v - w*k"),
        ("v^2-k^2", "v^2 - k^2"),
        ("uw-vk", "u*w - v*k"),
        ("vw-uk", "v*w - u*k"),
        ("w^2-k^2", "w^2 - k^2"),
        ("uy-2w", "u*y - 2*w"),
        ("vy-2k", "v*y - 2*k"),
        ("wy-2u", "w*y - 2*u"),
        ("uz-2k", "u*z - 2*k"),
        ("vz-2w", "v*z - 2*w"),
        ("wz-2v", "w*z - 2*v"),
        ("yk-2v", "y*k - 2*v"),
        ("zk-2u", "z*k - 2*u"),
    ];
    let list = match nvars {
        3 => rank2,
        7 => rank3,
        _ => &[],
    };
    list.iter()
        .map(|(name, text)| (*name, SparsePoly::parse(text, nvars).unwrap()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{basic_traces, IntSl2};

    fn pres(s: &str) -> Presentation {
        s.parse().unwrap()
    }

    fn p3(s: &str) -> SparsePoly {
        SparsePoly::parse(s, 3).unwrap()
    }

    #[test]
    fn hopf_generators() {
        let recs = ideal_generator_records(&pres("a,b | [a,b]")).unwrap();
        assert!(recs[0].test_word.is_empty());
        assert_eq!(recs[0].poly, p3("x^2 + y^2 + z^2 - x*y*z - 4"));
        let fh = p3("x*y*z - x^2 - y^2 - z^2 + 4");
        assert!(recs.iter().all(|g| fh.divides(&g.poly)));
        let gens: Vec<_> = recs.into_iter().map(|g| g.poly).collect();
        assert_eq!(hypersurface_part(&gens).unwrap(), fh);
    }

    #[test]
    fn trivial_relator_has_no_generators() {
        let p = Presentation::new(2, vec![]);
        assert!(ideal_generators(&p).unwrap().is_empty());
        assert_eq!(hypersurface_part(&[]), Err(CharVarError::NoGenerators));
    }

    #[test]
    fn commuting_matrices_satisfy_hopf_generators() {
        let m = IntSl2::new(2, 1, 1, 1).unwrap();
        let m2 = m.mul(&m);
        let m3 = m2.mul(&m);
        let gens = ideal_generators(&pres("a,b | [a,b]")).unwrap();
        for (a, b) in [(&m, &m2), (&m3, &m), (&m2, &m3)] {
            let t = basic_traces(
                crate::trace::TraceCoordinates::new(2).unwrap(),
                &[a.clone(), b.clone()],
            )
            .unwrap();
            for g in &gens {
                assert_eq!(g.evaluate_int(&t).unwrap(), 0.into());
            }
        }
    }

    #[test]
    fn factor_table() {
        let fh = p3("x*y*z - x^2 - y^2 - z^2 + 4");
        let h = &fh * &p3("y^2 - 1");
        let (t, r) = verify_factors(
            &h,
            &[fh.clone(), p3("x - y"), p3("y - 1"), p3("y + 1")],
            &[],
        )
        .unwrap();
        let mult: Vec<u32> = t.iter().map(|f| f.multiplicity).collect();
        assert_eq!(mult, vec![1, 0, 1, 1]);
        assert!(r.is_one());
        let (t, _) = verify_factors(&fh, &[p3("x - y")], &[]).unwrap();
        assert!(!t[0].divides);
    }

    #[test]
    fn permutation_enumeration() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        assert_eq!(ps[0], vec![0, 1, 2, 3]);
        assert_eq!(ps[23], vec![3, 2, 1, 0]);
        assert_eq!(permutations(7).len(), 5040);
    }

    #[test]
    fn match_variables_basics() {
        let h = SparsePoly::parse("k*x - k*u", 7).unwrap();
        assert_eq!(
            match_variables(&h, &SparsePoly::one(7)),
            Some((0..7).collect())
        );
        let cand = SparsePoly::parse("k - x", 7).unwrap();
        let perm = match_variables(&h, &cand).unwrap();
        assert!(cand.permute_variables(&perm).divides(&h));
        assert_eq!(
            match_variables(&h, &SparsePoly::parse("k^2 + 1", 7).unwrap()),
            None
        );
    }
}
