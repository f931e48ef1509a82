//! Substitution matrices of free-group endomorphisms, Perron-Frobenius data,
//! and census invariance under repeated substitution.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::census::{low_index_census, CensusSequence};
use crate::fp::{EndoError, Endomorphism, Presentation};
use crate::poly::{gcd, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("the zero matrix has no Perron-Frobenius eigenvalue")]
    ZeroMatrix,
    #[error("matrix must be square and non-negative")]
    BadMatrix,
    #[error(transparent)]
    Endo(#[from] EndoError),
}

/// Entry (i, j) counts occurrences of generator i, either sign, in the image
/// of generator j.
pub fn substitution_matrix(e: &Endomorphism) -> DMatrix<i64> {
    let n = e.rank();
    let mut m = DMatrix::zeros(n, n);
    for (j, img) in e.images().iter().enumerate() {
        for l in img.letters() {
            m[(l.gen as usize, j)] += 1;
        }
    }
    m
}

/// Coefficients of det(λI − M), constant term first (Faddeev–LeVerrier).
pub fn characteristic_coefficients(m: &DMatrix<i64>) -> Vec<BigInt> {
    let n = m.nrows();
    let a = m.map(BigInt::from);
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = DMatrix::<BigInt>::from_element(n, n, BigInt::zero());
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = &a * &mk;
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        let prod = &a * &next;
        let tr: BigInt = (0..n).map(|i| prod[(i, i)].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
        mk = next;
    }
    c
}

fn is_positive(m: &DMatrix<bool>) -> bool {
    m.iter().all(|&b| b)
}

fn bool_mul(a: &DMatrix<bool>, b: &DMatrix<bool>) -> DMatrix<bool> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |i, j| (0..n).any(|k| a[(i, k)] && b[(k, j)]))
}

/// Smallest k ≤ (n−1)²+1 with Mᵏ strictly positive, if any (Wielandt bound).
pub fn primitivity_exponent(m: &DMatrix<i64>) -> Option<u32> {
    let n = m.nrows();
    let b = m.map(|v| v > 0);
    let mut p = b.clone();
    let bound = (n.saturating_sub(1)).pow(2) + 1;
    for k in 1..=bound {
        if is_positive(&p) {
            return Some(k as u32);
        }
        p = bool_mul(&p, &b);
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfAnalysis {
    pub primitive: bool,
    pub primitivity_exponent: Option<u32>,
    /// Characteristic polynomial in one variable.
    pub char_poly: SparsePoly,
    pub pf_eigenvalue: f64,
    /// The eigenvalue to 30 decimal places.
    pub pf_decimal: String,
}

fn eval_rat(c: &[BigInt], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, k| {
        acc * x + BigRational::from_integer(k.clone())
    })
}

fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// A root of `c` in `[lo, hi]`, given a sign change there, by exact
/// bisection down to width 10⁻⁴⁰.
fn bisect(c: &[BigInt], mut lo: BigRational, mut hi: BigRational) -> BigRational {
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(40));
    let two = BigRational::from_integer(2.into());
    let slo = eval_rat(c, &lo).signum();
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / &two;
        let v = eval_rat(c, &mid);
        if v.is_zero() {
            return mid;
        }
        if v.signum() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

fn decimal(x: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let v = (x * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let (int, frac) = (&v / &scale, (&v % &scale).abs());
    format!("{int}.{:0>width$}", frac, width = digits)
}

/// Primitivity, characteristic polynomial and dominant eigenvalue.
pub fn pf_analysis(m: &DMatrix<i64>) -> Result<PfAnalysis, SubstitutionError> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n || m.iter().any(|&v| v < 0) {
        return Err(SubstitutionError::BadMatrix);
    }
    if m.iter().all(|&v| v == 0) {
        return Err(SubstitutionError::ZeroMatrix);
    }
    let exp = primitivity_exponent(m);
    let c = characteristic_coefficients(m);
    let char_poly = SparsePoly::from_terms(
        1,
        c.iter()
            .enumerate()
            .filter(|(_, k)| !k.is_zero())
            .map(|(i, k)| (vec![i as u32], k.clone())),
    );
    // roots of the squarefree part are simple, so bisection sees a sign change
    let sf = char_poly
        .exact_divide(&gcd(
            &char_poly,
            &char_poly.partial_derivative(0).expect("one variable"),
        ))
        .expect("gcd divides");
    let mut sc = vec![BigInt::zero(); sf.degree_in(0) as usize + 1];
    for (mono, k) in sf.terms() {
        sc[mono.exps()[0] as usize] = k.clone();
    }
    // power iteration for a starting estimate
    let mf = m.map(|v| v as f64);
    let mut v = nalgebra::DVector::from_element(n, 1.0);
    let mut est = 0.0;
    for _ in 0..2000 {
        let w = &mf * &v;
        let norm = w.norm();
        if norm == 0.0 {
            break;
        }
        est = norm / v.norm();
        v = w / norm;
    }
    let changes = |lo: &BigRational, hi: &BigRational| {
        eval_rat(&sc, lo).signum() != eval_rat(&sc, hi).signum()
    };
    let (lo, hi) = (
        rat_from_f64((est - 1e-6).max(0.0)),
        rat_from_f64(est + 1e-6),
    );
    let root = if changes(&lo, &hi) {
        bisect(&sc, lo, hi)
    } else {
        // scan down from the largest column sum, which bounds every eigenvalue
        let upper = (0..n).map(|j| m.column(j).sum()).max().unwrap_or(0) as f64 + 1.0;
        let f = |x: f64| {
            sc.iter()
                .rev()
                .fold(0.0, |acc, k| acc * x + k.to_f64().unwrap())
        };
        let steps = 20_000;
        let h = upper / steps as f64;
        (0..steps)
            .map(|i| upper - h * i as f64)
            .find(|&x| f(x - h).signum() != f(x).signum() || f(x - h) == 0.0)
            .map(|x| bisect(&sc, rat_from_f64(x - h), rat_from_f64(x)))
            .unwrap_or_else(BigRational::zero)
    };
    Ok(PfAnalysis {
        primitive: exp.is_some(),
        primitivity_exponent: exp,
        char_poly,
        pf_eigenvalue: root.to_f64().unwrap_or(f64::NAN),
        pf_decimal: decimal(&root, 30),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceRow {
    pub index: usize,
    pub original: u64,
    pub substituted: u64,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionReport {
    pub matrix: DMatrix<i64>,
    pub analysis: Option<PfAnalysis>,
    pub substituted: Presentation,
    pub invariance: Vec<InvarianceRow>,
}

impl SubstitutionReport {
    pub fn all_equal(&self) -> bool {
        self.invariance.iter().all(|r| r.equal)
    }
}

fn rows(a: &CensusSequence, b: &CensusSequence) -> Vec<InvarianceRow> {
    a.counts
        .iter()
        .zip(&b.counts)
        .enumerate()
        .map(|(i, (&x, &y))| InvarianceRow {
            index: i + 1,
            original: x,
            substituted: y,
            equal: x == y,
        })
        .collect()
}

/// Applies `e` to every relator `repeats` times and compares the censuses.
pub fn invariance_check(
    p: &Presentation,
    e: &Endomorphism,
    max_index: usize,
    repeats: usize,
) -> Result<SubstitutionReport, SubstitutionError> {
    let power = e.power(repeats)?;
    let substituted = p.map_relators(&power)?;
    let before = low_index_census(p, max_index);
    let after = low_index_census(&substituted, max_index);
    let matrix = substitution_matrix(e);
    Ok(SubstitutionReport {
        analysis: pf_analysis(&matrix).ok(),
        matrix,
        substituted,
        invariance: rows(&before, &after),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(n: usize, v: &[i64]) -> DMatrix<i64> {
        DMatrix::from_row_slice(n, n, v)
    }

    #[test]
    fn bundled_maps() {
        assert_eq!(
            substitution_matrix(&Endomorphism::golden()),
            mat(2, &[1, 1, 1, 0])
        );
        assert_eq!(
            substitution_matrix(&Endomorphism::silver()),
            mat(2, &[2, 1, 1, 0])
        );
        assert_eq!(
            substitution_matrix(&Endomorphism::tribonacci()),
            mat(3, &[0, 1, 1, 1, 1, 0, 0, 1, 0])
        );
    }

    #[test]
    fn eigenvalues() {
        let names = ["λ"];
        let g = pf_analysis(&mat(2, &[1, 1, 1, 0])).unwrap();
        assert!(g.primitive);
        assert_eq!(g.char_poly.display_with(&names), "λ^2 - λ - 1");
        assert!((g.pf_eigenvalue - 1.618_033_988_749_895).abs() < 1e-12);
        assert!(g.pf_decimal.starts_with("1.6180339887498948482045868343"));
        let s = pf_analysis(&mat(2, &[2, 1, 1, 0])).unwrap();
        assert_eq!(s.char_poly.display_with(&names), "λ^2 - 2*λ - 1");
        assert!((s.pf_eigenvalue - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        let t = pf_analysis(&mat(3, &[0, 1, 1, 1, 1, 0, 0, 1, 0])).unwrap();
        assert_eq!(t.char_poly.display_with(&names), "λ^3 - λ^2 - λ - 1");
        assert_eq!(t.primitivity_exponent, Some(3));
        assert!((t.pf_eigenvalue - 1.839_286_755_214_161).abs() < 1e-12);
    }

    #[test]
    fn imprimitive_and_degenerate() {
        let swap = pf_analysis(&mat(2, &[0, 1, 1, 0])).unwrap();
        assert!(!swap.primitive);
        assert!((swap.pf_eigenvalue - 1.0).abs() < 1e-12);
        assert_eq!(
            pf_analysis(&mat(2, &[0, 0, 0, 0])),
            Err(SubstitutionError::ZeroMatrix)
        );
        let id = pf_analysis(&mat(2, &[1, 0, 0, 1])).unwrap();
        assert!(!id.primitive);
        assert!((id.pf_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_map_is_invariant() {
        let p: Presentation = "a,b | ab^3a^2bAB^3A^2B".parse().unwrap();
        let r = invariance_check(&p, &Endomorphism::identity(2), 4, 1).unwrap();
        assert!(r.all_equal());
        assert_eq!(r.substituted, p);
    }
}
