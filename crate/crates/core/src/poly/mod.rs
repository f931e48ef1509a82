//! Exact sparse multivariate polynomials over the integers.
//!
//! Terms are kept in a map ordered by graded lexicographic order with
//! variable 0 largest, so the leading term is the last entry. Canonical
//! outputs (`canonical`, `gcd`) are primitive with a positive leading
//! coefficient.

mod gcd;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use gcd::{gcd, gcd_all};
pub use parse::PolyParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointLength { expected: usize, got: usize },
    #[error("variable index {var} out of range for {nvars} variables")]
    BadVariable { var: usize, nvars: usize },
}

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Default variable names: `x,y,z` (3), `x,y,z,t` (4), `k,x,y,z,u,v,w` (7),
/// `x` (1), otherwise `x0, x1, ...`.
pub fn default_names(nvars: usize) -> Vec<String> {
    let fixed: &[&str] = match nvars {
        1 => &["x"],
        2 => &["x", "y"],
        3 => &["x", "y", "z"],
        4 => &["x", "y", "z", "t"],
        7 => &["k", "x", "y", "z", "u", "v", "w"],
        _ => &[],
    };
    if fixed.is_empty() {
        (0..nvars).map(|i| format!("x{i}")).collect()
    } else {
        fixed.iter().map(|s| s.to_string()).collect()
    }
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c.into());
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(e), BigInt::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Parses `x*y*z - x^2 + 4` using the default names for `nvars`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, PolyParseError> {
        parse::parse_poly(text, &default_names(nvars))
    }

    pub fn parse_with(text: &str, names: &[&str]) -> Result<Self, PolyParseError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        parse::parse_poly(text, &names)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.degree() == 0 && c.is_one())
    }

    /// Constant coefficient value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Variables with positive degree.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_nvars(&self, other: &SparsePoly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::NvarsMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_nvars(other)?;
        let mut out = SparsePoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigInt) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m2, k)| (m2.mul(m), k * c))
                .collect(),
        }
    }

    /// Divides every coefficient by `c`; `None` unless all divide exactly.
    pub fn div_integer(&self, c: &BigInt) -> Option<SparsePoly> {
        let mut terms = BTreeMap::new();
        for (m, k) in &self.terms {
            let (q, r) = k.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(SparsePoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Non-negative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the positive integer content; keeps the sign.
    pub fn primitive_part(&self) -> SparsePoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_integer(&c).expect("content divides")
        }
    }

    /// Multiplies by -1 if the leading coefficient is negative.
    pub fn normalize_sign(&self) -> SparsePoly {
        if self.leading_coefficient().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn canonical(&self) -> SparsePoly {
        self.primitive_part().normalize_sign()
    }

    /// Equality up to a sign.
    pub fn eq_up_to_sign(&self, other: &SparsePoly) -> bool {
        self == other || *self == -other
    }

    /// Exact quotient `q` with `self = q * g`, or `NotDivisible`.
    pub fn exact_divide(&self, g: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check_nvars(g)?;
        let (lm, lc) = g.leading_term().ok_or(PolyError::DivisionByZero)?;
        let mut r = self.clone();
        let mut q = SparsePoly::zero(self.nvars);
        while let Some((rm, rc)) = r.leading_term() {
            let m = rm.div(lm).ok_or(PolyError::NotDivisible)?;
            let (c, rem) = rc.div_rem(lc);
            if !rem.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let step = g.mul_term(&m, &c);
            for (sm, sc) in step.terms {
                r.add_term(sm, -sc);
            }
            q.add_term(m, c);
        }
        Ok(q)
    }

    pub fn divides(&self, f: &SparsePoly) -> bool {
        f.exact_divide(self).is_ok()
    }

    /// Largest `k` with `g^k | self`, and the cofactor. `g` must be non-constant.
    pub fn multiplicity_of(&self, g: &SparsePoly) -> (u32, SparsePoly) {
        assert!(!g.is_constant(), "multiplicity of a constant factor");
        let mut k = 0;
        let mut cur = self.clone();
        if cur.is_zero() {
            return (0, cur);
        }
        while let Ok(q) = cur.exact_divide(g) {
            k += 1;
            cur = q;
        }
        (k, cur)
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn evaluate_int(&self, point: &[BigInt]) -> Result<BigInt, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation. Panics on a length mismatch.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(&m.0) {
                    t *= x.powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Adds a trailing variable `t` so every term has the total degree of `self`.
    pub fn homogenize(&self) -> SparsePoly {
        let d = self.total_degree().unwrap_or(0);
        let mut out = SparsePoly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.push(d - m.degree());
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Sets the last variable to 1 and drops it.
    pub fn dehomogenize(&self) -> SparsePoly {
        assert!(self.nvars > 0);
        let mut out = SparsePoly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            out.add_term(Monomial(m.0[..self.nvars - 1].to_vec()), c.clone());
        }
        out
    }

    pub fn partial_derivative(&self, var: usize) -> Result<SparsePoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVariable {
                var,
                nvars: self.nvars,
            });
        }
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut ex = m.0.clone();
                ex[var] -= 1;
                out.add_term(Monomial(ex), c * BigInt::from(e));
            }
        }
        Ok(out)
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_variables(&self, perm: &[usize]) -> SparsePoly {
        assert_eq!(perm.len(), self.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes a polynomial for each variable.
    pub fn compose(&self, images: &[SparsePoly]) -> SparsePoly {
        assert_eq!(images.len(), self.nvars);
        let n = images.first().map_or(0, |p| p.nvars);
        let mut out = SparsePoly::zero(n);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(n, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    pub fn display_with(&self, names: &[impl AsRef<str>]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].as_ref().to_string()),
                    _ => factors.push(format!("{}^{}", names[v].as_ref(), e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names(self.nvars)))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&SparsePoly> for &SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: &SparsePoly) -> SparsePoly {
                self.$try(rhs).expect("variable count mismatch")
            }
        }
        impl $tr<SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$try(&rhs).expect("variable count mismatch")
            }
        }
        impl $tr<&SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: &SparsePoly) -> SparsePoly {
                (&self).$try(rhs).expect("variable count mismatch")
            }
        }
        impl $tr<SparsePoly> for &SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                self.$try(&rhs).expect("variable count mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SparsePoly {
        SparsePoly::parse(s, 3).unwrap()
    }

    fn fh() -> SparsePoly {
        p("x*y*z - x^2 - y^2 - z^2 + 4")
    }

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        assert!((&fh() + &p("x^2 + y^2 + z^2 - x*y*z - 4")).is_zero());
        assert_eq!(&p("x - 2") * &p("x + 2"), p("x^2 - 4"));
        assert_eq!(p("x + 1").pow(3), p("x^3 + 3*x^2 + 3*x + 1"));
    }

    #[test]
    fn nvars_mismatch_is_an_error() {
        let a = SparsePoly::var(2, 0);
        let b = SparsePoly::var(3, 0);
        assert_eq!(a.try_add(&b), Err(PolyError::NvarsMismatch(2, 3)));
    }

    #[test]
    fn exact_divide_examples() {
        let yfh = &p("y") * &fh();
        assert_eq!(yfh.exact_divide(&fh()).unwrap(), p("y"));
        assert_eq!(fh().exact_divide(&p("x - y")), Err(PolyError::NotDivisible));
        assert!(SparsePoly::zero(3).exact_divide(&fh()).unwrap().is_zero());
        assert_eq!(
            fh().exact_divide(&SparsePoly::zero(3)),
            Err(PolyError::DivisionByZero)
        );
        // coefficient divisibility matters over the integers
        assert_eq!(
            p("x + 1").exact_divide(&p("2*x + 2")),
            Err(PolyError::NotDivisible)
        );
    }

    #[test]
    fn multiplicity() {
        let f = &p("x - y").pow(3) * &fh();
        let (k, rest) = f.multiplicity_of(&p("x - y"));
        assert_eq!(k, 3);
        assert_eq!(rest, fh());
        assert_eq!(fh().multiplicity_of(&p("x - y")).0, 0);
    }

    #[test]
    fn evaluate_examples() {
        let f = fh();
        assert_eq!(f.evaluate(&q(&[2, 2, 2])).unwrap(), BigRational::zero());
        assert_eq!(
            f.evaluate(&q(&[0, 0, 0])).unwrap(),
            BigRational::from_integer(4.into())
        );
        assert_eq!(f.evaluate(&q(&[2, 0, 0])).unwrap(), BigRational::zero());
        assert_eq!(
            f.evaluate(&q(&[0, 0, 1])).unwrap(),
            BigRational::from_integer(3.into())
        );
        assert!(f.evaluate(&q(&[1, 2])).is_err());
    }

    #[test]
    fn homogenize_examples() {
        let sigma = fh().homogenize();
        let expected = SparsePoly::parse("x*y*z - x^2*t - y^2*t - z^2*t + 4*t^3", 4).unwrap();
        assert_eq!(sigma, expected);
        assert_eq!(
            SparsePoly::constant(3, 4).homogenize(),
            SparsePoly::constant(4, 4)
        );
        assert_eq!(
            p("x^2 + 1").homogenize(),
            SparsePoly::parse("x^2 + t^2", 4).unwrap()
        );
        assert_eq!(sigma.dehomogenize(), fh());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(fh().partial_derivative(0).unwrap(), p("y*z - 2*x"));
        let sigma = fh().homogenize();
        assert_eq!(
            sigma.partial_derivative(3).unwrap(),
            SparsePoly::parse("-x^2 - y^2 - z^2 + 12*t^2", 4).unwrap()
        );
        assert!(SparsePoly::constant(3, 7)
            .partial_derivative(0)
            .unwrap()
            .is_zero());
        assert!(fh().partial_derivative(3).is_err());
    }

    #[test]
    fn display_is_graded_lex() {
        assert_eq!(fh().to_string(), "x*y*z - x^2 - y^2 - z^2 + 4");
        assert_eq!((-fh()).to_string(), "-x*y*z + x^2 + y^2 + z^2 - 4");
        assert_eq!(SparsePoly::zero(3).to_string(), "0");
        assert_eq!(p("2*x*y^2*z - 3").to_string(), "2*x*y^2*z - 3");
    }

    #[test]
    fn canonical_form() {
        let f = p("-4*x*y*z + 4*x^2 - 8");
        assert_eq!(f.canonical(), p("x*y*z - x^2 + 2"));
        assert_eq!(f.content(), BigInt::from(4));
        assert_eq!(f.primitive_part(), p("-x*y*z + x^2 - 2"));
    }

    #[test]
    fn permute_and_compose() {
        let f = p("x*y^2");
        assert_eq!(f.permute_variables(&[2, 0, 1]), p("x^2*z"));
        let g = f.compose(&[p("x + 1"), p("z"), p("y")]);
        assert_eq!(g, p("x*z^2 + z^2"));
    }
}
