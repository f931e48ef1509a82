//! Multivariate GCD over the integers: recursive content / primitive-part
//! splitting with a subresultant remainder sequence in the highest-index
//! variable present.

use super::{Monomial, SparsePoly};

/// Coefficients of `f` viewed as a polynomial in `var`, lowest degree first.
/// Coefficients keep the full variable count but do not involve `var`.
fn to_univariate(f: &SparsePoly, var: usize) -> Vec<SparsePoly> {
    let deg = f.degree_in(var) as usize;
    let mut coeffs = vec![SparsePoly::zero(f.nvars); deg + 1];
    for (m, c) in &f.terms {
        let mut e = m.0.clone();
        let k = e[var] as usize;
        e[var] = 0;
        coeffs[k].add_term(Monomial(e), c.clone());
    }
    coeffs
}

fn from_univariate(coeffs: &[SparsePoly], var: usize, nvars: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(nvars);
    for (k, c) in coeffs.iter().enumerate() {
        for (m, v) in &c.terms {
            let mut e = m.0.clone();
            e[var] += k as u32;
            out.add_term(Monomial(e), v.clone());
        }
    }
    out
}

fn trim(mut v: Vec<SparsePoly>) -> Vec<SparsePoly> {
    while v.len() > 1 && v.last().is_some_and(SparsePoly::is_zero) {
        v.pop();
    }
    v
}

fn is_zero_uni(v: &[SparsePoly]) -> bool {
    v.iter().all(SparsePoly::is_zero)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &[SparsePoly], b: &[SparsePoly]) -> Vec<SparsePoly> {
    let db = degree(b);
    let lcb = &b[db];
    let mut r = trim(a.to_vec());
    let mut e = (degree(&r) + 1).saturating_sub(db) as u32;
    while !is_zero_uni(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let lead = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<SparsePoly> = r.iter().map(|c| c * lcb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(&lead * bc);
        }
        debug_assert!(next[dr].is_zero());
        next.pop();
        if next.is_empty() {
            next.push(SparsePoly::zero(lcb.nvars));
        }
        r = trim(next);
        e -= 1;
    }
    if e > 0 {
        let f = lcb.pow(e);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

fn div_uni(v: &[SparsePoly], d: &SparsePoly) -> Vec<SparsePoly> {
    v.iter()
        .map(|c| c.exact_divide(d).expect("subresultant division is exact"))
        .collect()
}

fn degree(v: &[SparsePoly]) -> usize {
    v.len() - 1
}

/// Content of `f` with respect to `var`: gcd of its coefficients.
fn content_in(f: &SparsePoly, var: usize) -> SparsePoly {
    let coeffs = to_univariate(f, var);
    let mut nonzero: Vec<&SparsePoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| (c.total_degree(), c.num_terms()));
    let mut g = SparsePoly::zero(f.nvars);
    for c in nonzero {
        g = gcd_rec(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Subresultant PRS on polynomials primitive in `var`; returns the gcd
/// (primitive in `var`, integer content removed).
fn subresultant(f: &SparsePoly, g: &SparsePoly, var: usize) -> SparsePoly {
    let n = f.nvars;
    let (mut a, mut b) = {
        let fa = to_univariate(f, var);
        let ga = to_univariate(g, var);
        if fa.len() >= ga.len() {
            (fa, ga)
        } else {
            (ga, fa)
        }
    };
    let mut gg = SparsePoly::one(n);
    let mut h = SparsePoly::one(n);
    loop {
        let delta = (degree(&a) - degree(&b)) as u32;
        let r = prem(&a, &b);
        if is_zero_uni(&r) {
            break;
        }
        if degree(&r) == 0 {
            return SparsePoly::one(n);
        }
        let divisor = &gg * &h.pow(delta);
        a = b;
        b = div_uni(&r, &divisor);
        gg = a[degree(&a)].clone();
        if delta > 0 {
            let num = gg.pow(delta);
            h = num
                .exact_divide(&h.pow(delta - 1))
                .expect("subresultant h update is exact");
        }
    }
    let b = from_univariate(&b, var, n);
    let c = content_in(&b, var);
    let pp = if c.is_zero() || c.is_constant() {
        b
    } else {
        b.exact_divide(&c).expect("content divides")
    };
    pp.primitive_part()
}

/// GCD with positive integer content removed; sign unspecified.
fn gcd_rec(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    let n = f.nvars;
    if f.is_zero() {
        return g.primitive_part();
    }
    if g.is_zero() {
        return f.primitive_part();
    }
    if f.is_constant() || g.is_constant() {
        return SparsePoly::one(n);
    }
    // cheap exits
    if f.divides(g) {
        return f.primitive_part();
    }
    if g.divides(f) {
        return g.primitive_part();
    }
    let var = (0..n)
        .rev()
        .find(|&v| f.degree_in(v) > 0 || g.degree_in(v) > 0)
        .expect("non-constant polynomial has a variable");
    if f.degree_in(var) == 0 {
        return gcd_rec(f, &content_in(g, var));
    }
    if g.degree_in(var) == 0 {
        return gcd_rec(&content_in(f, var), g);
    }
    let cf = content_in(f, var);
    let cg = content_in(g, var);
    let pf = f.exact_divide(&cf).expect("content divides");
    let pg = g.exact_divide(&cg).expect("content divides");
    let c = gcd_rec(&cf, &cg);
    let h = subresultant(&pf, &pg, var);
    (&c * &h).primitive_part()
}

/// Primitive gcd with positive leading coefficient; `gcd(f, 0)` is the
/// canonical form of `f`, and `gcd(0, 0)` is zero.
pub fn gcd(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    assert_eq!(f.nvars, g.nvars, "variable count mismatch");
    gcd_rec(f, g).normalize_sign()
}

/// Gcd of a list, folding from the smallest polynomials; stops early at 1.
pub fn gcd_all<'a, I>(polys: I) -> Option<SparsePoly>
where
    I: IntoIterator<Item = &'a SparsePoly>,
{
    let mut v: Vec<&SparsePoly> = polys.into_iter().collect();
    let n = v.first()?.nvars;
    v.sort_by_key(|p| (p.total_degree(), p.num_terms()));
    let mut acc = SparsePoly::zero(n);
    for p in v {
        acc = gcd_rec(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
    }
    Some(acc.normalize_sign())
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

    #[test]
    fn gcd_examples() {
        let a = &fh() * &p("y");
        let b = &fh() * &p("y^2 - 1");
        assert_eq!(gcd(&a, &b), fh());
        assert_eq!(gcd(&p("x^2"), &p("y^2")), p("1"));
        let f = p("-6*x*y + 4*z");
        assert_eq!(gcd(&f, &f), p("3*x*y - 2*z"));
        assert_eq!(gcd(&f, &SparsePoly::zero(3)), p("3*x*y - 2*z"));
    }

    #[test]
    fn gcd_needs_content_split() {
        // common factor (x - y) hidden in contents with respect to z
        let a = &p("x - y") * &p("z^2 + x");
        let b = &p("x - y") * &p("x + 1") * &p("z + y");
        assert_eq!(gcd(&a, &b), p("x - y"));
        let c = &p("x*z + y") * &p("x + y + z").pow(2);
        let d = &p("x*z + y") * &p("x - z") * &p("x + y + z");
        assert_eq!(gcd(&c, &d), (&p("x*z + y") * &p("x + y + z")).canonical());
    }

    #[test]
    fn prem_matches_definition() {
        // a = x^3 + 1, b = 2x + 1 in variable x (index 0); prem = 2^3 a mod b
        let a = to_univariate(&p("x^3 + 1"), 0);
        let b = to_univariate(&p("2*x + 1"), 0);
        let r = prem(&a, &b);
        assert_eq!(from_univariate(&r, 0, 3), p("7"));
    }

    #[test]
    fn gcd_all_folds() {
        let gens = vec![&fh() * &p("x"), &fh() * &p("y + 1"), &fh() * &p("z^2")];
        assert_eq!(gcd_all(&gens).unwrap(), fh());
        assert!(gcd_all(std::iter::empty()).is_none());
    }
}
