//! Coset enumeration and the low-index subgroup census.
//!
//! Tables have one column per generator and one per inverse, in the order
//! `a, A, b, B, ...` (see [`Letter::column`]). Cosets are numbered from 0 and
//! coset 0 is always the subgroup itself.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rayon::prelude::*;
use thiserror::Error;

use crate::fp::{Letter, Presentation, Word};

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("coset enumeration exceeded the budget of {0} cosets")]
    BudgetExceeded(usize),
    #[error("subgroup word uses a generator outside the presentation")]
    GeneratorOutOfRange,
}

/// A closed coset table: the permutation action of each generator on the
/// right cosets of a finite-index subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetTable {
    rank: usize,
    n: usize,
    /// Row-major, `2 * rank` columns.
    rows: Vec<u32>,
    subgroup_gens: Vec<Word>,
}

impl CosetTable {
    /// Builds a table from the forward action of each generator.
    /// Panics if some entry is not a permutation.
    pub fn from_permutations(perms: &[Vec<u32>]) -> Self {
        let rank = perms.len();
        let n = perms.first().map_or(1, Vec::len);
        let mut rows = vec![UNDEF; n * 2 * rank];
        for (g, p) in perms.iter().enumerate() {
            assert_eq!(p.len(), n, "permutations of unequal degree");
            for (c, &d) in p.iter().enumerate() {
                rows[c * 2 * rank + 2 * g] = d;
                assert_eq!(
                    rows[d as usize * 2 * rank + 2 * g + 1],
                    UNDEF,
                    "not a permutation"
                );
                rows[d as usize * 2 * rank + 2 * g + 1] = c as u32;
            }
        }
        CosetTable {
            rank,
            n,
            rows,
            subgroup_gens: Vec::new(),
        }
    }

    /// Index of the subgroup (number of cosets).
    pub fn index(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn subgroup_gens(&self) -> &[Word] {
        &self.subgroup_gens
    }

    fn cols(&self) -> usize {
        2 * self.rank
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.rows[coset * self.cols() + l.column()] as usize
    }

    /// Coset reached from `coset` by reading `w` left to right.
    pub fn apply_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Forward action of generator `g` as a permutation of `0..n`.
    pub fn permutation(&self, g: usize) -> Vec<u32> {
        (0..self.n)
            .map(|c| self.rows[c * self.cols() + 2 * g])
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.rows
            .iter()
            .all(|&e| e != UNDEF && (e as usize) < self.n)
            && (0..self.n).all(|c| {
                (0..self.cols()).all(|col| {
                    let d = self.rows[c * self.cols() + col] as usize;
                    self.rows[d * self.cols() + (col ^ 1)] as usize == c
                })
            })
    }

    /// Every relator acts trivially on every coset.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        p.rank() == self.rank
            && self.is_closed()
            && (0..self.n).all(|c| p.relators().iter().all(|r| self.apply_word(c, r) == c))
    }

    /// Each subgroup generator fixes coset 0.
    pub fn fixes_subgroup(&self) -> bool {
        self.subgroup_gens
            .iter()
            .all(|w| self.apply_word(0, w) == 0)
    }

    /// One permutation matrix per generator with `M e_j = e_{j·g}`.
    /// Words act on the right, so `M_{gh} = M_h M_g`.
    pub fn perm_rep(&self) -> Vec<DMatrix<i32>> {
        (0..self.rank)
            .map(|g| {
                let p = self.permutation(g);
                DMatrix::from_fn(self.n, self.n, |i, j| i32::from(p[j] as usize == i))
            })
            .collect()
    }

    /// Text form: one line per generator listing images of cosets 1..n.
    pub fn display_with(&self, names: &[char]) -> String {
        (0..self.rank)
            .map(|g| {
                let imgs: Vec<String> = self
                    .permutation(g)
                    .iter()
                    .map(|d| (d + 1).to_string())
                    .collect();
                format!(
                    "{}: {}",
                    names.get(g).copied().unwrap_or('?'),
                    imgs.join(" ")
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn perm_rep(t: &CosetTable) -> Vec<DMatrix<i32>> {
    t.perm_rep()
}

/// Renumbers cosets in order of first appearance scanning rows from `base`.
/// Returns the standardized row array; entries are all defined.
fn standardize_from(rows: &[u32], n: usize, cols: usize, base: usize) -> Vec<u32> {
    let mut map = vec![UNDEF; n];
    let mut order = Vec::with_capacity(n);
    map[base] = 0;
    order.push(base as u32);
    let mut i = 0;
    while i < order.len() {
        let c = order[i] as usize;
        for col in 0..cols {
            let d = rows[c * cols + col] as usize;
            if map[d] == UNDEF {
                map[d] = order.len() as u32;
                order.push(d as u32);
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(n * cols);
    for &c in &order {
        for col in 0..cols {
            out.push(map[rows[c as usize * cols + col] as usize]);
        }
    }
    out
}

fn relator_columns(p: &Presentation) -> Vec<Vec<usize>> {
    p.relators()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.column()).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Todd-Coxeter (HLT with union-find coincidence handling)

struct Enumerator {
    cols: usize,
    rows: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    budget: usize,
}

impl Enumerator {
    fn get(&self, c: u32, col: usize) -> u32 {
        self.rows[c as usize * self.cols + col]
    }

    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.rows[c as usize * self.cols + col] = d;
    }

    fn count(&self) -> usize {
        self.parent.len()
    }

    fn define(&mut self, c: u32, col: usize) -> Result<(), CensusError> {
        if self.count() >= self.budget {
            return Err(CensusError::BudgetExceeded(self.budget));
        }
        let d = self.count() as u32;
        self.parent.push(d);
        self.rows.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(())
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mux = self.get(mu, x);
                if mux != UNDEF {
                    self.merge(nu, mux);
                } else {
                    let nux = self.get(nu, x ^ 1);
                    if nux != UNDEF {
                        self.merge(mu, nux);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: u32, w: &[usize]) -> Result<(), CensusError> {
        let r = w.len();
        let (mut f, mut b) = (a, a);
        let (mut i, mut j) = (0usize, r);
        loop {
            while i < r && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i >= r {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.get(b, w[j - 1] ^ 1) != UNDEF {
                b = self.get(b, w[j - 1] ^ 1);
                j -= 1;
            }
            if j < i + 1 {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` (HLT
/// strategy). Fails once more than `max_cosets` cosets have been defined.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, CensusError> {
    let rank = p.rank();
    if subgroup
        .iter()
        .any(|w| w.max_generator().is_some_and(|g| g as usize >= rank))
    {
        return Err(CensusError::GeneratorOutOfRange);
    }
    let cols = 2 * rank;
    let mut e = Enumerator {
        cols,
        rows: vec![UNDEF; cols],
        parent: vec![0],
        queue: Vec::new(),
        budget: max_cosets.max(1),
    };
    let rels = relator_columns(p);
    for w in subgroup {
        let w: Vec<usize> = w
            .free_reduce()
            .letters()
            .iter()
            .map(|l| l.column())
            .collect();
        e.scan_and_fill(0, &w)?;
    }
    let mut a = 0u32;
    while (a as usize) < e.count() {
        for r in &rels {
            if !e.live(a) {
                break;
            }
            e.scan_and_fill(a, r)?;
        }
        if e.live(a) {
            for x in 0..cols {
                if e.get(a, x) == UNDEF {
                    e.define(a, x)?;
                }
            }
        }
        a += 1;
    }
    // compress live cosets, then standardize from coset 0
    let live: Vec<u32> = (0..e.count() as u32).filter(|&c| e.live(c)).collect();
    let mut index = vec![UNDEF; e.count()];
    for (k, &c) in live.iter().enumerate() {
        index[c as usize] = k as u32;
    }
    let n = live.len();
    let mut rows = Vec::with_capacity(n * cols);
    for &c in &live {
        for x in 0..cols {
            rows.push(index[e.get(c, x) as usize]);
        }
    }
    let rows = standardize_from(&rows, n, cols, 0);
    Ok(CosetTable {
        rank,
        n,
        rows,
        subgroup_gens: subgroup.to_vec(),
    })
}

// ---------------------------------------------------------------------------
// Low-index census

/// η_1..η_N: conjugacy classes of subgroups of each index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusSequence {
    pub counts: Vec<u64>,
    pub index_bound: usize,
}

#[derive(Clone)]
struct Partial {
    n: usize,
    rows: Vec<u32>,
}

struct Search<'a> {
    cols: usize,
    max: usize,
    rels: &'a [Vec<usize>],
}

enum Node {
    Complete,
    Branch(usize, usize),
}

impl<'a> Search<'a> {
    fn root(&self) -> Option<Partial> {
        let mut s = Partial {
            n: 1,
            rows: vec![UNDEF; self.max * self.cols],
        };
        self.deduce(&mut s).then_some(s)
    }

    /// Scans every relator from every coset until nothing changes; returns
    /// false on a contradiction.
    fn deduce(&self, s: &mut Partial) -> bool {
        let cols = self.cols;
        loop {
            let mut changed = false;
            for c in 0..s.n as u32 {
                for r in self.rels {
                    let len = r.len();
                    let (mut f, mut i) = (c, 0);
                    while i < len {
                        let t = s.rows[f as usize * cols + r[i]];
                        if t == UNDEF {
                            break;
                        }
                        f = t;
                        i += 1;
                    }
                    if i == len {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c, len);
                    while j > i {
                        let t = s.rows[b as usize * cols + (r[j - 1] ^ 1)];
                        if t == UNDEF {
                            break;
                        }
                        b = t;
                        j -= 1;
                    }
                    if j == i {
                        return false;
                    }
                    if j == i + 1 {
                        let inv = b as usize * cols + (r[i] ^ 1);
                        if s.rows[inv] != UNDEF {
                            return false;
                        }
                        s.rows[f as usize * cols + r[i]] = b;
                        s.rows[inv] = f;
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn next(&self, s: &Partial) -> Node {
        let cols = self.cols;
        match s.rows[..s.n * cols].iter().position(|&e| e == UNDEF) {
            None => Node::Complete,
            Some(k) => Node::Branch(k / cols, k % cols),
        }
    }

    fn children(&self, s: &Partial, c: usize, col: usize) -> Vec<Partial> {
        let cols = self.cols;
        let mut out = Vec::new();
        let new = if s.n < self.max { Some(s.n) } else { None };
        for d in (0..s.n).chain(new) {
            if d < s.n && s.rows[d * cols + (col ^ 1)] != UNDEF {
                continue;
            }
            let mut t = s.clone();
            if d == s.n {
                t.n += 1;
            }
            t.rows[c * cols + col] = d as u32;
            t.rows[d * cols + (col ^ 1)] = c as u32;
            if self.deduce(&mut t) {
                out.push(t);
            }
        }
        out
    }

    /// True when no other base coset yields a smaller standardized table.
    fn canonical(&self, s: &Partial) -> bool {
        let rows = &s.rows[..s.n * self.cols];
        (1..s.n).all(|b| standardize_from(rows, s.n, self.cols, b).as_slice() >= rows)
    }

    fn dfs(&self, s: Partial, out: &mut Vec<Partial>) {
        match self.next(&s) {
            Node::Complete => {
                if self.canonical(&s) {
                    out.push(s);
                }
            }
            Node::Branch(c, col) => {
                for t in self.children(&s, c, col) {
                    self.dfs(t, out);
                }
            }
        }
    }
}

/// Canonical coset tables of all subgroups of index ≤ `max_index`, one per
/// conjugacy class, sorted by index and then table contents.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Vec<CosetTable> {
    let rank = p.rank();
    let cols = 2 * rank;
    let rels = relator_columns(p);
    let search = Search {
        cols,
        max: max_index.max(1),
        rels: &rels,
    };
    let Some(root) = search.root() else {
        return Vec::new();
    };
    // expand breadth-first to get enough independent subtrees
    let target = 8 * rayon::current_num_threads().max(1);
    let mut frontier = vec![root];
    let mut done = Vec::new();
    while !frontier.is_empty() && frontier.len() < target {
        let mut next = Vec::new();
        for s in frontier {
            match search.next(&s) {
                Node::Complete => {
                    if search.canonical(&s) {
                        done.push(s);
                    }
                }
                Node::Branch(c, col) => next.extend(search.children(&s, c, col)),
            }
        }
        frontier = next;
    }
    let found: Vec<Vec<Partial>> = frontier
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            search.dfs(s, &mut out);
            out
        })
        .collect();
    let mut tables: Vec<CosetTable> = done
        .into_iter()
        .chain(found.into_iter().flatten())
        .map(|s| CosetTable {
            rank,
            n: s.n,
            rows: s.rows[..s.n * cols].to_vec(),
            subgroup_gens: Vec::new(),
        })
        .collect();
    tables.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.rows.cmp(&b.rows)));
    tables
}

pub fn low_index_census(p: &Presentation, max_index: usize) -> CensusSequence {
    let mut counts = vec![0u64; max_index];
    for t in low_index_subgroups(p, max_index) {
        counts[t.n - 1] += 1;
    }
    CensusSequence {
        counts,
        index_bound: max_index,
    }
}

/// Runs the census once per bound 1..=N and reports the wall time of each.
/// The counts come from the final run; every shorter run must agree with
/// its prefix.
pub fn low_index_census_timed(
    p: &Presentation,
    max_index: usize,
) -> (CensusSequence, Vec<Duration>) {
    let mut times = Vec::with_capacity(max_index);
    let mut last = None;
    for d in 1..=max_index {
        let t = Instant::now();
        let seq = low_index_census(p, d);
        times.push(t.elapsed());
        if let Some(prev) = &last {
            let prev: &CensusSequence = prev;
            assert_eq!(
                prev.counts[..],
                seq.counts[..d - 1],
                "census prefix mismatch"
            );
        }
        last = Some(seq);
    }
    (
        last.unwrap_or(CensusSequence {
            counts: Vec::new(),
            index_bound: 0,
        }),
        times,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        s.parse().unwrap()
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let t = todd_coxeter(&pres("a | a^3"), &[], 100).unwrap();
        assert_eq!(t.index(), 3);
        assert_eq!(t.permutation(0), vec![1, 2, 0]);
        assert!(t.satisfies(&pres("a | a^3")));
    }

    #[test]
    fn modular_group_does_not_close() {
        let p = pres("a,b | a^2, b^3");
        assert_eq!(
            todd_coxeter(&p, &[], 10),
            Err(CensusError::BudgetExceeded(10))
        );
    }

    #[test]
    fn finite_groups_and_subgroups() {
        // S3 = <a,b | a^2, b^3, (ab)^2>
        let s3 = pres("a,b | a^2, b^3, (ab)^2");
        assert_eq!(todd_coxeter(&s3, &[], 1000).unwrap().index(), 6);
        let t = todd_coxeter(&s3, &[Word::parse_abc("b").unwrap()], 1000).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.satisfies(&s3) && t.fixes_subgroup());
        // A5 via <a,b | a^2, b^3, (ab)^5>
        let a5 = pres("a,b | a^2, b^3, (ab)^5");
        assert_eq!(todd_coxeter(&a5, &[], 1000).unwrap().index(), 60);
        // Z3 x Z3
        let z33 = pres("a,b | a^3, b^3, abAB");
        assert_eq!(todd_coxeter(&z33, &[], 1000).unwrap().index(), 9);
    }

    #[test]
    fn coincidences_collapse_to_trivial_group() {
        // aba⁻¹ = b², bab⁻¹ = a² presents the trivial group
        let p = pres("a,b | abABB, baBAA");
        let t = todd_coxeter(&p, &[], 1000).unwrap();
        assert_eq!(t.index(), 1);
    }

    #[test]
    fn census_of_small_groups() {
        assert_eq!(
            low_index_census(&pres("a |"), 5).counts,
            vec![1, 1, 1, 1, 1]
        );
        assert_eq!(
            low_index_census(&pres("a,b | [a,b]"), 8).counts,
            vec![1, 3, 4, 7, 6, 12, 8, 15]
        );
        // S3 has subgroups of index 1, 2, 3, 6 with one class each
        assert_eq!(
            low_index_census(&pres("a,b | a^2, b^3, (ab)^2"), 6).counts,
            vec![1, 1, 1, 0, 0, 1]
        );
    }

    #[test]
    fn census_tables_are_closed_and_satisfy_relators() {
        let p = pres("a,b | a^2, b^3");
        let tabs = low_index_subgroups(&p, 4);
        assert!(!tabs.is_empty());
        for t in &tabs {
            assert!(t.satisfies(&p));
        }
        let three: Vec<_> = tabs.iter().filter(|t| t.index() == 3).collect();
        for t in three {
            let m = t.perm_rep();
            assert_eq!(&m[0] * &m[0], DMatrix::identity(3, 3));
            assert_eq!(&m[1] * &m[1] * &m[1], DMatrix::identity(3, 3));
        }
    }

    #[test]
    fn perm_rep_shapes() {
        let t = CosetTable::from_permutations(&[vec![1, 2, 0]]);
        let m = &t.perm_rep()[0];
        assert_eq!(m[(1, 0)], 1);
        assert_eq!(m[(2, 1)], 1);
        assert_eq!(m[(0, 2)], 1);
        assert_eq!(m * m.transpose(), DMatrix::identity(3, 3));
        let id = CosetTable::from_permutations(&[vec![0, 1, 2]]);
        assert_eq!(id.perm_rep()[0], DMatrix::identity(3, 3));
    }
}
