//! Magic-state fiducials and Weyl-Heisenberg orbits.
//!
//! A fiducial `f` is moved around by the d² generalized Pauli operators; the
//! normalized images `P_i f` give d² rank-one projectors. The set is minimal
//! informationally complete (MIC) when their Gram matrix has full rank.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Threshold below which |⟨f|P f⟩| counts as "not an eigenvector".
pub const MAGIC_TOL: f64 = 1e-9;
/// Relative singular-value threshold for the Gram rank.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MicError {
    #[error("dimension must be at least 2 (got {0})")]
    BadDimension(usize),
    #[error("the two-qubit Pauli family needs dimension 4 (got {0})")]
    TwoQubitDimension(usize),
    #[error("fiducial has dimension {fiducial} but the operators act on dimension {ops}")]
    DimensionMismatch { fiducial: usize, ops: usize },
    #[error("fiducial vector is zero")]
    ZeroVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliStructure {
    SingleQudit,
    TwoQubit,
}

impl PauliStructure {
    /// Two-qubit Paulis in dimension 4, clock-and-shift otherwise.
    pub fn default_for(d: usize) -> Self {
        if d == 4 {
            PauliStructure::TwoQubit
        } else {
            PauliStructure::SingleQudit
        }
    }
}

fn omega(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64)
}

fn clock_shift(d: usize) -> Vec<CMatrix> {
    // X|i> = |i+1>, Z|i> = ω^i |i>
    let x = CMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let z = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            omega(d, i)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut xs = vec![CMatrix::identity(d, d)];
    let mut zs = vec![CMatrix::identity(d, d)];
    for k in 1..d {
        xs.push(&xs[k - 1] * &x);
        zs.push(&zs[k - 1] * &z);
    }
    let mut out = Vec::with_capacity(d * d);
    for xj in &xs {
        for zk in &zs {
            out.push(xj * zk);
        }
    }
    out
}

/// The d² operators `X^j Z^k` (single qudit) or `P ⊗ Q` over the qubit family
/// `{I, Z, X, XZ}` (two qubits). The identity always comes first.
pub fn pauli_group(d: usize, structure: PauliStructure) -> Result<Vec<CMatrix>, MicError> {
    if d < 2 {
        return Err(MicError::BadDimension(d));
    }
    match structure {
        PauliStructure::SingleQudit => Ok(clock_shift(d)),
        PauliStructure::TwoQubit => {
            if d != 4 {
                return Err(MicError::TwoQubitDimension(d));
            }
            let q = clock_shift(2);
            let mut out = Vec::with_capacity(16);
            for p in &q {
                for r in &q {
                    out.push(p.kronecker(r));
                }
            }
            Ok(out)
        }
    }
}

fn is_identity(m: &CMatrix) -> bool {
    let d = m.nrows();
    (m - CMatrix::identity(d, d)).camax() < 1e-12
}

fn normalize(v: &CVector) -> Result<CVector, MicError> {
    let n = v.norm();
    if n < 1e-300 {
        return Err(MicError::ZeroVector);
    }
    Ok(v / Complex64::new(n, 0.0))
}

/// True when `v` is an eigenvector of no non-identity operator in the list.
pub fn is_magic(v: &CVector, paulis: &[CMatrix]) -> bool {
    let v = match normalize(v) {
        Ok(v) => v,
        Err(_) => return false,
    };
    paulis
        .iter()
        .filter(|p| !is_identity(p))
        .all(|p| v.dotc(&(p * &v)).norm() < 1.0 - MAGIC_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fiducial {
    pub vector: CVector,
    pub source: String,
    pub magic: bool,
}

impl Fiducial {
    /// Normalizes `v` and tags it against the default Pauli family.
    pub fn new(v: CVector, source: impl Into<String>) -> Result<Self, MicError> {
        let v = normalize(&v)?;
        let paulis = pauli_group(v.len(), PauliStructure::default_for(v.len()))?;
        Ok(Fiducial {
            magic: is_magic(&v, &paulis),
            vector: v,
            source: source.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// (0, 1, −1)/√2.
    pub fn qutrit() -> Self {
        let c = |r: f64| Complex64::new(r, 0.0);
        Fiducial::new(CVector::from_vec(vec![c(0.0), c(1.0), c(-1.0)]), "f_QT").unwrap()
    }

    /// (0, 1, −ω₆, ω₆ − 1)/√3 with ω₆ = e^{iπ/3}.
    pub fn two_qubit() -> Self {
        let w6 = Complex64::from_polar(1.0, PI / 3.0);
        let one = Complex64::new(1.0, 0.0);
        let v = CVector::from_vec(vec![Complex64::new(0.0, 0.0), one, -w6, w6 - one]);
        Fiducial::new(v, "f_2QB").unwrap()
    }

    /// |⟨f|g⟩| within 10⁻⁹ of 1.
    pub fn same_ray(&self, other: &CVector) -> bool {
        match normalize(other) {
            Ok(o) => o.len() == self.dim() && (self.vector.dotc(&o).norm() - 1.0).abs() < 1e-9,
            Err(_) => false,
        }
    }
}

/// Cycles of the permutation with `M e_j = e_{p(j)}`.
fn cycles(m: &DMatrix<i32>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let image = |j: usize| {
        (0..n)
            .find(|&i| m[(i, j)] != 0)
            .expect("permutation matrix")
    };
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut cyc = vec![s];
        seen[s] = true;
        let mut c = image(s);
        while c != s {
            seen[c] = true;
            cyc.push(c);
            c = image(c);
        }
        out.push(cyc);
    }
    out
}

/// Exact eigenvectors of a permutation matrix: for each cycle
/// `(c_0 … c_{L−1})` and each `m`, the vector `Σ_i ζ^{−i} e_{c_i}` with
/// `ζ = e^{2πim/L}` has eigenvalue ζ.
pub fn permutation_eigenvectors(m: &DMatrix<i32>) -> Vec<(Complex64, CVector)> {
    let n = m.nrows();
    let mut out = Vec::new();
    for cyc in cycles(m) {
        let l = cyc.len();
        for k in 0..l {
            let mut v = CVector::zeros(n);
            for (i, &c) in cyc.iter().enumerate() {
                v[c] = omega(l, (l - (i * k) % l) % l);
            }
            out.push((omega(l, k), normalize(&v).unwrap()));
        }
    }
    out
}

/// Eigenvectors of each matrix and of each ordered product of two distinct
/// matrices, deduplicated up to global phase, tagged magic or not.
pub fn fiducial_candidates(matrices: &[DMatrix<i32>]) -> Vec<Fiducial> {
    let mut sources: Vec<(String, DMatrix<i32>)> = matrices
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("M{}", i + 1), m.clone()))
        .collect();
    for i in 0..matrices.len() {
        for j in 0..matrices.len() {
            if i != j {
                sources.push((format!("M{}M{}", i + 1, j + 1), &matrices[i] * &matrices[j]));
            }
        }
    }
    let mut out: Vec<Fiducial> = Vec::new();
    for (name, m) in sources {
        for (lambda, v) in permutation_eigenvectors(&m) {
            if out.iter().any(|f| f.same_ray(&v)) {
                continue;
            }
            let src = format!("{name}, eigenvalue {:.4}{:+.4}i", lambda.re, lambda.im);
            out.push(Fiducial::new(v, src).unwrap());
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ProjectorSet {
    pub dim: usize,
    pub vectors: Vec<CVector>,
    pub projectors: Vec<CMatrix>,
    /// tr(Π_i Π_j) = |⟨ψ_i|ψ_j⟩|².
    pub gram: DMatrix<f64>,
    pub gram_rank: usize,
    /// max-entry deviation of Σ Π_i from d·I.
    pub twirl_error: f64,
    /// Worst deviation from Hermitian, idempotent, unit trace.
    pub projector_error: f64,
}

impl ProjectorSet {
    pub fn is_mic(&self) -> bool {
        self.gram_rank == self.dim * self.dim
    }
}

/// Numerical rank with singular values above `RANK_TOL` times the largest.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > RANK_TOL * max).count()
}

pub fn build_povm(f: &Fiducial, paulis: &[CMatrix]) -> Result<ProjectorSet, MicError> {
    let d = f.dim();
    if let Some(p) = paulis.iter().find(|p| p.nrows() != d) {
        return Err(MicError::DimensionMismatch {
            fiducial: d,
            ops: p.nrows(),
        });
    }
    let vectors: Vec<CVector> = paulis
        .iter()
        .map(|p| normalize(&(p * &f.vector)))
        .collect::<Result<_, _>>()?;
    let projectors: Vec<CMatrix> = vectors.iter().map(|v| v * v.adjoint()).collect();
    let n = vectors.len();
    let gram = DMatrix::from_fn(n, n, |i, j| vectors[i].dotc(&vectors[j]).norm_sqr());
    let sum = projectors
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, p| acc + p);
    let target = CMatrix::identity(d, d) * Complex64::new(d as f64, 0.0);
    let twirl_error = (sum - target).camax();
    let projector_error = projectors
        .iter()
        .map(|p| {
            let herm = (p - p.adjoint()).camax();
            let idem = (p * p - p).camax();
            let tr = (p.trace() - Complex64::new(1.0, 0.0)).norm();
            herm.max(idem).max(tr)
        })
        .fold(0.0, f64::max);
    Ok(ProjectorSet {
        dim: d,
        gram_rank: numerical_rank(&gram),
        vectors,
        projectors,
        gram,
        twirl_error,
        projector_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub value: Complex64,
    pub triples: Vec<[usize; 3]>,
}

impl Cluster {
    pub fn count(&self) -> usize {
        self.triples.len()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.value.im.abs() < tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSummary {
    pub value: Complex64,
    pub lines: Vec<[usize; 3]>,
    /// Number of lines through each point.
    pub lines_per_point: Vec<usize>,
    /// Named configuration when the counts match one, else `None`.
    pub verdict: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripleGeometry {
    pub total: usize,
    pub clusters: Vec<Cluster>,
    pub lines: Option<LineSummary>,
}

/// tr(Π_i Π_j Π_k) = ⟨ψ_i|ψ_j⟩⟨ψ_j|ψ_k⟩⟨ψ_k|ψ_i⟩ for i < j < k, clustered
/// greedily within `tol`, with a distinguished "line" cluster.
pub fn triple_product_geometry(ps: &ProjectorSet, tol: f64) -> TripleGeometry {
    let n = ps.vectors.len();
    let v = &ps.vectors;
    let ip = |a: usize, b: usize| v[a].dotc(&v[b]);
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
        .collect();
    let values: Vec<Complex64> = triples
        .par_iter()
        .map(|&[i, j, k]| ip(i, j) * ip(j, k) * ip(k, i))
        .collect();
    let mut clusters: Vec<Cluster> = Vec::new();
    for (t, val) in triples.iter().zip(&values) {
        match clusters.iter_mut().find(|c| (c.value - val).norm() < tol) {
            Some(c) => c.triples.push(*t),
            None => clusters.push(Cluster {
                value: *val,
                triples: vec![*t],
            }),
        }
    }
    clusters.sort_by(|a, b| {
        b.count()
            .cmp(&a.count())
            .then(a.value.re.total_cmp(&b.value.re))
            .then(a.value.im.total_cmp(&b.value.im))
    });
    let expected = match ps.dim {
        3 => Some((12, "Hesse [9_4, 12_3]", 4)),
        4 => Some((15, "GQ(2,2)", 3)),
        _ => None,
    };
    let real: Vec<&Cluster> = clusters.iter().filter(|c| c.is_real(tol)).collect();
    let chosen = expected
        .and_then(|(count, _, _)| real.iter().find(|c| c.count() == count).copied())
        .or_else(|| real.first().copied());
    let lines = chosen.map(|c| {
        let mut per = vec![0usize; n];
        for t in &c.triples {
            for &p in t {
                per[p] += 1;
            }
        }
        let verdict = expected.and_then(|(count, name, per_point)| {
            let points_used: Vec<usize> = per.iter().copied().filter(|&x| x > 0).collect();
            let uniform = points_used.iter().all(|&x| x == per_point);
            (c.count() == count && uniform)
                .then(|| format!("{name}: {} lines on {} points", count, points_used.len()))
        });
        LineSummary {
            value: c.value,
            lines: c.triples.clone(),
            lines_per_point: per,
            verdict,
        }
    });
    TripleGeometry {
        total: triples.len(),
        clusters,
        lines,
    }
}
