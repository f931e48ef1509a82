//! Projective surfaces in (x, y, z, t): exact singular-point checks on integer
//! grids and isosurface meshes of affine charts.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("a projective surface needs a polynomial in 4 variables (got {0})")]
    VariableCount(usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("the zero polynomial does not define a surface")]
    ZeroPolynomial,
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("mesh export needs a polynomial in 3 variables (got {0})")]
    MeshVariables(usize),
    #[error("resolution must be at least 8 (got {0})")]
    Resolution(usize),
    #[error("box half-width must be positive and finite")]
    BadBox,
    #[error("search bound must be at least 1")]
    BadBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveSurface {
    poly: SparsePoly,
    degree: u32,
    gradient: Vec<SparsePoly>,
}

impl ProjectiveSurface {
    pub fn new(poly: SparsePoly) -> Result<Self, SurfaceError> {
        if poly.nvars() != 4 {
            return Err(SurfaceError::VariableCount(poly.nvars()));
        }
        let degree = poly.total_degree().ok_or(SurfaceError::ZeroPolynomial)?;
        if !poly.is_homogeneous() {
            return Err(SurfaceError::NotHomogeneous);
        }
        let gradient = (0..4)
            .map(|i| poly.partial_derivative(i).expect("variable in range"))
            .collect();
        Ok(ProjectiveSurface {
            poly,
            degree,
            gradient,
        })
    }

    /// Closure of the affine surface `f(x, y, z) = 0`.
    pub fn from_affine(f: &SparsePoly) -> Result<Self, SurfaceError> {
        if f.nvars() != 3 {
            return Err(SurfaceError::VariableCount(f.nvars() + 1));
        }
        Self::new(f.homogenize())
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn gradient(&self) -> &[SparsePoly] {
        &self.gradient
    }

    fn gradient_vanishes_int(&self, p: &[BigInt; 4]) -> bool {
        self.gradient
            .iter()
            .all(|g| g.evaluate_int(p).expect("4 coordinates").is_zero())
    }
}

/// True iff all four partials vanish at `point`, in exact arithmetic.
pub fn verify_singular(
    s: &ProjectiveSurface,
    point: &[BigRational; 4],
) -> Result<bool, SurfaceError> {
    if point.iter().all(Zero::is_zero) {
        return Err(SurfaceError::ZeroPoint);
    }
    Ok(s.gradient
        .iter()
        .all(|g| g.evaluate(point).expect("4 coordinates").is_zero()))
}

/// Integer version of [`verify_singular`].
pub fn verify_singular_int(s: &ProjectiveSurface, point: [i64; 4]) -> Result<bool, SurfaceError> {
    let q = point.map(|c| BigRational::from_integer(c.into()));
    verify_singular(s, &q)
}

/// Scales to coprime integers with the first nonzero coordinate positive.
fn projective_normal(p: [i64; 4]) -> [i64; 4] {
    let g = p.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    if g == 0 {
        return p;
    }
    let sign = p.iter().find(|&&c| c != 0).map_or(1, |c| c.signum());
    p.map(|c| c / g * sign)
}

/// Grid points `chart(i, j, k)` for `|i|, |j|, |k| ≤ b` where the gradient
/// vanishes. Slabs in the first coordinate run in parallel; output order is
/// slab order.
fn grid_search<F>(s: &ProjectiveSurface, b: i64, dims: usize, chart: F) -> Vec<[i64; 4]>
where
    F: Fn(&[i64]) -> [i64; 4] + Sync,
{
    let slabs: Vec<Vec<[i64; 4]>> = (-b..=b)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let mut idx = vec![i; dims];
            let inner = (2 * b + 1).pow(dims as u32 - 1);
            for n in 0..inner {
                let mut r = n;
                for slot in idx.iter_mut().skip(1) {
                    *slot = (r % (2 * b + 1)) - b;
                    r /= 2 * b + 1;
                }
                let p = chart(&idx);
                if s.gradient_vanishes_int(&p.map(BigInt::from)) {
                    out.push(p);
                }
            }
            out
        })
        .collect();
    let mut pts: Vec<[i64; 4]> = slabs.into_iter().flatten().collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Singular points `(x, y, z, 1)` with integer coordinates `|x|, |y|, |z| ≤ b`.
pub fn search_singular(s: &ProjectiveSurface, b: i64) -> Result<Vec<[i64; 4]>, SurfaceError> {
    if b < 1 {
        return Err(SurfaceError::BadBound);
    }
    Ok(grid_search(s, b, 3, |v| [v[0], v[1], v[2], 1]))
}

/// Singular points on the plane `t = 0`, found on the integer grids of the
/// charts `(x, y, 1, 0)` and `(1, y, z, 0)`, deduplicated projectively.
pub fn search_singular_at_infinity(
    s: &ProjectiveSurface,
    b: i64,
) -> Result<Vec<[i64; 4]>, SurfaceError> {
    if b < 1 {
        return Err(SurfaceError::BadBound);
    }
    let mut pts = grid_search(s, b, 2, |v| [v[0], v[1], 1, 0]);
    pts.extend(grid_search(s, b, 2, |v| [1, v[0], v[1], 0]));
    let mut pts: Vec<[i64; 4]> = pts.into_iter().map(projective_normal).collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

// ---------------------------------------------------------------------------
// Meshes

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// 0-indexed triangles.
    pub faces: Vec<[usize; 3]>,
    pub warning: Option<String>,
}

impl Mesh {
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// `v x y z` lines followed by 1-indexed `f i j k` lines.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            writeln!(s, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2]).unwrap();
        }
        for f in &self.faces {
            writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
        }
        s
    }

    /// Largest |f| over the vertices.
    pub fn max_residual(&self, f: &SparsePoly) -> f64 {
        self.vertices
            .par_iter()
            .map(|v| f.evaluate_f64(v).abs())
            .reduce(|| 0.0, f64::max)
    }
}

/// Upper bound for |∇f| on the cube `[−r, r]³`, from termwise bounds on each
/// partial derivative.
pub fn gradient_bound(f: &SparsePoly, r: f64) -> f64 {
    let n = f.nvars();
    let mut parts = vec![0.0f64; n];
    for (m, c) in f.terms() {
        let c = c.abs().to_f64().unwrap_or(f64::INFINITY);
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                parts[i] += c * e as f64 * r.powi(m.degree() as i32 - 1);
            }
        }
    }
    parts.iter().map(|p| p * p).sum::<f64>().sqrt()
}

/// Diagonal of one grid cell for the given box and resolution.
pub fn cell_diagonal(half_width: f64, res: usize) -> f64 {
    3f64.sqrt() * 2.0 * half_width / res as f64
}

// Cube corners by bit pattern (dx, dy, dz) = (c & 1, c >> 1 & 1, c >> 2 & 1).
// Six tetrahedra around the main diagonal 0-7.
const TETS: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 3, 2, 7],
    [0, 2, 6, 7],
    [0, 6, 4, 7],
    [0, 4, 5, 7],
    [0, 5, 1, 7],
];

type EdgeKey = (usize, usize);

/// Triangulates `f = 0` over `[−half_width, half_width]³` with `res` cells
/// per side. Each cube is split into six tetrahedra sharing a diagonal, so
/// neighbouring cubes agree on shared faces and the mesh has no cracks.
/// Vertices sit on grid edges by linear interpolation and are shared
/// between triangles; numbering follows slab order, so the output does not
/// depend on the thread count.
pub fn export_mesh(f: &SparsePoly, half_width: f64, res: usize) -> Result<Mesh, SurfaceError> {
    if f.nvars() != 3 {
        return Err(SurfaceError::MeshVariables(f.nvars()));
    }
    if res < 8 {
        return Err(SurfaceError::Resolution(res));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(SurfaceError::BadBox);
    }
    let n = res + 1;
    let h = 2.0 * half_width / res as f64;
    let coord = |i: usize| -half_width + h * i as f64;
    let id = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let values: Vec<f64> = (0..n * n * n)
        .into_par_iter()
        .map(|g| f.evaluate_f64(&[coord(g / (n * n)), coord(g / n % n), coord(g % n)]))
        .collect();
    let point = |g: usize| [coord(g / (n * n)), coord(g / n % n), coord(g % n)];

    let slabs: Vec<Vec<[EdgeKey; 3]>> = (0..res)
        .into_par_iter()
        .map(|i| {
            let mut tris = Vec::new();
            for j in 0..res {
                for k in 0..res {
                    let corner = |c: usize| id(i + (c & 1), j + (c >> 1 & 1), k + (c >> 2 & 1));
                    for tet in TETS {
                        let g = tet.map(corner);
                        tetra(&g, &values, &mut tris);
                    }
                }
            }
            tris
        })
        .collect();

    let mut index: HashMap<EdgeKey, usize> = HashMap::new();
    let mut mesh = Mesh::default();
    for (a, b, c) in slabs.into_iter().flatten().map(|t| (t[0], t[1], t[2])) {
        let mut v = [0usize; 3];
        for (slot, key) in v.iter_mut().zip([a, b, c]) {
            *slot = *index.entry(key).or_insert_with(|| {
                mesh.vertices.push(edge_point(key, &values, &point));
                mesh.vertices.len() - 1
            });
        }
        if v[0] != v[1] && v[1] != v[2] && v[0] != v[2] {
            mesh.faces.push(v);
        }
    }
    if mesh.faces.is_empty() {
        mesh.vertices.clear();
        mesh.warning = Some(format!(
            "no zero crossing of the polynomial in the box [-{half_width}, {half_width}]^3"
        ));
    }
    Ok(mesh)
}

fn edge_key(a: usize, b: usize) -> EdgeKey {
    (a.min(b), a.max(b))
}

fn edge_point(key: EdgeKey, values: &[f64], point: &impl Fn(usize) -> [f64; 3]) -> [f64; 3] {
    let (a, b) = key;
    let (fa, fb) = (values[a], values[b]);
    let s = if fa == fb { 0.5 } else { fa / (fa - fb) };
    let (pa, pb) = (point(a), point(b));
    [0, 1, 2].map(|i| pa[i] + s * (pb[i] - pa[i]))
}

/// Emits the zero set of the linear interpolant on one tetrahedron: one
/// triangle when a single corner is separated, two when the split is 2/2.
fn tetra(g: &[usize; 4], values: &[f64], out: &mut Vec<[EdgeKey; 3]>) {
    // zero counts as positive so every crossing edge has a strict sign change
    let inside: Vec<usize> = (0..4).filter(|&c| values[g[c]] < 0.0).collect();
    let outside: Vec<usize> = (0..4).filter(|&c| values[g[c]] >= 0.0).collect();
    let e = |a: usize, b: usize| edge_key(g[a], g[b]);
    match inside.len() {
        1 | 3 => {
            let (lone, rest) = if inside.len() == 1 {
                (inside[0], &outside)
            } else {
                (outside[0], &inside)
            };
            out.push([e(lone, rest[0]), e(lone, rest[1]), e(lone, rest[2])]);
        }
        2 => {
            let (a, b) = (inside[0], inside[1]);
            let (c, d) = (outside[0], outside[1]);
            out.push([e(a, c), e(a, d), e(b, d)]);
            out.push([e(a, c), e(b, d), e(b, c)]);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4(text: &str) -> SparsePoly {
        SparsePoly::parse_with(text, &["x", "y", "z", "t"]).unwrap()
    }

    fn sigma_h() -> ProjectiveSurface {
        ProjectiveSurface::new(p4("x*y*z - t*x^2 - t*y^2 - t*z^2 + 4*t^3")).unwrap()
    }

    #[test]
    fn homogenized_hopf_matches() {
        let f = SparsePoly::parse("x*y*z - x^2 - y^2 - z^2 + 4", 3).unwrap();
        assert_eq!(ProjectiveSurface::from_affine(&f).unwrap(), sigma_h());
        assert_eq!(sigma_h().degree(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            ProjectiveSurface::new(p4("x^2 + t")),
            Err(SurfaceError::NotHomogeneous)
        );
        assert_eq!(
            ProjectiveSurface::new(SparsePoly::zero(4)),
            Err(SurfaceError::ZeroPolynomial)
        );
        assert_eq!(
            verify_singular_int(&sigma_h(), [0, 0, 0, 0]),
            Err(SurfaceError::ZeroPoint)
        );
    }

    #[test]
    fn euler_relation() {
        for s in [
            sigma_h(),
            ProjectiveSurface::new(p4("x^2 + y^2 + z^2 - t^2")).unwrap(),
        ] {
            let lhs = (0..4).fold(SparsePoly::zero(4), |acc, i| {
                &acc + &(&SparsePoly::var(4, i) * &s.gradient()[i])
            });
            assert_eq!(lhs, s.poly().scale(&BigInt::from(s.degree())));
        }
    }

    #[test]
    fn four_singular_points() {
        let s = sigma_h();
        assert!(verify_singular_int(&s, [2, 2, 2, 1]).unwrap());
        assert!(verify_singular_int(&s, [2, -2, -2, 1]).unwrap());
        assert!(!verify_singular_int(&s, [0, 0, 0, 1]).unwrap());
        let pts = search_singular(&s, 4).unwrap();
        assert_eq!(
            pts,
            vec![[-2, -2, 2, 1], [-2, 2, -2, 1], [2, -2, -2, 1], [2, 2, 2, 1]]
        );
        for p in &pts {
            assert!(verify_singular_int(&s, *p).unwrap());
        }
        assert!(search_singular_at_infinity(&s, 2).unwrap().is_empty());
    }

    #[test]
    fn smooth_quadric_and_cone() {
        let q = ProjectiveSurface::new(p4("x^2 + y^2 + z^2 - t^2")).unwrap();
        assert!(search_singular(&q, 3).unwrap().is_empty());
        // the cone x² + y² − z² is singular only at its apex (0, 0, 0, 1)
        let cone = ProjectiveSurface::new(p4("x^2 + y^2 - z^2")).unwrap();
        assert_eq!(search_singular(&cone, 2).unwrap(), vec![[0, 0, 0, 1]]);
        // x² = 0 is singular along the whole plane, including points at infinity
        let double = ProjectiveSurface::new(p4("x^2")).unwrap();
        assert!(search_singular_at_infinity(&double, 1)
            .unwrap()
            .contains(&[0, 0, 1, 0]));
    }

    #[test]
    fn sphere_mesh() {
        let f = SparsePoly::parse("x^2 + y^2 + z^2 - 4", 3).unwrap();
        let m = export_mesh(&f, 3.0, 16).unwrap();
        assert!(!m.is_empty() && m.warning.is_none());
        for v in &m.vertices {
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!((r - 2.0).abs() < 0.2, "radius {r}");
        }
        // closed surface: every edge is shared by exactly two triangles
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &m.faces {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        assert!(edges.values().all(|&c| c == 2));
        // V − E + F = 2
        assert_eq!(
            m.vertices.len() as i64 - edges.len() as i64 + m.faces.len() as i64,
            2
        );
    }

    #[test]
    fn hopf_mesh_residual() {
        let f = SparsePoly::parse("x*y*z - x^2 - y^2 - z^2 + 4", 3).unwrap();
        let m = export_mesh(&f, 5.0, 24).unwrap();
        assert!(!m.is_empty());
        let bound = gradient_bound(&f, 5.0) * cell_diagonal(5.0, 24);
        assert!(m.max_residual(&f) < bound);
        let again = export_mesh(&f, 5.0, 24).unwrap();
        assert_eq!(m.to_obj(), again.to_obj());
    }

    #[test]
    fn constant_gives_warning() {
        let m = export_mesh(&SparsePoly::one(3), 5.0, 8).unwrap();
        assert!(m.is_empty() && m.vertices.is_empty());
        assert!(m.warning.is_some());
        assert_eq!(m.to_obj(), "");
        assert_eq!(
            export_mesh(&SparsePoly::one(3), 5.0, 4),
            Err(SurfaceError::Resolution(4))
        );
    }
}
