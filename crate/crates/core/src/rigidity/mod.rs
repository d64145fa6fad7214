//! Bar and tensegrity frameworks: rigidity matrix, infinitesimal flexes and
//! trivial motions.

mod stress;

pub use stress::{
    equilibrium_residual, equilibrium_stress_space, exchange_rigidity_check, is_proper, stress_energy, Stress,
};

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{diameter, Point3, PolyhedralSurface};
use crate::linalg::{null_space, numerical_rank, rank};
use crate::tol::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Bar,
    /// May not lengthen; carries non-negative stress.
    Cable,
    /// May not shorten; carries non-positive stress.
    Strut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Framework {
    vertices: Vec<Point3>,
    edges: Vec<(usize, usize, EdgeKind)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl Framework {
    pub fn new(vertices: Vec<Point3>, edges: Vec<(usize, usize, EdgeKind)>) -> Result<Self> {
        Self::with_tolerance(vertices, edges, &Tolerance::default())
    }

    /// Edges are stored with `i < j` in the given order.
    pub fn with_tolerance(
        vertices: Vec<Point3>,
        edges: Vec<(usize, usize, EdgeKind)>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = vertices.len();
        if let Some(i) = vertices.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidFramework(format!("vertex {i} has a non-finite coordinate")));
        }
        let diam = diameter(&vertices);
        let mut lookup = HashMap::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        for (k, &(i, j, kind)) in edges.iter().enumerate() {
            if i >= n || j >= n {
                return Err(Error::InvalidFramework(format!("edge {k} has an index out of range")));
            }
            if i == j {
                return Err(Error::InvalidFramework(format!("edge {k} is a loop")));
            }
            let key = (i.min(j), i.max(j));
            if lookup.insert(key, k).is_some() {
                return Err(Error::InvalidFramework(format!("duplicate edge ({}, {})", key.0, key.1)));
            }
            if (vertices[i] - vertices[j]).norm() < tol.geom_tol * diam || diam == 0.0 {
                return Err(Error::InvalidFramework(format!("edge ({}, {}) has zero length", key.0, key.1)));
            }
            stored.push((key.0, key.1, kind));
        }
        Ok(Framework { vertices, edges: stored, lookup })
    }

    /// All surface edges as bars.
    pub fn from_surface(surface: &PolyhedralSurface) -> Self {
        let edges = surface.edges().iter().map(|&(i, j)| (i, j, EdgeKind::Bar)).collect();
        Framework::new(surface.vertices().to_vec(), edges).expect("surface edges are valid")
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, EdgeKind)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.lookup.get(&(i.min(j), i.max(j))).copied()
    }

    /// Same graph with every edge a bar.
    pub fn all_bars(&self) -> Framework {
        let mut f = self.clone();
        for e in &mut f.edges {
            e.2 = EdgeKind::Bar;
        }
        f
    }

    pub fn without_edge(&self, k: usize) -> Framework {
        let edges = self.edges.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &e)| e).collect();
        Framework::new(self.vertices.clone(), edges).expect("subset of valid edges")
    }

    pub fn with_vertices(&self, vertices: Vec<Point3>) -> Result<Framework> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::SizeMismatch { expected: self.vertices.len(), got: vertices.len() });
        }
        Framework::new(vertices, self.edges.clone())
    }

    /// Dimension of the affine span of the vertices.
    pub fn affine_dimension(&self, tol: &Tolerance) -> usize {
        affine_dimension(&self.vertices, tol)
    }
}

pub fn affine_dimension(points: &[Point3], tol: &Tolerance) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let d = diameter(points);
    if d == 0.0 {
        return 0;
    }
    let m = DMatrix::from_fn(points.len() - 1, 3, |r, c| (points[r + 1][c] - points[0][c]) / d);
    let sv = m.singular_values();
    sv.iter().filter(|&&s| s > tol.geom_tol.max(tol.rank_tol)).count()
}

/// Per-vertex velocities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Motion {
    pub velocities: Vec<Vector3<f64>>,
}

impl Motion {
    pub fn zeros(n: usize) -> Self {
        Motion { velocities: vec![Vector3::zeros(); n] }
    }

    pub fn from_flat(v: &DVector<f64>) -> Self {
        Motion { velocities: (0..v.len() / 3).map(|i| Vector3::new(v[3 * i], v[3 * i + 1], v[3 * i + 2])).collect() }
    }

    pub fn flat(&self) -> DVector<f64> {
        DVector::from_iterator(3 * self.velocities.len(), self.velocities.iter().flat_map(|v| v.iter().cloned()))
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.velocities.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, t: f64) -> Motion {
        Motion { velocities: self.velocities.iter().map(|v| v * t).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.velocities.iter().all(|v| v.iter().all(|c| c.is_finite()))
    }
}

/// Orthonormal basis of the infinitesimal flexes of the bar framework.
#[derive(Debug, Clone)]
pub struct FlexSpace {
    /// Columns are flattened motions.
    pub basis: DMatrix<f64>,
    pub dimension: usize,
    pub trivial_dimension: usize,
}

impl FlexSpace {
    pub fn motion(&self, k: usize) -> Motion {
        Motion::from_flat(&self.basis.column(k).into_owned())
    }

    pub fn is_rigid(&self) -> bool {
        self.dimension == self.trivial_dimension
    }
}

/// `(edges) x (3 n)`; row `{i, j}` holds `p_i - p_j` in block `i` and
/// `p_j - p_i` in block `j`.
pub fn rigidity_matrix(fw: &Framework) -> DMatrix<f64> {
    let n = fw.num_vertices();
    let mut r = DMatrix::zeros(fw.num_edges(), 3 * n);
    for (row, &(i, j, _)) in fw.edges().iter().enumerate() {
        let d = fw.vertices[i] - fw.vertices[j];
        for c in 0..3 {
            r[(row, 3 * i + c)] = d[c];
            r[(row, 3 * j + c)] = -d[c];
        }
    }
    r
}

pub fn rigidity_rank(fw: &Framework, tol: &Tolerance) -> usize {
    rank(&rigidity_matrix(fw), tol.rank_tol)
}

/// Three translations and three infinitesimal rotations about the centroid,
/// as columns; they may be dependent for degenerate configurations.
pub fn trivial_motions(points: &[Point3]) -> DMatrix<f64> {
    let n = points.len();
    let c = points.iter().fold(Point3::zeros(), |a, p| a + p) / n.max(1) as f64;
    let mut t = DMatrix::zeros(3 * n, 6);
    for (i, p) in points.iter().enumerate() {
        for a in 0..3 {
            t[(3 * i + a, a)] = 1.0;
            let w = Vector3::ith(a, 1.0).cross(&(p - c));
            for b in 0..3 {
                t[(3 * i + b, 3 + a)] = w[b];
            }
        }
    }
    t
}

/// Dimension of the space of trivial motions (6 for a spanning
/// configuration, 5 for collinear points, 3 for a single point).
pub fn trivial_dimension(points: &[Point3], tol: &Tolerance) -> usize {
    if points.is_empty() {
        return 0;
    }
    let d = diameter(points).max(f64::MIN_POSITIVE);
    let t = trivial_motions(points);
    // rotations scale with distance; compare in unit-diameter units
    let mut t = t;
    for r in 0..t.nrows() {
        for c in 3..6 {
            t[(r, c)] /= d;
        }
    }
    let sv = t.singular_values();
    numerical_rank(sv.as_slice(), tol.rank_tol.max(tol.geom_tol))
}

pub fn bar_flex_space(fw: &Framework, tol: &Tolerance) -> FlexSpace {
    let r = rigidity_matrix(fw);
    let basis = null_space(&r, tol.rank_tol);
    FlexSpace { dimension: basis.ncols(), basis, trivial_dimension: trivial_dimension(fw.vertices(), tol) }
}

/// Flexes orthogonal to every trivial motion.
pub fn nontrivial_flexes(fw: &Framework, tol: &Tolerance) -> Vec<Motion> {
    let r = rigidity_matrix(fw);
    let t = trivial_motions(fw.vertices());
    // orthonormal basis of the trivial span
    let svd = crate::linalg::full_svd(&t.transpose());
    let k = numerical_rank(&svd.sigma, tol.rank_tol);
    let q = svd.v.columns(0, k).into_owned();
    let scale = r.row_iter().map(|row| row.norm()).fold(1e-300, f64::max);
    let mut stacked = DMatrix::zeros(r.nrows() + k, r.ncols());
    stacked.view_mut((0, 0), (r.nrows(), r.ncols())).copy_from(&r);
    stacked.view_mut((r.nrows(), 0), (k, r.ncols())).copy_from(&(q.transpose() * scale));
    let ns = null_space(&stacked, tol.rank_tol);
    (0..ns.ncols())
        .map(|c| {
            let mut v = ns.column(c).into_owned();
            crate::linalg::orient_by_largest(&mut v);
            Motion::from_flat(&v)
        })
        .collect()
}

/// Rigidity of the bar framework; requires a configuration spanning 3-space.
pub fn is_infinitesimally_rigid(fw: &Framework, tol: &Tolerance) -> Result<bool> {
    let n = fw.num_vertices();
    if n < 3 {
        return Err(Error::LowDimensional { dim: n.saturating_sub(1) });
    }
    let dim = fw.affine_dimension(tol);
    if dim < 3 {
        return Err(Error::LowDimensional { dim });
    }
    Ok(rigidity_rank(fw, tol) == 3 * n - 6)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub i: usize,
    pub j: usize,
    pub kind: EdgeKind,
    /// `(p_i - p_j) . (p'_i - p'_j)`
    pub value: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensegrityFlexReport {
    pub edges: Vec<EdgeCheck>,
    pub all_satisfied: bool,
}

/// Evaluates the first-order length change of every edge under `m` against
/// its bar/cable/strut condition, with slack `1e-10`.
pub fn tensegrity_flex_test(fw: &Framework, m: &Motion) -> Result<TensegrityFlexReport> {
    if m.len() != fw.num_vertices() {
        return Err(Error::SizeMismatch { expected: fw.num_vertices(), got: m.len() });
    }
    const SLACK: f64 = 1e-10;
    let p = fw.vertices();
    let v = &m.velocities;
    let edges: Vec<EdgeCheck> = fw
        .edges()
        .iter()
        .map(|&(i, j, kind)| {
            let value = (p[i] - p[j]).dot(&(v[i] - v[j]));
            let satisfied = match kind {
                EdgeKind::Bar => value.abs() <= SLACK,
                EdgeKind::Cable => value <= SLACK,
                EdgeKind::Strut => value >= -SLACK,
            };
            EdgeCheck { i, j, kind, value, satisfied }
        })
        .collect();
    let all_satisfied = edges.iter().all(|e| e.satisfied);
    Ok(TensegrityFlexReport { edges, all_satisfied })
}

pub mod fixtures {
    use super::*;
    use crate::geometry::surface::fixtures::octahedron;

    /// Octahedron with the extra edge `[N, S]` = `(0, 1)`, all bars.
    pub fn octahedron_with_axis() -> Framework {
        let o = octahedron();
        let mut edges: Vec<(usize, usize, EdgeKind)> = o.edges().iter().map(|&(i, j)| (i, j, EdgeKind::Bar)).collect();
        edges.push((0, 1, EdgeKind::Bar));
        Framework::new(o.vertices().to_vec(), edges).expect("valid")
    }

    /// Edge skeleton of the unit cube.
    pub fn cube_skeleton() -> Framework {
        let v: Vec<Point3> =
            (0..8).map(|i| Point3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64)).collect();
        let mut edges = Vec::new();
        for i in 0..8usize {
            for b in 0..3 {
                let j = i ^ (1 << b);
                if i < j {
                    edges.push((i, j, EdgeKind::Bar));
                }
            }
        }
        Framework::new(v, edges).expect("valid")
    }
}
