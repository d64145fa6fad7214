use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::geometry::{diameter, interior_angle, Point3};
use crate::tol::Tolerance;

/// Closed, connected, consistently oriented triangulated sphere.
///
/// Faces are stored with outward orientation: if the input winds inward it is
/// flipped on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralSurface {
    vertices: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    edge_lookup: HashMap<(usize, usize), usize>,
    // for edge (i, j), i < j: the vertices opposite in the face holding i->j
    // and in the face holding j->i
    wings: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
}

impl PolyhedralSurface {
    pub fn new(vertices: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        Self::with_tolerance(vertices, faces, &Tolerance::default())
    }

    pub fn with_tolerance(vertices: Vec<Point3>, mut faces: Vec<[usize; 3]>, tol: &Tolerance) -> Result<Self> {
        let n = vertices.len();
        if n < 4 {
            return Err(Error::InvalidSurface(format!("{n} vertices; need at least 4")));
        }
        if let Some(i) = vertices.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidSurface(format!("vertex {i} has a non-finite coordinate")));
        }
        for (fi, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= n) {
                return Err(Error::InvalidSurface(format!("face {fi} has an index out of range")));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidSurface(format!("face {fi} repeats a vertex")));
            }
        }
        let diam = diameter(&vertices);
        if diam == 0.0 {
            return Err(Error::InvalidSurface("all vertices coincide".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if (vertices[i] - vertices[j]).norm() <= tol.geom_tol * diam {
                    return Err(Error::InvalidSurface(format!("vertices {i} and {j} coincide")));
                }
            }
        }

        let vol = signed_volume(&vertices, &faces);
        if vol < 0.0 && vol.abs() > tol.geom_tol * diam.powi(3) {
            for f in faces.iter_mut() {
                f.swap(1, 2);
            }
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if directed.insert((a, b), fi).is_some() {
                    return Err(Error::InvalidSurface(format!(
                        "directed edge ({a}, {b}) used twice: orientation inconsistent or edge in more than two faces"
                    )));
                }
            }
        }
        let mut undirected: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for (&(a, b), &fi) in directed.iter() {
            let Some(&fj) = directed.get(&(b, a)) else {
                return Err(Error::InvalidSurface(format!("edge ({a}, {b}) borders only one face")));
            };
            if a < b {
                let c = third(&faces[fi], a, b);
                let d = third(&faces[fj], a, b);
                undirected.insert((a, b), (c, d));
            }
        }
        let edges: Vec<(usize, usize)> = undirected.keys().cloned().collect();
        let wings: Vec<(usize, usize)> = undirected.values().cloned().collect();
        let edge_lookup = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();

        // cyclic neighbour order around each vertex: faces (v, x, y) link x -> y
        let mut next: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        for f in faces.iter() {
            for k in 0..3 {
                next[f[k]].insert(f[(k + 1) % 3], f[(k + 2) % 3]);
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (v, map) in next.iter().enumerate() {
            if map.is_empty() {
                return Err(Error::InvalidSurface(format!("vertex {v} is not used by any face")));
            }
            let start = *map.keys().min().unwrap();
            let mut ring = vec![start];
            let mut cur = map[&start];
            while cur != start {
                ring.push(cur);
                if ring.len() > map.len() {
                    break;
                }
                cur = *map
                    .get(&cur)
                    .ok_or_else(|| Error::InvalidSurface(format!("vertex {v} has a non-manifold star")))?;
            }
            if ring.len() != map.len() {
                return Err(Error::InvalidSurface(format!("vertex {v} has a non-manifold star (several face cycles)")));
            }
            rotation.push(ring);
        }

        let surface = PolyhedralSurface { vertices, faces, edges, edge_lookup, wings, rotation };
        if !surface.is_connected() {
            return Err(Error::InvalidSurface("surface is not connected".into()));
        }
        let chi = surface.euler_characteristic();
        if chi != 2 {
            return Err(Error::InvalidSurface(format!("Euler characteristic {chi}, expected 2")));
        }
        Ok(surface)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_lookup.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_index(i, j).is_some()
    }

    /// `(a, b, c, d)` with faces `(a, b, c)` and `(b, a, d)` at edge `k`.
    pub fn edge_wings(&self, k: usize) -> (usize, usize, usize, usize) {
        let (a, b) = self.edges[k];
        let (c, d) = self.wings[k];
        (a, b, c, d)
    }

    /// Neighbours of `v` in cyclic order; consecutive pairs `(x, y)` span the
    /// faces `(v, x, y)`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    pub fn signed_volume(&self) -> f64 {
        signed_volume(&self.vertices, &self.faces)
    }

    /// Interior dihedral angle at edge `k`, in `(0, 2pi)`.
    pub fn dihedral_angle(&self, k: usize) -> Result<f64> {
        let (a, b, c, d) = self.edge_wings(k);
        let p = &self.vertices;
        let scale = self.diameter();
        for (x, y, z) in [(a, b, c), (b, a, d)] {
            let area2 = (p[y] - p[x]).cross(&(p[z] - p[x])).norm();
            if area2 <= 1e-12 * scale * scale {
                return Err(Error::Degenerate(format!("face ({x}, {y}, {z}) has zero area")));
            }
        }
        Ok(interior_angle(&p[a], &p[b], &p[c], &p[d]))
    }

    pub fn dihedral_angle_at(&self, i: usize, j: usize) -> Result<f64> {
        let k = self.edge_index(i, j).ok_or_else(|| Error::Precondition(format!("({i}, {j}) is not an edge")))?;
        self.dihedral_angle(k)
    }

    /// Faces as sorted index triples, sorted; handy for comparing combinatorics.
    pub fn canonical_faces(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = self
            .faces
            .iter()
            .map(|f| {
                let mut g = *f;
                g.sort_unstable();
                g
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Same combinatorics, new positions.
    pub fn with_vertices(&self, vertices: Vec<Point3>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::SizeMismatch { expected: self.vertices.len(), got: vertices.len() });
        }
        PolyhedralSurface::new(vertices, self.faces.clone())
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn third(f: &[usize; 3], a: usize, b: usize) -> usize {
    *f.iter().find(|&&v| v != a && v != b).expect("triangle has a third vertex")
}

fn signed_volume(vertices: &[Point3], faces: &[[usize; 3]]) -> f64 {
    faces.iter().map(|f| vertices[f[0]].dot(&vertices[f[1]].cross(&vertices[f[2]]))).sum::<f64>() / 6.0
}

/// Standard fixtures used across tests and generators.
pub mod fixtures {
    use super::*;

    /// Poles at `+-e_z` (indices 0 = N, 1 = S), equator `e_x, e_y, -e_x, -e_y`.
    pub fn octahedron() -> PolyhedralSurface {
        let v = vec![
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(0.0, 0.0, -1.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(0.0, -1.0, 0.0),
        ];
        let mut faces = Vec::new();
        for i in 0..4 {
            let a = 2 + i;
            let b = 2 + (i + 1) % 4;
            faces.push([0, a, b]);
            faces.push([1, b, a]);
        }
        PolyhedralSurface::new(v, faces).expect("octahedron is valid")
    }

    pub fn regular_tetrahedron() -> PolyhedralSurface {
        let v = vec![
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(1.0, -1.0, -1.0),
            Point3::new(-1.0, 1.0, -1.0),
            Point3::new(-1.0, -1.0, 1.0),
        ];
        PolyhedralSurface::new(v, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).expect("tetrahedron is valid")
    }

    /// Unit cube, each square split along one diagonal.
    pub fn triangulated_cube() -> PolyhedralSurface {
        let mut v = Vec::new();
        for i in 0..8 {
            v.push(Point3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64));
        }
        let quads = [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]];
        let mut faces = Vec::new();
        for q in quads {
            faces.push([q[0], q[1], q[2]]);
            faces.push([q[0], q[2], q[3]]);
        }
        PolyhedralSurface::new(v, faces).expect("cube is valid")
    }

    pub fn icosahedron() -> PolyhedralSurface {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut v = Vec::new();
        for &(a, b) in &[(1.0, phi), (-1.0, phi), (1.0, -phi), (-1.0, -phi)] {
            v.push(Point3::new(0.0, a, b));
            v.push(Point3::new(a, b, 0.0));
            v.push(Point3::new(b, 0.0, a));
        }
        let faces = crate::generate::hull_faces(&v, 1e-9).expect("icosahedron hull");
        PolyhedralSurface::new(v, faces).expect("icosahedron is valid")
    }
}
