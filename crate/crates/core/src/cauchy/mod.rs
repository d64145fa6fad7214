//! Sign calculus for flexes of triangulated surfaces: which dihedral angles
//! open or close, how often the sign changes around vertices and faces, and
//! the denting construction.

mod dent;
mod topo;

pub use dent::{dent, theorem1_harness, Dent, HarnessConfig, Theorem1Instance, Theorem1Report};
pub use topo::topo_lemma_witness_search;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::geometry::{interior_angle_generic, PolyhedralSurface};
use crate::rigidity::Motion;
use crate::tol::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub fn of(x: f64, zero_tol: f64) -> Sign {
        if x > zero_tol {
            Sign::Plus
        } else if x < -zero_tol {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }
}

/// One sign per surface edge, in the surface's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector {
    pub signs: Vec<Sign>,
}

impl SignVector {
    pub fn zeros(n: usize) -> Self {
        SignVector { signs: vec![Sign::Zero; n] }
    }

    pub fn neg(&self) -> Self {
        SignVector { signs: self.signs.iter().map(|s| s.neg()).collect() }
    }

    pub fn nonzero(&self) -> usize {
        self.signs.iter().filter(|&&s| s != Sign::Zero).count()
    }

    pub fn to_symbols(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }
}

/// First-order change of every interior dihedral angle along `m`, in
/// radians per unit time.
pub fn dihedral_variation(surface: &PolyhedralSurface, m: &Motion) -> Result<Vec<f64>> {
    let p = surface.vertices();
    if m.len() != p.len() {
        return Err(Error::SizeMismatch { expected: p.len(), got: m.len() });
    }
    let dual = |i: usize| -> [Dual; 3] { std::array::from_fn(|k| Dual::new(p[i][k], m.velocities[i][k])) };
    Ok((0..surface.num_edges())
        .map(|k| {
            let (a, b, c, d) = surface.edge_wings(k);
            interior_angle_generic(dual(a), dual(b), dual(c), dual(d)).du
        })
        .collect())
}

/// Sign of the dihedral variation at each edge. The surface is rescaled to
/// unit diameter and the motion to unit norm before comparing with `1e-9`.
pub fn sign_vector_from_flex(surface: &PolyhedralSurface, m: &Motion) -> Result<SignVector> {
    let var = dihedral_variation(surface, m)?;
    let norm = m.norm();
    if norm == 0.0 {
        return Ok(SignVector::zeros(var.len()));
    }
    let scale = surface.diameter() / norm;
    Ok(SignVector { signs: var.iter().map(|v| Sign::of(v * scale, 1e-9)).collect() })
}

/// Graph embedded on the sphere through a rotation system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarEmbedding {
    /// Neighbours of each vertex in cyclic order.
    pub rotation: Vec<Vec<usize>>,
}

impl PlanarEmbedding {
    pub fn from_surface(surface: &PolyhedralSurface) -> Self {
        PlanarEmbedding { rotation: (0..surface.num_vertices()).map(|v| surface.rotation(v).to_vec()).collect() }
    }

    /// Checks symmetry of the adjacency and that the face count gives Euler
    /// characteristic 2.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = rotation.len();
        for (v, nb) in rotation.iter().enumerate() {
            for &w in nb {
                if w >= n || w == v {
                    return Err(Error::SignGraph(format!("vertex {v}: bad neighbour {w}")));
                }
                if rotation[w].iter().filter(|&&x| x == v).count() != 1 || nb.iter().filter(|&&x| x == w).count() != 1 {
                    return Err(Error::SignGraph(format!("edge ({v}, {w}) is not listed once at both ends")));
                }
            }
        }
        let e = PlanarEmbedding { rotation };
        let chi = e.num_vertices() as i64 - e.num_edges() as i64 + e.faces().len() as i64;
        if chi != 2 {
            return Err(Error::SignGraph(format!("rotation system has Euler characteristic {chi}")));
        }
        Ok(e)
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.iter().filter(|r| !r.is_empty()).count()
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .rotation
            .iter()
            .enumerate()
            .flat_map(|(v, nb)| nb.iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn num_edges(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Face boundary walks as sequences of directed edges; the face to the
    /// left of `u -> v` continues with `v -> w`, `w` preceding `u` at `v`.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for (v, nb) in self.rotation.iter().enumerate() {
            for &w in nb {
                seen.insert((v, w), false);
            }
        }
        let mut faces = Vec::new();
        let keys: Vec<(usize, usize)> = seen.keys().cloned().collect();
        for start in keys {
            if seen[&start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut cur = start;
            while !seen[&cur] {
                seen.insert(cur, true);
                walk.push(cur);
                let (u, v) = cur;
                let rot = &self.rotation[v];
                let pos = rot.iter().position(|&x| x == u).expect("symmetric adjacency");
                cur = (v, rot[(pos + rot.len() - 1) % rot.len()]);
            }
            faces.push(walk);
        }
        faces
    }
}

/// Cyclic sign changes after dropping zeros.
pub fn cyclic_changes(signs: &[Sign]) -> usize {
    let s: Vec<Sign> = signs.iter().cloned().filter(|&x| x != Sign::Zero).collect();
    let n = s.len();
    (0..n).filter(|&i| s[i] != s[(i + 1) % n]).count()
}

/// Edges labeled `+` or `-`, embedded through the inherited rotation system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedPlanarGraph {
    pub embedding: PlanarEmbedding,
    /// `(i, j, sign)` with `i < j`, sorted.
    pub labels: Vec<(usize, usize, Sign)>,
}

impl SignedPlanarGraph {
    pub fn sign(&self, a: usize, b: usize) -> Sign {
        let key = (a.min(b), a.max(b));
        let k = self.labels.binary_search_by(|&(i, j, _)| (i, j).cmp(&key)).expect("edge of the graph");
        self.labels[k].2
    }

    pub fn num_vertices(&self) -> usize {
        self.embedding.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.labels.len()
    }
}

/// Drops zero edges and the vertices left without edges. Every remaining
/// vertex must keep at least three edges.
pub fn sign_subgraph(surface: &PolyhedralSurface, sv: &SignVector) -> Result<SignedPlanarGraph> {
    if sv.signs.len() != surface.num_edges() {
        return Err(Error::SizeMismatch { expected: surface.num_edges(), got: sv.signs.len() });
    }
    let labels: Vec<(usize, usize, Sign)> = surface
        .edges()
        .iter()
        .zip(&sv.signs)
        .filter(|(_, &s)| s != Sign::Zero)
        .map(|(&(a, b), &s)| (a, b, s))
        .collect();
    let has = |a: usize, b: usize| labels.binary_search_by(|&(i, j, _)| (i, j).cmp(&(a.min(b), a.max(b)))).is_ok();
    let rotation: Vec<Vec<usize>> = (0..surface.num_vertices())
        .map(|v| surface.rotation(v).iter().cloned().filter(|&w| has(v, w)).collect())
        .collect();
    if let Some((v, r)) = rotation.iter().enumerate().find(|(_, r)| !r.is_empty() && r.len() < 3) {
        return Err(Error::SignGraph(format!(
            "vertex {v} keeps only {} signed edges; flex-induced signs leave at least 3",
            r.len()
        )));
    }
    Ok(SignedPlanarGraph { embedding: PlanarEmbedding { rotation }, labels })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignChangeStats {
    /// Indexed by vertex id; zero for vertices outside the graph.
    pub vertex_changes: Vec<usize>,
    pub face_changes: Vec<usize>,
    pub face_sizes: Vec<usize>,
    pub face_size_histogram: BTreeMap<usize, usize>,
    pub v: usize,
    pub e: usize,
    pub f: usize,
    /// Total over faces; equals the total over vertices, each corner being
    /// counted once either way.
    pub s: usize,
    pub s_from_vertices: usize,
    /// `4v - 6 <= s`: fewer than four changes at no more than three vertices.
    pub lower_bound: i64,
    pub lower_holds: bool,
    /// `s <= 4e - 4f`: at most `2k - 4` changes around a `k`-gon.
    pub upper_bound: i64,
    pub upper_holds: bool,
    /// Both bounds hold, which Euler's relation forbids.
    pub contradiction: bool,
}

pub fn count_sign_changes(g: &SignedPlanarGraph) -> SignChangeStats {
    let rot = &g.embedding.rotation;
    let vertex_changes: Vec<usize> = rot
        .iter()
        .enumerate()
        .map(|(v, nb)| cyclic_changes(&nb.iter().map(|&w| g.sign(v, w)).collect::<Vec<_>>()))
        .collect();
    let faces = g.embedding.faces();
    let face_changes: Vec<usize> =
        faces.iter().map(|walk| cyclic_changes(&walk.iter().map(|&(a, b)| g.sign(a, b)).collect::<Vec<_>>())).collect();
    let face_sizes: Vec<usize> = faces.iter().map(Vec::len).collect();
    let mut face_size_histogram = BTreeMap::new();
    for &k in &face_sizes {
        *face_size_histogram.entry(k).or_insert(0) += 1;
    }
    let (v, e, f) = (g.num_vertices(), g.num_edges(), faces.len());
    let s: usize = face_changes.iter().sum();
    let lower_bound = 4 * v as i64 - 6;
    let upper_bound = 4 * e as i64 - 4 * f as i64;
    let lower_holds = s as i64 >= lower_bound;
    let upper_holds = s as i64 <= upper_bound;
    SignChangeStats {
        s_from_vertices: vertex_changes.iter().sum(),
        vertex_changes,
        face_changes,
        face_sizes,
        face_size_histogram,
        v,
        e,
        f,
        s,
        lower_bound,
        lower_holds,
        upper_bound,
        upper_holds,
        contradiction: v > 0 && lower_holds && upper_holds,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSignReport {
    pub vertex: usize,
    /// Every incident dihedral angle is below `pi`.
    pub convex: bool,
    pub changes: usize,
    pub nonzero: usize,
    pub satisfied: bool,
    pub clause: String,
}

/// Checks the local conclusions a flex must satisfy at each vertex: at a
/// convex vertex, all zero or at least four sign changes; elsewhere, all zero
/// or both signs present on at least three edges.
pub fn vertex_sign_lemma_check(
    surface: &PolyhedralSurface,
    sv: &SignVector,
    tol: &Tolerance,
) -> Result<Vec<VertexSignReport>> {
    if sv.signs.len() != surface.num_edges() {
        return Err(Error::SizeMismatch { expected: surface.num_edges(), got: sv.signs.len() });
    }
    let mut out = Vec::with_capacity(surface.num_vertices());
    for v in 0..surface.num_vertices() {
        let rot = surface.rotation(v);
        let mut signs = Vec::with_capacity(rot.len());
        let mut convex = true;
        for &w in rot {
            let k = surface.edge_index(v, w).expect("rotation lists edges");
            signs.push(sv.signs[k]);
            if surface.dihedral_angle(k)? >= PI - tol.geom_tol {
                convex = false;
            }
        }
        let changes = cyclic_changes(&signs);
        let nonzero = signs.iter().filter(|&&s| s != Sign::Zero).count();
        let both = signs.contains(&Sign::Plus) && signs.contains(&Sign::Minus);
        let (satisfied, clause) = if nonzero == 0 {
            (true, "all zero".to_string())
        } else if convex {
            (changes >= 4, format!("convex vertex: {changes} changes (need at least 4)"))
        } else {
            (both && nonzero >= 3, format!("non-convex vertex: {nonzero} non-zero signs, both signs present: {both}"))
        };
        out.push(VertexSignReport { vertex: v, convex, changes, nonzero, satisfied, clause });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface::fixtures::{icosahedron, octahedron};
    use crate::rigidity::{nontrivial_flexes, trivial_motions, Framework};
    use crate::suspension::fixtures::lambda_zero_suspension;
    use crate::suspension::NORTH;
    use nalgebra::DVector;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn angles(surface: &PolyhedralSurface) -> Vec<f64> {
        (0..surface.num_edges()).map(|k| surface.dihedral_angle(k).unwrap()).collect()
    }

    /// Central difference of the dihedral angles along `m`.
    fn fd_variation(surface: &PolyhedralSurface, m: &Motion, h: f64) -> Vec<f64> {
        let moved = |t: f64| {
            let v = surface.vertices().iter().zip(&m.velocities).map(|(p, w)| p + w * t).collect();
            surface.with_vertices(v).unwrap()
        };
        angles(&moved(h)).iter().zip(angles(&moved(-h))).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    }

    #[test]
    fn trivial_motions_give_zero_signs() {
        let o = icosahedron();
        let t = trivial_motions(o.vertices());
        for c in 0..6 {
            let m = Motion::from_flat(&DVector::from_column_slice(t.column(c).as_slice()));
            assert_eq!(sign_vector_from_flex(&o, &m).unwrap().nonzero(), 0);
        }
    }

    #[test]
    fn octahedron_minus_an_edge() {
        let o = octahedron();
        let fw = Framework::from_surface(&o);
        let k = o.edges().iter().position(|&(a, b)| a >= 2 && b >= 2).unwrap_or(0);
        let flexes = nontrivial_flexes(&fw.without_edge(k), &tol());
        assert_eq!(flexes.len(), 1);
        let m = &flexes[0];
        let var = dihedral_variation(&o, m).unwrap();
        let fd = fd_variation(&o, m, 1e-6);
        for (a, b) in var.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6);
        }
        let sv = sign_vector_from_flex(&o, m).unwrap();
        assert_ne!(sv.signs[k], Sign::Zero);
        assert_eq!(sign_vector_from_flex(&o, &m.scaled(-1.0)).unwrap(), sv.neg());
    }

    #[test]
    fn flexible_suspension_signs_alternate_on_the_axis() {
        let s = lambda_zero_suspension();
        let surface = s.surface();
        let flexes = nontrivial_flexes(&Framework::from_surface(surface), &tol());
        assert_eq!(flexes.len(), 1);
        let m = &flexes[0];
        let var = dihedral_variation(surface, m).unwrap();
        let fd = fd_variation(surface, m, 1e-6);
        for (a, b) in var.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6);
        }
        let sv = sign_vector_from_flex(surface, m).unwrap();
        let around: Vec<Sign> =
            surface.rotation(NORTH).iter().map(|&w| sv.signs[surface.edge_index(NORTH, w).unwrap()]).collect();
        assert!(around.contains(&Sign::Plus) && around.contains(&Sign::Minus));
        let g = sign_subgraph(surface, &sv).unwrap();
        let st = count_sign_changes(&g);
        assert!(!st.contradiction);
        assert!(st.upper_holds);
        assert!(!st.lower_holds);
        assert_eq!(st.s, st.s_from_vertices);
    }

    #[test]
    fn changes_in_cyclic_sequences() {
        use Sign::*;
        assert_eq!(cyclic_changes(&[Plus, Minus, Plus, Minus]), 4);
        assert_eq!(cyclic_changes(&[Plus, Minus, Plus]), 2);
        assert_eq!(cyclic_changes(&[Plus, Plus, Minus]), 2);
        assert_eq!(cyclic_changes(&[Plus, Zero, Minus, Zero]), 2);
        assert_eq!(cyclic_changes(&[Zero, Zero]), 0);
    }

    #[test]
    fn subgraph_guards() {
        let o = octahedron();
        let g = sign_subgraph(&o, &SignVector::zeros(12)).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(count_sign_changes(&g).s, 0);
        let mut sv = SignVector::zeros(12);
        for &w in o.rotation(0) {
            sv.signs[o.edge_index(0, w).unwrap()] = Sign::Plus;
        }
        assert!(matches!(sign_subgraph(&o, &sv), Err(Error::SignGraph(_))));
    }

    #[test]
    fn full_octahedron_counts() {
        let o = octahedron();
        let sv = SignVector { signs: (0..12).map(|k| if k % 3 == 0 { Sign::Minus } else { Sign::Plus }).collect() };
        let g = sign_subgraph(&o, &sv).unwrap();
        let st = count_sign_changes(&g);
        assert_eq!((st.v, st.e, st.f), (6, 12, 8));
        assert_eq!(st.face_size_histogram[&3], 8);
        assert_eq!(st.s, st.s_from_vertices);
        assert!(st.vertex_changes.iter().all(|c| c % 2 == 0));
        assert!(st.face_changes.iter().all(|c| c % 2 == 0 && *c <= 2));
        assert_eq!(st.upper_bound, 16);
        assert!(st.upper_holds && !st.contradiction);
    }

    #[test]
    fn vertex_lemma_report() {
        let o = octahedron();
        let rep = vertex_sign_lemma_check(&o, &SignVector::zeros(12), &tol()).unwrap();
        assert!(rep.iter().all(|r| r.satisfied && r.convex));
        let mut sv = SignVector::zeros(12);
        for &w in o.rotation(0) {
            sv.signs[o.edge_index(0, w).unwrap()] = Sign::Plus;
        }
        let rep = vertex_sign_lemma_check(&o, &sv, &tol()).unwrap();
        assert!(!rep[0].satisfied);
        let flexes = nontrivial_flexes(&Framework::from_surface(&o).without_edge(0), &tol());
        let sv = sign_vector_from_flex(&o, &flexes[0]).unwrap();
        let rep = vertex_sign_lemma_check(&o, &sv, &tol()).unwrap();
        // away from the two faces at the deleted edge the motion is a flex
        // of every face, so the convex clause must hold
        let (a, b, c, d) = o.edge_wings(0);
        for r in &rep {
            if ![a, b, c, d].contains(&r.vertex) {
                assert!(r.satisfied, "{r:?}");
            }
        }
    }

    #[test]
    fn embedding_faces_of_surfaces() {
        for s in [octahedron(), icosahedron()] {
            let e = PlanarEmbedding::from_surface(&s);
            assert_eq!(e.faces().len(), s.num_faces());
            assert!(e.faces().iter().all(|f| f.len() == 3));
            assert_eq!(e.num_edges(), s.num_edges());
            assert!(PlanarEmbedding::from_rotation(e.rotation.clone()).is_ok());
        }
    }
}
