use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::geometry::{diameter, surface::PolyhedralSurface, Point3};
use crate::tol::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvexityClass {
    StronglyStrictlyConvex,
    WeaklyStrictlyConvex,
    NotWeaklyConvex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub class: ConvexityClass,
    /// Per vertex: is it a vertex (exposed point) of the hull of all vertices.
    pub vertex_exposed: Vec<bool>,
    /// Per surface edge: is there a plane meeting the vertex set in exactly
    /// its two endpoints with everything else strictly on one side.
    pub edge_exposed: Vec<bool>,
    /// Per surface edge: interior dihedral angle above pi.
    pub nonconvex_edges: Vec<bool>,
    pub diagnostics: Vec<String>,
}

impl ConvexityReport {
    pub fn nonconvex_count(&self) -> usize {
        self.nonconvex_edges.iter().filter(|&&b| b).count()
    }
}

/// Rescales to unit diameter around the centroid.
pub(crate) fn normalized(points: &[Point3]) -> Vec<Point3> {
    let d = diameter(points);
    let c = points.iter().fold(Point3::zeros(), |a, p| a + p) / points.len().max(1) as f64;
    if d == 0.0 {
        return points.to_vec();
    }
    points.iter().map(|p| (p - c) / d).collect()
}

/// Classifies the surface against the convex hull of its vertex set.
pub fn classify_convexity(surface: &PolyhedralSurface, tol: &Tolerance) -> ConvexityReport {
    let q = normalized(surface.vertices());
    let mut diagnostics = Vec::new();

    let vertex_exposed = match exposed_points(&q, tol.geom_tol) {
        Some(v) => v,
        None => {
            diagnostics.push("all vertices are coplanar: the surface bounds no solid".into());
            vec![false; q.len()]
        }
    };
    for (v, e) in vertex_exposed.iter().enumerate() {
        if !e {
            diagnostics.push(format!("vertex {v} is not an exposed point of the hull"));
        }
    }

    let mut edge_exposed = Vec::with_capacity(surface.num_edges());
    let mut nonconvex_edges = Vec::with_capacity(surface.num_edges());
    for (k, &(i, j)) in surface.edges().iter().enumerate() {
        edge_exposed.push(vertex_exposed[i] && vertex_exposed[j] && edge_is_exposed(&q, i, j, tol.geom_tol));
        match surface.dihedral_angle(k) {
            Ok(a) => nonconvex_edges.push(a > PI + tol.geom_tol),
            Err(e) => {
                diagnostics.push(format!("edge ({i}, {j}): {e}"));
                nonconvex_edges.push(false);
            }
        }
    }

    let class = if !vertex_exposed.iter().all(|&b| b) {
        ConvexityClass::NotWeaklyConvex
    } else if edge_exposed.iter().all(|&b| b) {
        ConvexityClass::StronglyStrictlyConvex
    } else {
        ConvexityClass::WeaklyStrictlyConvex
    };
    ConvexityReport { class, vertex_exposed, edge_exposed, nonconvex_edges, diagnostics }
}

/// Per point: is it a vertex of the convex hull. `None` if the set is flat.
///
/// Works through the supporting planes spanned by point triples: a point is a
/// hull vertex iff it is a 2D extreme point of the points lying on some facet
/// plane.
pub fn exposed_points(q: &[Point3], tol: f64) -> Option<Vec<bool>> {
    let n = q.len();
    let mut exposed = vec![false; n];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut found_support = false;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let normal = (q[b] - q[a]).cross(&(q[c] - q[a]));
                let len = normal.norm();
                if len <= tol {
                    continue;
                }
                let normal = normal / len;
                let mut above = false;
                let mut below = false;
                let mut on = Vec::new();
                for (k, p) in q.iter().enumerate() {
                    let s = normal.dot(&(p - q[a]));
                    if s > tol {
                        above = true;
                    } else if s < -tol {
                        below = true;
                    } else {
                        on.push(k);
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if !above && !below {
                    // every point on this plane: the set is flat
                    continue;
                }
                found_support = true;
                if !seen.insert(on.clone()) {
                    continue;
                }
                if on.len() == 3 {
                    for &k in &on {
                        exposed[k] = true;
                    }
                    continue;
                }
                let (e1, e2) = plane_basis(&normal);
                for &i in &on {
                    if exposed[i] {
                        continue;
                    }
                    let angles: Vec<f64> = on
                        .iter()
                        .filter(|&&k| k != i)
                        .filter_map(|&k| {
                            let d = q[k] - q[i];
                            let (x, y) = (d.dot(&e1), d.dot(&e2));
                            (x.hypot(y) > tol).then(|| y.atan2(x))
                        })
                        .collect();
                    if angles.len() + 1 == on.len() && max_gap(angles) > PI + tol {
                        exposed[i] = true;
                    }
                }
            }
        }
    }
    found_support.then_some(exposed)
}

/// Strictly exposed edge test: looking down the edge, all other points must
/// fit in an open half-plane.
fn edge_is_exposed(q: &[Point3], i: usize, j: usize, tol: f64) -> bool {
    let d = q[j] - q[i];
    let len = d.norm();
    if len <= tol {
        return false;
    }
    let d = d / len;
    let (e1, e2) = plane_basis(&d);
    let mut angles = Vec::with_capacity(q.len());
    for (k, p) in q.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let w = p - q[i];
        let (x, y) = (w.dot(&e1), w.dot(&e2));
        if x.hypot(y) <= tol {
            return false;
        }
        angles.push(y.atan2(x));
    }
    angles.is_empty() || max_gap(angles) > PI + tol
}

fn max_gap(mut angles: Vec<f64>) -> f64 {
    if angles.is_empty() {
        return 2.0 * PI;
    }
    angles.sort_by(|a, b| a.total_cmp(b));
    let mut gap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    for w in angles.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

pub(crate) fn plane_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface::fixtures::*;

    #[test]
    fn octahedron_is_strongly_convex() {
        let r = classify_convexity(&octahedron(), &Tolerance::default());
        assert_eq!(r.class, ConvexityClass::StronglyStrictlyConvex);
        assert_eq!(r.nonconvex_count(), 0);
    }

    #[test]
    fn cube_with_diagonals_is_only_weakly_convex() {
        // face diagonals lie in facets, so they are not strictly exposed
        let r = classify_convexity(&triangulated_cube(), &Tolerance::default());
        assert_eq!(r.class, ConvexityClass::WeaklyStrictlyConvex);
        assert!(r.vertex_exposed.iter().all(|&b| b));
        assert_eq!(r.edge_exposed.iter().filter(|&&b| !b).count(), 6);
    }

    #[test]
    fn dented_octahedron_flags_the_new_edge() {
        let o = octahedron();
        // replace faces (N, p1, p2), (S, p2, p1) by (N, S, p1)-type faces
        let mut faces: Vec<[usize; 3]> =
            o.faces().iter().filter(|f| !(f.contains(&2) && f.contains(&3))).cloned().collect();
        faces.push([0, 2, 1]);
        faces.push([1, 3, 0]);
        let dented = PolyhedralSurface::new(o.vertices().to_vec(), faces).unwrap();
        let r = classify_convexity(&dented, &Tolerance::default());
        assert_eq!(r.class, ConvexityClass::WeaklyStrictlyConvex);
        let k = dented.edge_index(0, 1).unwrap();
        assert!(r.nonconvex_edges[k]);
        assert!(!r.edge_exposed[k]);
        assert_eq!(r.nonconvex_count(), 1);
        // hull membership oracle: each of the 6 points lies outside the hull
        // of the other 5 (checked against the facet planes of that hull)
        for v in 0..6 {
            let others: Vec<Point3> = (0..6).filter(|&w| w != v).map(|w| o.vertices()[w]).collect();
            let p = o.vertices()[v];
            let outside = (0..5).any(|a| {
                (a + 1..5).any(|b| {
                    (b + 1..5).any(|c| {
                        let n = (others[b] - others[a]).cross(&(others[c] - others[a]));
                        let s: Vec<f64> = others.iter().map(|x| n.dot(&(x - others[a]))).collect();
                        let sp = n.dot(&(p - others[a]));
                        (s.iter().all(|&x| x <= 1e-12) && sp > 1e-9) || (s.iter().all(|&x| x >= -1e-12) && sp < -1e-9)
                    })
                })
            });
            assert!(outside, "vertex {v}");
        }
    }

    #[test]
    fn interior_vertex_is_not_exposed() {
        // tetrahedron with a fifth vertex pushed inside through one face
        let t = regular_tetrahedron();
        let mut v = t.vertices().to_vec();
        let f = t.faces()[0];
        let centroid = (v[f[0]] + v[f[1]] + v[f[2]]) / 3.0;
        v.push(centroid * 0.5);
        let mut faces: Vec<[usize; 3]> = t.faces()[1..].to_vec();
        faces.push([f[0], f[1], 4]);
        faces.push([f[1], f[2], 4]);
        faces.push([f[2], f[0], 4]);
        let s = PolyhedralSurface::new(v, faces).unwrap();
        let r = classify_convexity(&s, &Tolerance::default());
        assert_eq!(r.class, ConvexityClass::NotWeaklyConvex);
        assert!(!r.vertex_exposed[4]);
    }

    #[test]
    fn vertex_on_hull_edge_is_not_strictly_convex() {
        let t = regular_tetrahedron();
        let mut v = t.vertices().to_vec();
        let (a, b) = t.edges()[0];
        v.push((v[a] + v[b]) / 2.0);
        let q = normalized(&v);
        let e = exposed_points(&q, 1e-9).unwrap();
        assert_eq!(e, vec![true, true, true, true, false]);
    }

    #[test]
    fn flat_point_sets_are_reported() {
        let q = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        assert!(exposed_points(&q, 1e-9).is_none());
    }

    #[test]
    fn classification_is_similarity_invariant() {
        let o = icosahedron();
        let base = classify_convexity(&o, &Tolerance::default());
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let moved: Vec<Point3> = o.vertices().iter().map(|p| rot * p * 7.5 + Point3::new(3.0, -2.0, 1.0)).collect();
        let m = o.with_vertices(moved).unwrap();
        assert_eq!(classify_convexity(&m, &Tolerance::default()), base);
    }
}
