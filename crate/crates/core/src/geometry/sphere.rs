use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::{interior_angle, surface::PolyhedralSurface};

/// Polygon on the unit sphere.
///
/// `angles[i]` is the interior angle at `vertices[i]`; `sides[i]` is the arc
/// length from `vertices[i]` to `vertices[i + 1]`. For the link of a surface
/// vertex the angles are the dihedral angles of the incident edges and the
/// sides are the face angles.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalPolygon {
    pub vertices: Vec<Vector3<f64>>,
    pub angles: Vec<f64>,
    pub sides: Vec<f64>,
}

impl SphericalPolygon {
    /// Polygon spanned by directions listed counterclockwise as seen from
    /// outside the cone they bound.
    pub fn from_directions(dirs: &[Vector3<f64>]) -> Result<Self> {
        let k = dirs.len();
        if k < 3 {
            return Err(Error::Degenerate(format!("spherical polygon with {k} vertices")));
        }
        let mut vertices = Vec::with_capacity(k);
        for (i, d) in dirs.iter().enumerate() {
            let n = d.norm();
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::Degenerate(format!("direction {i} has zero length")));
            }
            vertices.push(d / n);
        }
        let o = Vector3::zeros();
        let mut angles = Vec::with_capacity(k);
        let mut sides = Vec::with_capacity(k);
        for i in 0..k {
            let prev = &vertices[(i + k - 1) % k];
            let next = &vertices[(i + 1) % k];
            angles.push(interior_angle(&o, &vertices[i], next, prev));
            sides.push(arc(&vertices[i], next));
        }
        Ok(SphericalPolygon { vertices, angles, sides })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn arc(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Link of `v`: unit directions to its neighbours in rotation order.
pub fn vertex_link(surface: &PolyhedralSurface, v: usize) -> Result<SphericalPolygon> {
    if v >= surface.num_vertices() {
        return Err(Error::Precondition(format!("vertex {v} out of range")));
    }
    let ring = surface.rotation(v);
    if ring.len() < 3 {
        return Err(Error::InvalidSurface(format!("vertex {v} has degree {}", ring.len())));
    }
    let p = surface.vertices();
    let dirs: Vec<Vector3<f64>> = ring.iter().map(|&w| p[w] - p[v]).collect();
    let mut link = SphericalPolygon::from_directions(&dirs)?;
    for (slot, &w) in ring.iter().enumerate() {
        link.angles[slot] = surface.dihedral_angle_at(v, w)?;
    }
    Ok(link)
}

/// `sum_i theta'_i p_i`; vanishes exactly on the realizable angle variations
/// of the polygon with fixed side lengths.
pub fn spherical_polygon_relation_residual(link: &SphericalPolygon, angle_variations: &[f64]) -> Result<Vector3<f64>> {
    if angle_variations.len() != link.len() {
        return Err(Error::SizeMismatch { expected: link.len(), got: angle_variations.len() });
    }
    Ok(link.vertices.iter().zip(angle_variations).fold(Vector3::zeros(), |acc, (p, t)| acc + p * *t))
}

/// Best direction `u` maximising `min_k u . d_k / |d_k|`, with that margin.
///
/// The directions lie in an open hemisphere exactly when the margin is
/// positive. The optimum is pinned by one, two or three active directions, so
/// enumerating those candidates is exact.
pub fn hemisphere_witness(dirs: &[Vector3<f64>]) -> Option<(Vector3<f64>, f64)> {
    let w: Vec<Vector3<f64>> = dirs
        .iter()
        .filter_map(|d| {
            let n = d.norm();
            (n > 0.0).then(|| d / n)
        })
        .collect();
    if w.is_empty() {
        return None;
    }
    let margin = |u: &Vector3<f64>| w.iter().map(|d| u.dot(d)).fold(f64::INFINITY, f64::min);
    let mut best = (w[0], margin(&w[0]));
    let mut consider = |u: Vector3<f64>| {
        let n = u.norm();
        if n > 1e-14 {
            let u = u / n;
            let m = margin(&u);
            if m > best.1 {
                best = (u, m);
            }
        }
    };
    let k = w.len();
    for a in 0..k {
        consider(w[a]);
        for b in a + 1..k {
            consider(w[a] + w[b]);
            for c in b + 1..k {
                let u = (w[a] - w[b]).cross(&(w[a] - w[c]));
                if u.dot(&w[a]) >= 0.0 {
                    consider(u);
                } else {
                    consider(-u);
                }
            }
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface::fixtures::octahedron;
    use crate::geometry::Point3;
    use std::f64::consts::PI;

    fn square_pyramid() -> PolyhedralSurface {
        // apex at the origin, base at z = -1 on a circle of radius 1: lateral
        // edges make 45 degrees with the axis
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, -1.0),
            Point3::new(0.0, 1.0, -1.0),
            Point3::new(-1.0, 0.0, -1.0),
            Point3::new(0.0, -1.0, -1.0),
        ];
        let faces = vec![[0, 2, 1], [0, 3, 2], [0, 4, 3], [0, 1, 4], [1, 2, 3], [1, 3, 4]];
        PolyhedralSurface::new(v, faces).unwrap()
    }

    #[test]
    fn pyramid_apex_link_is_a_circle_of_radius_quarter_pi() {
        let s = square_pyramid();
        let link = vertex_link(&s, 0).unwrap();
        assert_eq!(link.len(), 4);
        let axis = Vector3::new(0.0, 0.0, -1.0);
        for p in &link.vertices {
            assert!((p.norm() - 1.0).abs() < 1e-12);
            assert!((p.dot(&axis).acos() - PI / 4.0).abs() < 1e-12);
        }
        let (u, m) = hemisphere_witness(&link.vertices).unwrap();
        assert!(m > 0.0);
        assert!((u - axis).norm() < 1e-12);
    }

    #[test]
    fn octahedron_link_sides_and_angles() {
        let o = octahedron();
        let link = vertex_link(&o, 0).unwrap();
        let perimeter: f64 = link.sides.iter().sum();
        assert!((perimeter - 4.0 * PI / 3.0).abs() < 1e-12);
        let dihedral = (-1.0f64 / 3.0).acos();
        for a in &link.angles {
            assert!((a - dihedral).abs() < 1e-12);
        }
        // the cone construction agrees with the surface dihedral angles
        let cone = SphericalPolygon::from_directions(&link.vertices).unwrap();
        for (a, b) in cone.angles.iter().zip(&link.angles) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn octahedron_residual_of_alternating_variation() {
        let o = octahedron();
        let link = vertex_link(&o, 0).unwrap();
        assert_eq!(spherical_polygon_relation_residual(&link, &[0.0; 4]).unwrap(), Vector3::zeros());
        // link points p_k = (e_k - e_z)/sqrt(2); alternating signs cancel the
        // vertical parts and opposite horizontal parts add up
        let r = spherical_polygon_relation_residual(&link, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        let mut expected = Vector3::zeros();
        for (k, p) in link.vertices.iter().enumerate() {
            expected += p * if k % 2 == 0 { 1.0 } else { -1.0 };
        }
        assert!((r - expected).norm() < 1e-15);
        assert!(r.z.abs() < 1e-15);
    }

    #[test]
    fn residual_length_mismatch() {
        let link = vertex_link(&octahedron(), 0).unwrap();
        assert!(spherical_polygon_relation_residual(&link, &[1.0]).is_err());
    }

    #[test]
    fn hemisphere_witness_detects_spanning_sets() {
        let dirs = [Vector3::new(1.0, 0.0, 0.0), Vector3::new(-1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.1)];
        let (_, m) = hemisphere_witness(&dirs).unwrap();
        assert!(m <= 1e-15);
        let tight = [
            Vector3::new(1.0, 0.0, 0.2),
            Vector3::new(-1.0, 0.0, 0.2),
            Vector3::new(0.0, 1.0, 0.2),
            Vector3::new(0.0, -1.0, 0.2),
        ];
        let (u, m) = hemisphere_witness(&tight).unwrap();
        assert!(m > 0.0);
        assert!((u - Vector3::z()).norm() < 1e-12);
    }
}
