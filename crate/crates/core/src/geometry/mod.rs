//! Geometric primitives: closed triangulated surfaces, convexity, dihedral
//! angles, spherical links, projective maps and tetrahedra given by edge
//! lengths.

pub mod convexity;
pub mod projective;
pub mod sphere;
pub mod surface;
pub mod tetra;

use nalgebra::Vector3;

use crate::dual::{cross3, dot3, sub3, Scalar, V3};

pub type Point3 = Vector3<f64>;

pub use convexity::{classify_convexity, ConvexityClass, ConvexityReport};
pub use projective::ProjectiveMap;
pub use sphere::{hemisphere_witness, spherical_polygon_relation_residual, SphericalPolygon};
pub use surface::PolyhedralSurface;
pub use tetra::{cayley_menger_feasible, schlafli_residual, TetraLengths};

/// Largest pairwise distance.
pub fn diameter(points: &[Point3]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max((points[i] - points[j]).norm());
        }
    }
    d
}

/// Interior dihedral angle in `[0, 2pi)` at edge `(a, b)`.
///
/// Face `(a, b, c)` and face `(b, a, d)` are oriented so that
/// `(b - a) x (c - a)` and `(a - b) x (d - b)` point out of the solid.
pub fn interior_angle_generic<T: Scalar>(a: V3<T>, b: V3<T>, c: V3<T>, d: V3<T>) -> T {
    let e = sub3(b, a);
    let ca = sub3(c, a);
    let da = sub3(d, a);
    let n1 = cross3(e, ca);
    let m2 = cross3(e, da);
    let len_e = dot3(e, e).sqrt();
    let y = -dot3(da, n1);
    let x = dot3(n1, m2) / len_e;
    let ang = y.atan2(x);
    if ang.value() < 0.0 {
        ang + T::constant(2.0 * std::f64::consts::PI)
    } else {
        ang
    }
}

pub fn interior_angle(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    interior_angle_generic([a.x, a.y, a.z], [b.x, b.y, b.z], [c.x, c.y, c.z], [d.x, d.y, d.z])
}

pub(crate) fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_tetrahedron_dihedral() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(1.0, 0.0, 0.0);
        let c = Point3::new(0.5, 3f64.sqrt() / 2.0, 0.0);
        let d = Point3::new(0.5, 3f64.sqrt() / 6.0, -(2.0f64 / 3.0).sqrt());
        let ang = interior_angle(&a, &b, &c, &d);
        assert!((ang - (1.0f64 / 3.0).acos()).abs() < 1e-14);
        // same edge seen from the other face
        assert!((interior_angle(&b, &a, &d, &c) - ang).abs() < 1e-14);
        // reversed orientation measures the complementary angle
        let reflex = interior_angle(&a, &b, &d, &c);
        assert!((reflex - (2.0 * std::f64::consts::PI - (1.0f64 / 3.0).acos())).abs() < 1e-12);
    }
}
