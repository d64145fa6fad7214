use nalgebra::{Matrix3, Matrix4, Rotation3, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::geometry::{diameter, hemisphere_witness, surface::PolyhedralSurface, Point3};
use crate::tol::Tolerance;

/// Projective transformation of 3-space acting on homogeneous row vectors:
/// `[x y z 1] * M = [X Y Z W]`, image `(X, Y, Z) / W`.
///
/// Stored scaled so the largest entry has magnitude 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveMap {
    m: Matrix4<f64>,
}

impl ProjectiveMap {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let scale = m.amax();
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::SingularMap { det: 0.0 });
        }
        let m = m / scale;
        let det = m.determinant();
        if det.abs() <= 1e-12 {
            return Err(Error::SingularMap { det });
        }
        Ok(ProjectiveMap { m })
    }

    pub fn identity() -> Self {
        ProjectiveMap { m: Matrix4::identity() }
    }

    /// `x -> A x + t`.
    pub fn affine(linear: &Matrix3<f64>, translation: &Vector3<f64>) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&linear.transpose());
        m.fixed_view_mut::<1, 3>(3, 0).copy_from(&translation.transpose());
        m[(3, 3)] = 1.0;
        ProjectiveMap::new(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &ProjectiveMap) -> Result<Self> {
        ProjectiveMap::new(self.m * then.m)
    }

    fn homogeneous(&self, p: &Point3) -> Vector4<f64> {
        (Vector4::new(p.x, p.y, p.z, 1.0).transpose() * self.m).transpose()
    }

    /// Maps every point; all images must stay on the same side of the plane
    /// at infinity, at least `geom_tol` away after normalisation.
    pub fn apply_points(&self, points: &[Point3], tol: &Tolerance) -> Result<Vec<Point3>> {
        let h: Vec<Vector4<f64>> = points.iter().map(|p| self.homogeneous(p)).collect();
        // W is compared after scaling the inputs to unit size
        let scale = points.iter().map(|p| p.amax()).fold(1.0f64, f64::max);
        let sign = if h.iter().all(|x| x.w < 0.0) { -1.0 } else { 1.0 };
        let mut out = Vec::with_capacity(points.len());
        for (i, x) in h.iter().enumerate() {
            let w = sign * x.w;
            if !(w >= tol.geom_tol * scale) {
                return Err(Error::VertexAtInfinity { vertex: i });
            }
            out.push(Point3::new(x.x, x.y, x.z) * (sign / w));
        }
        Ok(out)
    }

    pub fn apply_surface(&self, s: &PolyhedralSurface, tol: &Tolerance) -> Result<PolyhedralSurface> {
        let v = self.apply_points(s.vertices(), tol)?;
        PolyhedralSurface::with_tolerance(v, s.faces().to_vec(), tol)
    }

    pub fn is_affine(&self) -> bool {
        let c = self.m.column(3);
        c[0].abs() <= 1e-15 * c[3].abs() && c[1].abs() <= 1e-15 * c[3].abs() && c[2].abs() <= 1e-15 * c[3].abs()
    }
}

/// Similarity taking `s` to the origin and `n` to `e_z`.
pub fn pole_similarity(n: &Point3, s: &Point3) -> Result<ProjectiveMap> {
    let axis = n - s;
    let len = axis.norm();
    if !(len > 0.0) {
        return Err(Error::Degenerate("poles coincide".into()));
    }
    let dir = axis / len;
    let rot = Rotation3::rotation_between(&dir, &Vector3::z())
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI));
    let linear = rot.matrix() / len;
    ProjectiveMap::affine(&linear, &(-(linear * s)))
}

/// Projective map sending `s` to the origin and `n` to `e_z` such that the
/// planes `z = 0` and `z = 1` touch the point set only at the poles.
///
/// When the planes orthogonal to the axis already do this, the map is the
/// similarity alone. Otherwise a support plane at each pole (the best
/// separating direction) is sent to `z = 0` / `z = 1`; the map fixes the
/// axis direction at infinity, so the projection along the axis transforms
/// by a planar projective map.
pub fn normalize_poles_map(n: &Point3, s: &Point3, others: &[Point3], tol: &Tolerance) -> Result<ProjectiveMap> {
    let sim = pole_similarity(n, s)?;
    let moved = sim.apply_points(others, tol)?;
    if poles_normalized(&Point3::z(), &Point3::zeros(), &moved, tol) {
        return Ok(sim);
    }
    let mut all = moved.clone();
    all.push(Point3::z());
    let margin_floor = tol.geom_tol / diameter(&all).max(1.0);
    let (u_s, ms) = hemisphere_witness(&all).ok_or_else(|| Error::Degenerate("no points besides the poles".into()))?;
    if ms <= margin_floor {
        return Err(Error::Precondition("south pole is not an exposed vertex".into()));
    }
    let from_n: Vec<Point3> = moved.iter().map(|p| p - Point3::z()).chain(std::iter::once(-Point3::z())).collect();
    let (u_n, mn) = hemisphere_witness(&from_n).expect("non-empty");
    if mn <= margin_floor {
        return Err(Error::Precondition("north pole is not an exposed vertex".into()));
    }
    let cs = u_s / u_s.z;
    let cn = -u_n / u_n.z;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = 1.0;
    m[(1, 1)] = 1.0;
    for r in 0..3 {
        m[(r, 2)] = cs[r];
        m[(r, 3)] = cs[r] + cn[r];
    }
    m[(3, 3)] = 1.0;
    let map = sim.then(&ProjectiveMap::new(m)?)?;
    let after = map.apply_points(others, tol)?;
    let np = map.apply_points(&[*n, *s], tol)?;
    if !poles_normalized(&np[0], &np[1], &after, tol) {
        return Err(Error::Precondition("no projective normalization places the poles on support planes".into()));
    }
    Ok(map)
}

/// Post-condition of [`normalize_poles_map`].
pub fn poles_normalized(n: &Point3, s: &Point3, others: &[Point3], tol: &Tolerance) -> bool {
    let eps = tol.geom_tol.max(1e-12);
    (n - Point3::z()).norm() <= 1e-9 && s.norm() <= 1e-9 && others.iter().all(|p| p.z > eps && p.z < 1.0 - eps)
}
