//! Suspensions: two poles `N`, `S` coned over a closed equatorial polygon.
//!
//! Vertex indices follow one convention throughout: `N = 0`, `S = 1`,
//! equator vertex `p_i = i + 2`.

mod inductive;
mod lambda;
mod star;

pub use inductive::{inductive_proper_stress, suspension_rigidity, InductiveStress};
pub use lambda::{
    axis_cone_angle, lambda_root_on_height, lambda_scalar, normalize_poles, theorem_elementary_check, theta_prime,
    ElementaryReport, LambdaBreakdown,
};
pub use star::interior_edge_star;

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::convexity::plane_basis;
use crate::geometry::{diameter, Point3, PolyhedralSurface, ProjectiveMap};
use crate::rigidity::{EdgeKind, Framework};
use crate::tol::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct Suspension {
    north: Point3,
    south: Point3,
    equator: Vec<Point3>,
    surface: PolyhedralSurface,
}

pub const NORTH: usize = 0;
pub const SOUTH: usize = 1;

/// Builds the suspension surface with faces `[N, p_i, p_i+1]` and
/// `[S, p_i+1, p_i]`.
pub fn build_suspension(north: Point3, south: Point3, equator: Vec<Point3>, tol: &Tolerance) -> Result<Suspension> {
    let n = equator.len();
    if n < 3 {
        return Err(Error::InvalidSurface(format!("equator has {n} vertices; need at least 3")));
    }
    let mut vertices = vec![north, south];
    vertices.extend(equator.iter().cloned());
    let diam = diameter(&vertices);
    let mut faces = Vec::with_capacity(2 * n);
    for i in 0..n {
        let a = 2 + i;
        let b = 2 + (i + 1) % n;
        faces.push([NORTH, a, b]);
        faces.push([SOUTH, b, a]);
    }
    for f in &faces {
        let p = &vertices;
        let area2 = (p[f[1]] - p[f[0]]).cross(&(p[f[2]] - p[f[0]])).norm();
        if !(area2 > tol.geom_tol * diam * diam) {
            return Err(Error::Degenerate(format!("face ({}, {}, {}) has zero area", f[0], f[1], f[2])));
        }
    }
    let surface = PolyhedralSurface::with_tolerance(vertices, faces, tol)?;
    Ok(Suspension { north, south, equator, surface })
}

impl Suspension {
    pub fn north(&self) -> Point3 {
        self.north
    }

    pub fn south(&self) -> Point3 {
        self.south
    }

    pub fn equator(&self) -> &[Point3] {
        &self.equator
    }

    pub fn n(&self) -> usize {
        self.equator.len()
    }

    pub fn surface(&self) -> &PolyhedralSurface {
        &self.surface
    }

    /// `[N, S, p_1, ..., p_n]`
    pub fn vertices(&self) -> &[Point3] {
        self.surface.vertices()
    }

    pub fn axis_length(&self) -> f64 {
        (self.north - self.south).norm()
    }

    pub fn transformed(&self, map: &ProjectiveMap, tol: &Tolerance) -> Result<Suspension> {
        let v = map.apply_points(self.vertices(), tol)?;
        build_suspension(v[0], v[1], v[2..].to_vec(), tol)
    }

    /// Same poles, equator restricted to the given positions (in order).
    pub(crate) fn sub_suspension(&self, keep: &[usize], tol: &Tolerance) -> Result<Suspension> {
        let eq = keep.iter().map(|&i| self.equator[i]).collect();
        build_suspension(self.north, self.south, eq, tol)
    }

    pub fn cylindrical(&self) -> Result<CylindricalEquator> {
        CylindricalEquator::of(self)
    }
}

/// Equator in coordinates adapted to the axis: `z` runs from `S` (0) to `N`
/// (1), `r` is the distance to the axis line, `alpha` the azimuth. The
/// azimuth is oriented so the equator winds counterclockwise when it winds
/// around the axis at all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylindricalEquator {
    pub r: Vec<f64>,
    pub alpha: Vec<f64>,
    pub z: Vec<f64>,
    /// `theta_i = alpha_{i+1} - alpha_i` reduced into `[0, 2 pi)`.
    pub theta: Vec<f64>,
    pub axis_length: f64,
}

impl CylindricalEquator {
    pub fn of(s: &Suspension) -> Result<Self> {
        let axis = s.north - s.south;
        let len = axis.norm();
        if !(len > 0.0) {
            return Err(Error::Degenerate("poles coincide".into()));
        }
        let u = axis / len;
        let (e1, mut e2) = plane_basis(&u);
        let project = |e2: &nalgebra::Vector3<f64>| -> Vec<(f64, f64, f64)> {
            s.equator
                .iter()
                .map(|p| {
                    let d = p - s.south;
                    let (x, y) = (d.dot(&e1), d.dot(e2));
                    (x.hypot(y), y.atan2(x), d.dot(&u) / len)
                })
                .collect()
        };
        let mut pts = project(&e2);
        if winding(&pts.iter().map(|t| t.1).collect::<Vec<_>>()) < 0 {
            e2 = -e2;
            pts = project(&e2);
        }
        let n = pts.len();
        let alpha: Vec<f64> = pts.iter().map(|t| t.1).collect();
        let theta = (0..n).map(|i| (alpha[(i + 1) % n] - alpha[i]).rem_euclid(TAU)).collect();
        Ok(CylindricalEquator {
            r: pts.iter().map(|t| t.0).collect(),
            alpha,
            z: pts.iter().map(|t| t.2).collect(),
            theta,
            axis_length: len,
        })
    }

    /// Projection `u_i = (r_i cos alpha_i, r_i sin alpha_i)`.
    pub fn projected(&self) -> Vec<Vector2<f64>> {
        self.r.iter().zip(&self.alpha).map(|(r, a)| Vector2::new(r * a.cos(), r * a.sin())).collect()
    }
}

fn winding(alpha: &[f64]) -> i64 {
    let n = alpha.len();
    let total: f64 = (0..n)
        .map(|i| {
            let d = (alpha[(i + 1) % n] - alpha[i]).rem_euclid(TAU);
            if d > PI {
                d - TAU
            } else {
                d
            }
        })
        .sum();
    (total / TAU).round() as i64
}

pub(crate) fn cross2(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsDecomposability {
    pub decomposable: bool,
    pub simple: bool,
    pub axis_interior: bool,
    /// Every triangle `(0, u_i, u_i+1)` is positively oriented.
    pub star_shaped: bool,
    pub diagnostic: String,
}

/// Projects the equator along the axis and checks that the projection is a
/// simple polygon with the axis point strictly inside, seen from which every
/// edge turns the same way (so the axial tetrahedra do not overlap).
pub fn is_ns_decomposable(s: &Suspension, tol: &Tolerance) -> NsDecomposability {
    let cyl = match s.cylindrical() {
        Ok(c) => c,
        Err(e) => {
            return NsDecomposability {
                decomposable: false,
                simple: false,
                axis_interior: false,
                star_shaped: false,
                diagnostic: e.to_string(),
            }
        }
    };
    let scale = diameter(s.vertices());
    let u: Vec<Vector2<f64>> = cyl.projected().iter().map(|p| p / scale).collect();
    let n = u.len();
    let eps = tol.geom_tol;
    let mut diag = Vec::new();

    let mut simple = true;
    for i in 0..n {
        for j in i + 1..n {
            if (u[i] - u[j]).norm() <= eps {
                simple = false;
                diag.push(format!("projected vertices {i} and {j} coincide"));
            }
        }
    }
    for i in 0..n {
        let (a, b) = (u[i], u[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (u[j], u[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // consecutive edges may only meet at their shared vertex
                let (p, q, r) = if j == i + 1 { (a, b, d) } else { (c, a, b) };
                let t = cross2(&(q - p), &(r - q));
                if t.abs() <= eps * (q - p).norm() * (r - q).norm() && (q - p).dot(&(r - q)) < 0.0 {
                    simple = false;
                    diag.push(format!("projected edges {i} and {j} fold back"));
                }
            } else if segments_meet(&a, &b, &c, &d, eps) {
                simple = false;
                diag.push(format!("projected edges {i} and {j} intersect"));
            }
        }
    }

    let origin = Vector2::zeros();
    let on_boundary = (0..n).any(|i| point_segment_distance(&origin, &u[i], &u[(i + 1) % n]) <= eps);
    let wn = winding(&cyl.alpha);
    let axis_interior = !on_boundary && wn != 0;
    if !axis_interior {
        diag.push("the axis does not pass strictly inside the projected equator".into());
    }
    let star_shaped = (0..n).all(|i| cross2(&u[i], &u[(i + 1) % n]) > eps * eps) && wn == 1;
    if !star_shaped {
        diag.push("the projected equator is not star-shaped around the axis".into());
    }
    let decomposable = simple && axis_interior && star_shaped;
    NsDecomposability {
        decomposable,
        simple,
        axis_interior,
        star_shaped,
        diagnostic: if diag.is_empty() { "ok".into() } else { diag.join("; ") },
    }
}

fn orient2(a: &Vector2<f64>, b: &Vector2<f64>, c: &Vector2<f64>) -> f64 {
    cross2(&(b - a), &(c - a))
}

fn segments_meet(a: &Vector2<f64>, b: &Vector2<f64>, c: &Vector2<f64>, d: &Vector2<f64>, eps: f64) -> bool {
    let d1 = orient2(c, d, a);
    let d2 = orient2(c, d, b);
    let d3 = orient2(a, b, c);
    let d4 = orient2(a, b, d);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)) {
        return true;
    }
    point_segment_distance(a, c, d) <= eps
        || point_segment_distance(b, c, d) <= eps
        || point_segment_distance(c, a, b) <= eps
        || point_segment_distance(d, a, b) <= eps
}

fn point_segment_distance(p: &Vector2<f64>, a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    let ab = b - a;
    let t = if ab.norm_squared() > 0.0 { ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

/// Equator edges and (optionally) `[N, S]` as cables, lateral edges as bars.
///
/// Edge order: equator `(p_i, p_i+1)` for each `i`, then `(N, p_i)`,
/// `(S, p_i)` for each `i`, then `(N, S)`.
pub fn tensegrity_labeling(s: &Suspension, include_ns: bool) -> Framework {
    let n = s.n();
    let mut edges = Vec::with_capacity(3 * n + 1);
    for i in 0..n {
        edges.push((2 + i, 2 + (i + 1) % n, EdgeKind::Cable));
    }
    for i in 0..n {
        edges.push((NORTH, 2 + i, EdgeKind::Bar));
        edges.push((SOUTH, 2 + i, EdgeKind::Bar));
    }
    if include_ns {
        edges.push((NORTH, SOUTH, EdgeKind::Cable));
    }
    Framework::new(s.vertices().to_vec(), edges).expect("suspension edges are valid")
}

/// Which lateral edges `(pole, p_i)` have a reflex dihedral angle.
pub fn reflex_lateral_edges(s: &Suspension, tol: &Tolerance) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..s.n() {
        for pole in [NORTH, SOUTH] {
            if s.surface.dihedral_angle_at(pole, 2 + i)? > PI + tol.geom_tol {
                out.push((pole, 2 + i));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuspensionProfile {
    /// Equator projects onto a circle: the projection is a convex polygon.
    Convex,
    /// All vertices on one sphere: weakly strictly convex, projection
    /// star-shaped but usually not convex.
    Star,
    /// Random radii and heights around the axis; star-shaped projection, no
    /// convexity.
    Random,
}

impl std::str::FromStr for SuspensionProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(SuspensionProfile::Convex),
            "star" => Ok(SuspensionProfile::Star),
            "random" => Ok(SuspensionProfile::Random),
            other => Err(Error::Precondition(format!("unknown profile '{other}'"))),
        }
    }
}

/// Azimuths with every gap in `(0, pi - 0.05)`, sorted counterclockwise.
pub fn random_azimuths<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n).map(|_| 0.4 + rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let gaps: Vec<f64> = w.iter().map(|x| TAU * x / total).collect();
        if gaps.iter().all(|&g| g < PI - 0.05) {
            let start = rng.random_range(0.0..TAU);
            let mut a = start;
            return gaps
                .iter()
                .map(|g| {
                    let cur = a;
                    a += g;
                    cur
                })
                .collect();
        }
    }
}

/// Random suspension in the normalized frame: `S` at the origin, `N` at
/// `e_z`, equator heights in `(0.1, 0.9)`.
pub fn random_suspension<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    profile: SuspensionProfile,
    tol: &Tolerance,
) -> Result<Suspension> {
    if n < 3 {
        return Err(Error::Precondition(format!("equator of size {n}")));
    }
    let alpha = random_azimuths(rng, n);
    let equator = alpha
        .iter()
        .map(|&a| {
            let z: f64 = rng.random_range(0.1..0.9);
            let r = match profile {
                SuspensionProfile::Convex => 1.0,
                SuspensionProfile::Star => (0.25 - (z - 0.5) * (z - 0.5)).sqrt(),
                SuspensionProfile::Random => rng.random_range(0.2..0.6),
            };
            Point3::new(r * a.cos(), r * a.sin(), z)
        })
        .collect();
    build_suspension(Point3::z(), Point3::zeros(), equator, tol)
}

pub mod fixtures {
    use super::*;

    /// Poles `+-e_z`, equator the unit square `e_x, e_y, -e_x, -e_y`.
    pub fn octahedron_suspension() -> Suspension {
        let eq = vec![
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(0.0, -1.0, 0.0),
        ];
        build_suspension(Point3::z(), -Point3::z(), eq, &Tolerance::default()).expect("valid")
    }

    /// Normalized hexagonal suspension with one vertex pulled towards the
    /// axis; `z` of that vertex (index 3) is the free parameter.
    pub fn hexagon_family(z3: f64) -> Result<Suspension> {
        let radii = [1.0, 1.0, 1.0, 0.2, 1.0, 1.0];
        let eq = (0..6)
            .map(|k| {
                let a = k as f64 * PI / 3.0;
                let z = if k == 3 { z3 } else { 0.5 };
                Point3::new(radii[k] * a.cos(), radii[k] * a.sin(), z)
            })
            .collect();
        build_suspension(Point3::z(), Point3::zeros(), eq, &Tolerance::default())
    }

    /// Member of [`hexagon_family`] with `Lambda = 0`: infinitesimally
    /// flexible.
    pub fn lambda_zero_suspension() -> Suspension {
        let tol = Tolerance::default();
        lambda_root_on_height(&hexagon_family(0.5).expect("valid"), 3, 0.5, 0.99, &tol).expect("root is bracketed")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::generate::trial_rng;
    use crate::geometry::surface::fixtures::octahedron;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn octahedron_suspension_is_the_octahedron() {
        let s = octahedron_suspension();
        assert_eq!(s.surface().canonical_faces(), octahedron().canonical_faces());
        assert_eq!(s.surface().vertices(), octahedron().vertices());
    }

    #[test]
    fn triangular_bipyramid() {
        let eq = vec![Point3::new(1.0, 0.0, 0.1), Point3::new(-0.5, 0.8, -0.1), Point3::new(-0.5, -0.8, 0.0)];
        let s = build_suspension(Point3::new(0.0, 0.0, 1.0), Point3::new(0.1, 0.0, -1.0), eq, &tol()).unwrap();
        assert_eq!(s.surface().num_edges(), 9);
        assert_eq!(s.surface().num_faces(), 6);
    }

    #[test]
    fn equator_through_a_pole_is_degenerate() {
        let eq = vec![
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(0.0, -1.0, 0.0),
        ];
        assert!(build_suspension(Point3::z(), -Point3::z(), eq, &tol()).is_err());
    }

    #[test]
    fn cylindrical_coordinates_of_octahedron() {
        let c = octahedron_suspension().cylindrical().unwrap();
        assert_eq!(c.axis_length, 2.0);
        for i in 0..4 {
            assert!((c.r[i] - 1.0).abs() < 1e-15);
            assert!((c.z[i] - 0.5).abs() < 1e-15);
            assert!((c.theta[i] - PI / 2.0).abs() < 1e-14);
        }
        let total: f64 = c.theta.iter().sum();
        assert!((total - TAU).abs() < 1e-12);
    }

    #[test]
    fn reversed_equator_keeps_counterclockwise_azimuths() {
        let s = octahedron_suspension();
        let mut eq = s.equator().to_vec();
        eq.reverse();
        let r = build_suspension(s.north(), s.south(), eq, &tol()).unwrap();
        let total: f64 = r.cylindrical().unwrap().theta.iter().sum();
        assert!((total - TAU).abs() < 1e-12);
    }

    #[test]
    fn decomposability_cases() {
        assert!(is_ns_decomposable(&octahedron_suspension(), &tol()).decomposable);
        // non-convex but star-shaped projection
        let star = hexagon_family(0.5).unwrap();
        let d = is_ns_decomposable(&star, &tol());
        assert!(d.decomposable, "{}", d.diagnostic);
        // figure eight: the projection crosses itself
        let eight = vec![
            Point3::new(1.0, 0.5, 0.5),
            Point3::new(-1.0, -0.5, 0.4),
            Point3::new(-1.0, 0.5, 0.6),
            Point3::new(1.0, -0.5, 0.5),
        ];
        let s = build_suspension(Point3::z(), Point3::zeros(), eight, &tol()).unwrap();
        let d = is_ns_decomposable(&s, &tol());
        assert!(!d.simple);
        assert!(!d.decomposable);
    }

    #[test]
    fn decomposability_oracle_on_random_polygons() {
        // point-in-polygon by ray casting and brute-force segment crossing
        let mut rng = trial_rng(3, 0);
        for _ in 0..200 {
            let n = rng.random_range(3..8);
            let eq: Vec<Point3> = (0..n)
                .map(|_| {
                    Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(0.1..0.9))
                })
                .collect();
            let Ok(s) = build_suspension(Point3::z(), Point3::zeros(), eq.clone(), &tol()) else {
                continue;
            };
            let d = is_ns_decomposable(&s, &tol());
            let u: Vec<Vector2<f64>> = eq.iter().map(|p| Vector2::new(p.x, p.y)).collect();
            let mut crossings = 0;
            let mut simple = true;
            for i in 0..n {
                let (a, b) = (u[i], u[(i + 1) % n]);
                if (a.y > 0.0) != (b.y > 0.0) && a.x + (0.0 - a.y) * (b.x - a.x) / (b.y - a.y) > 0.0 {
                    crossings += 1;
                }
                for j in i + 2..n {
                    if i == 0 && j == n - 1 {
                        continue;
                    }
                    let (c, e) = (u[j], u[(j + 1) % n]);
                    let s1 = orient2(&a, &b, &c) * orient2(&a, &b, &e);
                    let s2 = orient2(&c, &e, &a) * orient2(&c, &e, &b);
                    if s1 < 0.0 && s2 < 0.0 {
                        simple = false;
                    }
                }
            }
            let inside = crossings % 2 == 1;
            let star = (0..n).all(|i| cross2(&u[i], &u[(i + 1) % n]) > 0.0)
                || (0..n).all(|i| cross2(&u[i], &u[(i + 1) % n]) < 0.0);
            assert_eq!(d.simple, simple);
            if d.decomposable {
                assert!(inside && simple && star);
            }
            if simple && star && inside {
                assert!(d.decomposable);
            }
        }
    }

    #[test]
    fn labeling_counts() {
        let s = octahedron_suspension();
        let f = tensegrity_labeling(&s, true);
        assert_eq!(f.num_edges(), 13);
        let cables = f.edges().iter().filter(|e| e.2 == EdgeKind::Cable).count();
        assert_eq!(cables, 5);
        assert_eq!(tensegrity_labeling(&s, false).num_edges(), 12);
        let tri = build_suspension(
            Point3::z(),
            Point3::zeros(),
            vec![Point3::new(1.0, 0.0, 0.5), Point3::new(-0.5, 0.8, 0.5), Point3::new(-0.5, -0.8, 0.5)],
            &tol(),
        )
        .unwrap();
        assert_eq!(tensegrity_labeling(&tri, true).num_edges(), 10);
    }

    #[test]
    fn star_profile_is_weakly_convex() {
        let mut rng = trial_rng(17, 0);
        for _ in 0..20 {
            let n = rng.random_range(3..=12);
            let s = random_suspension(&mut rng, n, SuspensionProfile::Star, &tol()).unwrap();
            let c = crate::geometry::classify_convexity(s.surface(), &tol());
            assert_ne!(c.class, crate::geometry::ConvexityClass::NotWeaklyConvex);
            assert!(is_ns_decomposable(&s, &tol()).decomposable);
        }
    }
}
