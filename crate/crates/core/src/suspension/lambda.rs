//! The scalar `Lambda` of a suspension: the rate at which the total dihedral
//! angle around `[N, S]` grows when `|NS|` is stretched with every other edge
//! length held fixed, computed in the frame `S = 0`, `N = e_z`.

use serde::{Deserialize, Serialize};

use super::{build_suspension, cross2, is_ns_decomposable, CylindricalEquator, Suspension};
use crate::error::{Error, Result};
use crate::geometry::projective::normalize_poles_map;
use crate::geometry::{diameter, ProjectiveMap, TetraLengths};
use crate::rigidity::{is_infinitesimally_rigid, Framework};
use crate::tol::Tolerance;

/// Speed of the dihedral angle at `[N, S]` of the tetrahedron
/// `N = e_z, S = 0, p_1, p_2` when `|NS|` grows at unit speed and the other
/// five lengths stay fixed.
pub fn theta_prime(z1: f64, r1: f64, z2: f64, r2: f64, theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s.abs() < 1e-12 {
        return Err(Error::Degenerate(format!("sin(theta) = {s:e}")));
    }
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::Degenerate("equator vertex on the axis".into()));
    }
    let c = theta.cos();
    let dz = z1 - z2;
    let num = dz * dz + z1 * (1.0 - z1) * (1.0 - (r2 / r1) * c) + z2 * (1.0 - z2) * (1.0 - (r1 / r2) * c);
    Ok(num / (r1 * r2 * s))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaBreakdown {
    /// Normalizing map, row-vector convention.
    pub map: [[f64; 4]; 4],
    /// Whether the normalizing map is a similarity.
    pub affine: bool,
    /// `|NS|` before normalization.
    pub axis_length: f64,
    /// Equator of the normalized suspension.
    pub normalized: CylindricalEquator,
    /// One term per tetrahedron `[N, S, p_i, p_i+1]`.
    pub simplex_terms: Vec<f64>,
    /// `a_i = cross(u_i, u_i+1)`: twice the area of `(0, u_i, u_i+1)`.
    pub a: Vec<f64>,
    /// `b_i = cross(u_i - u_i-1, u_i+1 - u_i)`: twice the oriented area of
    /// `(u_i-1, u_i, u_i+1)`.
    pub b: Vec<f64>,
    /// `(z_i+1 - z_i)^2 / a_i`
    pub height_terms: Vec<f64>,
    /// `z_i (1 - z_i) b_i / (a_i-1 a_i)`
    pub turn_terms: Vec<f64>,
    pub lambda_simplex: f64,
    pub lambda_expression: f64,
    pub lambda: f64,
    /// `lambda / |NS|` when the map is a similarity: the rate in the
    /// original units.
    pub physical: Option<f64>,
}

impl LambdaBreakdown {
    pub fn summands(&self) -> impl Iterator<Item = f64> + '_ {
        self.height_terms.iter().chain(&self.turn_terms).cloned()
    }
}

/// Moves `S` to the origin and `N` to `e_z` so that the planes `z = 0` and
/// `z = 1` touch the suspension only at the poles.
pub fn normalize_poles(s: &Suspension, tol: &Tolerance) -> Result<(Suspension, ProjectiveMap)> {
    let map = normalize_poles_map(&s.north(), &s.south(), s.equator(), tol)?;
    let out = s.transformed(&map, tol)?;
    Ok((out, map))
}

struct Terms {
    simplex: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    height: Vec<f64>,
    turn: Vec<f64>,
}

fn terms(c: &CylindricalEquator) -> Result<Terms> {
    let n = c.r.len();
    let u = c.projected();
    let mut simplex = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let h = (i + n - 1) % n;
        let t = theta_prime(c.z[i], c.r[i], c.z[j], c.r[j], c.theta[i])
            .map_err(|e| Error::Degenerate(format!("tetrahedron {i}: {e}")))?;
        simplex.push(t);
        let ai = cross2(&u[i], &u[j]);
        if !(ai > 0.0) {
            return Err(Error::Degenerate(format!("tetrahedron {i} is flat or inverted (a = {ai:e})")));
        }
        a.push(ai);
        b.push(cross2(&(u[i] - u[h]), &(u[j] - u[i])));
    }
    let mut height = Vec::with_capacity(n);
    let mut turn = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let h = (i + n - 1) % n;
        let dz = c.z[j] - c.z[i];
        height.push(dz * dz / a[i]);
        turn.push(c.z[i] * (1.0 - c.z[i]) * b[i] / (a[h] * a[i]));
    }
    Ok(Terms { simplex, a, b, height, turn })
}

/// `Lambda` by both closed forms, after projective normalization of the poles.
///
/// Requires an N-S decomposable suspension whose poles can be normalized.
pub fn lambda_scalar(s: &Suspension, tol: &Tolerance) -> Result<LambdaBreakdown> {
    let d = is_ns_decomposable(s, tol);
    if !d.decomposable {
        return Err(Error::Precondition(format!("not N-S decomposable: {}", d.diagnostic)));
    }
    let (ns, map) = normalize_poles(s, tol)?;
    let c = ns.cylindrical()?;
    let t = terms(&c)?;
    let lambda_simplex: f64 = t.simplex.iter().sum();
    let lambda_expression: f64 = t.height.iter().sum::<f64>() + t.turn.iter().sum::<f64>();
    if (lambda_simplex - lambda_expression).abs() > 1e-9 * lambda_simplex.abs().max(1.0) {
        return Err(Error::InvariantViolation(format!(
            "the two forms of Lambda disagree: {lambda_simplex} vs {lambda_expression}"
        )));
    }
    let m = map.matrix();
    let affine = map.is_affine();
    let axis_length = s.axis_length();
    Ok(LambdaBreakdown {
        map: std::array::from_fn(|r| std::array::from_fn(|k| m[(r, k)])),
        affine,
        axis_length,
        normalized: c,
        simplex_terms: t.simplex,
        a: t.a,
        b: t.b,
        height_terms: t.height,
        turn_terms: t.turn,
        lambda_simplex,
        lambda_expression,
        lambda: lambda_simplex,
        physical: affine.then(|| lambda_simplex / axis_length),
    })
}

/// Total dihedral angle around `[N, S]` with `|NS|` replaced by `ns_length`
/// and every other edge length kept, computed from lengths alone.
pub fn axis_cone_angle(s: &Suspension, ns_length: f64) -> Result<f64> {
    let v = s.vertices();
    let n = s.n();
    let mut total = 0.0;
    for i in 0..n {
        let quad = [v[0], v[1], v[2 + i], v[2 + (i + 1) % n]];
        let mut l = TetraLengths::from_points(&quad);
        l.0[0] = ns_length;
        if !crate::geometry::cayley_menger_feasible(&l).feasible {
            return Err(Error::InfeasibleTetrahedron { index: i });
        }
        total += l.dihedral_angle(0);
    }
    Ok(total)
}

fn lambda_normalized(s: &Suspension) -> Result<f64> {
    let t = terms(&s.cylindrical()?)?;
    Ok(t.simplex.iter().sum())
}

/// Bisection on the height of equator vertex `k` of a suspension given in the
/// normalized frame, until `|Lambda| <= 1e-10`.
pub fn lambda_root_on_height(template: &Suspension, k: usize, lo: f64, hi: f64, tol: &Tolerance) -> Result<Suspension> {
    if k >= template.n() {
        return Err(Error::Precondition(format!("equator vertex {k} out of range")));
    }
    let at = |z: f64| -> Result<(Suspension, f64)> {
        let mut eq = template.equator().to_vec();
        eq[k].z = z;
        let s = build_suspension(template.north(), template.south(), eq, tol)?;
        let l = lambda_normalized(&s)?;
        Ok((s, l))
    };
    let (mut lo, mut hi) = (lo, hi);
    let (_, f_lo) = at(lo)?;
    let (_, f_hi) = at(hi)?;
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::Precondition(format!("no sign change of Lambda on [{lo}, {hi}]: {f_lo}, {f_hi}")));
    }
    let mut best: Option<(Suspension, f64)> = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (s, f) = at(mid)?;
        if best.as_ref().is_none_or(|b| f.abs() < b.1.abs()) {
            best = Some((s, f));
        }
        if f == 0.0 {
            break;
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (s, f) = best.expect("at least one bisection step");
    if f.abs() > 1e-10 {
        return Err(Error::Degenerate(format!("bisection stalled at |Lambda| = {:e}", f.abs())));
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementaryReport {
    pub in_scope: bool,
    pub reason: Option<String>,
    pub lambda: Option<f64>,
    pub min_summand: Option<f64>,
    pub rigid: Option<bool>,
}

/// For a suspension over a convex polygon containing the axis: every summand
/// of the projected-area form is non-negative, `Lambda > 0` and the
/// suspension is rigid. Outside that hypothesis nothing is asserted.
pub fn theorem_elementary_check(s: &Suspension, tol: &Tolerance) -> Result<ElementaryReport> {
    let out = |reason: String| ElementaryReport {
        in_scope: false,
        reason: Some(reason),
        lambda: None,
        min_summand: None,
        rigid: None,
    };
    let d = is_ns_decomposable(s, tol);
    if !d.decomposable {
        return Ok(out(format!("out of theorem scope: {}", d.diagnostic)));
    }
    let c = s.cylindrical()?;
    let scale = diameter(s.vertices());
    let u: Vec<_> = c.projected().iter().map(|p| p / scale).collect();
    let n = u.len();
    let convex = (0..n).all(|i| {
        let h = (i + n - 1) % n;
        let j = (i + 1) % n;
        cross2(&(u[i] - u[h]), &(u[j] - u[i])) >= -tol.geom_tol
    });
    if !convex {
        return Ok(out("out of theorem scope: the projected equator is not convex".into()));
    }
    let br = lambda_scalar(s, tol)?;
    let min_summand = br.summands().fold(f64::INFINITY, f64::min);
    let rigid = is_infinitesimally_rigid(&Framework::from_surface(s.surface()), tol)?;
    let mut bad = Vec::new();
    if min_summand < -1e-12 {
        bad.push(format!("negative summand {min_summand:e}"));
    }
    if !(br.lambda > 0.0) {
        bad.push(format!("Lambda = {}", br.lambda));
    }
    if !rigid {
        bad.push("not infinitesimally rigid".into());
    }
    if !bad.is_empty() {
        return Err(Error::InvariantViolation(format!("suspension over a convex polygon: {}", bad.join("; "))));
    }
    Ok(ElementaryReport {
        in_scope: true,
        reason: None,
        lambda: Some(br.lambda),
        min_summand: Some(min_summand),
        rigid: Some(rigid),
    })
}
