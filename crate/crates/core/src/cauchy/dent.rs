use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{random_convex_surface, trial_rng, trial_seed};
use crate::geometry::{classify_convexity, ConvexityClass, Point3, PolyhedralSurface};
use crate::rigidity::{rigidity_rank, Framework};
use crate::tol::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct Dent {
    pub surface: PolyhedralSurface,
    /// The diagonal that replaces the dented edge.
    pub new_edge: (usize, usize),
}

/// Replaces the two faces `(a, b, c)`, `(b, a, d)` at edge `(a, b)` by
/// `(c, a, d)`, `(d, b, c)`. Applying it again at `(c, d)` restores the
/// original faces.
pub fn dent(surface: &PolyhedralSurface, (a, b): (usize, usize), tol: &Tolerance) -> Result<Dent> {
    let k = surface.edge_index(a, b).ok_or_else(|| Error::Precondition(format!("({a}, {b}) is not an edge")))?;
    let (a, b, c, d) = surface.edge_wings(k);
    if surface.has_edge(c, d) {
        return Err(Error::Precondition(format!("opposite vertices {c} and {d} are already joined by an edge")));
    }
    let p = surface.vertices();
    let vol6 = (p[b] - p[a]).dot(&(p[c] - p[a]).cross(&(p[d] - p[a])));
    if vol6.abs() <= tol.geom_tol * surface.diameter().powi(3) {
        return Err(Error::Degenerate(format!("({a}, {b}, {c}, {d}) is coplanar")));
    }
    let mut faces: Vec<[usize; 3]> =
        surface.faces().iter().filter(|f| !(f.contains(&a) && f.contains(&b))).cloned().collect();
    faces.push([c, a, d]);
    faces.push([d, b, c]);
    let out = PolyhedralSurface::with_tolerance(p.to_vec(), faces, tol)?;
    Ok(Dent { surface: out, new_edge: (c.min(d), c.max(d)) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub seed: u64,
    pub trials: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { seed: 0, trials: 100, min_vertices: 8, max_vertices: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Instance {
    pub trial: usize,
    /// `single`, `adjacent` (two edges at one vertex, not in one face) or
    /// `control` (two edges without a common vertex).
    pub kind: String,
    pub vertices: Vec<[f64; 3]>,
    /// Faces after denting.
    pub faces: Vec<[usize; 3]>,
    pub dented_edges: Vec<(usize, usize)>,
    pub rank: usize,
    pub expected_rank: usize,
    pub rigid: bool,
    pub convexity: ConvexityClass,
}

impl Theorem1Instance {
    pub fn surface(&self) -> Result<PolyhedralSurface> {
        let v = self.vertices.iter().map(|p| Point3::new(p[0], p[1], p[2])).collect();
        PolyhedralSurface::new(v, self.faces.clone())
    }

    pub fn in_scope(&self) -> bool {
        self.kind != "control"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub config: HarnessConfig,
    pub instances: Vec<Theorem1Instance>,
    /// In-scope instances that are not infinitesimally rigid.
    pub failures: Vec<Theorem1Instance>,
    pub skipped: Vec<String>,
    pub controls_flexible: usize,
}

fn record(
    trial: usize,
    kind: &str,
    s: &PolyhedralSurface,
    edges: Vec<(usize, usize)>,
    tol: &Tolerance,
) -> Theorem1Instance {
    let n = s.num_vertices();
    let rank = rigidity_rank(&Framework::from_surface(s), tol);
    Theorem1Instance {
        trial,
        kind: kind.to_string(),
        vertices: s.vertices().iter().map(|p| [p.x, p.y, p.z]).collect(),
        faces: s.faces().to_vec(),
        dented_edges: edges,
        rank,
        expected_rank: 3 * n - 6,
        rigid: rank == 3 * n - 6,
        convexity: classify_convexity(s, tol).class,
    }
}

fn dent_all(s: &PolyhedralSurface, edges: &[(usize, usize)], tol: &Tolerance) -> Result<PolyhedralSurface> {
    let mut cur = s.clone();
    for &e in edges {
        cur = dent(&cur, e, tol)?.surface;
    }
    Ok(cur)
}

/// Random strongly convex hulls, each dented at one edge, at two edges
/// sharing a vertex but no face, and (as an unasserted control) at two
/// disjoint edges. Per-trial seeds make the trials order independent.
pub fn theorem1_harness(config: &HarnessConfig, tol: &Tolerance) -> Result<Theorem1Report> {
    if config.min_vertices < 6 || config.max_vertices < config.min_vertices {
        return Err(Error::Precondition("vertex range must satisfy 6 <= min <= max".into()));
    }
    let mut instances = Vec::new();
    let mut skipped = Vec::new();
    for trial in 0..config.trials {
        let mut rng = trial_rng(config.seed, trial as u64);
        let n = rng.random_range(config.min_vertices..=config.max_vertices);
        let hull = match random_convex_surface(&mut rng, n, 1e-6) {
            Ok(h) => h,
            Err(e) => {
                skipped.push(format!("trial {trial} (seed {}): {e}", trial_seed(config.seed, trial as u64)));
                continue;
            }
        };
        if classify_convexity(&hull, tol).class != ConvexityClass::StronglyStrictlyConvex {
            skipped.push(format!("trial {trial}: hull is not strongly convex"));
            continue;
        }
        let edges = hull.edges().to_vec();
        let one = *edges.choose(&mut rng).expect("edges");

        // two edges at a random vertex of degree >= 4, not consecutive in
        // its rotation
        let big: Vec<usize> = (0..n).filter(|&v| hull.degree(v) >= 4).collect();
        let v = *big.choose(&mut rng).expect("a hull has a vertex of degree >= 4");
        let rot = hull.rotation(v);
        let deg = rot.len();
        let i = rng.random_range(0..deg);
        let j = (i + 2 + rng.random_range(0..deg - 3)) % deg;
        let pair = [(v.min(rot[i]), v.max(rot[i])), (v.min(rot[j]), v.max(rot[j]))];

        let disjoint: Vec<(usize, usize)> =
            edges.iter().cloned().filter(|&(x, y)| x != one.0 && x != one.1 && y != one.0 && y != one.1).collect();
        let other = *disjoint.choose(&mut rng).expect("a hull has disjoint edges");

        for (kind, dents) in [("single", vec![one]), ("adjacent", pair.to_vec()), ("control", vec![one, other])] {
            match dent_all(&hull, &dents, tol) {
                Ok(s) => instances.push(record(trial, kind, &s, dents, tol)),
                Err(e) => skipped.push(format!("trial {trial} {kind}: {e}")),
            }
        }
    }
    let failures = instances.iter().filter(|i| i.in_scope() && !i.rigid).cloned().collect();
    let controls_flexible = instances.iter().filter(|i| !i.in_scope() && !i.rigid).count();
    Ok(Theorem1Report { config: *config, instances, failures, skipped, controls_flexible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface::fixtures::{icosahedron, octahedron};
    use crate::rigidity::is_infinitesimally_rigid;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn octahedron_equator_dent() {
        let o = crate::suspension::fixtures::octahedron_suspension();
        let s = o.surface();
        // equator edge (p_1, p_2) = vertices 2, 3; its faces hold N and S
        let d = dent(s, (2, 3), &tol()).unwrap();
        assert_eq!(d.new_edge, (0, 1));
        let faces = d.surface.canonical_faces();
        assert!(faces.contains(&[0, 1, 2]) && faces.contains(&[0, 1, 3]));
        assert!(!d.surface.has_edge(2, 3));
        assert_eq!(d.surface.euler_characteristic(), 2);
        assert_eq!(rigidity_rank(&Framework::from_surface(&d.surface), &tol()), 12);
    }

    #[test]
    fn icosahedron_dents_are_reflex_and_involutive() {
        let ico = icosahedron();
        let base = classify_convexity(&ico, &tol()).nonconvex_count();
        for k in [0, 7, 19] {
            let e = ico.edges()[k];
            let d = dent(&ico, e, &tol()).unwrap();
            let c = classify_convexity(&d.surface, &tol());
            assert_eq!(c.class, ConvexityClass::WeaklyStrictlyConvex);
            assert_eq!(c.nonconvex_count(), base + 1);
            let (x, y) = d.new_edge;
            assert!(d.surface.dihedral_angle_at(x, y).unwrap() > std::f64::consts::PI);
            assert_eq!(d.surface.num_vertices(), 12);
            let back = dent(&d.surface, d.new_edge, &tol()).unwrap();
            assert_eq!(back.surface.canonical_faces(), ico.canonical_faces());
            assert!(is_infinitesimally_rigid(&Framework::from_surface(&d.surface), &tol()).unwrap());
        }
    }

    #[test]
    fn dent_preconditions() {
        let o = octahedron();
        // in the octahedron the two wing vertices of any edge are adjacent
        // unless they are antipodal; find an edge whose wings are joined
        let joined = (0..o.num_edges()).find(|&k| {
            let (_, _, c, d) = o.edge_wings(k);
            o.has_edge(c, d)
        });
        if let Some(k) = joined {
            assert!(matches!(dent(&o, o.edges()[k], &tol()), Err(Error::Precondition(_))));
        }
        assert!(dent(&o, (0, 0), &tol()).is_err());
        let cube = crate::geometry::surface::fixtures::triangulated_cube();
        // a face diagonal of the cube: its quad is planar
        let flat =
            (0..cube.num_edges()).find(|&k| cube.dihedral_angle(k).unwrap() > std::f64::consts::PI - 1e-5).unwrap();
        assert!(matches!(dent(&cube, cube.edges()[flat], &tol()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn small_harness_run() {
        let cfg = HarnessConfig { seed: 5, trials: 5, ..HarnessConfig::default() };
        let r = theorem1_harness(&cfg, &tol()).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.instances.iter().any(|i| i.kind == "adjacent"));
        let again = theorem1_harness(&cfg, &tol()).unwrap();
        assert_eq!(r, again);
    }
}
