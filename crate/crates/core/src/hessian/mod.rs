//! Decompositions of a polyhedron into tetrahedra without new vertices, the
//! cone angles around interior edges as functions of the interior edge
//! lengths, and their Jacobian `Lambda`.

mod probe;

pub use probe::{pd_probe, probe_trial, replay_instance, ProbeConfig, ProbeFamily, ProbeInstance, ProbeReport};

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::tetra::TET_EDGES;
use crate::geometry::{cayley_menger_feasible, diameter, Point3, PolyhedralSurface, TetraLengths};
use crate::rigidity::{is_infinitesimally_rigid, Framework};
use crate::suspension::Suspension;
use crate::tol::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Interior(usize),
    Boundary(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    vertices: Vec<Point3>,
    tetrahedra: Vec<[usize; 4]>,
    boundary: PolyhedralSurface,
    interior_edges: Vec<(usize, usize)>,
    boundary_edges: Vec<(usize, usize)>,
    slots: Vec<[Slot; 6]>,
}

fn sorted_edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn tet_volume6(p: &[Point3], t: &[usize; 4]) -> f64 {
    (p[t[1]] - p[t[0]]).dot(&(p[t[2]] - p[t[0]]).cross(&(p[t[3]] - p[t[0]])))
}

/// Cyclic order of the link vertices of edge `(a, b)`, if the tetrahedra
/// around it close up into one cycle.
fn link_cycle(tets: &[[usize; 4]], around: &[usize], a: usize, b: usize) -> Option<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &t in around {
        let o: Vec<usize> = tets[t].iter().cloned().filter(|&v| v != a && v != b).collect();
        adj.entry(o[0]).or_default().push(o[1]);
        adj.entry(o[1]).or_default().push(o[0]);
    }
    if adj.values().any(|v| v.len() != 2) {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let nb = &adj[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
        if cycle.len() > adj.len() {
            return None;
        }
    }
    (cycle.len() == adj.len()).then_some(cycle)
}

impl Decomposition {
    /// Validates the tetrahedra and derives the boundary surface and the
    /// interior/boundary edge split.
    pub fn from_tetrahedra(vertices: Vec<Point3>, tetrahedra: Vec<[usize; 4]>, tol: &Tolerance) -> Result<Self> {
        let bad = |m: String| Error::InvalidDecomposition(m);
        if tetrahedra.is_empty() {
            return Err(bad("no tetrahedra".into()));
        }
        let n = vertices.len();
        let diam = diameter(&vertices);
        let vol_tol = 1e-12 * diam.powi(3);
        let mut tets = Vec::with_capacity(tetrahedra.len());
        for (k, t) in tetrahedra.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(bad(format!("tetrahedron {k} has an index out of range")));
            }
            let distinct: BTreeSet<usize> = t.iter().cloned().collect();
            if distinct.len() != 4 {
                return Err(bad(format!("tetrahedron {k} repeats a vertex")));
            }
            let v6 = tet_volume6(&vertices, t);
            if !(v6.abs() / 6.0 >= vol_tol) || v6.abs() / 6.0 == 0.0 {
                return Err(bad(format!("tetrahedron {k} is degenerate (volume {:e})", v6 / 6.0)));
            }
            let mut t = *t;
            if v6 < 0.0 {
                t.swap(2, 3);
            }
            tets.push(t);
        }

        // faces shared by two tetrahedra must separate them
        let mut faces: BTreeMap<[usize; 3], Vec<(usize, usize)>> = BTreeMap::new();
        for (k, t) in tets.iter().enumerate() {
            for skip in 0..4 {
                let mut f: Vec<usize> = (0..4).filter(|&q| q != skip).map(|q| t[q]).collect();
                f.sort_unstable();
                faces.entry([f[0], f[1], f[2]]).or_default().push((k, t[skip]));
            }
        }
        let mut boundary_faces = Vec::new();
        for (f, owners) in &faces {
            let p = &vertices;
            let normal = (p[f[1]] - p[f[0]]).cross(&(p[f[2]] - p[f[0]]));
            match owners.len() {
                1 => {
                    let w = owners[0].1;
                    if normal.dot(&(p[w] - p[f[0]])) > 0.0 {
                        boundary_faces.push([f[0], f[2], f[1]]);
                    } else {
                        boundary_faces.push(*f);
                    }
                }
                2 => {
                    let s1 = normal.dot(&(p[owners[0].1] - p[f[0]]));
                    let s2 = normal.dot(&(p[owners[1].1] - p[f[0]]));
                    if s1 * s2 >= 0.0 {
                        return Err(bad(format!(
                            "tetrahedra {} and {} overlap across face {f:?}",
                            owners[0].0, owners[1].0
                        )));
                    }
                }
                k => return Err(bad(format!("face {f:?} lies in {k} tetrahedra"))),
            }
        }
        let boundary = PolyhedralSurface::with_tolerance(vertices.clone(), boundary_faces, tol)
            .map_err(|e| bad(format!("boundary is not a closed sphere using every vertex: {e}")))?;

        let mut around: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (k, t) in tets.iter().enumerate() {
            for &(a, b) in &TET_EDGES {
                around.entry(sorted_edge(t[a], t[b])).or_default().push(k);
            }
        }
        let mut interior_edges = Vec::new();
        let mut boundary_edges = Vec::new();
        for (&(a, b), owners) in &around {
            if boundary.has_edge(a, b) {
                boundary_edges.push((a, b));
            } else {
                if link_cycle(&tets, owners, a, b).is_none() {
                    return Err(bad(format!(
                        "the tetrahedra around interior edge ({a}, {b}) do not close up into a cycle"
                    )));
                }
                interior_edges.push((a, b));
            }
        }
        let index_of = |list: &[(usize, usize)], e: (usize, usize)| list.binary_search(&e).ok();
        let slots = tets
            .iter()
            .map(|t| {
                std::array::from_fn(|q| {
                    let (a, b) = TET_EDGES[q];
                    let e = sorted_edge(t[a], t[b]);
                    match index_of(&interior_edges, e) {
                        Some(i) => Slot::Interior(i),
                        None => Slot::Boundary(index_of(&boundary_edges, e).expect("edge is classified")),
                    }
                })
            })
            .collect();
        let d = Decomposition { vertices, tetrahedra: tets, boundary, interior_edges, boundary_edges, slots };
        // the dihedral angles around each interior edge must fill the turn
        let theta = cone_angles(&d, &d.l0())?;
        for (i, t) in theta.iter().enumerate() {
            if (t - TAU).abs() > 1e-6 {
                let (a, b) = d.interior_edges[i];
                return Err(bad(format!("cone angle {t} around interior edge ({a}, {b}) is not 2 pi")));
            }
        }
        Ok(d)
    }

    /// Tetrahedra `[N, S, p_i, p_i+1]`, with `[N, S]` the single interior edge.
    pub fn of_suspension(s: &Suspension, tol: &Tolerance) -> Result<Self> {
        let n = s.n();
        let tets = (0..n).map(|i| [0, 1, 2 + i, 2 + (i + 1) % n]).collect();
        Decomposition::from_tetrahedra(s.vertices().to_vec(), tets, tol)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    /// Positively oriented.
    pub fn tetrahedra(&self) -> &[[usize; 4]] {
        &self.tetrahedra
    }

    pub fn boundary(&self) -> &PolyhedralSurface {
        &self.boundary
    }

    pub fn interior_edges(&self) -> &[(usize, usize)] {
        &self.interior_edges
    }

    pub fn boundary_edges(&self) -> &[(usize, usize)] {
        &self.boundary_edges
    }

    pub fn r(&self) -> usize {
        self.interior_edges.len()
    }

    fn edge_length(&self, (a, b): (usize, usize)) -> f64 {
        (self.vertices[a] - self.vertices[b]).norm()
    }

    /// Interior edge lengths of the embedded polyhedron.
    pub fn l0(&self) -> Vec<f64> {
        self.interior_edges.iter().map(|&e| self.edge_length(e)).collect()
    }

    pub fn boundary_lengths(&self) -> Vec<f64> {
        self.boundary_edges.iter().map(|&e| self.edge_length(e)).collect()
    }

    fn tet_lengths(&self, k: usize, l: &[f64]) -> TetraLengths {
        TetraLengths(std::array::from_fn(|q| match self.slots[k][q] {
            Slot::Interior(i) => l[i],
            Slot::Boundary(j) => self.edge_length(self.boundary_edges[j]),
        }))
    }

    fn check_lengths(&self, l: &[f64]) -> Result<()> {
        if l.len() != self.r() {
            return Err(Error::SizeMismatch { expected: self.r(), got: l.len() });
        }
        Ok(())
    }

    /// Whether every tetrahedron with interior lengths `l` is realizable.
    pub fn in_domain(&self, l: &[f64]) -> bool {
        l.len() == self.r()
            && (0..self.tetrahedra.len()).all(|k| cayley_menger_feasible(&self.tet_lengths(k, l)).feasible)
    }
}

/// `theta_i`: total dihedral angle around interior edge `i`, from lengths.
pub fn cone_angles(d: &Decomposition, l: &[f64]) -> Result<Vec<f64>> {
    d.check_lengths(l)?;
    let mut theta = vec![0.0; d.r()];
    for k in 0..d.tetrahedra.len() {
        let t = d.tet_lengths(k, l);
        if !cayley_menger_feasible(&t).feasible {
            return Err(Error::InfeasibleTetrahedron { index: k });
        }
        for q in 0..6 {
            if let Slot::Interior(i) = d.slots[k][q] {
                theta[i] += t.dihedral_angle(q);
            }
        }
    }
    Ok(theta)
}

/// `H = sum over tetrahedra and their edges of length times dihedral angle`.
pub fn mean_curvature_h(d: &Decomposition, l: &[f64]) -> Result<f64> {
    d.check_lengths(l)?;
    let mut h = 0.0;
    for k in 0..d.tetrahedra.len() {
        let t = d.tet_lengths(k, l);
        if !cayley_menger_feasible(&t).feasible {
            return Err(Error::InfeasibleTetrahedron { index: k });
        }
        h += t.0.iter().zip(t.dihedral_angles()).map(|(len, a)| len * a).sum::<f64>();
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaMatrix {
    /// Row `i`, column `j`: `d theta_i / d l_j`.
    pub entries: Vec<Vec<f64>>,
    /// Of the symmetric part, ascending.
    pub eigenvalues: Vec<f64>,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// `max |L_ij - L_ji|`.
    pub asymmetry: f64,
}

impl LambdaMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let r = self.dim();
        DMatrix::from_fn(r, r, |i, j| self.entries[i][j])
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

fn summarize(m: DMatrix<f64>, tol: &Tolerance) -> LambdaMatrix {
    let r = m.nrows();
    let asymmetry =
        (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).fold(0.0f64, |a, (i, j)| a.max((m[(i, j)] - m[(j, i)]).abs()));
    let (mut eigenvalues, singular_values) = if r == 0 {
        (Vec::new(), Vec::new())
    } else {
        let sym = (&m + m.transpose()) * 0.5;
        let ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().cloned().collect();
        let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        (ev, sv)
    };
    eigenvalues.sort_by(f64::total_cmp);
    let rank = crate::linalg::numerical_rank(&singular_values, tol.rank_tol);
    LambdaMatrix {
        entries: (0..r).map(|i| (0..r).map(|j| m[(i, j)]).collect()).collect(),
        eigenvalues,
        singular_values,
        rank,
        asymmetry,
    }
}

/// Analytic Jacobian of the cone angles at the embedded lengths.
pub fn lambda_matrix(d: &Decomposition, tol: &Tolerance) -> Result<LambdaMatrix> {
    let l = d.l0();
    let r = d.r();
    let mut m = DMatrix::zeros(r, r);
    for k in 0..d.tetrahedra.len() {
        let t = d.tet_lengths(k, &l);
        if !t.is_well_conditioned() {
            return Err(Error::Degenerate(format!("tetrahedron {k} is too close to flat for a stable Jacobian")));
        }
        let jac = t.dihedral_jacobian();
        for e in 0..6 {
            let Slot::Interior(i) = d.slots[k][e] else { continue };
            for f in 0..6 {
                if let Slot::Interior(j) = d.slots[k][f] {
                    m[(i, j)] += jac[e][f];
                }
            }
        }
    }
    Ok(summarize(m, tol))
}

/// Central finite differences of [`cone_angles`] with step
/// `h_rel * diameter`.
pub fn lambda_matrix_fd(d: &Decomposition, h_rel: f64, tol: &Tolerance) -> Result<LambdaMatrix> {
    let l0 = d.l0();
    let r = d.r();
    let h = h_rel * diameter(&d.vertices);
    let mut m = DMatrix::zeros(r, r);
    for j in 0..r {
        let mut lp = l0.clone();
        let mut lm = l0.clone();
        lp[j] += h;
        lm[j] -= h;
        let (tp, tm) = (cone_angles(d, &lp)?, cone_angles(d, &lm)?);
        for i in 0..r {
            m[(i, j)] = (tp[i] - tm[i]) / (2.0 * h);
        }
    }
    Ok(summarize(m, tol))
}

/// Rigidity read off `Lambda`: singular exactly when the polyhedron flexes.
/// The verdict is cross-checked against the rank test on the boundary
/// surface; a disagreement is an invariant violation carrying the instance.
pub fn rigidity_from_lambda(d: &Decomposition, tol: &Tolerance) -> Result<bool> {
    let lm = lambda_matrix(d, tol)?;
    let by_lambda = match (lm.singular_values.first(), lm.singular_values.last()) {
        (Some(&hi), Some(&lo)) => lo > (tol.rank_tol * hi).max(1e-7 / diameter(&d.vertices)),
        _ => true,
    };
    let by_rank = is_infinitesimally_rigid(&Framework::from_surface(&d.boundary), tol)?;
    if by_lambda != by_rank {
        return Err(Error::InvariantViolation(format!(
            "Lambda says rigid = {by_lambda}, rank test says {by_rank}; singular values {:?}; instance {}",
            lm.singular_values,
            instance_dump(d)
        )));
    }
    Ok(by_lambda)
}

/// JSON dump of the vertices and tetrahedra.
pub fn instance_dump(d: &Decomposition) -> String {
    let v: Vec<[f64; 3]> = d.vertices.iter().map(|p| [p.x, p.y, p.z]).collect();
    serde_json::json!({ "vertices": v, "tetrahedra": d.tetrahedra }).to_string()
}

/// Cone over every face not containing `apex`.
pub fn decompose_star(surface: &PolyhedralSurface, apex: usize, tol: &Tolerance) -> Result<Decomposition> {
    let p = surface.vertices();
    if apex >= p.len() {
        return Err(Error::Precondition(format!("apex {apex} out of range")));
    }
    let vol_tol = 1e-12 * surface.diameter().powi(3);
    let mut blocked = Vec::new();
    let mut tets = Vec::new();
    for (fi, f) in surface.faces().iter().enumerate() {
        if f.contains(&apex) {
            continue;
        }
        let normal = (p[f[1]] - p[f[0]]).cross(&(p[f[2]] - p[f[0]]));
        // outward faces: the apex sees the face from inside
        if normal.dot(&(p[apex] - p[f[0]])) / 6.0 < -vol_tol {
            tets.push([apex, f[0], f[1], f[2]]);
        } else {
            blocked.push(fi);
        }
    }
    if !blocked.is_empty() {
        return Err(Error::NotStarShaped { apex, blocked });
    }
    Decomposition::from_tetrahedra(p.to_vec(), tets, tol)
}

/// First vertex (by index) from which the surface is star-shaped and the
/// resulting decomposition validates.
pub fn find_apex(surface: &PolyhedralSurface, tol: &Tolerance) -> Option<(usize, Decomposition)> {
    (0..surface.num_vertices()).find_map(|v| decompose_star(surface, v, tol).ok().map(|d| (v, d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::trial_rng;
    use crate::geometry::surface::fixtures::{icosahedron, octahedron, regular_tetrahedron};
    use crate::suspension::fixtures::{lambda_zero_suspension, octahedron_suspension};
    use crate::suspension::lambda_scalar;
    use rand::Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn octahedron_star() -> Decomposition {
        decompose_star(&octahedron_suspension().surface().clone(), 0, &tol()).unwrap()
    }

    #[test]
    fn octahedron_star_from_pole() {
        let d = octahedron_star();
        assert_eq!(d.tetrahedra().len(), 4);
        assert_eq!(d.interior_edges(), &[(0, 1)]);
        assert_eq!(d.boundary_edges().len(), 12);
        let th = cone_angles(&d, &d.l0()).unwrap();
        assert!((th[0] - TAU).abs() < 1e-9);
        assert_eq!(d, Decomposition::of_suspension(&octahedron_suspension(), &tol()).unwrap());
    }

    #[test]
    fn stretching_the_axis() {
        let d = octahedron_star();
        let th = cone_angles(&d, &[2.1]).unwrap()[0];
        // embedding oracle: each tetrahedron built explicitly
        let mut oracle = 0.0;
        for t in d.tetrahedra() {
            let q: [Point3; 4] = std::array::from_fn(|k| d.vertices()[t[k]]);
            let mut l = TetraLengths::from_points(&q);
            l.0[crate::geometry::tetra::tet_edge_index(0, 1)] = 2.1;
            let e = l.embed().unwrap();
            oracle += crate::geometry::tetra::embedded_dihedral(&e, 0);
        }
        assert!((th - oracle).abs() < 1e-12);
        assert!(th > TAU);
        assert!(matches!(cone_angles(&d, &[3.0]), Err(Error::InfeasibleTetrahedron { .. })));
    }

    #[test]
    fn single_tetrahedron() {
        let t = regular_tetrahedron();
        let d = Decomposition::from_tetrahedra(t.vertices().to_vec(), vec![[0, 1, 2, 3]], &tol()).unwrap();
        assert_eq!(d.r(), 0);
        let lm = lambda_matrix(&d, &tol()).unwrap();
        assert_eq!(lm.dim(), 0);
        assert!(rigidity_from_lambda(&d, &tol()).unwrap());
        let h = mean_curvature_h(&d, &[]).unwrap();
        let edge = (t.vertices()[0] - t.vertices()[1]).norm();
        assert!((h - 6.0 * edge * (1.0f64 / 3.0).acos()).abs() < 1e-12);
    }

    #[test]
    fn unit_regular_tetrahedron_h() {
        let p = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.5, 3f64.sqrt() / 2.0, 0.0),
            Point3::new(0.5, 3f64.sqrt() / 6.0, (2.0f64 / 3.0).sqrt()),
        ];
        let d = Decomposition::from_tetrahedra(p.to_vec(), vec![[0, 1, 2, 3]], &tol()).unwrap();
        let h = mean_curvature_h(&d, &[]).unwrap();
        assert!((h - 6.0 * (1.0f64 / 3.0).acos()).abs() < 1e-12);
        assert!((h - 7.385755).abs() < 1e-5);
    }

    #[test]
    fn octahedron_lambda_is_four() {
        let d = octahedron_star();
        let lm = lambda_matrix(&d, &tol()).unwrap();
        assert!((lm.entries[0][0] - 4.0).abs() < 1e-9);
        let fd = lambda_matrix_fd(&d, 1e-6, &tol()).unwrap();
        assert!((fd.entries[0][0] - 4.0).abs() < 1e-6);
        let br = lambda_scalar(&octahedron_suspension(), &tol()).unwrap();
        assert!((br.physical.unwrap() - lm.entries[0][0]).abs() < 1e-9);
        assert!(rigidity_from_lambda(&d, &tol()).unwrap());
        assert_eq!(lm.min_eigenvalue(), Some(lm.entries[0][0]));
    }

    #[test]
    fn gradient_of_h_is_theta() {
        let d = octahedron_star();
        let h = 1e-6;
        let g = (mean_curvature_h(&d, &[2.0 + h]).unwrap() - mean_curvature_h(&d, &[2.0 - h]).unwrap()) / (2.0 * h);
        assert!((g - TAU).abs() < 1e-6);
    }

    #[test]
    fn h_is_homogeneous() {
        let d = octahedron_star();
        let h1 = mean_curvature_h(&d, &d.l0()).unwrap();
        let scaled: Vec<Point3> = d.vertices().iter().map(|p| p * 3.0).collect();
        let d3 = Decomposition::from_tetrahedra(scaled, d.tetrahedra().to_vec(), &tol()).unwrap();
        assert!((mean_curvature_h(&d3, &d3.l0()).unwrap() - 3.0 * h1).abs() < 1e-9);
    }

    #[test]
    fn lambda_scales_inversely() {
        let d = octahedron_star();
        for t in [0.5, 2.0] {
            let v: Vec<Point3> = d.vertices().iter().map(|p| p * t).collect();
            let dt = Decomposition::from_tetrahedra(v, d.tetrahedra().to_vec(), &tol()).unwrap();
            assert!((lambda_matrix(&dt, &tol()).unwrap().entries[0][0] - 4.0 / t).abs() < 1e-9);
        }
    }

    #[test]
    fn flexible_suspension_is_singular() {
        let s = lambda_zero_suspension();
        let d = Decomposition::of_suspension(&s, &tol()).unwrap();
        assert!(!rigidity_from_lambda(&d, &tol()).unwrap());
    }

    #[test]
    fn icosahedron_stars() {
        let ico = icosahedron();
        let d = decompose_star(&ico, 0, &tol()).unwrap();
        // vertices not adjacent to the apex
        assert_eq!(d.r(), 12 - 1 - 5);
        let lm = lambda_matrix(&d, &tol()).unwrap();
        assert!(lm.asymmetry <= 1e-7 * lm.max_abs());
        assert!(lm.min_eigenvalue().unwrap() > 0.0);
        let fd = lambda_matrix_fd(&d, 1e-6, &tol()).unwrap();
        for (a, b) in lm.entries.iter().flatten().zip(fd.entries.iter().flatten()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(rigidity_from_lambda(&d, &tol()).unwrap());
    }

    #[test]
    fn gradient_identity_near_l0() {
        let d = decompose_star(&icosahedron(), 0, &tol()).unwrap();
        let mut rng = trial_rng(41, 0);
        let h = 1e-6;
        for _ in 0..20 {
            let l: Vec<f64> = d.l0().iter().map(|x| x * (1.0 + rng.random_range(-0.01..0.01))).collect();
            let th = cone_angles(&d, &l).unwrap();
            for j in 0..d.r() {
                let mut lp = l.clone();
                let mut lm = l.clone();
                lp[j] += h;
                lm[j] -= h;
                let g = (mean_curvature_h(&d, &lp).unwrap() - mean_curvature_h(&d, &lm).unwrap()) / (2.0 * h);
                assert!((g - th[j]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn non_star_shaped() {
        // the pulled-in vertex of a dented octahedron cannot see the faces
        // on the far side of the dent
        let s = crate::suspension::fixtures::hexagon_family(0.5).unwrap();
        let blocked: Vec<usize> = (0..s.vertices().len())
            .filter(|&v| matches!(decompose_star(s.surface(), v, &tol()), Err(Error::NotStarShaped { .. })))
            .collect();
        assert!(!blocked.is_empty());
        assert!(find_apex(s.surface(), &tol()).is_some());
    }

    #[test]
    fn overlap_and_open_stars_are_rejected() {
        let o = octahedron();
        let p = o.vertices().to_vec();
        // the same tetrahedron twice
        let e = Decomposition::from_tetrahedra(p.clone(), vec![[0, 1, 2, 3], [0, 1, 2, 3]], &tol());
        assert!(e.is_err());
        // two of the four axial tetrahedra: boundary is not closed around the
        // remaining vertices
        let e = Decomposition::from_tetrahedra(p, vec![[0, 1, 2, 3], [0, 1, 3, 4]], &tol());
        assert!(matches!(e, Err(Error::InvalidDecomposition(_))));
    }
}
