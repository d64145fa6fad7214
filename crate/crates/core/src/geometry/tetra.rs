//! Tetrahedra described by their six edge lengths.
//!
//! Edges are indexed `01, 02, 03, 12, 13, 23`; edge `k` is opposite edge
//! `5 - k`. Dihedral angles come from the Gram matrix of the three edge
//! vectors at one endpoint, which is linear in the squared lengths:
//!
//! ```text
//! alpha = atan2( sqrt(g_aa * det G),  g_aa g_bc - g_ab g_ac )
//! ```
//!
//! with `a` along the edge and `b`, `c` towards the two remaining vertices.

use crate::error::{Error, Result};
use crate::geometry::{interior_angle, Point3};

pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn tet_edge_index(i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    TET_EDGES.iter().position(|&e| e == (i, j)).expect("valid tetrahedron edge")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraLengths(pub [f64; 6]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// `V^2`; negative when the Cayley–Menger test fails.
    pub squared_volume: f64,
    pub volume: f64,
}

// Gram entries in the order aa, bb, cc, ab, ac, bc
const AA: usize = 0;
const BB: usize = 1;
const CC: usize = 2;
const AB: usize = 3;
const AC: usize = 4;
const BC: usize = 5;

impl TetraLengths {
    pub fn from_points(p: &[Point3; 4]) -> Self {
        let mut l = [0.0; 6];
        for (k, &(i, j)) in TET_EDGES.iter().enumerate() {
            l[k] = (p[i] - p[j]).norm();
        }
        TetraLengths(l)
    }

    pub fn length(&self, i: usize, j: usize) -> f64 {
        self.0[tet_edge_index(i, j)]
    }

    fn sq(&self, i: usize, j: usize) -> f64 {
        let l = self.length(i, j);
        l * l
    }

    /// `det G` for the edge vectors at vertex 0; equals `36 V^2`.
    pub fn gram_determinant(&self) -> f64 {
        let g = self.gram_at(0, 1, 2, 3);
        det3(&g)
    }

    pub fn squared_volume(&self) -> f64 {
        self.gram_determinant() / 36.0
    }

    pub fn longest(&self) -> f64 {
        self.0.iter().cloned().fold(0.0, f64::max)
    }

    /// Squared volume bounded away from zero relative to the longest edge.
    pub fn is_well_conditioned(&self) -> bool {
        self.squared_volume() >= 1e-10 * self.longest().powi(6)
    }

    fn gram_at(&self, i: usize, j: usize, k: usize, l: usize) -> [f64; 6] {
        let (sij, sik, sil) = (self.sq(i, j), self.sq(i, k), self.sq(i, l));
        [
            sij,
            sik,
            sil,
            0.5 * (sij + sik - self.sq(j, k)),
            0.5 * (sij + sil - self.sq(j, l)),
            0.5 * (sik + sil - self.sq(k, l)),
        ]
    }

    /// Dihedral angle at edge `e` and its gradient with respect to all six
    /// lengths.
    pub fn dihedral_with_gradient(&self, e: usize) -> (f64, [f64; 6]) {
        let (i, j) = TET_EDGES[e];
        let (k, l) = TET_EDGES[5 - e];
        let g = self.gram_at(i, j, k, l);
        let det = det3(&g);
        let x = g[AA] * g[BC] - g[AB] * g[AC];
        let z = g[AA] * det.max(0.0);
        let y = z.sqrt();
        let angle = y.atan2(x);

        // partials of det G with respect to the six distinct Gram entries
        let d_det = [
            g[BB] * g[CC] - g[BC] * g[BC],
            g[AA] * g[CC] - g[AC] * g[AC],
            g[AA] * g[BB] - g[AB] * g[AB],
            2.0 * (g[AC] * g[BC] - g[AB] * g[CC]),
            2.0 * (g[AB] * g[BC] - g[AC] * g[BB]),
            2.0 * (g[AB] * g[AC] - g[AA] * g[BC]),
        ];
        let mut d_x = [0.0; 6];
        d_x[AA] = g[BC];
        d_x[BC] = g[AA];
        d_x[AB] = -g[AC];
        d_x[AC] = -g[AB];
        let mut d_z = d_det.map(|v| g[AA] * v);
        d_z[AA] += det;

        let r2 = x * x + y * y;
        let da_dz = x / (2.0 * y * r2);
        let da_dx = -y / r2;
        let mut da_dg = [0.0; 6];
        for m in 0..6 {
            da_dg[m] = da_dz * d_z[m] + da_dx * d_x[m];
        }

        // d g / d s for the squared lengths of this labelling
        let mut da_ds = [0.0; 6];
        let s = |p: usize, q: usize| tet_edge_index(p, q);
        da_ds[s(i, j)] += da_dg[AA] + 0.5 * (da_dg[AB] + da_dg[AC]);
        da_ds[s(i, k)] += da_dg[BB] + 0.5 * (da_dg[AB] + da_dg[BC]);
        da_ds[s(i, l)] += da_dg[CC] + 0.5 * (da_dg[AC] + da_dg[BC]);
        da_ds[s(j, k)] -= 0.5 * da_dg[AB];
        da_ds[s(j, l)] -= 0.5 * da_dg[AC];
        da_ds[s(k, l)] -= 0.5 * da_dg[BC];

        let mut grad = [0.0; 6];
        for m in 0..6 {
            grad[m] = da_ds[m] * 2.0 * self.0[m];
        }
        (angle, grad)
    }

    pub fn dihedral_angles(&self) -> [f64; 6] {
        std::array::from_fn(|e| self.dihedral_angle(e))
    }

    pub fn dihedral_angle(&self, e: usize) -> f64 {
        let (i, j) = TET_EDGES[e];
        let (k, l) = TET_EDGES[5 - e];
        let g = self.gram_at(i, j, k, l);
        let det = det3(&g).max(0.0);
        (g[AA] * det).sqrt().atan2(g[AA] * g[BC] - g[AB] * g[AC])
    }

    /// `J[e][f] = d alpha_e / d l_f`; symmetric by the Schläfli identity.
    pub fn dihedral_jacobian(&self) -> [[f64; 6]; 6] {
        std::array::from_fn(|e| self.dihedral_with_gradient(e).1)
    }

    /// Places the tetrahedron: vertex 0 at the origin, 1 on the x axis, 2 in
    /// the upper xy half-plane, 3 above the xy plane.
    pub fn embed(&self) -> Result<[Point3; 4]> {
        let d01 = self.length(0, 1);
        let (s02, s03, s12, s13, s23) = (self.sq(0, 2), self.sq(0, 3), self.sq(1, 2), self.sq(1, 3), self.sq(2, 3));
        let x2 = (d01 * d01 + s02 - s12) / (2.0 * d01);
        let y2sq = s02 - x2 * x2;
        if !(y2sq > 0.0) {
            return Err(Error::InfeasibleTetrahedron { index: 0 });
        }
        let y2 = y2sq.sqrt();
        let x3 = (d01 * d01 + s03 - s13) / (2.0 * d01);
        let y3 = (s03 - s23 + x2 * x2 + y2 * y2 - 2.0 * x2 * x3) / (2.0 * y2);
        let z3sq = s03 - x3 * x3 - y3 * y3;
        if !(z3sq > 0.0) {
            return Err(Error::InfeasibleTetrahedron { index: 0 });
        }
        Ok([Point3::zeros(), Point3::new(d01, 0.0, 0.0), Point3::new(x2, y2, 0.0), Point3::new(x3, y3, z3sq.sqrt())])
    }
}

fn det3(g: &[f64; 6]) -> f64 {
    g[AA] * (g[BB] * g[CC] - g[BC] * g[BC]) - g[AB] * (g[AB] * g[CC] - g[BC] * g[AC])
        + g[AC] * (g[AB] * g[BC] - g[BB] * g[AC])
}

fn triangle_ok(a: f64, b: f64, c: f64) -> bool {
    a + b > c && a + c > b && b + c > a
}

/// Whether six positive lengths bound a non-degenerate Euclidean tetrahedron.
pub fn cayley_menger_feasible(lengths: &TetraLengths) -> Feasibility {
    let l = lengths;
    let faces_ok = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .iter()
        .all(|&(i, j, k)| triangle_ok(l.length(i, j), l.length(j, k), l.length(i, k)));
    let positive = l.0.iter().all(|&x| x > 0.0 && x.is_finite());
    let v2 = l.squared_volume();
    let feasible = positive && faces_ok && v2 > 0.0;
    Feasibility { feasible, squared_volume: v2, volume: if v2 > 0.0 { v2.sqrt() } else { 0.0 } }
}

/// `sum_e l_e * (d alpha_e along direction)` for one tetrahedron.
pub fn schlafli_residual(lengths: &TetraLengths, direction: &[f64; 6]) -> Result<f64> {
    if !cayley_menger_feasible(lengths).feasible {
        return Err(Error::InfeasibleTetrahedron { index: 0 });
    }
    let jac = lengths.dihedral_jacobian();
    Ok((0..6)
        .map(|e| {
            let d_alpha: f64 = (0..6).map(|f| jac[e][f] * direction[f]).sum();
            lengths.0[e] * d_alpha
        })
        .sum())
}

/// Dihedral angle at edge `e` measured on an explicit embedding.
pub fn embedded_dihedral(p: &[Point3; 4], e: usize) -> f64 {
    let (i, j) = TET_EDGES[e];
    let (k, l) = TET_EDGES[5 - e];
    // orient so that face (i, j, k) has its normal pointing away from l
    let (k, l) = if crate::geometry::orient3d(&p[i], &p[j], &p[k], &p[l]) < 0.0 { (k, l) } else { (l, k) };
    interior_angle(&p[i], &p[j], &p[k], &p[l])
}
